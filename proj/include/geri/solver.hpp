#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "geri/core.hpp"
#include "geri/generators.hpp"

namespace geri {

struct SolverConfig {
  double tolerance = 1e-10;        // sup-norm on the fixed-point residual
  long max_iterations = 100000;
  double damping = 1.0;            // 1.0 = plain successive substitution
  double prune_threshold = 1e-12;  // coordinates at or below this are zeroed
  int n_restarts = 1;
  std::uint64_t seed = 0x9E3779B97F4A7C15ULL;  // restart perturbations only
};

/// Solved rational-inattention problem: unconditional probabilities p0,
/// per-state conditionals, information cost, optimized surplus, and the
/// consideration set (the support of p0).
struct GeriSolution {
  ProbabilityVector p0;
  std::vector<ProbabilityVector> conditionals;
  double info_cost = 0.0;
  double objective = 0.0;
  std::vector<int> consideration_set;
  long iterations = 0;
  double residual = 0.0;
};

/// Thrown when max_iterations is hit with residual above tolerance; carries
/// the last iterate so callers can inspect or emit the partial result.
class NoConvergenceError : public Error {
 public:
  explicit NoConvergenceError(GeriSolution partial)
      : Error(ErrorKind::NoConvergence,
              "fixed point did not converge: residual " +
                  std::to_string(partial.residual) + " after " +
                  std::to_string(partial.iterations) + " iterations"),
        partial_(std::move(partial)) {}
  const GeriSolution& partial() const { return partial_; }

 private:
  GeriSolution partial_;
};

/// Information cost kappa_S = Omega_S(E p(V)) - E Omega_S(p(V)).
/// Zero when the conditionals do not vary with the state; never negative.
double information_cost(const GeneratorSpec& gen,
                        const FiniteChoiceProblem& problem,
                        const std::vector<ProbabilityVector>& conditionals);

/// Solves p0 = E[ H(e^{V + log S(p0)}) / sum_j H_j(e^{V + log S(p0)}) ] by
/// successive substitution from the multinomial-logit unconditional
/// distribution E softmax(V); optional damping and Dirichlet-perturbed
/// restarts (best objective wins). Coordinates falling to or below
/// prune_threshold are zeroed and stay pruned.
GeriSolution solve_fixed_point(const GeneratorSpec& gen,
                               const FiniteChoiceProblem& problem,
                               const SolverConfig& config = {});

/// p_i(v) = H_i(e^{v + log S(p0)}) / sum_j H_j(e^{v + log S(p0)});
/// options outside the support of p0 get exactly zero.
ProbabilityVector conditional_probabilities(const GeneratorSpec& gen,
                                            const ProbabilityVector& p0,
                                            const ValuationVector& v);

/// E W(V + log S(p0)): the optimized value of the attention problem at p0.
double optimized_value(const GeneratorSpec& gen,
                       const FiniteChoiceProblem& problem,
                       const ProbabilityVector& p0);

/// Payoff shift to the equivalent random-utility model: v + log S(p0),
/// with -inf on options excluded by p0.
ValuationVector to_equivalent_rum(const GeneratorSpec& gen,
                                  const ProbabilityVector& p0,
                                  const ValuationVector& v);

/// Converse construction: from a random-utility problem (all payoffs finite),
/// p0 = E q(v) and the shifted problem v - log S(p0), whose attention
/// solution reproduces q state by state.
std::pair<FiniteChoiceProblem, ProbabilityVector> from_rum(
    const GeneratorSpec& gen, const FiniteChoiceProblem& rum_problem);

struct DominanceReport {
  struct Violation {
    int option;            // retained despite being dominated
    int dominating_option; // -1 when worst in every state
    double p0;
  };
  std::vector<Violation> violations;
  bool empty() const { return violations.empty(); }
};

/// Flags options that should have been excluded: options weakly worst in
/// every state (strictly somewhere) with positive unconditional probability,
/// and for Shannon also pairwise-dominated options.
DominanceReport check_dominance_exclusion(const GeriSolution& solution,
                                          const FiniteChoiceProblem& problem,
                                          const GeneratorSpec& gen,
                                          double prune_threshold = 1e-12);

}  // namespace geri
