#pragma once

#include <vector>

#include "geri/core.hpp"
#include "geri/generators.hpp"

namespace geri {

/// Precomputed tables for the inner loop of the fixed-point solver: the
/// expectation over states of the generator response at shifted payoffs,
///
///   mean[i] = sum_m prior[m] * H_i(e^{v_m + log S(p0)}) / sum_j H_j(...)
///
/// Payoffs are max-shifted per state once at construction, so the hot path
/// works on exp((v - shift)/zeta) in (0,1] and never overflows. States are
/// processed in fixed-size blocks whose partial sums are merged in block
/// order, which makes every result bit-identical for any OpenMP thread count.
class SolveWorkspace {
 public:
  SolveWorkspace(const GeneratorSpec& gen, const FiniteChoiceProblem& problem);

  int n_options() const { return n_; }
  long n_states() const { return m_; }

  /// Shift multipliers from the unconditional probabilities:
  /// coef[i] = S_i(p0)^{1/zeta_i}, with exact zeros preserved.
  std::vector<double> coef_from_p0(std::span<const double> p0) const;

  /// mean_cond <- E p(V); the solver's hot loop.
  void expected_conditionals(std::span<const double> coef,
                             std::span<double> mean_cond, bool parallel) const;

  /// Full evaluation: E p(V), expected surplus E W(V + log S(p0)), and
  /// optionally per-state conditionals (row-major m x n).
  double evaluate(std::span<const double> coef, std::span<double> mean_cond,
                  double* conditionals, bool parallel) const;

 private:
  template <bool WithSurplus>
  double accumulate(std::span<const double> coef, std::span<double> mean_cond,
                    double* conditionals, bool parallel) const;
  // Returns W(v_m + log S) - shift_m for one state; writes conditionals to out.
  double state_eval(long m, std::span<const double> coef, double* out) const;
  double state_eval_logspace(long m, std::span<const double> coef,
                             double* out) const;

  GeneratorSpec gen_;
  int n_ = 0;
  long m_ = 0;
  int n_nests_ = 1;
  std::vector<int> nest_members_;   // options grouped by nest
  std::vector<int> nest_begin_;     // nest g spans [nest_begin_[g], nest_begin_[g+1])
  std::vector<double> zeta_;        // per nest
  std::vector<double> prior_;
  std::vector<double> shift_;       // per state: max finite payoff
  std::vector<double> weights_;     // m x n: exp((v - shift)/zeta_i)
  std::vector<double> log_weights_; // m x n: (v - shift)/zeta_i, for the fallback
};

/// Naive per-state evaluation through the public generator functions;
/// kept as the reference the parallel kernel is tested and benchmarked against.
void reference_expectation(const GeneratorSpec& gen,
                           const FiniteChoiceProblem& problem,
                           const ProbabilityVector& p0,
                           std::vector<double>& mean_cond,
                           double* expected_surplus,
                           std::vector<double>* conditionals);

}  // namespace geri
