#include "geri/solver.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <random>

#include "geri/kernels.hpp"

namespace geri {
namespace {

void validate_config(const SolverConfig& config) {
  if (!(config.tolerance > 0.0))
    fail(ErrorKind::InvalidProblem, "tolerance must be positive");
  if (!(config.damping > 0.0) || config.damping > 1.0)
    fail(ErrorKind::InvalidProblem, "damping must be in (0,1]");
  if (config.max_iterations < 1)
    fail(ErrorKind::InvalidProblem, "max_iterations must be >= 1");
  if (config.prune_threshold < 0.0)
    fail(ErrorKind::InvalidProblem, "prune_threshold must be >= 0");
  if (config.n_restarts < 1)
    fail(ErrorKind::InvalidProblem, "n_restarts must be >= 1");
}

// E softmax(v): the multinomial-logit unconditional distribution.
std::vector<double> mnl_unconditional(const FiniteChoiceProblem& problem) {
  const int n = problem.n_options;
  std::vector<double> p(n, 0.0);
  for (long m = 0; m < problem.n_states(); ++m) {
    const ValuationVector& v = problem.states[m];
    const double lse = log_sum_exp(v.span());
    for (int i = 0; i < n; ++i) {
      if (v[i] != kNegInf) p[i] += problem.prior[m] * std::exp(v[i] - lse);
    }
  }
  double sum = 0.0;
  for (double x : p) sum += x;
  for (double& x : p) x /= sum;
  return p;
}

// Zeroes pruned and sub-threshold coordinates, keeps the mask monotone,
// renormalizes the rest.
void apply_prune(std::vector<double>& p, std::vector<char>& pruned,
                 double threshold) {
  double sum = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (pruned[i] || p[i] <= threshold) {
      p[i] = 0.0;
      pruned[i] = 1;
    } else {
      sum += p[i];
    }
  }
  for (double& x : p) x /= sum;
}

struct SingleRun {
  GeriSolution solution;
  bool converged = false;
};

SingleRun run_from(const SolveWorkspace& ws, const GeneratorSpec& gen,
                   const FiniteChoiceProblem& problem,
                   const SolverConfig& config, std::vector<double> p) {
  const int n = ws.n_options();
  const long m_count = ws.n_states();
  std::vector<char> pruned(n, 0);
  apply_prune(p, pruned, config.prune_threshold);

  std::vector<double> mean(n);
  long iterations = 0;
  double residual = 0.0;
  bool converged = false;
  while (true) {
    const std::vector<double> coef = ws.coef_from_p0(p);
    ws.expected_conditionals(coef, mean, true);
    residual = 0.0;
    for (int i = 0; i < n; ++i)
      residual = std::max(residual, std::abs(mean[i] - p[i]));
    if (residual <= config.tolerance) {
      // A coordinate still shrinking geometrically has limit exactly zero;
      // keep iterating until it crosses the prune threshold so that the
      // support of the returned p0 is the consideration set.
      bool collapsing = false;
      for (int i = 0; i < n; ++i)
        collapsing = collapsing || (p[i] > 0.0 && mean[i] < p[i] * (1.0 - 1e-3));
      if (!collapsing || iterations >= config.max_iterations) {
        converged = true;
        break;
      }
    }
    if (iterations >= config.max_iterations) break;
    ++iterations;
    for (int i = 0; i < n; ++i)
      p[i] = (1.0 - config.damping) * p[i] + config.damping * mean[i];
    apply_prune(p, pruned, config.prune_threshold);
  }

  // Final pass at the returned iterate: conditionals and expected surplus.
  std::vector<double> conditionals_flat(m_count * static_cast<long>(n));
  const std::vector<double> coef = ws.coef_from_p0(p);
  const double objective =
      ws.evaluate(coef, mean, conditionals_flat.data(), true);

  GeriSolution out;
  out.p0 = ProbabilityVector::trusted(p);
  out.conditionals.reserve(m_count);
  for (long m = 0; m < m_count; ++m) {
    out.conditionals.push_back(ProbabilityVector::trusted(std::vector<double>(
        conditionals_flat.begin() + m * n,
        conditionals_flat.begin() + (m + 1) * n)));
  }
  out.objective = objective;
  out.info_cost = information_cost(gen, problem, out.conditionals);
  out.consideration_set = out.p0.support_indices();
  out.iterations = iterations;
  out.residual = residual;
  return {std::move(out), converged};
}

}  // namespace

double information_cost(const GeneratorSpec& gen,
                        const FiniteChoiceProblem& problem,
                        const std::vector<ProbabilityVector>& conditionals) {
  if (conditionals.size() != problem.states.size()) {
    fail(ErrorKind::StateCountMismatch,
         "got " + std::to_string(conditionals.size()) + " conditionals for " +
             std::to_string(problem.states.size()) + " states");
  }
  const int n = problem.n_options;
  std::vector<double> p0(n, 0.0);
  double mean_entropy = 0.0;
  for (std::size_t m = 0; m < conditionals.size(); ++m) {
    if (conditionals[m].size() != n)
      fail(ErrorKind::DimensionMismatch, "conditional dimension mismatch");
    const double mu = problem.prior[m];
    for (int i = 0; i < n; ++i) p0[i] += mu * conditionals[m][i];
    mean_entropy += mu * generalized_entropy(gen, conditionals[m]);
  }
  double sum = 0.0;
  for (double x : p0) sum += x;
  for (double& x : p0) x /= sum;
  return generalized_entropy(gen, ProbabilityVector::trusted(std::move(p0))) -
         mean_entropy;
}

GeriSolution solve_fixed_point(const GeneratorSpec& gen,
                               const FiniteChoiceProblem& problem,
                               const SolverConfig& config) {
  validate_config(config);
  gen.check_dimension(problem.n_options);
  const SolveWorkspace ws(gen, problem);
  const std::vector<double> init = mnl_unconditional(problem);

  std::mt19937_64 rng(config.seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::optional<GeriSolution> best;
  std::optional<GeriSolution> best_partial;
  for (int r = 0; r < config.n_restarts; ++r) {
    std::vector<double> start = init;
    if (r > 0) {
      // Mix the base point with a uniform Dirichlet draw.
      std::vector<double> d(start.size());
      double sum = 0.0;
      for (double& x : d) {
        x = -std::log1p(-unif(rng));
        sum += x;
      }
      for (std::size_t i = 0; i < start.size(); ++i)
        start[i] = 0.5 * (start[i] + d[i] / sum);
    }
    SingleRun run = run_from(ws, gen, problem, config, std::move(start));
    if (run.converged) {
      if (!best || run.solution.objective > best->objective)
        best = std::move(run.solution);
    } else if (!best_partial ||
               run.solution.residual < best_partial->residual) {
      best_partial = std::move(run.solution);
    }
  }
  if (!best) throw NoConvergenceError(std::move(*best_partial));
  return std::move(*best);
}

ProbabilityVector conditional_probabilities(const GeneratorSpec& gen,
                                            const ProbabilityVector& p0,
                                            const ValuationVector& v) {
  if (p0.size() != v.size())
    fail(ErrorKind::DimensionMismatch, "p0 and v dimensions differ");
  if (!p0.has_support())
    fail(ErrorKind::AllOptionsExcluded, "p0 has empty support");
  const std::vector<double> shift = log_s_value(gen, p0.span());
  std::vector<double> shifted(v.size());
  for (int i = 0; i < v.size(); ++i) shifted[i] = v[i] + shift[i];
  return choice_probabilities(gen, ValuationVector::validated(std::move(shifted)));
}

double optimized_value(const GeneratorSpec& gen,
                       const FiniteChoiceProblem& problem,
                       const ProbabilityVector& p0) {
  if (p0.size() != problem.n_options)
    fail(ErrorKind::DimensionMismatch, "p0 dimension mismatch");
  if (!p0.has_support())
    fail(ErrorKind::AllOptionsExcluded, "p0 has empty support");
  const std::vector<double> shift = log_s_value(gen, p0.span());
  std::vector<double> shifted(p0.size());
  double value = 0.0;
  for (long m = 0; m < problem.n_states(); ++m) {
    for (int i = 0; i < p0.size(); ++i)
      shifted[i] = problem.states[m][i] + shift[i];
    value += problem.prior[m] *
             surplus(gen, ValuationVector::validated(shifted));
  }
  return value;
}

ValuationVector to_equivalent_rum(const GeneratorSpec& gen,
                                  const ProbabilityVector& p0,
                                  const ValuationVector& v) {
  if (p0.size() != v.size())
    fail(ErrorKind::DimensionMismatch, "p0 and v dimensions differ");
  const std::vector<double> shift = log_s_value(gen, p0.span());
  std::vector<double> shifted(v.size());
  for (int i = 0; i < v.size(); ++i) shifted[i] = v[i] + shift[i];
  return ValuationVector::validated(std::move(shifted));
}

std::pair<FiniteChoiceProblem, ProbabilityVector> from_rum(
    const GeneratorSpec& gen, const FiniteChoiceProblem& rum_problem) {
  const int n = rum_problem.n_options;
  gen.check_dimension(n);
  for (long m = 0; m < rum_problem.n_states(); ++m) {
    for (int i = 0; i < n; ++i) {
      if (!std::isfinite(rum_problem.states[m][i]))
        fail(ErrorKind::InvalidProblem,
             "from_rum requires all payoffs finite");
    }
  }
  std::vector<double> p0(n, 0.0);
  for (long m = 0; m < rum_problem.n_states(); ++m) {
    const ProbabilityVector q =
        choice_probabilities(gen, rum_problem.states[m]);
    for (int i = 0; i < n; ++i) p0[i] += rum_problem.prior[m] * q[i];
  }
  double sum = 0.0;
  for (double x : p0) sum += x;
  for (double& x : p0) x /= sum;
  ProbabilityVector p0v = ProbabilityVector::trusted(std::move(p0));

  const std::vector<double> shift = log_s_value(gen, p0v.span());
  std::vector<ValuationVector> states;
  states.reserve(rum_problem.states.size());
  std::vector<double> shifted(n);
  for (long m = 0; m < rum_problem.n_states(); ++m) {
    for (int i = 0; i < n; ++i)
      shifted[i] = rum_problem.states[m][i] - shift[i];
    states.push_back(ValuationVector::validated(shifted));
  }
  return {FiniteChoiceProblem::validated(std::move(states), rum_problem.prior),
          std::move(p0v)};
}

DominanceReport check_dominance_exclusion(const GeriSolution& solution,
                                          const FiniteChoiceProblem& problem,
                                          const GeneratorSpec& gen,
                                          double prune_threshold) {
  const int n = problem.n_options;
  if (solution.p0.size() != n)
    fail(ErrorKind::DimensionMismatch, "solution/problem dimension mismatch");
  DominanceReport report;
  for (int a = 0; a < n; ++a) {
    if (!(solution.p0[a] > prune_threshold)) continue;

    // Worst in every state, strictly in some state.
    bool weakly_worst = true;
    bool strict_somewhere = false;
    for (long m = 0; m < problem.n_states() && weakly_worst; ++m) {
      if (problem.prior[m] <= 0.0) continue;
      double min_other = std::numeric_limits<double>::infinity();
      for (int i = 0; i < n; ++i)
        if (i != a) min_other = std::min(min_other, problem.states[m][i]);
      if (problem.states[m][a] > min_other) weakly_worst = false;
      if (problem.states[m][a] < min_other) strict_somewhere = true;
    }
    if (weakly_worst && strict_somewhere) {
      report.violations.push_back({a, -1, solution.p0[a]});
      continue;
    }

    if (gen.is_shannon()) {
      for (int d = 0; d < n; ++d) {
        if (d == a) continue;
        bool dominated = true;
        bool strict = false;
        for (long m = 0; m < problem.n_states() && dominated; ++m) {
          if (problem.prior[m] <= 0.0) continue;
          if (problem.states[m][a] > problem.states[m][d]) dominated = false;
          if (problem.states[m][a] < problem.states[m][d]) strict = true;
        }
        if (dominated && strict) {
          report.violations.push_back({a, d, solution.p0[a]});
          break;
        }
      }
    }
  }
  return report;
}

}  // namespace geri
