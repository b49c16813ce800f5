#include "geri/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>

namespace geri {
namespace {

bool is_table1_generator(const GeneratorSpec& gen) {
  if (gen.is_shannon()) return true;
  const NestStructure& ns = gen.nests();
  return ns.n_options() == 5 && ns.n_nests() == 2 &&
         ns.members[0] == std::vector<int>{0, 1, 2} &&
         ns.members[1] == std::vector<int>{3, 4};
}

std::string format_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.9g", x);
  return buf;
}

}  // namespace

double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

SummaryStats summarize(const FiniteChoiceProblem& problem,
                       const GeriSolution& solution) {
  const int n = problem.n_options;
  const long m_count = problem.n_states();
  SummaryStats out;
  out.avg.assign(n, 0.0);
  out.median.assign(n, 0.0);
  out.std_dev.assign(n, 0.0);

  for (long m = 0; m < m_count; ++m) {
    const double mu = problem.prior[m];
    for (int i = 0; i < n; ++i) out.avg[i] += mu * solution.conditionals[m][i];
  }

  // Median and (population) standard deviation are across states.
  std::vector<double> column(m_count);
  for (int i = 0; i < n; ++i) {
    double ss = 0.0;
    for (long m = 0; m < m_count; ++m) {
      column[m] = solution.conditionals[m][i];
      const double d = column[m] - out.avg[i];
      ss += d * d / static_cast<double>(m_count);
    }
    out.std_dev[i] = std::sqrt(ss);
    const long mid = m_count / 2;
    std::nth_element(column.begin(), column.begin() + mid, column.end());
    double med = column[mid];
    if (m_count % 2 == 0) {
      std::nth_element(column.begin(), column.begin() + mid - 1,
                       column.begin() + mid);
      med = 0.5 * (med + column[mid - 1]);
    }
    out.median[i] = med;
  }

  double eff = 0.0;
  for (long m = 0; m < m_count; ++m) {
    int best = 0;
    for (int i = 1; i < n; ++i) {
      if (problem.states[m][i] > problem.states[m][best]) best = i;
    }
    eff += problem.prior[m] * solution.conditionals[m][best];
  }
  out.efficiency = eff;
  return out;
}

Table1Result run_table1(const MonteCarloConfig& config) {
  if (config.n_options != 5)
    fail(ErrorKind::InvalidProblem, "this study uses exactly 5 options");
  if (config.n_states < 1)
    fail(ErrorKind::InvalidProblem, "n_states must be >= 1");
  if (config.n_replications < 1)
    fail(ErrorKind::InvalidProblem, "n_replications must be >= 1");
  if (!is_table1_generator(config.generator))
    fail(ErrorKind::InvalidProblem,
         "generator must be Shannon or nested over {0,1,2},{3,4}");

  const int n = config.n_options;
  Table1Result result;
  result.n_states = config.n_states;
  result.seed = config.seed;

  for (int r = 0; r < config.n_replications; ++r) {
    std::mt19937_64 rng(subseed(config.seed, static_cast<std::uint64_t>(r)));
    std::vector<ValuationVector> states;
    states.reserve(config.n_states);
    std::vector<double> v(n);
    for (long m = 0; m < config.n_states; ++m) {
      for (int i = 0; i < n; ++i) v[i] = uniform01(rng);
      states.push_back(ValuationVector::validated(v));
    }
    std::vector<double> prior(config.n_states,
                              1.0 / static_cast<double>(config.n_states));
    const FiniteChoiceProblem problem =
        FiniteChoiceProblem::validated(std::move(states), std::move(prior));
    const GeriSolution solution =
        solve_fixed_point(config.generator, problem, config.solver);
    result.replications.push_back(summarize(problem, solution));
  }

  SummaryStats& mean = result.stats;
  mean.avg.assign(n, 0.0);
  mean.median.assign(n, 0.0);
  mean.std_dev.assign(n, 0.0);
  mean.efficiency = 0.0;
  const double w = 1.0 / config.n_replications;
  for (const SummaryStats& s : result.replications) {
    for (int i = 0; i < n; ++i) {
      mean.avg[i] += w * s.avg[i];
      mean.median[i] += w * s.median[i];
      mean.std_dev[i] += w * s.std_dev[i];
    }
    mean.efficiency += w * s.efficiency;
  }
  return result;
}

FiniteChoiceProblem appendix_problem() {
  std::vector<ValuationVector> states = {
      ValuationVector::validated({2, 1, 3, 2}),
      ValuationVector::validated({3, 2, 1, 4}),
      ValuationVector::validated({3, 2, 3, 2}),
  };
  std::vector<double> prior(3, 1.0 / 3.0);
  return FiniteChoiceProblem::validated(std::move(states), std::move(prior));
}

GeneratorSpec appendix_nested_generator() {
  return GeneratorSpec::nested_logit(
      NestStructure::from_partition({{0, 1}, {2, 3}}, {0.7, 0.8}));
}

AppendixSolution run_appendix_example(const GeneratorSpec& gen,
                                      const std::vector<int>& choice_set,
                                      const SolverConfig& solver) {
  std::vector<int> options = choice_set;
  std::sort(options.begin(), options.end());
  if (options.empty() ||
      std::adjacent_find(options.begin(), options.end()) != options.end() ||
      options.front() < 1 || options.back() > 4) {
    fail(ErrorKind::InvalidChoiceSet,
         "choice set must be a non-empty subset of {1,2,3,4}");
  }
  gen.check_dimension(4);

  const FiniteChoiceProblem full = appendix_problem();
  const int k = static_cast<int>(options.size());
  std::vector<ValuationVector> states;
  for (long m = 0; m < full.n_states(); ++m) {
    std::vector<double> v(k);
    for (int j = 0; j < k; ++j) v[j] = full.states[m][options[j] - 1];
    states.push_back(ValuationVector::validated(std::move(v)));
  }
  const FiniteChoiceProblem restricted =
      FiniteChoiceProblem::validated(std::move(states), full.prior);

  GeneratorSpec restricted_gen = GeneratorSpec::shannon();
  if (!gen.is_shannon()) {
    // Keep surviving options in their nests; re-index; drop empty nests.
    // A nest reduced to one member keeps its zeta (S is then the identity
    // coordinate regardless of zeta).
    const NestStructure& ns = gen.nests();
    std::vector<std::vector<int>> nests;
    std::vector<double> zeta;
    for (int g = 0; g < ns.n_nests(); ++g) {
      std::vector<int> members;
      for (int j = 0; j < k; ++j) {
        if (ns.nest_of[options[j] - 1] == g) members.push_back(j);
      }
      if (!members.empty()) {
        nests.push_back(std::move(members));
        zeta.push_back(ns.zeta[g]);
      }
    }
    restricted_gen =
        GeneratorSpec::nested_logit(NestStructure::from_partition(nests, zeta));
  }

  AppendixSolution out;
  out.solution = solve_fixed_point(restricted_gen, restricted, solver);
  out.options = std::move(options);
  return out;
}

RegularityReport regularity_check(const AppendixSolution& small_set,
                                  const AppendixSolution& full_set) {
  RegularityReport report;
  for (std::size_t a = 0; a < small_set.options.size(); ++a) {
    const int label = small_set.options[a];
    const auto it = std::find(full_set.options.begin(), full_set.options.end(),
                              label);
    if (it == full_set.options.end()) {
      fail(ErrorKind::DimensionMismatch,
           "choice sets are not nested: option " + std::to_string(label) +
               " missing from the larger set");
    }
    const std::size_t b = it - full_set.options.begin();
    const double before = small_set.solution.p0[static_cast<int>(a)];
    const double after = full_set.solution.p0[static_cast<int>(b)];
    if (after - before > 1e-6) report.increased.push_back({label, before, after});
  }
  return report;
}

std::string to_csv(const SummaryStats& stats, long n_states,
                   std::uint64_t seed) {
  std::string out = "option,avg,median,std\n";
  for (std::size_t i = 0; i < stats.avg.size(); ++i) {
    out += std::to_string(i + 1) + "," + format_double(stats.avg[i]) + "," +
           format_double(stats.median[i]) + "," +
           format_double(stats.std_dev[i]) + "\n";
  }
  out += "efficiency," + format_double(stats.efficiency) + ",n_states," +
         std::to_string(n_states) + ",seed," + std::to_string(seed) + "\n";
  return out;
}

}  // namespace geri
