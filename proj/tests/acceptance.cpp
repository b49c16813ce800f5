// Integration acceptance suite. Runs the reproduction and property criteria
// end to end and prints one pass/fail line per criterion (plus detail rows).
// A specific criterion can be selected with --criterion N; the process exit
// code is nonzero if any executed criterion fails.
//
// Sample sizes for the Monte Carlo criteria are pinned well above the stated
// minimum of 10,000 draws so that the reported statistics carry Monte Carlo
// noise an order of magnitude below the acceptance bands; seeds are fixed.

#include <chrono>
#include <cmath>
#include <cstring>
#include <iomanip>
#include <iostream>
#include <random>
#include <sstream>
#include <vector>

#include "geri/experiments.hpp"
#include "geri/json_io.hpp"
#include "geri/kernels.hpp"
#include "geri/solver.hpp"
#include "support/oracles.hpp"

using namespace geri;

namespace {

struct Criterion {
  int id;
  std::string title;
  bool passed = true;
  std::vector<std::string> details;

  void check(const std::string& what, double value, double target,
             double tolerance) {
    const bool ok = std::abs(value - target) <= tolerance;
    passed = passed && ok;
    std::ostringstream os;
    os << (ok ? "  ok   " : "  FAIL ") << what << ": " << std::setprecision(6)
       << std::fixed << value << " vs " << target << " +- " << tolerance;
    details.push_back(os.str());
  }
  void check_below(const std::string& what, double value, double bound) {
    const bool ok = value <= bound;
    passed = passed && ok;
    std::ostringstream os;
    os << (ok ? "  ok   " : "  FAIL ") << what << ": " << std::scientific
       << std::setprecision(3) << value << " <= " << bound;
    details.push_back(os.str());
  }
  void check_true(const std::string& what, bool ok) {
    passed = passed && ok;
    details.push_back(std::string(ok ? "  ok   " : "  FAIL ") + what);
  }
  void note(const std::string& text) { details.push_back("       " + text); }
};

GeneratorSpec table1_nested() {
  return GeneratorSpec::nested_logit(
      NestStructure::from_partition({{0, 1, 2}, {3, 4}}, {0.5, 0.5}));
}

GeneratorSpec random_nested(std::mt19937_64& rng, int n) {
  std::vector<std::vector<int>> nests;
  std::vector<double> zeta;
  std::vector<int> current;
  for (int i = 0; i < n; ++i) {
    current.push_back(i);
    if (i == n - 1 || testing::uniform01(rng) < 0.4) {
      nests.push_back(current);
      zeta.push_back(0.3 + 0.7 * testing::uniform01(rng));
      current.clear();
    }
  }
  return GeneratorSpec::nested_logit(NestStructure::from_partition(nests, zeta));
}

FiniteChoiceProblem random_problem(std::mt19937_64& rng, int n, int m) {
  std::vector<ValuationVector> states;
  for (int s = 0; s < m; ++s) {
    std::vector<double> v(n);
    for (double& x : v) x = 4.0 * testing::uniform01(rng) - 2.0;
    states.push_back(ValuationVector::validated(std::move(v)));
  }
  return FiniteChoiceProblem::validated(std::move(states),
                                        std::vector<double>(m, 1.0 / m));
}

// ---------------------------------------------------------------------------

Criterion criterion1() {
  Criterion c{1, "uniform-valuation study, multinomial-logit panel"};
  MonteCarloConfig config;
  config.n_states = 2000000;
  config.n_replications = 1;
  config.seed = 20240923;

  const auto start = std::chrono::steady_clock::now();
  const Table1Result result = run_table1(config);
  const double elapsed =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  const SummaryStats& s = result.stats;

  c.note("n_states=2000000 (criterion requires >= 10000), seed=20240923");
  for (int i = 0; i < 5; ++i)
    c.check("avg[" + std::to_string(i + 1) + "]", s.avg[i], 0.200, 0.005);
  for (int i = 0; i < 5; ++i)
    c.check("median[" + std::to_string(i + 1) + "]", s.median[i], 0.194, 0.005);
  for (int i = 0; i < 5; ++i)
    c.check("std[" + std::to_string(i + 1) + "]", s.std_dev[i], 0.060, 0.005);
  c.check("efficiency", s.efficiency, 0.283, 0.010);
  c.check_below("runtime (s)", elapsed, 60.0);
  return c;
}

Criterion criterion2() {
  Criterion c{2, "uniform-valuation study, nested panel (zeta = 0.5)"};
  MonteCarloConfig config;
  config.n_states = 800000;
  config.n_replications = 1;
  config.seed = 20240923;
  config.generator = table1_nested();
  const Table1Result result = run_table1(config);
  const SummaryStats& s = result.stats;

  c.note("n_states=800000, seed=20240923");
  const double avg_target[5] = {0.221, 0.221, 0.221, 0.169, 0.169};
  for (int i = 0; i < 5; ++i)
    c.check("avg[" + std::to_string(i + 1) + "]", s.avg[i], avg_target[i],
            0.010);
  for (int i = 0; i < 5; ++i)
    c.check("median[" + std::to_string(i + 1) + "]", s.median[i],
            i < 3 ? 0.200 : 0.157, 0.010);
  for (int i = 0; i < 5; ++i)
    c.check("std[" + std::to_string(i + 1) + "]", s.std_dev[i],
            i < 3 ? 0.116 : 0.081, 0.010);
  c.check("efficiency", s.efficiency, 0.355, 0.010);
  return c;
}

Criterion criterion3() {
  Criterion c{3, "consideration-set example, Shannon cost"};
  const AppendixSolution small =
      run_appendix_example(GeneratorSpec::shannon(), {1, 2, 3});
  c.check("{1,2,3} p0[1]", small.solution.p0[0], 0.71, 0.01);
  c.check("{1,2,3} p0[2]", small.solution.p0[1], 0.00, 0.01);
  c.check("{1,2,3} p0[3]", small.solution.p0[2], 0.29, 0.01);
  c.check("{1,2,3} objective", small.solution.objective, 2.705, 0.005);

  const AppendixSolution full =
      run_appendix_example(GeneratorSpec::shannon(), {1, 2, 3, 4});
  c.check("{1,2,3,4} p0[1]", full.solution.p0[0], 0.00, 0.01);
  c.check("{1,2,3,4} p0[2]", full.solution.p0[1], 0.00, 0.01);
  c.check("{1,2,3,4} p0[3]", full.solution.p0[2], 0.51, 0.01);
  c.check("{1,2,3,4} p0[4]", full.solution.p0[3], 0.49, 0.01);
  c.check("{1,2,3,4} objective", full.solution.objective, 2.865, 0.005);
  return c;
}

// Prop-style identity: E W(V + log S(p0)) computed three ways.
double objective_identity_error(const GeneratorSpec& gen,
                                const FiniteChoiceProblem& problem,
                                const GeriSolution& sol) {
  const std::vector<double> shift = log_s_value(gen, sol.p0.span());
  double rhs = 0.0;
  for (long m = 0; m < problem.n_states(); ++m) {
    double payoff = 0.0;
    for (int i = 0; i < problem.n_options; ++i) {
      const double p = sol.conditionals[m][i];
      if (p > 0.0) payoff += p * (problem.states[m][i] + shift[i]);
    }
    rhs += problem.prior[m] *
           (payoff - conjugate(gen, sol.conditionals[m]));
  }
  const double direct = optimized_value(gen, problem, sol.p0);
  return std::max(std::abs(sol.objective - rhs),
                  std::abs(sol.objective - direct));
}

Criterion criterion4() {
  Criterion c{4, "consideration-set example, nested cost"};
  const GeneratorSpec gen = appendix_nested_generator();

  const AppendixSolution small = run_appendix_example(gen, {1, 2, 3});
  c.check("{1,2,3} p0[1]", small.solution.p0[0], 0.71, 0.02);
  c.check("{1,2,3} p0[2]", small.solution.p0[1], 0.00, 0.02);
  c.check("{1,2,3} p0[3]", small.solution.p0[2], 0.29, 0.02);
  bool cs_small = small.solution.consideration_set == std::vector<int>{0, 2};
  c.check_true("{1,2,3} consideration set is {1,3}", cs_small);

  const AppendixSolution full = run_appendix_example(gen, {1, 2, 3, 4});
  c.check("{1,2,3,4} p0[1]", full.solution.p0[0], 0.00, 0.02);
  c.check("{1,2,3,4} p0[2]", full.solution.p0[1], 0.00, 0.02);
  c.check("{1,2,3,4} p0[3]", full.solution.p0[2], 0.57, 0.02);
  c.check("{1,2,3,4} p0[4]", full.solution.p0[3], 0.43, 0.02);
  bool cs_full = full.solution.consideration_set == std::vector<int>{2, 3};
  c.check_true("{1,2,3,4} consideration set is {3,4}", cs_full);

  // The published surplus scalars for this panel (4.222 / 6.032) do not
  // satisfy the optimized-value identity at the stated probabilities; the
  // solver's objective must instead satisfy that identity to 1e-9.
  // docs/experiments.md records the numbers side by side.
  FiniteChoiceProblem base = appendix_problem();
  std::vector<ValuationVector> small_states;
  for (long m = 0; m < 3; ++m)
    small_states.push_back(ValuationVector::validated(
        {base.states[m][0], base.states[m][1], base.states[m][2]}));
  const FiniteChoiceProblem small_problem = FiniteChoiceProblem::validated(
      std::move(small_states), std::vector<double>(3, 1.0 / 3));
  const GeneratorSpec small_gen = GeneratorSpec::nested_logit(
      NestStructure::from_partition({{0, 1}, {2}}, {0.7, 0.8}));

  c.check_below("{1,2,3} objective identity error",
                objective_identity_error(small_gen, small_problem,
                                         small.solution),
                1e-9);
  c.check_below("{1,2,3,4} objective identity error",
                objective_identity_error(gen, base, full.solution), 1e-9);
  std::ostringstream os;
  os << std::setprecision(4) << std::fixed
     << "computed objectives: " << small.solution.objective << " / "
     << full.solution.objective
     << "; reference table prints 4.222 / 6.032 (see docs/experiments.md)";
  c.note(os.str());
  return c;
}

Criterion criterion5() {
  Criterion c{5, "regularity failure: option 3 gains when option 4 arrives"};
  for (const GeneratorSpec& gen :
       {GeneratorSpec::shannon(), appendix_nested_generator()}) {
    const char* label = gen.is_shannon() ? "Shannon" : "nested";
    const AppendixSolution small = run_appendix_example(gen, {1, 2, 3});
    const AppendixSolution full = run_appendix_example(gen, {1, 2, 3, 4});
    const RegularityReport report = regularity_check(small, full);
    double increase = 0.0;
    for (const auto& e : report.increased)
      if (e.option == 3) increase = e.increase();
    c.check_true(std::string(label) + ": option 3 flagged, +" +
                     std::to_string(increase) + " >= 0.15",
                 increase >= 0.15);
  }
  return c;
}

Criterion criterion6() {
  Criterion c{6, "property suites at stated tolerances"};
  std::mt19937_64 rng(608);

  // Generator identities, via the randomized diagnostic suite.
  for (const GeneratorSpec& gen :
       {GeneratorSpec::shannon(), table1_nested(),
        appendix_nested_generator()}) {
    const GeneratorDiagnostics d = check_generator(gen, 150, 42);
    for (const auto& chk : d.checks)
      c.check_below(std::string(gen.is_shannon() ? "Shannon " : "nested ") +
                        chk.name,
                    chk.max_violation, chk.tolerance);
  }

  // kappa >= 0 always; kappa = 0 under state-independent conditionals.
  double worst_negative = 0.0;
  double worst_independent = 0.0;
  for (int t = 0; t < 50; ++t) {
    const int n = 2 + t % 4;
    const int m = 2 + t % 5;
    const FiniteChoiceProblem problem = random_problem(rng, n, m);
    const GeneratorSpec gen =
        t % 2 == 0 ? GeneratorSpec::shannon() : random_nested(rng, n);
    std::vector<ProbabilityVector> conds;
    for (int s = 0; s < m; ++s)
      conds.push_back(
          ProbabilityVector::trusted(testing::dirichlet_point(rng, n)));
    worst_negative =
        std::max(worst_negative, -information_cost(gen, problem, conds));
    const std::vector<ProbabilityVector> flat(
        m, ProbabilityVector::trusted(testing::dirichlet_point(rng, n)));
    worst_independent = std::max(
        worst_independent, std::abs(information_cost(gen, problem, flat)));
  }
  c.check_below("kappa >= 0 (worst negative part)", worst_negative, 1e-12);
  c.check_below("kappa = 0 under state-independent conditionals",
                worst_independent, 1e-12);

  // Shannon conditionals match the weighted-softmax closed form.
  double worst_closed_form = 0.0;
  for (int t = 0; t < 10; ++t) {
    const int n = 3 + t % 3;
    const FiniteChoiceProblem problem = random_problem(rng, n, 4 + t % 4);
    const GeriSolution sol =
        solve_fixed_point(GeneratorSpec::shannon(), problem, {});
    for (long m = 0; m < problem.n_states(); ++m) {
      double den = 0.0;
      for (int i = 0; i < n; ++i)
        den += sol.p0[i] * std::exp(problem.states[m][i]);
      for (int i = 0; i < n; ++i) {
        const double closed = sol.p0[i] * std::exp(problem.states[m][i]) / den;
        worst_closed_form = std::max(
            worst_closed_form, std::abs(sol.conditionals[m][i] - closed));
      }
    }
  }
  c.check_below("Shannon conditionals closed form", worst_closed_form, 1e-12);

  // Equivalence round trip through the random-utility construction.
  double worst_roundtrip = 0.0;
  for (int t = 0; t < 6; ++t) {
    const int n = 3 + t % 2;
    const FiniteChoiceProblem rum = random_problem(rng, n, 3 + t % 3);
    const GeneratorSpec gen =
        t % 2 == 0 ? GeneratorSpec::shannon() : random_nested(rng, n);
    const auto [problem, p0] = from_rum(gen, rum);
    SolverConfig config;
    config.tolerance = 1e-12;
    const GeriSolution sol = solve_fixed_point(gen, problem, config);
    for (long m = 0; m < rum.n_states(); ++m) {
      const ProbabilityVector q = choice_probabilities(gen, rum.states[m]);
      for (int i = 0; i < n; ++i)
        worst_roundtrip = std::max(
            worst_roundtrip, std::abs(sol.conditionals[m][i] - q[i]));
    }
  }
  c.check_below("equivalence round trip", worst_roundtrip, 1e-8);

  // Residual contract at returned solutions, recomputed via the reference path.
  double worst_residual = 0.0;
  for (int t = 0; t < 8; ++t) {
    const int n = 3 + t % 3;
    const FiniteChoiceProblem problem = random_problem(rng, n, 3 + t % 5);
    const GeneratorSpec gen =
        t % 2 == 0 ? GeneratorSpec::shannon() : random_nested(rng, n);
    const GeriSolution sol = solve_fixed_point(gen, problem, {});
    std::vector<double> mean;
    reference_expectation(gen, problem, sol.p0, mean, nullptr, nullptr);
    for (int i = 0; i < n; ++i)
      worst_residual =
          std::max(worst_residual, std::abs(mean[i] - sol.p0[i]));
  }
  c.check_below("fixed-point residual at returned solutions", worst_residual,
                1e-10 + 1e-12);
  return c;
}

Criterion criterion7() {
  Criterion c{7, "Gumbel simulation oracle, 1e6 draws, 3 standard errors"};
  std::mt19937_64 rng(711);
  const long draws = 1000000;
  const GeneratorSpec nested = table1_nested();
  double worst_sigma = 0.0;
  for (int t = 0; t < 10; ++t) {
    std::vector<double> v(5);
    for (double& x : v) x = 2.0 * testing::uniform01(rng) - 1.0;
    const ValuationVector vv = ValuationVector::validated(v);

    const ProbabilityVector q_mnl =
        choice_probabilities(GeneratorSpec::shannon(), vv);
    const std::vector<double> f_mnl = testing::simulate_mnl(v, draws, rng);
    const ProbabilityVector q_nest = choice_probabilities(nested, vv);
    const std::vector<double> f_nest =
        testing::simulate_nested(nested.nests(), v, draws, rng);
    for (int i = 0; i < 5; ++i) {
      const double se_m = std::sqrt(q_mnl[i] * (1 - q_mnl[i]) / draws);
      const double se_n = std::sqrt(q_nest[i] * (1 - q_nest[i]) / draws);
      worst_sigma = std::max(worst_sigma,
                             std::abs(f_mnl[i] - q_mnl[i]) / se_m);
      worst_sigma = std::max(worst_sigma,
                             std::abs(f_nest[i] - q_nest[i]) / se_n);
    }
  }
  c.check_below("max |frequency - probability| in standard errors",
                worst_sigma, 3.0);
  return c;
}

Criterion criterion8() {
  Criterion c{8, "brute-force conjugate maximization on a simplex grid"};
  std::mt19937_64 rng(808);
  const GeneratorSpec nested3 = GeneratorSpec::nested_logit(
      NestStructure::from_partition({{0, 1}, {2}}, {0.6, 0.9}));
  double worst_value = 0.0;
  double worst_argmax = 0.0;
  for (int t = 0; t < 3; ++t) {
    for (const GeneratorSpec& gen : {GeneratorSpec::shannon(), nested3}) {
      std::vector<double> v(3);
      for (double& x : v) x = 2.0 * testing::uniform01(rng) - 1.0;
      const testing::GridMax grid = testing::fenchel_grid_3(gen, v, 1e-3);
      const ValuationVector vv = ValuationVector::validated(v);
      worst_value =
          std::max(worst_value, std::abs(grid.value - surplus(gen, vv)));
      const ProbabilityVector q = choice_probabilities(gen, vv);
      for (int i = 0; i < 3; ++i)
        worst_argmax = std::max(worst_argmax, std::abs(grid.argmax[i] - q[i]));
    }
  }
  c.check_below("sup_q {q.v - W*(q)} vs surplus", worst_value, 5e-3);
  c.check_below("grid argmax vs choice probabilities", worst_argmax, 2e-3);
  return c;
}

}  // namespace

int main(int argc, char** argv) {
  int only = 0;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--criterion") == 0 && i + 1 < argc)
      only = std::atoi(argv[i + 1]);
  }

  Criterion (*runners[8])() = {criterion1, criterion2, criterion3, criterion4,
                               criterion5, criterion6, criterion7, criterion8};
  bool all_passed = true;
  for (int k = 1; k <= 8; ++k) {
    if (only != 0 && only != k) continue;
    const Criterion result = runners[k - 1]();
    std::cout << "criterion " << result.id << ": "
              << (result.passed ? "PASS" : "FAIL") << " - " << result.title
              << "\n";
    for (const std::string& line : result.details) std::cout << line << "\n";
    all_passed = all_passed && result.passed;
  }
  return all_passed ? 0 : 1;
}
