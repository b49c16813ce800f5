#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "geri/core.hpp"
#include "geri/generators.hpp"
#include "geri/solver.hpp"

namespace geri {

/// Monte Carlo study: N options with valuations drawn i.i.d. Uniform(0,1),
/// discretized as n_states equiprobable states per replication.
struct MonteCarloConfig {
  int n_options = 5;
  long n_states = 10000;
  int n_replications = 10;
  std::uint64_t seed = 0;
  GeneratorSpec generator = GeneratorSpec::shannon();
  SolverConfig solver;
};

/// Per-option statistics of the conditional choice probabilities across
/// states, plus the probability of choosing the best option.
struct SummaryStats {
  std::vector<double> avg;
  std::vector<double> median;
  std::vector<double> std_dev;
  double efficiency = 0.0;
};

struct Table1Result {
  SummaryStats stats;                      // means across replications
  std::vector<SummaryStats> replications;  // one per replication sub-seed
  long n_states = 0;
  std::uint64_t seed = 0;
};

/// Runs the five-option uniform-valuation study for a Shannon or
/// {0,1,2}/{3,4}-nested generator. Bit-reproducible for a fixed seed and
/// configuration regardless of thread count.
Table1Result run_table1(const MonteCarloConfig& config);

/// Statistics of one solved problem (states weighted by the prior).
SummaryStats summarize(const FiniteChoiceProblem& problem,
                       const GeriSolution& solution);

/// The four-option, three-state consideration-set example. Options carry
/// one-based labels 1..4 so restricted solutions stay comparable.
FiniteChoiceProblem appendix_problem();
/// Nests {1,2} with zeta 0.7 and {3,4} with zeta 0.8 (one-based labels).
GeneratorSpec appendix_nested_generator();

struct AppendixSolution {
  GeriSolution solution;
  std::vector<int> options;  // one-based labels, ascending
};

/// Solves the example restricted to `choice_set` (a non-empty subset of
/// {1,2,3,4}, one-based). `gen` is the full four-option generator; nests are
/// re-indexed after dropping options and a singleton nest keeps its zeta.
AppendixSolution run_appendix_example(const GeneratorSpec& gen,
                                      const std::vector<int>& choice_set,
                                      const SolverConfig& solver = {});

struct RegularityReport {
  struct Entry {
    int option;  // one-based label
    double before, after;
    double increase() const { return after - before; }
  };
  std::vector<Entry> increased;
  bool empty() const { return increased.empty(); }
};

/// Options whose unconditional probability strictly increased (beyond 1e-6)
/// when the choice set was enlarged from `small` to `full`.
RegularityReport regularity_check(const AppendixSolution& small_set,
                                  const AppendixSolution& full_set);

/// CSV: one row per option (option, avg, median, std), then a footer row
/// with efficiency, n_states, seed.
std::string to_csv(const SummaryStats& stats, long n_states, std::uint64_t seed);

/// Uniform(0,1) from 53 random mantissa bits; keeps draws identical across
/// standard-library implementations.
double uniform01(std::mt19937_64& rng);

}  // namespace geri
