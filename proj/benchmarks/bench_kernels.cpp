// Times the fixed-point expectation kernel: reference per-state log-space
// evaluation vs the shifted-exp path, serial and OpenMP-parallel.
//
//   bench_kernels [n_states] [iterations]

#include <chrono>
#include <cstdlib>
#include <iostream>
#include <random>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "geri/experiments.hpp"
#include "geri/kernels.hpp"

using namespace geri;
using clock_type = std::chrono::steady_clock;

namespace {

double seconds_since(clock_type::time_point start) {
  return std::chrono::duration<double>(clock_type::now() - start).count();
}

}  // namespace

int main(int argc, char** argv) {
  const long n_states = argc > 1 ? std::atol(argv[1]) : 200000;
  const int iterations = argc > 2 ? std::atoi(argv[2]) : 40;
  const int n = 5;

  std::mt19937_64 rng(1234);
  std::vector<ValuationVector> states;
  states.reserve(n_states);
  std::vector<double> v(n);
  for (long m = 0; m < n_states; ++m) {
    for (double& x : v) x = uniform01(rng);
    states.push_back(ValuationVector::validated(v));
  }
  const FiniteChoiceProblem problem = FiniteChoiceProblem::validated(
      std::move(states), std::vector<double>(n_states, 1.0 / n_states));
  const GeneratorSpec gen = GeneratorSpec::nested_logit(
      NestStructure::from_partition({{0, 1, 2}, {3, 4}}, {0.5, 0.5}));

  const SolveWorkspace ws(gen, problem);
  const ProbabilityVector p0 =
      validate_simplex({0.2, 0.2, 0.2, 0.2, 0.2});
  const std::vector<double> coef = ws.coef_from_p0(p0.span());
  std::vector<double> mean(n);

  const double rate_scale =
      static_cast<double>(n_states) * iterations / 1.0e6;

  auto start = clock_type::now();
  for (int it = 0; it < iterations; ++it) {
    std::vector<double> ref_mean;
    reference_expectation(gen, problem, p0, ref_mean, nullptr, nullptr);
    mean = ref_mean;
  }
  const double t_ref = seconds_since(start);
  std::cout << "reference (log-space, serial):  " << t_ref << " s  ("
            << rate_scale / t_ref << " Mstates/s)\n";

  start = clock_type::now();
  for (int it = 0; it < iterations; ++it)
    ws.expected_conditionals(coef, mean, false);
  const double t_serial = seconds_since(start);
  std::cout << "kernel, serial:                 " << t_serial << " s  ("
            << rate_scale / t_serial << " Mstates/s)  speedup vs reference "
            << t_ref / t_serial << "x\n";

  start = clock_type::now();
  for (int it = 0; it < iterations; ++it)
    ws.expected_conditionals(coef, mean, true);
  const double t_parallel = seconds_since(start);
#ifdef _OPENMP
  std::cout << "kernel, OpenMP (" << omp_get_max_threads() << " threads):      ";
#else
  std::cout << "kernel, OpenMP (unavailable):   ";
#endif
  std::cout << t_parallel << " s  (" << rate_scale / t_parallel
            << " Mstates/s)  speedup vs serial " << t_serial / t_parallel
            << "x\n";

  std::vector<double> serial_mean(n), parallel_mean(n);
  ws.expected_conditionals(coef, serial_mean, false);
  ws.expected_conditionals(coef, parallel_mean, true);
  bool identical = true;
  for (int i = 0; i < n; ++i)
    identical = identical && serial_mean[i] == parallel_mean[i];
  std::cout << "serial/parallel bitwise match:  " << (identical ? "yes" : "NO")
            << "\n";
  return identical ? 0 : 1;
}
