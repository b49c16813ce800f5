#pragma once

// Independent oracles used by the unit and acceptance suites: Gumbel
// simulation of the discrete-choice models, brute-force conjugate
// maximization on a simplex grid, finite differences, and a numerical
// inversion of S. None of these go through the closed forms they check.

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "geri/core.hpp"
#include "geri/generators.hpp"

namespace geri::testing {

inline double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline double gumbel(std::mt19937_64& rng) {
  double u = uniform01(rng);
  while (u <= 0.0) u = uniform01(rng);
  return -std::log(-std::log(u));
}

inline std::vector<double> dirichlet_point(std::mt19937_64& rng, int n,
                                           double floor_mix = 0.1) {
  std::vector<double> q(n);
  double sum = 0.0;
  for (double& x : q) {
    x = -std::log1p(-uniform01(rng));
    sum += x;
  }
  for (double& x : q) x = (1.0 - floor_mix) * (x / sum) + floor_mix / n;
  return q;
}

// Empirical choice frequencies when utilities are v_i + Gumbel(0,1) i.i.d.
inline std::vector<double> simulate_mnl(const std::vector<double>& v,
                                        long draws, std::mt19937_64& rng) {
  const int n = static_cast<int>(v.size());
  std::vector<long> wins(n, 0);
  for (long d = 0; d < draws; ++d) {
    int best = 0;
    double best_u = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < n; ++i) {
      if (v[i] == kNegInf) continue;
      const double u = v[i] + gumbel(rng);
      if (u > best_u) {
        best_u = u;
        best = i;
      }
    }
    ++wins[best];
  }
  std::vector<double> freq(n);
  for (int i = 0; i < n; ++i) freq[i] = static_cast<double>(wins[i]) / draws;
  return freq;
}

// Two-stage sampling of the nested model: a nest is drawn by Gumbel-perturbed
// inclusive values zeta_g * log sum_{j in g} exp(v_j/zeta_g), then an option
// within the nest by Gumbel-perturbed v_j/zeta_g.
inline std::vector<double> simulate_nested(const NestStructure& ns,
                                           const std::vector<double>& v,
                                           long draws, std::mt19937_64& rng) {
  const int n = static_cast<int>(v.size());
  const int n_nests = ns.n_nests();
  std::vector<double> inclusive(n_nests);
  for (int g = 0; g < n_nests; ++g) {
    std::vector<double> scaled;
    for (int i : ns.members[g]) scaled.push_back(v[i] / ns.zeta[g]);
    inclusive[g] = ns.zeta[g] * log_sum_exp(scaled);
  }
  std::vector<long> wins(n, 0);
  for (long d = 0; d < draws; ++d) {
    int best_nest = 0;
    double best_u = -std::numeric_limits<double>::infinity();
    for (int g = 0; g < n_nests; ++g) {
      if (inclusive[g] == kNegInf) continue;
      const double u = inclusive[g] + gumbel(rng);
      if (u > best_u) {
        best_u = u;
        best_nest = g;
      }
    }
    int best = -1;
    best_u = -std::numeric_limits<double>::infinity();
    for (int i : ns.members[best_nest]) {
      if (v[i] == kNegInf) continue;
      const double u = v[i] / ns.zeta[best_nest] + gumbel(rng);
      if (u > best_u) {
        best_u = u;
        best = i;
      }
    }
    ++wins[best];
  }
  std::vector<double> freq(n);
  for (int i = 0; i < n; ++i) freq[i] = static_cast<double>(wins[i]) / draws;
  return freq;
}

struct GridMax {
  double value = -std::numeric_limits<double>::infinity();
  std::vector<double> argmax;
};

// Brute-force sup_q { q.v - W*(q) } over the 3-option simplex with mesh
// width `step`. Boundary points are included (0 log 0 = 0).
inline GridMax fenchel_grid_3(const GeneratorSpec& gen,
                              const std::vector<double>& v, double step) {
  const long k = std::lround(1.0 / step);
  GridMax best;
  std::vector<double> q(3);
  for (long a = 0; a <= k; ++a) {
    q[0] = static_cast<double>(a) / k;
    for (long b = 0; b <= k - a; ++b) {
      q[1] = static_cast<double>(b) / k;
      q[2] = static_cast<double>(k - a - b) / k;
      const ProbabilityVector pv = ProbabilityVector::trusted(q);
      double value = -conjugate(gen, pv);
      for (int i = 0; i < 3; ++i) value += q[i] * v[i];
      if (value > best.value) {
        best.value = value;
        best.argmax = q;
      }
    }
  }
  return best;
}

// Central-difference gradient of the surplus.
inline std::vector<double> surplus_gradient_fd(const GeneratorSpec& gen,
                                               const std::vector<double>& v,
                                               double h = 1e-6) {
  std::vector<double> grad(v.size());
  std::vector<double> vp(v), vm(v);
  for (std::size_t i = 0; i < v.size(); ++i) {
    vp[i] = v[i] + h;
    vm[i] = v[i] - h;
    grad[i] = (surplus(gen, ValuationVector::validated(vp)) -
               surplus(gen, ValuationVector::validated(vm))) /
              (2.0 * h);
    vp[i] = v[i];
    vm[i] = v[i];
  }
  return grad;
}

// Inverts S numerically by multiplicative fixed-point iteration on
// q_i <- q_i * (x_i / S_i(q)); independent of the closed form for H.
inline std::vector<double> invert_s_numerically(const GeneratorSpec& gen,
                                                const std::vector<double>& x,
                                                int iterations = 400) {
  std::vector<double> q(x.begin(), x.end());
  for (int it = 0; it < iterations; ++it) {
    const std::vector<double> s = s_value(gen, std::span<const double>(q));
    for (std::size_t i = 0; i < q.size(); ++i) {
      if (x[i] > 0.0 && s[i] > 0.0) q[i] *= std::sqrt(x[i] / s[i]);
    }
  }
  return q;
}

}  // namespace geri::testing
