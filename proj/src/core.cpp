#include "geri/core.hpp"

#include <algorithm>
#include <cmath>

namespace geri {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::EmptyVector: return "EmptyVector";
    case ErrorKind::NegativeEntry: return "NegativeEntry";
    case ErrorKind::NotNormalized: return "NotNormalized";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::StateCountMismatch: return "StateCountMismatch";
    case ErrorKind::AllMinusInfinity: return "AllMinusInfinity";
    case ErrorKind::AllOptionsExcluded: return "AllOptionsExcluded";
    case ErrorKind::InvalidZeta: return "InvalidZeta";
    case ErrorKind::InvalidProblem: return "InvalidProblem";
    case ErrorKind::InvalidChoiceSet: return "InvalidChoiceSet";
    case ErrorKind::NoConvergence: return "NoConvergence";
  }
  return "Unknown";
}

ProbabilityVector ProbabilityVector::validated(std::vector<double> values) {
  if (values.empty()) fail(ErrorKind::EmptyVector, "probability vector is empty");
  double sum = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double x = values[i];
    if (!(x > -1e-12) || std::isnan(x)) {
      fail(ErrorKind::NegativeEntry,
           "probability vector entry " + std::to_string(i) + " is negative (" +
               std::to_string(x) + ")");
    }
    sum += x;
  }
  if (std::abs(sum - 1.0) > 1e-9) {
    fail(ErrorKind::NotNormalized,
         "probability vector sums to " + std::to_string(sum) +
             ", outside 1e-9 of 1");
  }
  // Skipping the division on an already-normalized input keeps validation
  // idempotent at the last ulp.
  const bool renormalize = std::abs(sum - 1.0) > 1e-13;
  for (double& x : values) {
    x = x <= 0.0 ? 0.0 : x;
    if (renormalize && x > 0.0) x /= sum;
  }
  return ProbabilityVector(std::move(values));
}

ProbabilityVector ProbabilityVector::trusted(std::vector<double> values) {
  return ProbabilityVector(std::move(values));
}

std::vector<bool> ProbabilityVector::support() const {
  std::vector<bool> mask(values_.size());
  for (std::size_t i = 0; i < values_.size(); ++i) mask[i] = values_[i] > 0.0;
  return mask;
}

std::vector<int> ProbabilityVector::support_indices() const {
  std::vector<int> idx;
  for (int i = 0; i < size(); ++i)
    if (values_[i] > 0.0) idx.push_back(i);
  return idx;
}

bool ProbabilityVector::has_support() const {
  return std::any_of(values_.begin(), values_.end(),
                     [](double x) { return x > 0.0; });
}

ProbabilityVector validate_simplex(std::vector<double> values) {
  return ProbabilityVector::validated(std::move(values));
}

ValuationVector ValuationVector::validated(std::vector<double> values) {
  if (values.empty()) fail(ErrorKind::EmptyVector, "valuation vector is empty");
  bool any_finite = false;
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double x = values[i];
    if (std::isnan(x) || x == std::numeric_limits<double>::infinity()) {
      fail(ErrorKind::InvalidProblem,
           "valuation entry " + std::to_string(i) + " is +inf or NaN");
    }
    any_finite = any_finite || std::isfinite(x);
  }
  if (!any_finite)
    fail(ErrorKind::AllMinusInfinity, "all valuation entries are -inf");
  return ValuationVector(std::move(values));
}

FiniteChoiceProblem FiniteChoiceProblem::validated(
    std::vector<ValuationVector> states, std::vector<double> prior) {
  if (states.empty())
    fail(ErrorKind::InvalidProblem, "problem has no states");
  const int n = states.front().size();
  for (std::size_t m = 1; m < states.size(); ++m) {
    if (states[m].size() != n) {
      fail(ErrorKind::DimensionMismatch,
           "state " + std::to_string(m) + " has " +
               std::to_string(states[m].size()) + " options, expected " +
               std::to_string(n));
    }
  }
  if (prior.size() != states.size()) {
    fail(ErrorKind::StateCountMismatch,
         "prior has " + std::to_string(prior.size()) + " weights for " +
             std::to_string(states.size()) + " states");
  }
  double sum = 0.0;
  for (std::size_t m = 0; m < prior.size(); ++m) {
    if (!(prior[m] > -1e-12) || std::isnan(prior[m])) {
      fail(ErrorKind::InvalidProblem,
           "prior weight " + std::to_string(m) + " is negative");
    }
    sum += prior[m];
  }
  if (std::abs(sum - 1.0) > 1e-9) {
    fail(ErrorKind::InvalidProblem,
         "prior sums to " + std::to_string(sum) + ", outside 1e-9 of 1");
  }
  for (double& w : prior) w = w <= 0.0 ? 0.0 : w / sum;
  FiniteChoiceProblem p;
  p.n_options = n;
  p.states = std::move(states);
  p.prior = std::move(prior);
  return p;
}

NestStructure NestStructure::from_partition(
    const std::vector<std::vector<int>>& nests, const std::vector<double>& zeta) {
  if (nests.empty()) fail(ErrorKind::InvalidProblem, "nest list is empty");
  if (zeta.size() != nests.size()) {
    fail(ErrorKind::InvalidProblem,
         "got " + std::to_string(zeta.size()) + " zeta values for " +
             std::to_string(nests.size()) + " nests");
  }
  int n = 0;
  for (const auto& g : nests) n += static_cast<int>(g.size());

  NestStructure out;
  out.nest_of.assign(n, -1);
  out.members.resize(nests.size());
  out.zeta = zeta;
  for (std::size_t g = 0; g < nests.size(); ++g) {
    if (!(zeta[g] > 1e-6) || zeta[g] > 1.0 || std::isnan(zeta[g])) {
      fail(ErrorKind::InvalidZeta,
           "zeta[" + std::to_string(g) + "] = " + std::to_string(zeta[g]) +
               " is outside (1e-6, 1]");
    }
    if (nests[g].empty())
      fail(ErrorKind::InvalidProblem, "nest " + std::to_string(g) + " is empty");
    for (int i : nests[g]) {
      if (i < 0 || i >= n || out.nest_of[i] != -1) {
        fail(ErrorKind::InvalidProblem,
             "nests must partition options 0.." + std::to_string(n - 1));
      }
      out.nest_of[i] = static_cast<int>(g);
    }
    out.members[g] = nests[g];
    std::sort(out.members[g].begin(), out.members[g].end());
  }
  return out;
}

double log_sum_exp(std::span<const double> values) {
  if (values.empty()) fail(ErrorKind::EmptyVector, "log_sum_exp of empty vector");
  double max = kNegInf;
  for (double x : values) {
    if (std::isnan(x) || x == std::numeric_limits<double>::infinity()) {
      fail(ErrorKind::InvalidProblem, "log_sum_exp input has +inf or NaN");
    }
    max = std::max(max, x);
  }
  if (max == kNegInf) return kNegInf;
  double sum = 0.0;
  for (double x : values) {
    if (x != kNegInf) sum += std::exp(x - max);
  }
  return max + std::log(sum);
}

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::uint64_t subseed(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t state = seed;
  std::uint64_t out = splitmix64(state);
  state = out ^ (index * 0x9E3779B97F4A7C15ULL + 0xD1B54A32D192ED03ULL);
  return splitmix64(state);
}

}  // namespace geri
