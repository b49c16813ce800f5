#pragma once

#include <cstdint>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace geri {

inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();

enum class ErrorKind {
  EmptyVector,
  NegativeEntry,
  NotNormalized,
  DimensionMismatch,
  StateCountMismatch,
  AllMinusInfinity,
  AllOptionsExcluded,
  InvalidZeta,
  InvalidProblem,
  InvalidChoiceSet,
  NoConvergence,
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}
  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& message) {
  throw Error(kind, message);
}

/// Point on the unit simplex. Zero coordinates are kept exact (never floored)
/// and the support mask is defined by strict positivity.
class ProbabilityVector {
 public:
  ProbabilityVector() = default;

  /// Validates and renormalizes. Accepts sums within 1e-9 of one and entries
  /// down to -1e-12 (clamped to exact zero); anything else is an error.
  static ProbabilityVector validated(std::vector<double> values);

  /// For internal callers that already guarantee a normalized simplex point.
  static ProbabilityVector trusted(std::vector<double> values);

  int size() const { return static_cast<int>(values_.size()); }
  double operator[](int i) const { return values_[i]; }
  const std::vector<double>& values() const { return values_; }
  std::span<const double> span() const { return values_; }

  bool in_support(int i) const { return values_[i] > 0.0; }
  std::vector<bool> support() const;
  std::vector<int> support_indices() const;
  bool has_support() const;

 private:
  explicit ProbabilityVector(std::vector<double> values)
      : values_(std::move(values)) {}
  std::vector<double> values_;
};

/// Factory form used throughout; same semantics as ProbabilityVector::validated.
ProbabilityVector validate_simplex(std::vector<double> values);

/// Extended-real payoff vector. -inf marks an eliminated option; +inf and NaN
/// are rejected, and at least one coordinate must be finite.
class ValuationVector {
 public:
  ValuationVector() = default;
  static ValuationVector validated(std::vector<double> values);

  int size() const { return static_cast<int>(values_.size()); }
  double operator[](int i) const { return values_[i]; }
  const std::vector<double>& values() const { return values_; }
  std::span<const double> span() const { return values_; }

 private:
  explicit ValuationVector(std::vector<double> values)
      : values_(std::move(values)) {}
  std::vector<double> values_;
};

/// Finite payoff state space: M valuation vectors with prior weights.
struct FiniteChoiceProblem {
  int n_options = 0;
  std::vector<ValuationVector> states;
  std::vector<double> prior;

  static FiniteChoiceProblem validated(std::vector<ValuationVector> states,
                                       std::vector<double> prior);

  int n_states() const { return static_cast<int>(states.size()); }
};

/// Partition of options into mutually exclusive nests with per-nest
/// parameters zeta in (0,1]. zeta below 1e-6 is rejected as degenerate.
struct NestStructure {
  std::vector<int> nest_of;                // option index -> nest id
  std::vector<std::vector<int>> members;   // nest id -> option indices, ascending
  std::vector<double> zeta;                // nest id -> zeta

  static NestStructure from_partition(const std::vector<std::vector<int>>& nests,
                                      const std::vector<double>& zeta);

  int n_options() const { return static_cast<int>(nest_of.size()); }
  int n_nests() const { return static_cast<int>(members.size()); }
  double zeta_of(int option) const { return zeta[nest_of[option]]; }
};

/// log sum_i exp(values[i]) with the finite maximum subtracted first.
/// -inf entries contribute nothing; the result is -inf iff all entries are.
double log_sum_exp(std::span<const double> values);

/// SplitMix64 step; used to derive independent sub-seeds deterministically.
std::uint64_t splitmix64(std::uint64_t& state);

/// Sub-seed for stream `index` of a master seed.
std::uint64_t subseed(std::uint64_t seed, std::uint64_t index);

}  // namespace geri
