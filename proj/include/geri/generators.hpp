#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "geri/core.hpp"

namespace geri {

/// A generator function S together with its inverse H. S determines the
/// generalized entropy -q.log S(q) and, dually, the surplus of the matching
/// discrete-choice model. Shannon (S = identity) gives multinomial logit;
/// the nested variant gives nested logit with parameters zeta per nest.
class GeneratorSpec {
 public:
  enum class Kind { Shannon, NestedLogit };

  static GeneratorSpec shannon() { return GeneratorSpec(Kind::Shannon, {}); }
  static GeneratorSpec nested_logit(NestStructure nests) {
    return GeneratorSpec(Kind::NestedLogit, std::move(nests));
  }

  Kind kind() const { return kind_; }
  bool is_shannon() const { return kind_ == Kind::Shannon; }
  const NestStructure& nests() const { return *nests_; }

  /// Number of options the generator is tied to; 0 for Shannon (any dimension).
  int dimension() const {
    return kind_ == Kind::NestedLogit ? nests_->n_options() : 0;
  }
  void check_dimension(int n) const;

 private:
  GeneratorSpec(Kind kind, std::optional<NestStructure> nests)
      : kind_(kind), nests_(std::move(nests)) {}
  Kind kind_;
  std::optional<NestStructure> nests_;
};

/// S(q). Defined for any nonnegative vector (homogeneous of degree 1);
/// S_i(q) = 0 exactly when q_i = 0.
std::vector<double> s_value(const GeneratorSpec& gen, std::span<const double> q);
std::vector<double> s_value(const GeneratorSpec& gen, const ProbabilityVector& q);

/// log S(q) with -inf on zero coordinates.
std::vector<double> log_s_value(const GeneratorSpec& gen, std::span<const double> q);

/// H(x) = S^{-1}(x) for nonnegative x; zeros map to zeros.
std::vector<double> h_value(const GeneratorSpec& gen, std::span<const double> x);

/// Surplus W(v) = log sum_i H_i(e^v), evaluated in log space.
/// For nested logit this is log sum_g (sum_{j in g} e^{v_j/zeta_g})^{zeta_g}.
double surplus(const GeneratorSpec& gen, const ValuationVector& v);

/// q_i(v) = H_i(e^v) / sum_j H_j(e^v); q_i = 0 exactly when v_i = -inf.
ProbabilityVector choice_probabilities(const GeneratorSpec& gen,
                                       const ValuationVector& v);

/// Generalized entropy Omega_S(q) = -q.log S(q), with 0 log 0 := 0.
double generalized_entropy(const GeneratorSpec& gen, const ProbabilityVector& q);

/// Convex conjugate of the surplus on the simplex: W*(q) = q.log S(q).
double conjugate(const GeneratorSpec& gen, const ProbabilityVector& q);

struct DiagnosticCheck {
  std::string name;
  double max_violation = 0.0;
  double tolerance = 0.0;
  bool passed = true;
};

struct GeneratorDiagnostics {
  std::vector<DiagnosticCheck> checks;
  bool all_passed() const;
  std::string summary() const;
};

/// Numerical self-validation over random interior points: degree-1 homogeneity
/// of S, H(S(q)) = q, the weighted Jacobian identity sum_i q_i d log S_i/dq_k = 1
/// (central differences), the surplus-gradient/choice-probability identity, and
/// midpoint concavity of the generalized entropy.
/// `n_options` sets the test dimension for Shannon (default 5); nested
/// generators use their own dimension.
GeneratorDiagnostics check_generator(const GeneratorSpec& gen, int trials,
                                     std::uint64_t seed, int n_options = 0);

}  // namespace geri
