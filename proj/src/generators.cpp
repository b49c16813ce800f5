#include "geri/generators.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

namespace geri {
namespace {

// log H_i(e^t) for extended-real t: t_i/zeta + (zeta-1) * lse_{j in g}(t_j/zeta).
// A -inf input stays -inf even when the rest of its nest is finite.
std::vector<double> log_h_of_exp(const GeneratorSpec& gen,
                                 std::span<const double> t) {
  const int n = static_cast<int>(t.size());
  std::vector<double> out(n);
  if (gen.is_shannon()) {
    std::copy(t.begin(), t.end(), out.begin());
    return out;
  }
  const NestStructure& ns = gen.nests();
  std::vector<double> scaled(n);
  for (int i = 0; i < n; ++i) scaled[i] = t[i] / ns.zeta_of(i);
  for (int g = 0; g < ns.n_nests(); ++g) {
    const double zeta = ns.zeta[g];
    double max = kNegInf;
    for (int i : ns.members[g]) max = std::max(max, scaled[i]);
    if (max == kNegInf) {
      for (int i : ns.members[g]) out[i] = kNegInf;
      continue;
    }
    double sum = 0.0;
    for (int i : ns.members[g])
      if (scaled[i] != kNegInf) sum += std::exp(scaled[i] - max);
    const double lse = max + std::log(sum);
    for (int i : ns.members[g])
      out[i] = scaled[i] == kNegInf ? kNegInf : scaled[i] + (zeta - 1.0) * lse;
  }
  return out;
}

// Random simplex point bounded away from the boundary, so that +-1e-6
// coordinate probes stay in the positive orthant.
std::vector<double> interior_point(std::mt19937_64& rng, int n) {
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::vector<double> q(n);
  double sum = 0.0;
  for (double& x : q) {
    x = -std::log1p(-unif(rng));  // Exp(1); normalized gives Dirichlet(1,..,1)
    sum += x;
  }
  for (double& x : q) x = 0.9 * (x / sum) + 0.1 / n;
  return q;
}

}  // namespace

void GeneratorSpec::check_dimension(int n) const {
  if (kind_ == Kind::NestedLogit && nests_->n_options() != n) {
    fail(ErrorKind::DimensionMismatch,
         "generator is for " + std::to_string(nests_->n_options()) +
             " options, got " + std::to_string(n));
  }
  if (n < 1) fail(ErrorKind::EmptyVector, "dimension must be positive");
}

std::vector<double> log_s_value(const GeneratorSpec& gen,
                                std::span<const double> q) {
  gen.check_dimension(static_cast<int>(q.size()));
  const int n = static_cast<int>(q.size());
  std::vector<double> out(n);
  for (int i = 0; i < n; ++i) {
    if (q[i] < 0.0 || std::isnan(q[i]))
      fail(ErrorKind::NegativeEntry, "S requires nonnegative input");
  }
  if (gen.is_shannon()) {
    for (int i = 0; i < n; ++i) out[i] = q[i] > 0.0 ? std::log(q[i]) : kNegInf;
    return out;
  }
  const NestStructure& ns = gen.nests();
  for (int g = 0; g < ns.n_nests(); ++g) {
    const double zeta = ns.zeta[g];
    double nest_sum = 0.0;
    for (int i : ns.members[g]) nest_sum += q[i];
    const double log_nest = nest_sum > 0.0 ? std::log(nest_sum) : kNegInf;
    for (int i : ns.members[g]) {
      out[i] = q[i] > 0.0 ? zeta * std::log(q[i]) + (1.0 - zeta) * log_nest
                          : kNegInf;
    }
  }
  return out;
}

std::vector<double> s_value(const GeneratorSpec& gen, std::span<const double> q) {
  std::vector<double> out = log_s_value(gen, q);
  for (double& x : out) x = x == kNegInf ? 0.0 : std::exp(x);
  return out;
}

std::vector<double> s_value(const GeneratorSpec& gen, const ProbabilityVector& q) {
  return s_value(gen, q.span());
}

std::vector<double> h_value(const GeneratorSpec& gen, std::span<const double> x) {
  gen.check_dimension(static_cast<int>(x.size()));
  const int n = static_cast<int>(x.size());
  std::vector<double> logx(n);
  for (int i = 0; i < n; ++i) {
    if (x[i] < 0.0 || std::isnan(x[i]))
      fail(ErrorKind::NegativeEntry, "H requires nonnegative input");
    logx[i] = x[i] > 0.0 ? std::log(x[i]) : kNegInf;
  }
  std::vector<double> out = log_h_of_exp(gen, logx);
  for (double& v : out) v = v == kNegInf ? 0.0 : std::exp(v);
  return out;
}

double surplus(const GeneratorSpec& gen, const ValuationVector& v) {
  gen.check_dimension(v.size());
  if (gen.is_shannon()) return log_sum_exp(v.span());
  const NestStructure& ns = gen.nests();
  std::vector<double> nest_terms(ns.n_nests());
  std::vector<double> scaled;
  for (int g = 0; g < ns.n_nests(); ++g) {
    const double zeta = ns.zeta[g];
    scaled.clear();
    for (int i : ns.members[g]) scaled.push_back(v[i] / zeta);
    nest_terms[g] = zeta * log_sum_exp(scaled);
  }
  const double w = log_sum_exp(nest_terms);
  if (w == kNegInf) fail(ErrorKind::AllMinusInfinity, "surplus of all -inf payoffs");
  return w;
}

ProbabilityVector choice_probabilities(const GeneratorSpec& gen,
                                       const ValuationVector& v) {
  gen.check_dimension(v.size());
  std::vector<double> logh = log_h_of_exp(gen, v.span());
  const double denom = log_sum_exp(logh);
  if (denom == kNegInf)
    fail(ErrorKind::AllMinusInfinity, "choice probabilities of all -inf payoffs");
  std::vector<double> q(logh.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < logh.size(); ++i) {
    q[i] = logh[i] == kNegInf ? 0.0 : std::exp(logh[i] - denom);
    sum += q[i];
  }
  for (double& x : q) x /= sum;
  return ProbabilityVector::trusted(std::move(q));
}

double generalized_entropy(const GeneratorSpec& gen, const ProbabilityVector& q) {
  const std::vector<double> logs = log_s_value(gen, q.span());
  double omega = 0.0;
  for (int i = 0; i < q.size(); ++i) {
    if (q[i] > 0.0) omega -= q[i] * logs[i];
  }
  return omega;
}

double conjugate(const GeneratorSpec& gen, const ProbabilityVector& q) {
  const std::vector<double> logs = log_s_value(gen, q.span());
  double value = 0.0;
  for (int i = 0; i < q.size(); ++i) {
    if (q[i] > 0.0) value += q[i] * logs[i];
  }
  return value;
}

bool GeneratorDiagnostics::all_passed() const {
  return std::all_of(checks.begin(), checks.end(),
                     [](const DiagnosticCheck& c) { return c.passed; });
}

std::string GeneratorDiagnostics::summary() const {
  std::ostringstream os;
  for (const auto& c : checks) {
    os << (c.passed ? "pass" : "FAIL") << "  " << c.name << ": max violation "
       << c.max_violation << " (tolerance " << c.tolerance << ")\n";
  }
  return os.str();
}

GeneratorDiagnostics check_generator(const GeneratorSpec& gen, int trials,
                                     std::uint64_t seed, int n_options) {
  if (trials < 1) fail(ErrorKind::InvalidProblem, "trials must be >= 1");
  const int n = gen.dimension() > 0 ? gen.dimension()
                                    : (n_options > 0 ? n_options : 5);
  gen.check_dimension(n);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);

  DiagnosticCheck homogeneity{"S homogeneity of degree 1", 0.0, 1e-10, true};
  DiagnosticCheck roundtrip{"H(S(q)) = q round trip", 0.0, 1e-10, true};
  DiagnosticCheck jacobian{"weighted Jacobian identity (central diff)", 0.0, 1e-6, true};
  DiagnosticCheck gradient{"surplus gradient = choice probabilities", 0.0, 1e-6, true};
  DiagnosticCheck concavity{"entropy midpoint concavity", 0.0, 1e-12, true};

  const double h = 1e-6;
  for (int t = 0; t < trials; ++t) {
    const std::vector<double> q = interior_point(rng, n);

    // (a) S(lambda q) = lambda S(q)
    {
      const double lambda = std::exp(unif(rng) * 4.0 - 2.0);
      std::vector<double> scaled_q(q);
      for (double& x : scaled_q) x *= lambda;
      const std::vector<double> s1 = s_value(gen, std::span<const double>(q));
      const std::vector<double> s2 = s_value(gen, std::span<const double>(scaled_q));
      for (int i = 0; i < n; ++i) {
        homogeneity.max_violation =
            std::max(homogeneity.max_violation, std::abs(s2[i] - lambda * s1[i]));
      }
    }

    // (b) H(S(q)) = q
    {
      const std::vector<double> s = s_value(gen, std::span<const double>(q));
      const std::vector<double> back = h_value(gen, s);
      for (int i = 0; i < n; ++i) {
        roundtrip.max_violation =
            std::max(roundtrip.max_violation, std::abs(back[i] - q[i]));
      }
    }

    // (c) sum_i q_i d log S_i(q) / dq_k = 1 for each k
    {
      std::vector<double> qp(q), qm(q);
      for (int k = 0; k < n; ++k) {
        qp[k] = q[k] + h;
        qm[k] = q[k] - h;
        const std::vector<double> lp = log_s_value(gen, qp);
        const std::vector<double> lm = log_s_value(gen, qm);
        double weighted = 0.0;
        for (int i = 0; i < n; ++i) weighted += q[i] * (lp[i] - lm[i]) / (2.0 * h);
        jacobian.max_violation =
            std::max(jacobian.max_violation, std::abs(weighted - 1.0));
        qp[k] = q[k];
        qm[k] = q[k];
      }
    }

    // (d) dW/dv_i = q_i(v)
    {
      std::vector<double> v(n);
      for (double& x : v) x = unif(rng) * 4.0 - 2.0;
      const ProbabilityVector probs =
          choice_probabilities(gen, ValuationVector::validated(v));
      std::vector<double> vp(v), vm(v);
      for (int i = 0; i < n; ++i) {
        vp[i] = v[i] + h;
        vm[i] = v[i] - h;
        const double dw = (surplus(gen, ValuationVector::validated(vp)) -
                           surplus(gen, ValuationVector::validated(vm))) /
                          (2.0 * h);
        gradient.max_violation =
            std::max(gradient.max_violation, std::abs(dw - probs[i]));
        vp[i] = v[i];
        vm[i] = v[i];
      }
    }

    // (e) Omega((p1+p2)/2) >= (Omega(p1)+Omega(p2))/2
    {
      const std::vector<double> p2 = interior_point(rng, n);
      std::vector<double> mid(n);
      for (int i = 0; i < n; ++i) mid[i] = 0.5 * (q[i] + p2[i]);
      const double gap =
          0.5 * (generalized_entropy(gen, ProbabilityVector::trusted(q)) +
                 generalized_entropy(gen, ProbabilityVector::trusted(p2))) -
          generalized_entropy(gen, ProbabilityVector::trusted(mid));
      concavity.max_violation = std::max(concavity.max_violation, gap);
    }
  }

  GeneratorDiagnostics report;
  for (DiagnosticCheck c : {homogeneity, roundtrip, jacobian, gradient, concavity}) {
    c.passed = c.max_violation <= c.tolerance;
    report.checks.push_back(c);
  }
  return report;
}

}  // namespace geri
