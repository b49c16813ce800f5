#include "geri/kernels.hpp"

#include <algorithm>
#include <cmath>

namespace geri {
namespace {

constexpr long kBlock = 4096;

inline double pow_zeta(double t, double zeta) {
  if (zeta == 1.0) return t;
  if (zeta == 0.5) return std::sqrt(t);
  return std::pow(t, zeta);
}

}  // namespace

SolveWorkspace::SolveWorkspace(const GeneratorSpec& gen,
                               const FiniteChoiceProblem& problem)
    : gen_(gen), n_(problem.n_options), m_(problem.n_states()),
      prior_(problem.prior) {
  gen.check_dimension(n_);
  if (gen.is_shannon()) {
    n_nests_ = 1;
    nest_begin_ = {0, n_};
    nest_members_.resize(n_);
    for (int i = 0; i < n_; ++i) nest_members_[i] = i;
    zeta_ = {1.0};
  } else {
    const NestStructure& ns = gen.nests();
    n_nests_ = ns.n_nests();
    nest_begin_.assign(n_nests_ + 1, 0);
    for (int g = 0; g < n_nests_; ++g)
      nest_begin_[g + 1] = nest_begin_[g] + static_cast<int>(ns.members[g].size());
    nest_members_.reserve(n_);
    for (int g = 0; g < n_nests_; ++g)
      nest_members_.insert(nest_members_.end(), ns.members[g].begin(),
                           ns.members[g].end());
    zeta_ = ns.zeta;
  }

  shift_.resize(m_);
  weights_.resize(m_ * static_cast<long>(n_));
  log_weights_.resize(m_ * static_cast<long>(n_));
  for (long m = 0; m < m_; ++m) {
    const ValuationVector& v = problem.states[m];
    double shift = kNegInf;
    for (int i = 0; i < n_; ++i) shift = std::max(shift, v[i]);
    shift_[m] = shift;
    for (int g = 0; g < n_nests_; ++g) {
      for (int k = nest_begin_[g]; k < nest_begin_[g + 1]; ++k) {
        const int i = nest_members_[k];
        const double t = (v[i] - shift) / zeta_[g];
        log_weights_[m * n_ + i] = t;
        weights_[m * n_ + i] = t == kNegInf ? 0.0 : std::exp(t);
      }
    }
  }
}

std::vector<double> SolveWorkspace::coef_from_p0(
    std::span<const double> p0) const {
  std::vector<double> coef(n_, 0.0);
  if (gen_.is_shannon()) {
    std::copy(p0.begin(), p0.end(), coef.begin());
    return coef;
  }
  const NestStructure& ns = gen_.nests();
  for (int g = 0; g < ns.n_nests(); ++g) {
    double nest_sum = 0.0;
    for (int i : ns.members[g]) nest_sum += p0[i];
    if (nest_sum <= 0.0) continue;
    // S_i(p)^{1/zeta} = p_i * Q_g^{(1-zeta)/zeta}
    const double factor =
        std::exp((1.0 - ns.zeta[g]) / ns.zeta[g] * std::log(nest_sum));
    for (int i : ns.members[g]) coef[i] = p0[i] * factor;
  }
  return coef;
}

double SolveWorkspace::state_eval(long m, std::span<const double> coef,
                                  double* out) const {
  const double* w = weights_.data() + m * n_;
  double den = 0.0;
  for (int g = 0; g < n_nests_; ++g) {
    double total = 0.0;
    for (int k = nest_begin_[g]; k < nest_begin_[g + 1]; ++k) {
      const int i = nest_members_[k];
      const double a = coef[i] * w[i];
      out[i] = a;
      total += a;
    }
    if (total > 0.0) {
      const double tz = pow_zeta(total, zeta_[g]);
      den += tz;
      const double factor = tz / total;
      for (int k = nest_begin_[g]; k < nest_begin_[g + 1]; ++k)
        out[nest_members_[k]] *= factor;
    }
  }
  if (!(den > 0.0) || !std::isfinite(den)) {
    return state_eval_logspace(m, coef, out);
  }
  const double inv = 1.0 / den;
  for (int i = 0; i < n_; ++i) out[i] *= inv;
  return std::log(den);
}

double SolveWorkspace::state_eval_logspace(long m, std::span<const double> coef,
                                           double* out) const {
  const double* lw = log_weights_.data() + m * n_;
  // log a_i = log coef_i + (v_i - shift)/zeta
  std::vector<double> log_h(n_, kNegInf);
  std::vector<double> nest_term(n_nests_, kNegInf);
  for (int g = 0; g < n_nests_; ++g) {
    const double zeta = zeta_[g];
    double max = kNegInf;
    for (int k = nest_begin_[g]; k < nest_begin_[g + 1]; ++k) {
      const int i = nest_members_[k];
      log_h[i] = coef[i] > 0.0 ? std::log(coef[i]) + lw[i] : kNegInf;
      max = std::max(max, log_h[i]);
    }
    if (max == kNegInf) continue;
    double sum = 0.0;
    for (int k = nest_begin_[g]; k < nest_begin_[g + 1]; ++k) {
      const double x = log_h[nest_members_[k]];
      if (x != kNegInf) sum += std::exp(x - max);
    }
    const double lse = max + std::log(sum);
    nest_term[g] = zeta * lse;
    for (int k = nest_begin_[g]; k < nest_begin_[g + 1]; ++k) {
      const int i = nest_members_[k];
      if (log_h[i] != kNegInf) log_h[i] += (zeta - 1.0) * lse;
    }
  }
  const double log_den = log_sum_exp(nest_term);
  if (log_den == kNegInf)
    fail(ErrorKind::AllOptionsExcluded, "no option has positive weight");
  double sum = 0.0;
  for (int i = 0; i < n_; ++i) {
    out[i] = log_h[i] == kNegInf ? 0.0 : std::exp(log_h[i] - log_den);
    sum += out[i];
  }
  for (int i = 0; i < n_; ++i) out[i] /= sum;
  return log_den;
}

template <bool WithSurplus>
double SolveWorkspace::accumulate(std::span<const double> coef,
                                  std::span<double> mean_cond,
                                  double* conditionals, bool parallel) const {
  const long blocks = (m_ + kBlock - 1) / kBlock;
  std::vector<double> partial(blocks * static_cast<long>(n_), 0.0);
  std::vector<double> partial_surplus(WithSurplus ? blocks : 0, 0.0);

#pragma omp parallel for schedule(static) if (parallel && blocks > 1)
  for (long b = 0; b < blocks; ++b) {
    std::vector<double> cond(n_);
    double* acc = partial.data() + b * n_;
    const long end = std::min(m_, (b + 1) * kBlock);
    for (long m = b * kBlock; m < end; ++m) {
      const double log_den = state_eval(m, coef, cond.data());
      const double mu = prior_[m];
      for (int i = 0; i < n_; ++i) acc[i] += mu * cond[i];
      if constexpr (WithSurplus) {
        partial_surplus[b] += mu * (shift_[m] + log_den);
      }
      if (conditionals != nullptr) {
        std::copy(cond.begin(), cond.end(), conditionals + m * n_);
      }
    }
  }

  std::fill(mean_cond.begin(), mean_cond.end(), 0.0);
  double surplus_sum = 0.0;
  for (long b = 0; b < blocks; ++b) {
    const double* acc = partial.data() + b * n_;
    for (int i = 0; i < n_; ++i) mean_cond[i] += acc[i];
    if constexpr (WithSurplus) surplus_sum += partial_surplus[b];
  }
  return surplus_sum;
}

void SolveWorkspace::expected_conditionals(std::span<const double> coef,
                                           std::span<double> mean_cond,
                                           bool parallel) const {
  accumulate<false>(coef, mean_cond, nullptr, parallel);
}

double SolveWorkspace::evaluate(std::span<const double> coef,
                                std::span<double> mean_cond,
                                double* conditionals, bool parallel) const {
  return accumulate<true>(coef, mean_cond, conditionals, parallel);
}

void reference_expectation(const GeneratorSpec& gen,
                           const FiniteChoiceProblem& problem,
                           const ProbabilityVector& p0,
                           std::vector<double>& mean_cond,
                           double* expected_surplus,
                           std::vector<double>* conditionals) {
  const int n = problem.n_options;
  const long m_count = problem.n_states();
  const std::vector<double> shift = log_s_value(gen, p0.span());
  mean_cond.assign(n, 0.0);
  if (expected_surplus != nullptr) *expected_surplus = 0.0;
  if (conditionals != nullptr) conditionals->assign(m_count * n, 0.0);
  std::vector<double> shifted(n);
  for (long m = 0; m < m_count; ++m) {
    for (int i = 0; i < n; ++i) shifted[i] = problem.states[m][i] + shift[i];
    const ValuationVector vt = ValuationVector::validated(shifted);
    const ProbabilityVector cond = choice_probabilities(gen, vt);
    for (int i = 0; i < n; ++i) mean_cond[i] += problem.prior[m] * cond[i];
    if (expected_surplus != nullptr)
      *expected_surplus += problem.prior[m] * surplus(gen, vt);
    if (conditionals != nullptr) {
      for (int i = 0; i < n; ++i) (*conditionals)[m * n + i] = cond[i];
    }
  }
}

}  // namespace geri
