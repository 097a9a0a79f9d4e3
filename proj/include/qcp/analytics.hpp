// Copyright 2026 The qcp authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Finite-size error probabilities of the optimal changepoint measurement:
// the minimum averaged error (general dimension plus its qubit and
// equal-copy specializations) and the per-pair error at a given overlap,
// with the rank-2 eigenvalue helpers they are built on.
//
// Each per-k block [total-k, k] contributes one term; the reports keep the
// per-k breakdown so the sum reconstructs the value exactly.

#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "qcp/combinatorics.hpp"
#include "qcp/recoupling.hpp"

namespace qcp {

/// Tr[rho1 rho2] of the two candidate pure states.
struct OverlapQ {
  double value = 0.0;
  explicit OverlapQ(double q) : value(q) {
    if (!(q >= 0.0 && q <= 1.0)) throw std::domain_error("overlap q must lie in [0, 1]");
  }
};

/// One block's contribution.  p_k / q_k are the per-hypothesis outcome
/// weights and stay NaN in averaged reports, which have no overlap input.
struct PerKTerm {
  int k = 0;
  double dim = 0.0;
  double cos_phi = 0.0;
  double term = 0.0;
  double p_k = std::numeric_limits<double>::quiet_NaN();
  double q_k = std::numeric_limits<double>::quiet_NaN();
};

struct ErrorReport {
  double value = 0.0;
  std::vector<PerKTerm> per_k;
  std::string formula_path;
  bool relabeled = false;
};

/// Arithmetic route for the closed forms.  Auto switches from exact
/// big-integer evaluation to log-space floating past 300 total copies.
enum class EvalPath { Auto, Exact, LogSpace };

namespace detail {

inline bool use_log_path(const ProblemSize& s, EvalPath path) {
  switch (path) {
    case EvalPath::Exact: return false;
    case EvalPath::LogSpace: return true;
    default: return s.total() > 300;
  }
}

}  // namespace detail

/// The unique negative eigenvalue of |a><a|/c1 - |b><b|/c2 for normalized
/// vectors with |<a|b>|^2 = overlap_sq:
///   (c2 - c1 - sqrt((c2-c1)^2 + 4 c1 c2 (1 - overlap_sq))) / (2 c1 c2)
/// Degenerate case overlap_sq = 1, c1 = c2 gives 0.
inline double neg_eigenvalue(double c1, double c2, double overlap_sq) {
  if (!(c1 > 0.0) || !(c2 > 0.0))
    throw std::domain_error("neg_eigenvalue: weights must be positive");
  if (!(overlap_sq >= 0.0 && overlap_sq <= 1.0))
    throw std::domain_error("neg_eigenvalue: overlap_sq must lie in [0, 1]");
  const double diff = c2 - c1;
  const double radical = std::sqrt(diff * diff + 4.0 * c1 * c2 * (1.0 - overlap_sq));
  return (diff - radical) / (2.0 * c1 * c2);
}

/// Squared overlaps (|<a|->|^2, |<b|->|^2) of the negative eigenvector of
/// |a><a|/c1 - |b><b|/c2.  Requires linearly independent vectors.
inline std::pair<double, double> minus_overlaps(double c1, double c2, double overlap_sq) {
  if (!(c1 > 0.0) || !(c2 > 0.0))
    throw std::domain_error("minus_overlaps: weights must be positive");
  if (!(overlap_sq >= 0.0 && overlap_sq < 1.0))
    throw std::domain_error("minus_overlaps: vectors must be linearly independent");
  const double diff = c2 - c1;
  const double gap = 1.0 - overlap_sq;
  const double radical = std::sqrt(diff * diff + 4.0 * c1 * c2 * gap);
  const double a_ov = 0.5 * (1.0 - (diff + 2.0 * c1 * gap) / radical);
  const double b_ov = 0.5 * (1.0 - (diff - 2.0 * c2 * gap) / radical);
  return {a_ov, b_ov};
}

/// Minimum averaged error probability, general dimension.  Summing the
/// per-block terms
///   dim_k cos^2(phi_k) / (a1 + a2 + sqrt((a2-a1)^2 + 4 a1 a2 sin^2(phi_k)))
/// over k = 0..n1 reproduces the closed form without cancellation.
inline ErrorReport avg_error_min(const ProblemSize& s, EvalPath path = EvalPath::Auto) {
  ErrorReport report;
  report.formula_path = "averaged-error/general";
  report.relabeled = s.relabeled;
  const int n = s.total();
  const bool log_path = detail::use_log_path(s, path);

  double value = 0.0;
  if (!log_path) {
    const BigCount a1b = a1(s);
    const BigCount a2b = a2(s);
    for (int k = 0; k <= s.n1; ++k) {
      const BigCount dimb = dim_young2({n - k, k}, s.d);
      const BigRational cos2r = cos_phi_squared(s, k);
      const double rho = to_double(BigRational(a1b, a2b));
      const double one_minus_rho = to_double(BigRational(a2b - a1b, a2b));
      const double dim_over_a2 = to_double(BigRational(dimb, a2b));
      const double cos2 = to_double(cos2r);
      const double sin2 = to_double(BigRational(1) - cos2r);
      const double rbar = std::sqrt(one_minus_rho * one_minus_rho + 4.0 * rho * sin2);
      const double term = dim_over_a2 * cos2 / (1.0 + rho + rbar);
      report.per_k.push_back({k, to_double(dimb), std::sqrt(cos2), term});
      value += term;
    }
  } else {
    const double la1 = log_a1(s);
    const double la2 = log_a2(s);
    const double rho = std::exp(la1 - la2);
    const double one_minus_rho = -std::expm1(la1 - la2);
    for (int k = 0; k <= s.n1; ++k) {
      const double ldim = log_dim_young2({n - k, k}, s.d);
      const double lcos2 = log_cos_phi_squared(s, k);
      const double cos2 = std::exp(lcos2);
      const double sin2 = std::max(0.0, -std::expm1(lcos2));
      const double rbar = std::sqrt(one_minus_rho * one_minus_rho + 4.0 * rho * sin2);
      const double term = std::exp(ldim - la2) * cos2 / (1.0 + rho + rbar);
      report.per_k.push_back({k, std::exp(ldim), std::sqrt(cos2), term});
      value += term;
    }
  }
  report.value = value;
  return report;
}

/// Qubit specialization of the minimum averaged error, evaluated through
/// its own closed form (an independent route from the general sum).
inline ErrorReport avg_error_min_d2(const ProblemSize& s) {
  if (s.d != 2) throw std::invalid_argument("avg_error_min_d2: requires d = 2");
  ErrorReport report;
  report.formula_path = "averaged-error/qubit";
  report.relabeled = s.relabeled;
  const int n = s.total();
  const double c1 = static_cast<double>(s.n1 + 1) * (s.m + s.n2 + 1);
  const double c2 = static_cast<double>(s.m + s.n1 + 1) * (s.n2 + 1);
  const double diff = static_cast<double>(s.m) * (s.n2 - s.n1);

  double sum = 0.0;
  for (int k = 0; k <= s.n1; ++k) {
    const double dim = n - 2 * k + 1;
    double ratio = 1.0;  // cos^2(phi_k) as a running product of factorial ratios
    for (int i = 0; i < k; ++i) {
      ratio *= static_cast<double>(s.n1 - i) / (s.m + s.n1 - i);
      ratio *= static_cast<double>(s.n2 - i) / (s.m + s.n2 - i);
    }
    const double radical = std::sqrt(diff * diff + 4.0 * c1 * c2 * (1.0 - ratio));
    sum += dim / (c1 * c2) * radical;
    const double term = dim * ratio / (c1 + c2 + radical);
    report.per_k.push_back({k, dim, std::sqrt(ratio), term});
  }
  report.value = 0.25 * (1.0 + c1 / c2 - sum);
  return report;
}

/// Equal-copy specialization (n1 = n2), general dimension.
inline ErrorReport avg_error_min_equal(const ProblemSize& s, EvalPath path = EvalPath::Auto) {
  if (s.n1 != s.n2) throw std::invalid_argument("avg_error_min_equal: requires n1 = n2");
  ErrorReport report;
  report.formula_path = "averaged-error/equal-copies";
  report.relabeled = s.relabeled;
  const int n1 = s.n1;
  const int m = s.m;
  const int d = s.d;
  const bool log_path = detail::use_log_path(s, path);

  double weighted = 0.0;  // sum of w_k sin(phi_k), w_k = dim_k / a
  for (int k = 0; k <= n1; ++k) {
    double w, r2, dim;
    if (!log_path) {
      const BigRational wr =
          BigRational(BigCount(d - 1) * factorial(n1) * factorial(m + n1) *
                          BigCount(m + 2 * n1 - 2 * k + 1) * factorial(m + 2 * n1 - k + d - 1) *
                          factorial(k + d - 2),
                      factorial(n1 + d - 1) * factorial(m + n1 + d - 1) *
                          factorial(m + 2 * n1 - k + 1) * factorial(k));
      const BigRational rr = BigRational(factorial(n1) * factorial(m + n1 - k),
                                         factorial(m + n1) * factorial(n1 - k));
      w = to_double(wr);
      r2 = to_double(rr * rr);
      dim = to_double(dim_young2({m + 2 * n1 - k, k}, d));
    } else {
      const double lw = std::log(static_cast<double>(d - 1)) + log_factorial(n1) +
                        log_factorial(m + n1) + std::log(static_cast<double>(m + 2 * n1 - 2 * k + 1)) +
                        log_factorial(m + 2 * n1 - k + d - 1) + log_factorial(k + d - 2) -
                        log_factorial(n1 + d - 1) - log_factorial(m + n1 + d - 1) -
                        log_factorial(m + 2 * n1 - k + 1) - log_factorial(k);
      const double lr = log_factorial(n1) + log_factorial(m + n1 - k) - log_factorial(m + n1) -
                        log_factorial(n1 - k);
      w = std::exp(lw);
      r2 = std::exp(2.0 * lr);
      dim = std::exp(log_dim_young2({m + 2 * n1 - k, k}, d));
    }
    const double sin2 = 1.0 - r2;
    const double sinphi = std::sqrt(sin2 < 0 ? 0.0 : sin2);
    weighted += w * sinphi;
    const double term = 0.5 * w * r2 / (1.0 + sinphi);
    report.per_k.push_back({k, dim, std::sqrt(r2), term});
  }
  report.value = 0.5 * (1.0 - weighted);
  return report;
}

/// Equal-copy qubit specialization (n1 = n2, d = 2).
inline ErrorReport avg_error_min_equal_d2(const ProblemSize& s) {
  if (s.n1 != s.n2 || s.d != 2)
    throw std::invalid_argument("avg_error_min_equal_d2: requires n1 = n2 and d = 2");
  ErrorReport report;
  report.formula_path = "averaged-error/equal-copies-qubit";
  report.relabeled = s.relabeled;
  const int n1 = s.n1;
  const int m = s.m;
  const double norm = static_cast<double>(n1 + 1) * (m + n1 + 1);

  double weighted = 0.0;
  for (int k = 0; k <= n1; ++k) {
    const double dim = m + 2 * n1 - 2 * k + 1;
    const double w = dim / norm;
    double r = 1.0;
    for (int i = 0; i < k; ++i) r *= static_cast<double>(n1 - i) / (m + n1 - i);
    const double sin2 = (1.0 - r) * (1.0 + r);
    const double sinphi = std::sqrt(sin2 < 0 ? 0.0 : sin2);
    weighted += w * sinphi;
    const double term = 0.5 * w * r * r / (1.0 + sinphi);
    report.per_k.push_back({k, dim, r, term});
  }
  report.value = 0.5 * (1.0 - weighted);
  return report;
}

namespace detail {

// Outcome weight of block k for a hypothesis with `inner` copies on its own
// side and `outer` copies merged with System 0:
//   (N-2k+1) inner! outer! / ((N-k+1)! k!)
//     * sum_l C(inner-k, l) C(outer-k+l, l) q^l (1-q)^{inner-l}
// with 0^0 = 1.
inline double pq_weight(int inner, int outer, int n, int k, double q) {
  const double pref = to_double(BigRational(
      BigCount(n - 2 * k + 1) * factorial(inner) * factorial(outer),
      factorial(n - k + 1) * factorial(k)));
  double sum = 0.0;
  for (int l = 0; l <= inner - k; ++l) {
    const double coeff = to_double(binomial(inner - k, l) * binomial(outer - k + l, l));
    sum += coeff * std::pow(q, l) * std::pow(1.0 - q, inner - l);
  }
  return pref * sum;
}

}  // namespace detail

/// Outcome weight P_k of the first hypothesis, 0 <= k <= n1.
inline double p_k(const ProblemSize& s, int k, OverlapQ q) {
  if (k < 0 || k > s.k_max_first()) throw std::out_of_range("p_k: k outside [0, n1]");
  return detail::pq_weight(s.n1, s.m + s.n2, s.total(), k, q.value);
}

/// Outcome weight Q_k of the second hypothesis, 0 <= k <= min(m+n1, n2).
inline double q_k(const ProblemSize& s, int k, OverlapQ q) {
  if (k < 0 || k > s.k_max_second())
    throw std::out_of_range("q_k: k outside [0, min(m+n1, n2)]");
  return detail::pq_weight(s.n2, s.m + s.n1, s.total(), k, q.value);
}

/// Evaluates the per-pair error of the optimal measurement at many overlap
/// values for one fixed size.  All size-dependent constants are
/// precomputed, so each evaluation is plain floating arithmetic.
class PairErrorEvaluator {
 public:
  explicit PairErrorEvaluator(const ProblemSize& s) : size_(s) {
    const int n = s.total();
    const BigCount a1b = a1(s);
    const BigCount a2b = a2(s);
    a1_ = to_double(a1b);
    a2_ = to_double(a2b);
    diff_ = to_double(BigCount(a2b - a1b));
    const int kmax = s.n1;
    dims_.resize(kmax + 1);
    cos2_.resize(kmax + 1);
    sin2_.resize(kmax + 1);
    radical_.resize(kmax + 1);
    pref_p_.resize(kmax + 1);
    pref_q_.resize(kmax + 1);
    coeff_p_.resize(kmax + 1);
    coeff_q_.resize(kmax + 1);
    for (int k = 0; k <= kmax; ++k) {
      dims_[k] = to_double(dim_young2({n - k, k}, s.d));
      const BigRational c2 = cos_phi_squared(s, k);
      cos2_[k] = to_double(c2);
      sin2_[k] = to_double(BigRational(1) - c2);
      radical_[k] = std::sqrt(diff_ * diff_ + 4.0 * a1_ * a2_ * sin2_[k]);
      pref_p_[k] = to_double(BigRational(
          BigCount(n - 2 * k + 1) * factorial(s.n1) * factorial(s.m + s.n2),
          factorial(n - k + 1) * factorial(k)));
      pref_q_[k] = to_double(BigRational(
          BigCount(n - 2 * k + 1) * factorial(s.n2) * factorial(s.m + s.n1),
          factorial(n - k + 1) * factorial(k)));
      coeff_p_[k].resize(s.n1 - k + 1);
      for (int l = 0; l <= s.n1 - k; ++l)
        coeff_p_[k][l] = to_double(binomial(s.n1 - k, l) * binomial(s.m + s.n2 - k + l, l));
      coeff_q_[k].resize(s.n2 - k + 1);
      for (int l = 0; l <= s.n2 - k; ++l)
        coeff_q_[k][l] = to_double(binomial(s.n2 - k, l) * binomial(s.m + s.n1 - k + l, l));
    }
  }

  double value(double q) const {
    double v = 0.0;
    for (int k = 0; k <= size_.n1; ++k) v += term(k, q).term;
    return v;
  }

  ErrorReport report(OverlapQ q) const {
    ErrorReport rep;
    rep.formula_path = "per-pair-error/optimal-povm";
    rep.relabeled = size_.relabeled;
    for (int k = 0; k <= size_.n1; ++k) {
      rep.per_k.push_back(term(k, q.value));
      rep.value += rep.per_k.back().term;
    }
    return rep;
  }

 private:
  PerKTerm term(int k, double q) const {
    const double pk = pref_p_[k] * weight_sum(coeff_p_[k], size_.n1, q);
    const double qk = pref_q_[k] * weight_sum(coeff_q_[k], size_.n2, q);
    const double r = radical_[k];
    double t;
    if (r == 0.0) {
      // a1 = a2 and phi_k = 0: the block has coinciding hypothesis vectors.
      t = 0.25 * (pk + qk);
    } else {
      const double s2 = sin2_[k];
      const double c2 = cos2_[k];
      const double one_minus_x =
          4.0 * a1_ * a1_ * s2 * c2 / (r * (r + diff_ + 2.0 * a1_ * s2));
      const double one_plus_y =
          2.0 * a2_ * c2 * (r + diff_) / (r * (2.0 * a1_ + r + diff_));
      t = 0.25 * (pk * one_minus_x + qk * one_plus_y);
    }
    return {k, dims_[k], std::sqrt(cos2_[k]), t, pk, qk};
  }

  static double weight_sum(const std::vector<double>& coeff, int inner, double q) {
    double sum = 0.0;
    double qpow = 1.0;
    for (std::size_t l = 0; l < coeff.size(); ++l) {
      sum += coeff[l] * qpow * std::pow(1.0 - q, inner - static_cast<int>(l));
      qpow *= q;
    }
    return sum;
  }

  ProblemSize size_;
  double a1_ = 0, a2_ = 0, diff_ = 0;
  std::vector<double> dims_, cos2_, sin2_, radical_, pref_p_, pref_q_;
  std::vector<std::vector<double>> coeff_p_, coeff_q_;
};

/// Per-pair error probability of the optimal measurement at overlap q.
inline ErrorReport error_given_overlap(const ProblemSize& s, OverlapQ q) {
  return PairErrorEvaluator(s).report(q);
}

struct HaarBridge {
  double quadrature = 0.0;
  double closed_form = 0.0;
};

/// Integrates the per-pair error against the Haar overlap density
/// (d-1)(1-q)^{d-2} and pairs it with the averaged closed form.  The two
/// numbers must agree; this ties the per-pair and averaged formulas to each
/// other.
inline HaarBridge haar_average_check(const ProblemSize& s) {
  const PairErrorEvaluator eval(s);
  const double dm1 = s.d - 1;
  const int dm2 = s.d - 2;
  auto integrand = [&](double q) { return eval.value(q) * dm1 * std::pow(1.0 - q, dm2); };
  double err = 0.0;
  const double quad = boost::math::quadrature::gauss_kronrod<double, 15>::integrate(
      integrand, 0.0, 1.0, 15, 1e-12, &err);
  if (err > 1e-8)
    throw std::runtime_error("haar_average_check: quadrature reached only " +
                             std::to_string(err));
  return {quad, avg_error_min(s).value};
}

}  // namespace qcp
