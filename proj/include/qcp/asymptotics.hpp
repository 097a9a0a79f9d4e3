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

// Asymptotics of the changepoint error probability: the two limiting
// regimes (many copies in the flanking systems, many copies in the middle
// system), the state-comparison connection, and the exponential decay rate
// of the per-pair error with its closed-form minimizer.
//
// Rates are in nats throughout.

#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "qcp/analytics.hpp"
#include "qcp/combinatorics.hpp"

namespace qcp {

namespace detail {

inline double adaptive_integral(const std::function<double(double)>& f, double lo, double hi,
                                const char* what) {
  double err = 0.0;
  const double value = boost::math::quadrature::gauss_kronrod<double, 15>::integrate(
      f, lo, hi, 15, 1e-12, &err);
  if (err > 1e-10)
    throw std::runtime_error(std::string(what) + ": quadrature reached only " +
                             std::to_string(err) + " (target 1e-10)");
  return value;
}

}  // namespace detail

/// Averaged error in the limit n1 = n2 -> infinity:
///   1/2 [1 - (d-1) Integral_0^1 sqrt(1-x^m) (1-x)^{d-2} dx]
/// The substitution x = 1 - t^2 removes the square-root kink at x = 1, so
/// the adaptive rule converges fast.
inline double limit_n1_infinite(int m, int d) {
  if (m < 1) throw std::invalid_argument("limit_n1_infinite: m must be >= 1");
  if (d < 2) throw std::invalid_argument("limit_n1_infinite: d must be >= 2");
  auto integrand = [m, d](double t) {
    const double x = 1.0 - t * t;
    return 2.0 * std::sqrt(1.0 - std::pow(x, m)) * std::pow(t, 2 * d - 3);
  };
  const double integral = detail::adaptive_integral(integrand, 0.0, 1.0, "limit_n1_infinite");
  return 0.5 * (1.0 - (d - 1) * integral);
}

/// Haar average of the two-state discrimination error with m copies,
///   1/2 [1 - sqrt(1 - q^m)] averaged over independent Haar pairs,
/// computed through the polar-angle form.  Equals limit_n1_infinite.
inline double discrimination_average(int m, int d) {
  if (m < 0) throw std::invalid_argument("discrimination_average: m must be >= 0");
  if (d < 2) throw std::invalid_argument("discrimination_average: d must be >= 2");
  auto integrand = [m, d](double theta) {
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    return std::sqrt(1.0 - std::pow(c, 2 * m)) * std::pow(s, 2 * d - 3) * c;
  };
  const double integral =
      detail::adaptive_integral(integrand, 0.0, std::numbers::pi / 2, "discrimination_average");
  return 0.5 * (1.0 - 2.0 * (d - 1) * integral);
}

/// Averaged error in the limit m -> infinity: 1 / (2 C(n2+d-1, d-1)).
/// Independent of n1.
inline BigRational limit_m_infinite_rational(int n2, int d) {
  if (n2 < 0) throw std::invalid_argument("limit_m_infinite: n2 must be >= 0");
  return BigRational(BigCount(1), 2 * dim_symmetric(n2, d));
}

inline double limit_m_infinite(int n2, int d) {
  return to_double(limit_m_infinite_rational(n2, d));
}

/// Error of the comparison measurement at overlap q: q^{n2} / 2.
inline double comparison_error(OverlapQ q, int n2) {
  if (n2 < 0) throw std::invalid_argument("comparison_error: n2 must be >= 0");
  return 0.5 * std::pow(q.value, n2);
}

/// Haar average of comparison_error, via the Beta integral
///   (d-1)/2  Integral_0^1 x^{n2} (1-x)^{d-2} dx.
/// Equals limit_m_infinite exactly.
inline BigRational comparison_average_rational(int n2, int d) {
  if (n2 < 0) throw std::invalid_argument("comparison_average: n2 must be >= 0");
  if (d < 2) throw std::invalid_argument("comparison_average: d must be >= 2");
  return BigRational(BigCount(d - 1) * factorial(n2) * factorial(d - 2),
                     2 * factorial(n2 + d - 1));
}

inline double comparison_average(int n2, int d) {
  return to_double(comparison_average_rational(n2, d));
}

/// Decay rate and its closed-form minimizer at copy ratio alpha:
/// n1 = n2 = alpha * m.
struct RateResult {
  double alpha = 0.0;
  double q = 0.0;
  double beta1 = 0.0;
  double gamma1 = 0.0;
  double h_min = 0.0;    // nats
  double approx = 0.0;   // large-alpha expansion
  double chernoff = 0.0; // -ln q
};

namespace detail {

inline double xlogx(double x) { return x > 0.0 ? x * std::log(x) : 0.0; }

}  // namespace detail

/// The rate function h(beta, gamma) on 0 <= beta <= alpha,
/// 0 <= gamma <= alpha - beta, q in (0, 1].  Boundary products x log x are
/// extended by continuity to 0.
inline double rate_h(double alpha, OverlapQ q, double beta, double gamma) {
  if (!(alpha > 0.0)) throw std::domain_error("rate_h: alpha must be positive");
  if (!(q.value > 0.0)) throw std::domain_error("rate_h: q = 0 has no finite rate");
  constexpr double slack = 1e-12;
  if (beta < -slack || beta > alpha + slack || gamma < -slack || gamma > alpha - beta + slack)
    throw std::domain_error("rate_h: (beta, gamma) outside the domain");
  beta = std::clamp(beta, 0.0, alpha);
  gamma = std::clamp(gamma, 0.0, alpha - beta);

  const double rest = alpha - beta - gamma;
  double h = detail::xlogx(rest) - (1.0 + alpha - beta + gamma) * std::log(1.0 + alpha - beta + gamma) +
             detail::xlogx(alpha - beta) - (1.0 + alpha - beta) * std::log(1.0 + alpha - beta) -
             3.0 * alpha * std::log(alpha) + (1.0 + alpha) * std::log(1.0 + alpha) +
             detail::xlogx(beta) + (1.0 + 2.0 * alpha - beta) * std::log(1.0 + 2.0 * alpha - beta) +
             2.0 * detail::xlogx(gamma) - gamma * std::log(q.value);
  // -(alpha-gamma) log(1-q): zero by continuity when gamma = alpha, +inf
  // when q = 1 and gamma < alpha.
  if (alpha - gamma > 0.0) h -= (alpha - gamma) * std::log1p(-q.value);
  return h;
}

/// The unique stationary point (beta1, gamma1) of h, in closed form.
inline std::pair<double, double> rate_minimizer(double alpha, OverlapQ q) {
  if (!(alpha > 0.0)) throw std::domain_error("rate_minimizer: alpha must be positive");
  if (!(q.value > 0.0)) throw std::domain_error("rate_minimizer: q = 0 has no finite rate");
  const double qq = q.value;
  const double gamma1 =
      0.5 * (qq * (alpha - 1.0) + std::sqrt(qq * qq * (alpha - 1.0) * (alpha - 1.0) + 4.0 * qq * alpha));
  const double twoa1 = 2.0 * alpha + 1.0;
  const double beta1 =
      0.5 * (twoa1 - std::sqrt(twoa1 * twoa1 - 4.0 * (alpha * alpha - alpha * gamma1)));
  return {beta1, gamma1};
}

/// Decay rate of the per-pair error: minimum of h, its large-alpha
/// approximation -ln q - (1-q)/(q(alpha-1)+2), and the Chernoff value -ln q.
inline RateResult rate(double alpha, OverlapQ q) {
  if (!(alpha > 0.0)) throw std::domain_error("rate: alpha must be positive");
  if (!(q.value > 0.0)) throw std::domain_error("rate: q = 0 has no finite rate");
  RateResult r;
  r.alpha = alpha;
  r.q = q.value;
  if (q.value == 1.0) {
    r.beta1 = 0.0;
    r.gamma1 = alpha;
    return r;  // identical hypotheses: everything decays at rate 0
  }
  const auto [b1, g1] = rate_minimizer(alpha, q);
  r.beta1 = b1;
  r.gamma1 = g1;
  r.h_min = rate_h(alpha, q, b1, g1);
  r.chernoff = -std::log(q.value);
  r.approx = r.chernoff - (1.0 - q.value) / (q.value * (alpha - 1.0) + 2.0);
  return r;
}

/// Finite-size decay exponent -(1/m) ln p at n1 = n2 = alpha*m, evaluated in
/// log-space from the per-block double sum.  It equals
/// -(1/m) ln error_given_overlap at the same size and converges to
/// rate(alpha, q).h_min from below as m grows.
inline double finite_size_rate(int m, double alpha, OverlapQ q) {
  if (m < 1) throw std::invalid_argument("finite_size_rate: m must be >= 1");
  if (!(q.value > 0.0))
    throw std::domain_error("finite_size_rate: q = 0 has no finite rate");
  const double an = alpha * m;
  const long long n1 = std::llround(an);
  if (n1 < 1 || std::abs(an - static_cast<double>(n1)) > 1e-9 * std::max(1.0, an))
    throw std::invalid_argument("finite_size_rate: alpha*m must be a positive integer");

  const double lq = std::log(q.value);
  const double l1q = q.value < 1.0 ? std::log1p(-q.value) : 0.0;
  double peak = -std::numeric_limits<double>::infinity();
  std::vector<double> logs;
  logs.reserve(static_cast<std::size_t>((n1 + 1) * (n1 + 2) / 2));
  double lr = 0.0;  // log r_k accumulated as a product, exact at k = 0
  for (long long k = 0; k <= n1; ++k) {
    if (k > 0)
      lr += std::log(static_cast<double>(n1 - k + 1) / static_cast<double>(m + n1 - k + 1));
    // log C_k: prefactor of the k-th block times 1 - sin(phi_k).
    const double sinphi = std::sqrt(std::max(0.0, -std::expm1(2.0 * lr)));
    const double log_one_minus_sin = 2.0 * lr - std::log1p(sinphi);
    const double log_ck = std::log(static_cast<double>(m + 2 * n1 - 2 * k + 1)) +
                          log_factorial(n1) + log_factorial(m + n1) - std::numbers::ln2 -
                          log_factorial(m + 2 * n1 - k + 1) - log_factorial(k) +
                          log_one_minus_sin;
    for (long long l = 0; l <= n1 - k; ++l) {
      double log_d;
      if (q.value == 1.0) {
        if (l != n1) continue;  // (1-q)^{n1-l} kills every other term
        log_d = log_binomial(n1 - k, l) + log_binomial(m + n1 - k + l, l);
      } else {
        log_d = log_binomial(n1 - k, l) + log_binomial(m + n1 - k + l, l) +
                static_cast<double>(l) * lq + static_cast<double>(n1 - l) * l1q;
      }
      const double lt = log_ck + log_d;
      logs.push_back(lt);
      peak = std::max(peak, lt);
    }
  }
  double sum = 0.0;
  for (double lt : logs) sum += std::exp(lt - peak);
  const double log_p = peak + std::log(sum);
  return -log_p / static_cast<double>(m);
}

/// Data behind the two rate plots: a q-sweep at alpha = 5 (id 2) and an
/// alpha-sweep at q = 0.5 (id 3).
inline std::vector<RateResult> figure_sweep(int id) {
  std::vector<RateResult> rows;
  if (id == 2) {
    for (int i = 1; i <= 100; ++i) rows.push_back(rate(5.0, OverlapQ(i / 100.0)));
  } else if (id == 3) {
    for (int a = 1; a <= 100; ++a) rows.push_back(rate(static_cast<double>(a), OverlapQ(0.5)));
  } else {
    throw std::invalid_argument("figure_sweep: id must be 2 or 3");
  }
  return rows;
}

}  // namespace qcp
