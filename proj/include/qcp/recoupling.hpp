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

// Angular-momentum recoupling coefficients under the Condon-Shortley
// convention.  The Racah single-sum evaluators are the general (and
// independent) route; the product-form specials cover the one 6j family the
// changepoint formulas actually need, where the symbol collapses to a ratio
// of binomials.

#pragma once

#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <vector>

#include "qcp/combinatorics.hpp"
#include "qcp/half_int.hpp"

namespace qcp {

/// Arguments of a 6j symbol {a b c; d e f}.
struct SixJArgs {
  HalfInt a, b, c, d, e, f;
};

namespace detail {

// Triangle inequalities plus the integer-sum condition, on doubled values.
inline bool triad_valid(int ta, int tb, int tc) {
  if (ta < 0 || tb < 0 || tc < 0) return false;
  if ((ta + tb + tc) % 2 != 0) return false;
  return tc >= std::abs(ta - tb) && tc <= ta + tb;
}

// Delta(x,y,z) = (x+y-z)!(x-y+z)!(-x+y+z)!/(x+y+z+1)!, on doubled values.
inline BigRational triangle_coefficient(int tx, int ty, int tz) {
  return BigRational(factorial((tx + ty - tz) / 2) * factorial((tx - ty + tz) / 2) *
                         factorial((-tx + ty + tz) / 2),
                     factorial((tx + ty + tz) / 2 + 1));
}

inline double log_triangle_coefficient(int tx, int ty, int tz) {
  return log_factorial((tx + ty - tz) / 2) + log_factorial((tx - ty + tz) / 2) +
         log_factorial((-tx + ty + tz) / 2) - log_factorial((tx + ty + tz) / 2 + 1);
}

// Doubled arguments above this use the floating path; below it the
// alternating Racah sum runs in exact rational arithmetic.
inline constexpr int kExactTwiceLimit = 60;

}  // namespace detail

/// 6j symbol by the Racah single-sum formula.  Returns 0 when any of the
/// four triads (a,b,c), (a,e,f), (d,b,f), (d,e,c) fails the triangle or
/// integer-sum conditions.
inline double wigner6j_racah(const SixJArgs& args) {
  const int ta = args.a.twice, tb = args.b.twice, tc = args.c.twice;
  const int td = args.d.twice, te = args.e.twice, tf = args.f.twice;
  if (!detail::triad_valid(ta, tb, tc) || !detail::triad_valid(ta, te, tf) ||
      !detail::triad_valid(td, tb, tf) || !detail::triad_valid(td, te, tc))
    return 0.0;

  const int t1 = (ta + tb + tc) / 2;
  const int t2 = (ta + te + tf) / 2;
  const int t3 = (td + tb + tf) / 2;
  const int t4 = (td + te + tc) / 2;
  const int a1 = (ta + tb + td + te) / 2;
  const int a2 = (ta + tc + td + tf) / 2;
  const int a3 = (tb + tc + te + tf) / 2;
  const int tmin = std::max({t1, t2, t3, t4});
  const int tmax = std::min({a1, a2, a3});

  const int largest = std::max({ta, tb, tc, td, te, tf});
  if (largest <= detail::kExactTwiceLimit) {
    BigRational sum(0);
    for (int t = tmin; t <= tmax; ++t) {
      BigRational term(factorial(t + 1),
                       factorial(t - t1) * factorial(t - t2) * factorial(t - t3) *
                           factorial(t - t4) * factorial(a1 - t) * factorial(a2 - t) *
                           factorial(a3 - t));
      sum += (t % 2 == 0) ? term : -term;
    }
    if (sum == 0) return 0.0;
    const BigRational deltas = detail::triangle_coefficient(ta, tb, tc) *
                               detail::triangle_coefficient(ta, te, tf) *
                               detail::triangle_coefficient(td, tb, tf) *
                               detail::triangle_coefficient(td, te, tc);
    const double magnitude = std::sqrt(to_double(deltas * sum * sum));
    return sum > 0 ? magnitude : -magnitude;
  }

  // Floating path: scaled alternating sum over log-space terms.
  std::vector<double> logs;
  logs.reserve(tmax - tmin + 1);
  double peak = -std::numeric_limits<double>::infinity();
  for (int t = tmin; t <= tmax; ++t) {
    const double lt = log_factorial(t + 1) - log_factorial(t - t1) - log_factorial(t - t2) -
                      log_factorial(t - t3) - log_factorial(t - t4) - log_factorial(a1 - t) -
                      log_factorial(a2 - t) - log_factorial(a3 - t);
    logs.push_back(lt);
    peak = std::max(peak, lt);
  }
  double scaled = 0.0;
  for (int t = tmin; t <= tmax; ++t) {
    const double mag = std::exp(logs[t - tmin] - peak);
    scaled += (t % 2 == 0) ? mag : -mag;
  }
  const double half_log_deltas =
      0.5 * (detail::log_triangle_coefficient(ta, tb, tc) +
             detail::log_triangle_coefficient(ta, te, tf) +
             detail::log_triangle_coefficient(td, tb, tf) +
             detail::log_triangle_coefficient(td, te, tc));
  return scaled * std::exp(peak + half_log_deltas);
}

/// Squared inner product cos^2(phi_k) of the two multiplicity vectors in the
/// [total-k, k] block, as an exact ratio of binomials.  Zero for k > n1.
inline BigRational cos_phi_squared(const ProblemSize& s, int k) {
  if (k < 0 || k > s.k_max_second())
    throw std::out_of_range("cos_phi_squared: k outside [0, min(m+n1, n2)]");
  if (k > s.n1) return BigRational(0);
  return BigRational(binomial(s.n1, k) * binomial(s.n2, k),
                     binomial(s.m + s.n1, k) * binomial(s.m + s.n2, k));
}

/// cos(phi_k), the nonnegative root of the binomial ratio.  Equals the
/// inner product of the two multiplicity vectors, which is nonnegative by
/// phase convention.
inline double cos_phi(const ProblemSize& s, int k) {
  return std::sqrt(to_double(cos_phi_squared(s, k)));
}

/// log cos^2(phi_k), for sizes where the exact ratio is inconveniently big.
inline double log_cos_phi_squared(const ProblemSize& s, int k) {
  if (k < 0 || k > s.k_max_second())
    throw std::out_of_range("log_cos_phi_squared: k outside [0, min(m+n1, n2)]");
  if (k > s.n1) return -std::numeric_limits<double>::infinity();
  return log_binomial(s.n1, k) + log_binomial(s.n2, k) - log_binomial(s.m + s.n1, k) -
         log_binomial(s.m + s.n2, k);
}

/// The 6j symbol {n1/2, m/2, (m+n1)/2; n2/2, total/2 - k, (m+n2)/2} by its
/// closed product form.  The two product ranges (k <= m and k > m) are the
/// two cases of the derivation; both reduce to the same binomial ratio, and
/// k > n1 yields zero through a vanishing factor.
inline double wigner6j_special(const ProblemSize& s, int k) {
  if (k < 0 || k > s.k_max_second())
    throw std::out_of_range("wigner6j_special: k outside [0, min(m+n1, n2)]");
  const double scale =
      1.0 / std::sqrt(static_cast<double>(s.m + s.n1 + 1) * static_cast<double>(s.m + s.n2 + 1));
  double prod = 1.0;
  if (k <= s.m) {
    for (int i = 1; i <= k; ++i) {
      prod *= static_cast<double>(s.n1 - k + i) * static_cast<double>(s.n2 - k + i) /
              (static_cast<double>(s.m + s.n1 - k + i) * static_cast<double>(s.m + s.n2 - k + i));
    }
  } else {
    for (int i = 1; i <= s.m; ++i) {
      prod *= static_cast<double>(s.n1 - k + i) * static_cast<double>(s.n2 - k + i) /
              (static_cast<double>(s.n1 + i) * static_cast<double>(s.n2 + i));
      if (prod == 0.0) break;
    }
  }
  const int sign = ((s.total() - k) % 2 == 0) ? 1 : -1;
  return sign * scale * std::sqrt(prod);
}

/// Clebsch-Gordan coefficient <J M | j1 m1; j2 m2> by the Racah sum.
/// Returns 0 when the selection rules (M = m1 + m2, triangle, |m| <= j)
/// fail.
inline double clebsch_gordan(HalfInt j1, HalfInt m1, HalfInt j2, HalfInt m2, HalfInt j,
                             HalfInt m) {
  const int tj1 = j1.twice, tm1 = m1.twice, tj2 = j2.twice, tm2 = m2.twice;
  const int tj = j.twice, tm = m.twice;
  if (tm1 + tm2 != tm) return 0.0;
  if (std::abs(tm1) > tj1 || std::abs(tm2) > tj2 || std::abs(tm) > tj) return 0.0;
  if ((tj1 + tm1) % 2 != 0 || (tj2 + tm2) % 2 != 0 || (tj + tm) % 2 != 0) return 0.0;
  if (!detail::triad_valid(tj1, tj2, tj)) return 0.0;

  const int p1 = (tj1 + tm1) / 2, q1 = (tj1 - tm1) / 2;
  const int p2 = (tj2 + tm2) / 2, q2 = (tj2 - tm2) / 2;
  const int pj = (tj + tm) / 2, qj = (tj - tm) / 2;
  const int j12j = (tj1 + tj2 - tj) / 2;
  const int jj2m1 = (tj - tj2 + tm1) / 2;  // can be negative; shifts the t range
  const int jj1m2 = (tj - tj1 - tm2) / 2;
  const int tmin = std::max({0, -jj2m1, -jj1m2});
  const int tmax = std::min({j12j, q1, p2});
  if (tmin > tmax) return 0.0;

  const int largest = std::max({tj1, tj2, tj});
  if (largest <= detail::kExactTwiceLimit) {
    BigRational sum(0);
    for (int t = tmin; t <= tmax; ++t) {
      BigRational term(BigCount(1),
                       factorial(t) * factorial(j12j - t) * factorial(q1 - t) * factorial(p2 - t) *
                           factorial(jj2m1 + t) * factorial(jj1m2 + t));
      sum += (t % 2 == 0) ? term : -term;
    }
    if (sum == 0) return 0.0;
    const BigRational weight =
        BigRational(tj + 1, 1) * detail::triangle_coefficient(tj1, tj2, tj) *
        BigRational(factorial(p1) * factorial(q1) * factorial(p2) * factorial(q2) * factorial(pj) *
                        factorial(qj),
                    BigCount(1));
    const double magnitude = std::sqrt(to_double(weight * sum * sum));
    return sum > 0 ? magnitude : -magnitude;
  }

  std::vector<double> logs;
  logs.reserve(tmax - tmin + 1);
  double peak = -std::numeric_limits<double>::infinity();
  for (int t = tmin; t <= tmax; ++t) {
    const double lt = -(log_factorial(t) + log_factorial(j12j - t) + log_factorial(q1 - t) +
                        log_factorial(p2 - t) + log_factorial(jj2m1 + t) +
                        log_factorial(jj1m2 + t));
    logs.push_back(lt);
    peak = std::max(peak, lt);
  }
  double scaled = 0.0;
  for (int t = tmin; t <= tmax; ++t) {
    const double mag = std::exp(logs[t - tmin] - peak);
    scaled += (t % 2 == 0) ? mag : -mag;
  }
  const double half_log_weight =
      0.5 * (std::log(static_cast<double>(tj + 1)) +
             detail::log_triangle_coefficient(tj1, tj2, tj) + log_factorial(p1) +
             log_factorial(q1) + log_factorial(p2) + log_factorial(q2) + log_factorial(pj) +
             log_factorial(qj));
  return scaled * std::exp(peak + half_log_weight);
}

/// Squared Clebsch-Gordan coefficient of the edge family
///   <total/2 - k : total/2 - n1 + l | n1/2 : -n1/2 + l ; (m+n2)/2 : (m+n2)/2>
/// in closed form:
///   (N-2k+1)(n1-k)!(n1-l)! / ((N-k+1)!(n1-k-l)!)
///   * (m+n2)!(m+n2-k+l)! / ((m+n2-k)! k! l!)
inline double cg_edge_squared(const ProblemSize& s, int k, int l) {
  if (k < 0 || k > s.n1) throw std::out_of_range("cg_edge_squared: k outside [0, n1]");
  if (l < 0 || l > s.n1 - k) throw std::out_of_range("cg_edge_squared: l outside [0, n1-k]");
  const int n = s.total();
  const int mn2 = s.m + s.n2;
  BigRational v(BigCount(n - 2 * k + 1) * factorial(s.n1 - k) * factorial(s.n1 - l) *
                    factorial(mn2) * factorial(mn2 - k + l),
                factorial(n - k + 1) * factorial(s.n1 - k - l) * factorial(mn2 - k) *
                    factorial(k) * factorial(l));
  return to_double(v);
}

}  // namespace qcp
