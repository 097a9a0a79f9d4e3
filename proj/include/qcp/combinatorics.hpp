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

// Exact combinatorial quantities: binomials, symmetric-subspace and
// two-row Young-diagram dimensions, and the normalizers of the two
// averaged hypothesis operators.  Everything is carried in arbitrary
// precision; log-space companions are provided for sizes where callers
// prefer floating evaluation.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

#include <boost/multiprecision/cpp_int.hpp>

namespace qcp {

/// Exact nonnegative integer count of unbounded size.
using BigCount = boost::multiprecision::cpp_int;
/// Exact ratio of two BigCounts.
using BigRational = boost::multiprecision::cpp_rational;

inline double to_double(const BigCount& v) { return v.convert_to<double>(); }
inline double to_double(const BigRational& v) { return v.convert_to<double>(); }

/// Natural log of a positive BigCount, accurate to a few ulp even when the
/// value does not fit in a double.
inline double log_of(const BigCount& v) {
  if (v <= 0) throw std::domain_error("log_of: argument must be positive");
  const auto bits = boost::multiprecision::msb(v);
  if (bits < 900) return std::log(to_double(v));
  const unsigned shift = bits - 64;
  const BigCount top = v >> shift;
  return std::log(to_double(top)) + static_cast<double>(shift) * std::numbers::ln2;
}

/// System sizes of the three-block discrimination problem: m copies in
/// System 0 (the block with the unknown membership), n1 in System 1, n2 in
/// System 2, each a copy of a d-dimensional pure state.  Construction
/// canonicalizes to n1 <= n2 by swapping Systems 1 and 2; `relabeled`
/// records whether the swap happened so reports can surface it.
struct ProblemSize {
  int m = 0;
  int n1 = 0;
  int n2 = 0;
  int d = 2;
  bool relabeled = false;

  static ProblemSize make(int m, int n1, int n2, int d) {
    if (d < 2) throw std::invalid_argument("ProblemSize: local dimension d must be >= 2");
    if (m < 0 || n1 < 0 || n2 < 0)
      throw std::invalid_argument("ProblemSize: copy counts must be nonnegative");
    if (m + n1 + n2 < 1)
      throw std::invalid_argument("ProblemSize: at least one copy is required");
    ProblemSize s;
    s.m = m;
    s.d = d;
    if (n1 <= n2) {
      s.n1 = n1;
      s.n2 = n2;
      s.relabeled = false;
    } else {
      s.n1 = n2;
      s.n2 = n1;
      s.relabeled = true;
    }
    return s;
  }

  /// Total number of copies across the three systems.
  int total() const noexcept { return m + n1 + n2; }
  /// Largest second row k of diagrams [total-k, k] in the first hypothesis.
  int k_max_first() const noexcept { return n1; }
  /// Largest second row k in the second hypothesis, min(m+n1, n2).
  int k_max_second() const noexcept { return std::min(m + n1, n2); }

  bool operator==(const ProblemSize&) const = default;
};

/// C(n, k), exactly; 0 when k < 0 or k > n.
inline BigCount binomial(long long n, long long k) {
  if (n < 0) throw std::invalid_argument("binomial: n must be nonnegative");
  if (k < 0 || k > n) return BigCount(0);
  k = std::min(k, n - k);
  BigCount result(1);
  for (long long i = 1; i <= k; ++i) {
    result *= (n - k + i);
    result /= i;  // exact at every step
  }
  return result;
}

/// n!, exactly.
inline BigCount factorial(long long n) {
  if (n < 0) throw std::invalid_argument("factorial: n must be nonnegative");
  BigCount result(1);
  for (long long i = 2; i <= n; ++i) result *= i;
  return result;
}

/// ln(n!) via lgamma; agrees with the exact path to better than 1e-12
/// relative accuracy.
inline double log_factorial(long long n) {
  if (n < 0) throw std::invalid_argument("log_factorial: n must be nonnegative");
  return std::lgamma(static_cast<double>(n) + 1.0);
}

/// ln C(n, k); -inf outside the valid range.
inline double log_binomial(long long n, long long k) {
  if (k < 0 || k > n) return -std::numeric_limits<double>::infinity();
  return log_factorial(n) - log_factorial(k) - log_factorial(n - k);
}

/// Dimension of the totally symmetric subspace of (C^d)^{⊗L}.
inline BigCount dim_symmetric(long long copies, int d) {
  if (d < 2) throw std::invalid_argument("dim_symmetric: d must be >= 2");
  if (copies < 0) throw std::invalid_argument("dim_symmetric: copies must be nonnegative");
  return binomial(copies + d - 1, d - 1);
}

/// Two-row Young diagram [lambda1, lambda2], lambda1 >= lambda2 >= 0.
struct YoungDiagram2 {
  long long lambda1 = 0;
  long long lambda2 = 0;
};

/// Dimension of the unitary-group irrep labeled by a two-row diagram:
///   (l1+d-1)! (l2+d-2)! (l1-l2+1) / ((d-1)! (d-2)! (l1+1)! l2!)
inline BigCount dim_young2(const YoungDiagram2& diag, int d) {
  if (d < 2) throw std::invalid_argument("dim_young2: d must be >= 2");
  if (diag.lambda2 < 0 || diag.lambda2 > diag.lambda1)
    throw std::invalid_argument("dim_young2: need lambda1 >= lambda2 >= 0");
  const long long l1 = diag.lambda1;
  const long long l2 = diag.lambda2;
  BigCount num = factorial(l1 + d - 1) * factorial(l2 + d - 2) * (l1 - l2 + 1);
  BigCount den = factorial(d - 1) * factorial(d - 2) * factorial(l1 + 1) * factorial(l2);
  return num / den;  // the ratio is an integer
}

/// log of dim_young2, for sizes past the exact-integer comfort zone.
inline double log_dim_young2(const YoungDiagram2& diag, int d) {
  if (d < 2) throw std::invalid_argument("log_dim_young2: d must be >= 2");
  if (diag.lambda2 < 0 || diag.lambda2 > diag.lambda1)
    throw std::invalid_argument("log_dim_young2: need lambda1 >= lambda2 >= 0");
  const long long l1 = diag.lambda1;
  const long long l2 = diag.lambda2;
  return log_factorial(l1 + d - 1) + log_factorial(l2 + d - 2) +
         std::log(static_cast<double>(l1 - l2 + 1)) - log_factorial(d - 1) -
         log_factorial(d - 2) - log_factorial(l1 + 1) - log_factorial(l2);
}

/// Normalizer of the first averaged hypothesis operator:
/// Tr[S_{n1}] * Tr[S_{m+n2}].
inline BigCount a1(const ProblemSize& s) {
  return dim_symmetric(s.n1, s.d) * dim_symmetric(s.m + s.n2, s.d);
}

/// Normalizer of the second averaged hypothesis operator:
/// Tr[S_{m+n1}] * Tr[S_{n2}].  On canonical sizes a1 <= a2, with equality
/// iff n1 == n2.
inline BigCount a2(const ProblemSize& s) {
  return dim_symmetric(s.m + s.n1, s.d) * dim_symmetric(s.n2, s.d);
}

inline double log_a1(const ProblemSize& s) {
  return log_binomial(s.n1 + s.d - 1, s.d - 1) + log_binomial(s.m + s.n2 + s.d - 1, s.d - 1);
}

inline double log_a2(const ProblemSize& s) {
  return log_binomial(s.m + s.n1 + s.d - 1, s.d - 1) + log_binomial(s.n2 + s.d - 1, s.d - 1);
}

}  // namespace qcp
