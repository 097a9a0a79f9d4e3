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

// The release gate: every closed form is checked against an independent
// route (dense operator oracle, Racah sums, quadrature, grid search) at a
// pinned tolerance.  The CLI `verify` subcommand and the acceptance binary
// both run these checks.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "qcp/analytics.hpp"
#include "qcp/asymptotics.hpp"
#include "qcp/combinatorics.hpp"
#include "qcp/oracle.hpp"
#include "qcp/recoupling.hpp"

namespace qcp::verify {

struct CheckResult {
  std::string name;
  bool pass = false;
  double deviation = 0.0;  // worst measured deviation
  double tolerance = 0.0;  // the tolerance that deviation is judged against
  std::string detail;
};

struct Options {
  std::uint64_t seed = 20260809;
  int mc_samples = 10000;
  long long dim_cap = 1024;
};

enum class Suite { All, Analytic, Oracle, Recoupling };

namespace detail {

// Tracks the worst subcheck as the ratio deviation/tolerance.
class Worst {
 public:
  void update(double deviation, double tolerance) {
    const double ratio = deviation / tolerance;
    if (ratio > worst_ratio_) {
      worst_ratio_ = ratio;
      deviation_ = deviation;
      tolerance_ = tolerance;
    }
  }
  bool pass() const { return worst_ratio_ <= 1.0; }
  double deviation() const { return deviation_; }
  double tolerance() const { return tolerance_; }

 private:
  double worst_ratio_ = 0.0;
  double deviation_ = 0.0;
  double tolerance_ = 0.0;
};

inline std::string count_note(std::size_t n, const char* what) {
  std::ostringstream os;
  os << n << " " << what;
  return os.str();
}

}  // namespace detail

/// Every canonical size with d in {2, 3} and dense dimension within the cap.
inline std::vector<ProblemSize> acceptance_grid(long long dim_cap) {
  std::vector<ProblemSize> sizes;
  for (int d : {2, 3}) {
    for (int n = 1;; ++n) {
      long long dim = 1;
      bool over = false;
      for (int i = 0; i < n; ++i) {
        dim *= d;
        if (dim > dim_cap) {
          over = true;
          break;
        }
      }
      if (over) break;
      for (int m = 0; m <= n; ++m)
        for (int n1 = 0; 2 * n1 <= n - m; ++n1)
          sizes.push_back(ProblemSize::make(m, n1, n - m - n1, d));
    }
  }
  return sizes;
}

/// Criterion: the averaged closed form equals the dense Helstrom error of
/// the two averaged operators on the full grid.
inline CheckResult check_helstrom_equivalence(const Options& opts) {
  detail::Worst worst;
  const auto grid = acceptance_grid(opts.dim_cap);
  for (const auto& s : grid) {
    const auto pair = oracle::averaged_states(s, opts.dim_cap);
    const double dense = oracle::helstrom_error(pair.first, pair.second);
    const double analytic = avg_error_min(s).value;
    worst.update(std::abs(dense - analytic), 1e-8);
  }
  return {"helstrom-equivalence", worst.pass(), worst.deviation(), worst.tolerance(),
          detail::count_note(grid.size(), "sizes, d in {2,3}")};
}

/// Criterion: applying the dense optimal measurement to seeded random pure
/// pairs reproduces the per-pair closed form, including n1 != n2 sizes.
inline CheckResult check_povm_equivalence(const Options& opts) {
  constexpr int kPairsPerSize = 20;
  detail::Worst worst;
  const auto grid = acceptance_grid(opts.dim_cap);
  std::size_t size_index = 0;
  for (const auto& s : grid) {
    const auto povm = oracle::optimal_povm(s, opts.dim_cap);
    const PairErrorEvaluator eval(s);
    for (int j = 0; j < kPairsPerSize; ++j) {
      auto rng = oracle::sample_stream(opts.seed, size_index * 64 + j);
      const auto psi1 = oracle::haar_random_pure(s.d, rng);
      const auto psi2 = oracle::haar_random_pure(s.d, rng);
      const double q = std::norm(psi1.amplitudes.dot(psi2.amplitudes));
      const double dense = oracle::error_of_povm(psi1, psi2, s, povm);
      const double analytic = eval.value(std::min(q, 1.0));
      worst.update(std::abs(dense - analytic), 1e-8);
    }
    ++size_index;
  }
  return {"povm-equivalence", worst.pass(), worst.deviation(), worst.tolerance(),
          detail::count_note(grid.size(), "sizes x 20 seeded pairs")};
}

/// Criterion: Monte Carlo Haar averages agree with the closed form to three
/// standard errors at the two reference sizes.
inline CheckResult check_mc_average(const Options& opts) {
  detail::Worst worst;
  const struct {
    int m, n1, n2;
    double expected;
  } cases[] = {
      {1, 1, 1, 0.5 * (1.0 - std::sqrt(3.0) / 6.0)},
      {1, 1, 2, 0.25 * (17.0 / 9.0 - 5.0 / 72.0 - 3.0 * std::sqrt(193.0) / 72.0)},
  };
  std::ostringstream note;
  for (const auto& c : cases) {
    const auto s = ProblemSize::make(c.m, c.n1, c.n2, 2);
    const auto mc = oracle::mc_average_error(s, opts.mc_samples, opts.seed, opts.dim_cap);
    worst.update(std::abs(mc.mean - c.expected), 3.0 * mc.std_error);
    note << "(" << c.m << "," << c.n1 << "," << c.n2 << "): " << mc.mean << "+-" << mc.std_error
         << " vs " << c.expected << "  ";
  }
  return {"mc-average", worst.pass(), worst.deviation(), worst.tolerance(), note.str()};
}

/// Criterion: the four averaged-error routes agree on their overlapping
/// domains.
inline CheckResult check_specialization_coherence() {
  detail::Worst worst;
  std::size_t comparisons = 0;
  for (int m = 0; m <= 10; ++m) {
    for (int n1 = 0; n1 <= 10; ++n1) {
      for (int n2 = n1; n2 <= 10; ++n2) {
        if (m + n1 + n2 < 1) continue;
        const auto s2 = ProblemSize::make(m, n1, n2, 2);
        const double general = avg_error_min(s2).value;
        worst.update(std::abs(general - avg_error_min_d2(s2).value), 1e-12);
        ++comparisons;
        if (n1 == n2) {
          worst.update(std::abs(general - avg_error_min_equal(s2).value), 1e-12);
          worst.update(std::abs(general - avg_error_min_equal_d2(s2).value), 1e-12);
          for (int d : {3, 4}) {
            const auto sd = ProblemSize::make(m, n1, n2, d);
            worst.update(std::abs(avg_error_min(sd).value - avg_error_min_equal(sd).value),
                         1e-12);
          }
          comparisons += 4;
        }
      }
    }
  }
  return {"specialization-coherence", worst.pass(), worst.deviation(), worst.tolerance(),
          detail::count_note(comparisons, "route comparisons")};
}

/// Criterion: integrating the per-pair error against the Haar overlap
/// density reproduces the averaged closed form on the full grid.
inline CheckResult check_haar_bridge(const Options& opts) {
  detail::Worst worst;
  const auto grid = acceptance_grid(opts.dim_cap);
  for (const auto& s : grid) {
    const auto bridge = haar_average_check(s);
    worst.update(std::abs(bridge.quadrature - bridge.closed_form), 1e-8);
  }
  return {"haar-bridge", worst.pass(), worst.deviation(), worst.tolerance(),
          detail::count_note(grid.size(), "sizes")};
}

/// Criterion: the closed product form of the special 6j equals the Racah
/// sum for every valid k, both product ranges.
inline CheckResult check_recoupling_sixj() {
  detail::Worst worst;
  std::size_t evaluated = 0;
  for (int m = 0; m <= 8; ++m) {
    for (int n1 = 0; n1 <= 8; ++n1) {
      for (int n2 = n1; n2 <= 8; ++n2) {
        if (m + n1 + n2 < 1) continue;
        const auto s = ProblemSize::make(m, n1, n2, 2);
        const int n = s.total();
        for (int k = 0; k <= s.k_max_second(); ++k) {
          const SixJArgs args{HalfInt{n1}, HalfInt{m}, HalfInt{m + n1},
                              HalfInt{n2}, HalfInt{n - 2 * k}, HalfInt{m + n2}};
          worst.update(std::abs(wigner6j_special(s, k) - wigner6j_racah(args)), 1e-12);
          ++evaluated;
        }
      }
    }
  }
  return {"recoupling-6j", worst.pass(), worst.deviation(), worst.tolerance(),
          detail::count_note(evaluated, "symbols")};
}

/// Criterion: the closed-form squared edge coefficient equals the square of
/// the general Clebsch-Gordan evaluator.
inline CheckResult check_recoupling_cg() {
  detail::Worst worst;
  std::size_t evaluated = 0;
  for (int m = 0; m <= 6; ++m) {
    for (int n1 = 0; n1 <= 6; ++n1) {
      for (int n2 = n1; n2 <= 6; ++n2) {
        if (m + n1 + n2 < 1) continue;
        const auto s = ProblemSize::make(m, n1, n2, 2);
        const int n = s.total();
        const int mn2 = m + n2;
        for (int k = 0; k <= n1; ++k) {
          for (int l = 0; l <= n1 - k; ++l) {
            const double cg =
                clebsch_gordan(HalfInt{n1}, HalfInt{-n1 + 2 * l}, HalfInt{mn2}, HalfInt{mn2},
                               HalfInt{n - 2 * k}, HalfInt{n - 2 * n1 + 2 * l});
            worst.update(std::abs(cg_edge_squared(s, k, l) - cg * cg), 1e-12);
            ++evaluated;
          }
        }
      }
    }
  }
  return {"recoupling-cg", worst.pass(), worst.deviation(), worst.tolerance(),
          detail::count_note(evaluated, "coefficients")};
}

/// Criterion: the per-hypothesis outcome weights each sum to one.
inline CheckResult check_pq_normalization(const Options& opts) {
  detail::Worst worst;
  const auto grid = acceptance_grid(opts.dim_cap);
  for (const auto& s : grid) {
    for (double qv : {0.0, 0.25, 0.5, 0.75, 1.0}) {
      const OverlapQ q(qv);
      double sum_p = 0.0, sum_q = 0.0;
      for (int k = 0; k <= s.k_max_first(); ++k) sum_p += p_k(s, k, q);
      for (int k = 0; k <= s.k_max_second(); ++k) sum_q += q_k(s, k, q);
      worst.update(std::abs(sum_p - 1.0), 1e-10);
      worst.update(std::abs(sum_q - 1.0), 1e-10);
    }
  }
  return {"pq-normalization", worst.pass(), worst.deviation(), worst.tolerance(),
          detail::count_note(grid.size(), "sizes x 5 overlaps")};
}

/// Criterion: the limiting values and the state-comparison identity.
inline CheckResult check_limits() {
  detail::Worst worst;
  worst.update(std::abs(limit_n1_infinite(1, 2) - 1.0 / 6.0), 1e-8);
  worst.update(std::abs(avg_error_min(ProblemSize::make(1, 200, 200, 2)).value - 1.0 / 6.0),
               0.01);
  worst.update(std::abs(limit_m_infinite(1, 2) - 0.25), 0.0 + 1e-300);  // exact
  if (limit_m_infinite_rational(1, 2) != BigRational(1, 4))
    worst.update(1.0, 1e-300);
  worst.update(std::abs(avg_error_min(ProblemSize::make(100, 1, 1, 2)).value - 0.25), 3e-3);
  for (int n2 = 0; n2 <= 10; ++n2)
    for (int d = 2; d <= 4; ++d)
      if (comparison_average_rational(n2, d) != limit_m_infinite_rational(n2, d))
        worst.update(1.0, 1e-300);
  return {"limits", worst.pass(), worst.deviation(), worst.tolerance(),
          "n1->inf, m->inf, comparison identity"};
}

/// Criterion: the closed-form minimizer is stationary and globally minimal,
/// the rate is sandwiched between 0 and the Chernoff value, and the
/// large-alpha remainder scales as 1/alpha^2.
inline CheckResult check_rate_function() {
  detail::Worst worst;
  // Stationarity by central differences.
  constexpr double kStep = 1e-5;
  for (double alpha : {1.0, 2.0, 5.0, 10.0}) {
    for (int qi = 1; qi <= 9; ++qi) {
      const OverlapQ q(qi / 10.0);
      const auto [b1, g1] = rate_minimizer(alpha, q);
      const double db = (rate_h(alpha, q, b1 + kStep, g1) - rate_h(alpha, q, b1 - kStep, g1)) /
                        (2.0 * kStep);
      const double dg = (rate_h(alpha, q, b1, g1 + kStep) - rate_h(alpha, q, b1, g1 - kStep)) /
                        (2.0 * kStep);
      worst.update(std::abs(db), 1e-8);
      worst.update(std::abs(dg), 1e-8);
    }
  }
  // Global minimality on a 400 x 400 lattice at (alpha, q) = (5, 0.5).
  {
    const double alpha = 5.0;
    const OverlapQ q(0.5);
    const double h_min = rate(alpha, q).h_min;
    double lowest_gap = 0.0;
    for (int i = 0; i < 400; ++i) {
      const double beta = alpha * i / 399.0;
      for (int j = 0; j < 400; ++j) {
        const double gamma = (alpha - beta) * j / 399.0;
        const double h = rate_h(alpha, q, beta, gamma);
        lowest_gap = std::min(lowest_gap, h - h_min);
      }
    }
    worst.update(std::max(0.0, -lowest_gap), 1e-12);
  }
  // Exact zero at q = 1 and the Chernoff sandwich.
  for (double alpha : {1.0, 2.0, 5.0, 10.0, 50.0}) {
    if (rate(alpha, OverlapQ(1.0)).h_min != 0.0) worst.update(1.0, 1e-300);
    for (int qi = 1; qi <= 9; ++qi) {
      const auto r = rate(alpha, OverlapQ(qi / 10.0));
      worst.update(std::max(0.0, -r.h_min), 1e-12);
      worst.update(std::max(0.0, r.h_min - r.chernoff), 1e-12);
    }
  }
  // Remainder of the large-alpha expansion: alpha^2 |h_min - approx| stays
  // bounded at q = 0.5.
  for (double alpha : {5.0, 10.0, 20.0, 50.0, 100.0}) {
    const auto r = rate(alpha, OverlapQ(0.5));
    worst.update(alpha * alpha * std::abs(r.h_min - r.approx), 1.5);
  }
  return {"rate-function", worst.pass(), worst.deviation(), worst.tolerance(),
          "stationarity, 400x400 grid, sandwich, remainder"};
}

/// Criterion: the finite-size exponent converges to the limiting rate
/// (from above, shrinking monotonically) and re-expresses the per-pair
/// error exactly.
inline CheckResult check_finite_size_rate() {
  detail::Worst worst;
  const OverlapQ q(0.5);
  const double h_min = rate(1.0, q).h_min;
  double prev = std::numeric_limits<double>::infinity();
  for (int m = 1; m <= 60; ++m) {
    const double r = finite_size_rate(m, 1.0, q);
    worst.update(std::max(0.0, r - prev), 1e-12);      // nonincreasing
    worst.update(std::max(0.0, h_min - r), 1e-12);     // stays above the limit
    prev = r;
  }
  worst.update(prev - h_min, 0.05);  // gap at m = 60
  for (int m = 1; m <= 40; ++m) {
    for (double alpha : {1.0, 2.0}) {
      const int n1 = static_cast<int>(alpha) * m;
      for (double qv : {0.3, 0.5, 0.8}) {
        const auto s = ProblemSize::make(m, n1, n1, 2);
        const double direct = -std::log(error_given_overlap(s, OverlapQ(qv)).value) / m;
        worst.update(std::abs(finite_size_rate(m, alpha, OverlapQ(qv)) - direct), 1e-10);
      }
    }
  }
  return {"finite-size-rate", worst.pass(), worst.deviation(), worst.tolerance(),
          "convergence at alpha=1, q=0.5; per-pair re-expression"};
}

/// Criterion: the emitted figure data satisfies the qualitative ordering of
/// the two rate plots.
inline CheckResult check_figure_data() {
  detail::Worst worst;
  const auto fig2 = figure_sweep(2);
  for (const auto& row : fig2) {
    worst.update(std::max(0.0, row.h_min - row.chernoff), 1e-12);
    if (row.q == 1.0) {
      worst.update(std::abs(row.h_min), 1e-300);
      worst.update(std::abs(row.approx), 1e-300);
      worst.update(std::abs(row.chernoff), 1e-300);
    }
  }
  const auto fig3 = figure_sweep(3);
  double prev_gap = std::numeric_limits<double>::infinity();
  for (const auto& row : fig3) {
    worst.update(std::max(0.0, row.h_min - row.chernoff), 1e-12);
    if (row.alpha >= 5.0) {
      const double gap = std::abs(row.h_min - row.approx);
      worst.update(std::max(0.0, gap - prev_gap), 1e-12);
      prev_gap = gap;
    }
  }
  return {"figure-data", worst.pass(), worst.deviation(), worst.tolerance(),
          detail::count_note(fig2.size() + fig3.size(), "rows")};
}

/// Runs one suite; the callback sees each result as soon as it is known.
inline std::vector<CheckResult> run_suite(
    Suite suite, const Options& opts,
    const std::function<void(const CheckResult&)>& on_result = {}) {
  std::vector<std::function<CheckResult()>> checks;
  const bool all = suite == Suite::All;
  if (all || suite == Suite::Oracle) {
    checks.push_back([&] { return check_helstrom_equivalence(opts); });
    checks.push_back([&] { return check_povm_equivalence(opts); });
    checks.push_back([&] { return check_mc_average(opts); });
  }
  if (all || suite == Suite::Analytic) {
    checks.push_back([] { return check_specialization_coherence(); });
    checks.push_back([&] { return check_haar_bridge(opts); });
    checks.push_back([&] { return check_pq_normalization(opts); });
    checks.push_back([] { return check_limits(); });
    checks.push_back([] { return check_rate_function(); });
    checks.push_back([] { return check_finite_size_rate(); });
    checks.push_back([] { return check_figure_data(); });
  }
  if (all || suite == Suite::Recoupling) {
    checks.push_back([] { return check_recoupling_sixj(); });
    checks.push_back([] { return check_recoupling_cg(); });
  }
  std::vector<CheckResult> results;
  for (auto& check : checks) {
    results.push_back(check());
    if (on_result) on_result(results.back());
  }
  return results;
}

}  // namespace qcp::verify
