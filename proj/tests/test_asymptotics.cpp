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

#include <catch_amalgamated.hpp>

#include <cmath>

#include "qcp/asymptotics.hpp"

using qcp::OverlapQ;
using qcp::ProblemSize;

TEST_CASE("limit of many flanking copies") {
  CHECK_THAT(qcp::limit_n1_infinite(1, 2), Catch::Matchers::WithinAbs(1.0 / 6.0, 1e-10));
  SECTION("equals the averaged discrimination error") {
    for (int m : {1, 2, 5, 10, 25, 50})
      for (int d : {2, 3, 4, 5})
        CHECK_THAT(qcp::limit_n1_infinite(m, d),
                   Catch::Matchers::WithinAbs(qcp::discrimination_average(m, d), 1e-12));
  }
  SECTION("finite sizes approach it") {
    const double limit = qcp::limit_n1_infinite(1, 2);
    const double finite = qcp::avg_error_min(ProblemSize::make(1, 200, 200, 2)).value;
    CHECK(std::abs(finite - limit) < 0.01);
  }
  CHECK_THROWS_AS(qcp::limit_n1_infinite(0, 2), std::invalid_argument);
  CHECK_THAT(qcp::discrimination_average(0, 2), Catch::Matchers::WithinAbs(0.5, 1e-12));
}

TEST_CASE("limit of many middle copies") {
  CHECK(qcp::limit_m_infinite(1, 2) == 0.25);
  CHECK(qcp::limit_m_infinite(0, 5) == 0.5);
  SECTION("finite sizes approach it") {
    CHECK_THAT(qcp::avg_error_min(ProblemSize::make(100, 1, 1, 2)).value,
               Catch::Matchers::WithinAbs(0.25, 3e-3));
  }
  SECTION("independent of the first system's copies") {
    // relabeling puts the larger flank into n2, so the limit follows the
    // canonical n2 of each size
    for (int n1 : {1, 2, 3}) {
      const auto s = ProblemSize::make(500, n1, 2, 2);
      const double limit = qcp::limit_m_infinite(s.n2, 2);
      const double v = qcp::avg_error_min(s).value;
      CHECK(std::abs(v - limit) / limit < 0.02);
    }
  }
}

TEST_CASE("state comparison connection") {
  CHECK(qcp::comparison_error(OverlapQ(0.0), 3) == 0.0);
  CHECK(qcp::comparison_error(OverlapQ(1.0), 7) == 0.5);
  CHECK(qcp::comparison_error(OverlapQ(0.0), 0) == 0.5);  // 0^0 = 1
  CHECK_THAT(qcp::comparison_error(OverlapQ(0.5), 2), Catch::Matchers::WithinAbs(0.125, 1e-15));
  SECTION("the Haar average equals the middle-copy limit exactly") {
    for (int n2 = 0; n2 <= 10; ++n2)
      for (int d = 2; d <= 4; ++d)
        CHECK(qcp::comparison_average_rational(n2, d) == qcp::limit_m_infinite_rational(n2, d));
  }
  CHECK_THAT(qcp::comparison_average(1, 2), Catch::Matchers::WithinAbs(0.25, 1e-15));
}

TEST_CASE("rate function") {
  SECTION("identical hypotheses decay at rate zero") {
    for (double alpha : {0.5, 1.0, 4.0})
      CHECK_THAT(qcp::rate_h(alpha, OverlapQ(1.0), 0.0, alpha),
                 Catch::Matchers::WithinAbs(0.0, 1e-12));
  }
  SECTION("stationary at the closed-form minimizer") {
    const double alpha = 5.0;
    const OverlapQ q(0.5);
    const auto [b1, g1] = qcp::rate_minimizer(alpha, q);
    const double step = 1e-5;
    const double db =
        (qcp::rate_h(alpha, q, b1 + step, g1) - qcp::rate_h(alpha, q, b1 - step, g1)) / (2 * step);
    const double dg =
        (qcp::rate_h(alpha, q, b1, g1 + step) - qcp::rate_h(alpha, q, b1, g1 - step)) / (2 * step);
    CHECK_THAT(db, Catch::Matchers::WithinAbs(0.0, 1e-8));
    CHECK_THAT(dg, Catch::Matchers::WithinAbs(0.0, 1e-8));
  }
  SECTION("grid search confirms the global minimum") {
    const double alpha = 5.0;
    const OverlapQ q(0.5);
    const auto r = qcp::rate(alpha, q);
    double best = std::numeric_limits<double>::infinity();
    double best_beta = 0, best_gamma = 0;
    for (int i = 0; i < 400; ++i) {
      const double beta = alpha * i / 399.0;
      for (int j = 0; j < 400; ++j) {
        const double gamma = (alpha - beta) * j / 399.0;
        const double h = qcp::rate_h(alpha, q, beta, gamma);
        if (h < best) {
          best = h;
          best_beta = beta;
          best_gamma = gamma;
        }
      }
    }
    CHECK(r.h_min <= best + 1e-12);
    // local refinement around the lattice winner walks to the closed form
    double step = alpha / 399.0;
    while (step > 1e-9) {
      bool moved = false;
      for (auto [db, dg] : {std::pair{step, 0.0}, {-step, 0.0}, {0.0, step}, {0.0, -step}}) {
        const double nb = best_beta + db;
        const double ng = best_gamma + dg;
        if (nb < 0 || ng < 0 || nb > alpha || ng > alpha - nb) continue;
        const double h = qcp::rate_h(alpha, q, nb, ng);
        if (h < best) {
          best = h;
          best_beta = nb;
          best_gamma = ng;
          moved = true;
        }
      }
      if (!moved) step /= 2;
    }
    CHECK_THAT(best_beta, Catch::Matchers::WithinAbs(r.beta1, 1e-4));
    CHECK_THAT(best_gamma, Catch::Matchers::WithinAbs(r.gamma1, 1e-4));
    CHECK_THAT(best, Catch::Matchers::WithinAbs(r.h_min, 1e-10));
  }
  CHECK_THROWS_AS(qcp::rate_h(5.0, OverlapQ(0.5), -0.5, 1.0), std::domain_error);
  CHECK_THROWS_AS(qcp::rate_h(5.0, OverlapQ(0.5), 1.0, 5.0), std::domain_error);
}

TEST_CASE("rate minimizer closed form") {
  SECTION("q = 1 collapses to the corner") {
    for (double alpha : {1.0, 3.0, 10.0}) {
      const auto [b1, g1] = qcp::rate_minimizer(alpha, OverlapQ(1.0));
      CHECK_THAT(b1, Catch::Matchers::WithinAbs(0.0, 1e-12));
      CHECK_THAT(g1, Catch::Matchers::WithinAbs(alpha, 1e-12));
    }
  }
  SECTION("vanishing overlap sends gamma1 to zero") {
    for (double q : {1e-6, 1e-9, 1e-12})
      CHECK(qcp::rate_minimizer(4.0, OverlapQ(q)).second < 1e-2);
  }
  SECTION("the point is interior for q in (0,1)") {
    for (double alpha : {1.0, 2.0, 5.0, 10.0})
      for (int qi = 1; qi <= 9; ++qi) {
        const auto [b1, g1] = qcp::rate_minimizer(alpha, OverlapQ(qi / 10.0));
        CHECK(b1 > 0.0);
        CHECK(b1 < alpha);
        CHECK(g1 > 0.0);
        CHECK(g1 < alpha - b1);
      }
  }
  CHECK_THROWS_AS(qcp::rate_minimizer(5.0, OverlapQ(0.0)), std::domain_error);
}

TEST_CASE("rate summary") {
  SECTION("q = 1 zeroes every column") {
    const auto r = qcp::rate(7.0, OverlapQ(1.0));
    CHECK(r.h_min == 0.0);
    CHECK(r.approx == 0.0);
    CHECK(r.chernoff == 0.0);
  }
  SECTION("rate approaches the Chernoff value from below") {
    const auto r5 = qcp::rate(5.0, OverlapQ(0.5));
    const auto r100 = qcp::rate(100.0, OverlapQ(0.5));
    CHECK(r5.h_min <= r5.chernoff);
    CHECK(r100.h_min <= r100.chernoff);
    CHECK(std::abs(r100.h_min - r100.chernoff) < std::abs(r5.h_min - r5.chernoff));
  }
  SECTION("ordering and growth in alpha") {
    for (int qi = 1; qi <= 9; ++qi) {
      double prev = -1.0;
      for (double alpha : {1.0, 2.0, 5.0, 10.0, 50.0}) {
        const auto r = qcp::rate(alpha, OverlapQ(qi / 10.0));
        CHECK(r.h_min >= 0.0);
        CHECK(r.h_min <= r.chernoff + 1e-12);
        CHECK(r.h_min > prev);
        prev = r.h_min;
      }
    }
  }
  SECTION("the large-alpha remainder is quadratically small") {
    double bound = 0.0;
    for (double alpha : {5.0, 10.0, 20.0, 50.0, 100.0}) {
      const auto r = qcp::rate(alpha, OverlapQ(0.5));
      bound = std::max(bound, alpha * alpha * std::abs(r.h_min - r.approx));
    }
    CHECK(bound < 1.5);
  }
  CHECK_THROWS_AS(qcp::rate(5.0, OverlapQ(0.0)), std::domain_error);
}

TEST_CASE("finite-size rate") {
  SECTION("single block re-expresses the per-pair error") {
    const double p = qcp::error_given_overlap(ProblemSize::make(1, 1, 1, 2), OverlapQ(0.5)).value;
    CHECK_THAT(qcp::finite_size_rate(1, 1.0, OverlapQ(0.5)),
               Catch::Matchers::WithinAbs(-std::log(p), 1e-12));
  }
  SECTION("agrees with the per-pair route wherever both run") {
    for (int m : {1, 2, 5, 10, 20})
      for (double alpha : {1.0, 2.0})
        for (double q : {0.25, 0.5, 0.9}) {
          const int n1 = static_cast<int>(alpha) * m;
          const double p =
              qcp::error_given_overlap(ProblemSize::make(m, n1, n1, 2), OverlapQ(q)).value;
          CHECK_THAT(qcp::finite_size_rate(m, alpha, OverlapQ(q)),
                     Catch::Matchers::WithinAbs(-std::log(p) / m, 1e-10));
        }
  }
  SECTION("converges to the limiting rate from above") {
    const double h = qcp::rate(1.0, OverlapQ(0.5)).h_min;
    double prev = std::numeric_limits<double>::infinity();
    for (int m = 1; m <= 60; ++m) {
      const double r = qcp::finite_size_rate(m, 1.0, OverlapQ(0.5));
      CHECK(r <= prev + 1e-12);
      CHECK(r > h);
      prev = r;
    }
    CHECK(prev - h < 0.05);
  }
  SECTION("identical hypotheses leave only the coin flip") {
    for (int m : {1, 4, 9})
      CHECK_THAT(qcp::finite_size_rate(m, 1.0, OverlapQ(1.0)),
                 Catch::Matchers::WithinAbs(std::numbers::ln2 / m, 1e-12));
  }
  CHECK_THROWS_AS(qcp::finite_size_rate(2, 0.3, OverlapQ(0.5)), std::invalid_argument);
  CHECK_THROWS_AS(qcp::finite_size_rate(3, 1.0, OverlapQ(0.0)), std::domain_error);
}

TEST_CASE("figure sweeps") {
  const auto fig2 = qcp::figure_sweep(2);
  REQUIRE(fig2.size() == 100);
  CHECK(fig2.back().q == 1.0);
  CHECK(fig2.back().h_min == 0.0);
  for (const auto& row : fig2) CHECK(row.h_min <= row.chernoff + 1e-12);

  const auto fig3 = qcp::figure_sweep(3);
  REQUIRE(fig3.size() == 100);
  double prev_gap = std::numeric_limits<double>::infinity();
  for (const auto& row : fig3) {
    if (row.alpha >= 5.0) {
      const double gap = std::abs(row.h_min - row.approx);
      CHECK(gap <= prev_gap + 1e-12);
      prev_gap = gap;
    }
  }
  CHECK_THROWS_AS(qcp::figure_sweep(4), std::invalid_argument);
}
