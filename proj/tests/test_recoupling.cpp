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

#include <array>
#include <cmath>
#include <random>

#include "qcp/recoupling.hpp"

using qcp::HalfInt;
using qcp::ProblemSize;
using qcp::SixJArgs;

namespace {

double racah(int ta, int tb, int tc, int td, int te, int tf) {
  return qcp::wigner6j_racah({HalfInt{ta}, HalfInt{tb}, HalfInt{tc}, HalfInt{td}, HalfInt{te},
                              HalfInt{tf}});
}

double cg(int tj1, int tm1, int tj2, int tm2, int tj, int tm) {
  return qcp::clebsch_gordan(HalfInt{tj1}, HalfInt{tm1}, HalfInt{tj2}, HalfInt{tm2}, HalfInt{tj},
                             HalfInt{tm});
}

}  // namespace

TEST_CASE("6j with a zero argument collapses to the closed form") {
  // {0 b b; d e e} = (-1)^{b+d+e} / sqrt((2b+1)(2e+1)) when (b,d,e) couple.
  for (int tb = 0; tb <= 8; ++tb)
    for (int td = 0; td <= 8; ++td)
      for (int te = std::abs(tb - td); te <= tb + td; te += 2) {
        const double expected = (((tb + td + te) / 2) % 2 == 0 ? 1.0 : -1.0) /
                                std::sqrt(static_cast<double>(tb + 1) * (te + 1));
        CHECK_THAT(racah(0, tb, tb, td, te, te), Catch::Matchers::WithinAbs(expected, 1e-13));
      }
}

TEST_CASE("6j is invariant under its 24 classical symmetries") {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> pick(0, 6);
  int found = 0;
  while (found < 40) {
    const int ta = pick(rng), tb = pick(rng), td = pick(rng), te = pick(rng);
    std::uniform_int_distribution<int> pc(0, 6);
    const int tc = pc(rng), tf = pc(rng);
    const double base = racah(ta, tb, tc, td, te, tf);
    if (base == 0.0) continue;
    ++found;
    const std::array<std::array<int, 3>, 2> cols_upper{{{ta, tb, tc}, {td, te, tf}}};
    // All 6 column permutations, each with the 4 allowed two-column row swaps.
    const int perms[6][3] = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};
    for (const auto& p : perms) {
      for (int swap_mask = 0; swap_mask < 4; ++swap_mask) {
        // swap rows in two of the three columns: masks select the fixed column
        std::array<int, 3> up, dn;
        for (int c = 0; c < 3; ++c) {
          up[c] = cols_upper[0][p[c]];
          dn[c] = cols_upper[1][p[c]];
        }
        if (swap_mask > 0) {
          const int fixed = swap_mask - 1;
          for (int c = 0; c < 3; ++c)
            if (c != fixed) std::swap(up[c], dn[c]);
        }
        CHECK_THAT(racah(up[0], up[1], up[2], dn[0], dn[1], dn[2]),
                   Catch::Matchers::WithinAbs(base, 1e-12));
      }
    }
  }
}

TEST_CASE("6j orthogonality sums") {
  // sum_x (2x+1) {a b x; c d p}{a b x; c d q} = delta_pq / (2p+1)
  for (int ta : {1, 2, 3})
    for (int tb : {1, 2, 4})
      for (int tc : {1, 2, 3})
        for (int td : {0, 1, 2}) {
          for (int tp = 0; tp <= 6; ++tp)
            for (int tq = 0; tq <= 6; ++tq) {
              if (!qcp::detail::triad_valid(ta, td, tp) || !qcp::detail::triad_valid(tc, tb, tp))
                continue;
              if (!qcp::detail::triad_valid(ta, td, tq) || !qcp::detail::triad_valid(tc, tb, tq))
                continue;
              double sum = 0.0;
              for (int tx = 0; tx <= 12; ++tx)
                sum += (tx + 1) * racah(ta, tb, tx, tc, td, tp) * racah(ta, tb, tx, tc, td, tq);
              const double expected = (tp == tq) ? 1.0 / (tp + 1) : 0.0;
              CHECK_THAT(sum, Catch::Matchers::WithinAbs(expected, 1e-12));
            }
        }
}

TEST_CASE("special 6j closed form") {
  SECTION("k = 0 pins the sign and scale") {
    for (int m : {0, 1, 3})
      for (int n1 : {0, 1, 2})
        for (int n2 : {2, 4}) {
          if (m + n1 + n2 < 1) continue;
          const auto s = ProblemSize::make(m, n1, n2, 2);
          const int n = s.total();
          const double expected =
              (n % 2 == 0 ? 1.0 : -1.0) /
              std::sqrt(static_cast<double>(m + n1 + 1) * (m + n2 + 1));
          CHECK_THAT(qcp::wigner6j_special(s, 0), Catch::Matchers::WithinAbs(expected, 1e-14));
        }
  }
  SECTION("single-copy case") {
    const auto s = ProblemSize::make(1, 1, 1, 2);
    CHECK_THAT(qcp::wigner6j_special(s, 1), Catch::Matchers::WithinAbs(0.5 / 3.0, 1e-14));
  }
  SECTION("matches the Racah oracle on the full grid, both product ranges") {
    for (int m = 0; m <= 8; ++m)
      for (int n1 = 0; n1 <= 8; ++n1)
        for (int n2 = n1; n2 <= 8; ++n2) {
          if (m + n1 + n2 < 1) continue;
          const auto s = ProblemSize::make(m, n1, n2, 2);
          const int n = s.total();
          for (int k = 0; k <= s.k_max_second(); ++k) {
            const SixJArgs args{HalfInt{n1}, HalfInt{m},          HalfInt{m + n1},
                                HalfInt{n2}, HalfInt{n - 2 * k},  HalfInt{m + n2}};
            CHECK_THAT(qcp::wigner6j_special(s, k),
                       Catch::Matchers::WithinAbs(qcp::wigner6j_racah(args), 1e-12));
          }
        }
  }
  CHECK_THROWS_AS(qcp::wigner6j_special(ProblemSize::make(1, 1, 1, 2), 2), std::out_of_range);
  CHECK_THROWS_AS(qcp::wigner6j_special(ProblemSize::make(1, 1, 1, 2), -1), std::out_of_range);
}

TEST_CASE("cos phi") {
  SECTION("k = 0 gives overlap one") {
    for (int m : {0, 1, 5})
      for (int n2 : {1, 3}) CHECK(qcp::cos_phi(ProblemSize::make(m, 1, n2, 2), 0) == 1.0);
  }
  CHECK_THAT(qcp::cos_phi(ProblemSize::make(1, 1, 1, 2), 1), Catch::Matchers::WithinAbs(0.5, 1e-15));
  CHECK_THAT(qcp::cos_phi(ProblemSize::make(1, 1, 2, 2), 1),
             Catch::Matchers::WithinAbs(std::sqrt(1.0 / 3.0), 1e-15));
  SECTION("bounded, nonincreasing in k, zero past n1") {
    for (int m : {0, 1, 2, 4})
      for (int n1 : {0, 1, 3})
        for (int n2 : {3, 5}) {
          if (m + n1 + n2 < 1) continue;
          const auto s = ProblemSize::make(m, n1, n2, 3);
          double prev = 1.0;
          for (int k = 0; k <= s.k_max_second(); ++k) {
            const double c = qcp::cos_phi(s, k);
            CHECK(c >= 0.0);
            CHECK(c <= prev + 1e-15);
            if (k > s.n1) CHECK(c == 0.0);
            prev = c;
          }
        }
  }
  CHECK_THROWS_AS(qcp::cos_phi(ProblemSize::make(1, 1, 1, 2), 3), std::out_of_range);
}

TEST_CASE("6j route and binomial route agree on the inner product") {
  // <u|v> = (-1)^{phase} sqrt((m+n1+1)(m+n2+1)) {6j} must equal cos(phi_k).
  for (int m = 0; m <= 6; ++m)
    for (int n1 = 0; n1 <= 6; ++n1)
      for (int n2 = n1; n2 <= 6; ++n2) {
        if (m + n1 + n2 < 1) continue;
        const auto s = ProblemSize::make(m, n1, n2, 2);
        const int n = s.total();
        for (int k = 0; k <= s.k_max_second(); ++k) {
          const SixJArgs args{HalfInt{n1}, HalfInt{m},         HalfInt{m + n1},
                              HalfInt{n2}, HalfInt{n - 2 * k}, HalfInt{m + n2}};
          const double sign = ((n - k) % 2 == 0) ? 1.0 : -1.0;
          const double via_6j =
              sign * std::sqrt(static_cast<double>(m + n1 + 1) * (m + n2 + 1)) *
              qcp::wigner6j_racah(args);
          CHECK_THAT(via_6j, Catch::Matchers::WithinAbs(qcp::cos_phi(s, k), 1e-12));
        }
      }
}

TEST_CASE("Clebsch-Gordan basics") {
  CHECK_THAT(cg(2, 0, 1, 1, 1, -1), Catch::Matchers::WithinAbs(0.0, 1e-15));  // m mismatch
  // <1 0 | 1/2 1/2 ; 1/2 -1/2> = 1/sqrt(2)
  CHECK_THAT(cg(1, 1, 1, -1, 2, 0), Catch::Matchers::WithinAbs(1.0 / std::sqrt(2.0), 1e-15));
  SECTION("stretched top-weight coefficient is one") {
    for (int tj1 : {1, 2, 3, 5})
      for (int tj2 : {0, 1, 2, 4})
        CHECK_THAT(cg(tj1, tj1, tj2, tj2, tj1 + tj2, tj1 + tj2),
                   Catch::Matchers::WithinAbs(1.0, 1e-14));
  }
}

TEST_CASE("Clebsch-Gordan orthonormality") {
  for (int tj1 = 0; tj1 <= 8; tj1 += 2)
    for (int tj2 = 1; tj2 <= 8; tj2 += 3) {
      // rows: fixed (J, M) pairs
      for (int tj = std::abs(tj1 - tj2); tj <= tj1 + tj2; tj += 2)
        for (int tjp = std::abs(tj1 - tj2); tjp <= tj1 + tj2; tjp += 2)
          for (int tm = -tj; tm <= tj; tm += 2) {
            if (std::abs(tm) > tjp) continue;
            double sum = 0.0;
            for (int tm1 = -tj1; tm1 <= tj1; tm1 += 2) {
              const int tm2 = tm - tm1;
              if (std::abs(tm2) > tj2) continue;
              sum += cg(tj1, tm1, tj2, tm2, tj, tm) * cg(tj1, tm1, tj2, tm2, tjp, tm);
            }
            CHECK_THAT(sum, Catch::Matchers::WithinAbs(tj == tjp ? 1.0 : 0.0, 1e-13));
          }
      // columns: fixed (m1, m2) pairs
      for (int tm1 = -tj1; tm1 <= tj1; tm1 += 2)
        for (int tm2 = -tj2; tm2 <= tj2; tm2 += 2)
          for (int tm1p = -tj1; tm1p <= tj1; tm1p += 2) {
            const int tm2p = tm1 + tm2 - tm1p;
            if (std::abs(tm2p) > tj2) continue;
            double sum = 0.0;
            for (int tj = std::abs(tj1 - tj2); tj <= tj1 + tj2; tj += 2)
              sum += cg(tj1, tm1, tj2, tm2, tj, tm1 + tm2) *
                     cg(tj1, tm1p, tj2, tm2p, tj, tm1 + tm2);
            const bool same = tm1 == tm1p;
            CHECK_THAT(sum, Catch::Matchers::WithinAbs(same ? 1.0 : 0.0, 1e-13));
          }
    }
}

TEST_CASE("edge Clebsch-Gordan closed form") {
  SECTION("single-copy value feeds the 2/3 prefactor") {
    const auto s = ProblemSize::make(1, 1, 1, 2);
    CHECK_THAT(qcp::cg_edge_squared(s, 1, 0), Catch::Matchers::WithinAbs(2.0 / 3.0, 1e-15));
  }
  SECTION("stretched coefficient at k = 0, l = n1 is one") {
    for (int m : {0, 1, 3})
      for (int n1 : {0, 1, 2})
        for (int n2 : {2, 3}) {
          if (m + n1 + n2 < 1) continue;
          const auto s = ProblemSize::make(m, n1, n2, 2);
          CHECK_THAT(qcp::cg_edge_squared(s, 0, s.n1), Catch::Matchers::WithinAbs(1.0, 1e-14));
        }
  }
  SECTION("completeness over the coupled label") {
    for (int m : {0, 1, 2})
      for (int n1 : {1, 2, 3})
        for (int n2 : {3, 4}) {
          const auto s = ProblemSize::make(m, n1, n2, 2);
          for (int l = 0; l <= s.n1; ++l) {
            double sum = 0.0;
            for (int k = 0; k <= s.n1 - l; ++k) sum += qcp::cg_edge_squared(s, k, l);
            CHECK_THAT(sum, Catch::Matchers::WithinAbs(1.0, 1e-12));
          }
        }
  }
  SECTION("matches the general evaluator squared") {
    for (int m = 0; m <= 6; ++m)
      for (int n1 = 0; n1 <= 6; ++n1)
        for (int n2 = n1; n2 <= 6; ++n2) {
          if (m + n1 + n2 < 1) continue;
          const auto s = ProblemSize::make(m, n1, n2, 2);
          const int n = s.total();
          const int mn2 = m + n2;
          for (int k = 0; k <= n1; ++k)
            for (int l = 0; l <= n1 - k; ++l) {
              const double c = cg(n1, -n1 + 2 * l, mn2, mn2, n - 2 * k, n - 2 * n1 + 2 * l);
              CHECK_THAT(qcp::cg_edge_squared(s, k, l),
                         Catch::Matchers::WithinAbs(c * c, 1e-12));
            }
        }
  }
  CHECK_THROWS_AS(qcp::cg_edge_squared(ProblemSize::make(1, 1, 1, 2), 1, 1), std::out_of_range);
  CHECK_THROWS_AS(qcp::cg_edge_squared(ProblemSize::make(1, 1, 1, 2), 2, 0), std::out_of_range);
}
