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

// Release gate.  Runs every check at its pinned tolerance and prints one
// PASS/FAIL line per criterion; exits nonzero if anything fails.

#include <chrono>
#include <cstdio>
#include <vector>

#include "qcp/verify.hpp"

int main() {
  using qcp::verify::CheckResult;
  qcp::verify::Options opts;  // fixed seed, 10^4 samples, cap 1024

  const std::vector<std::pair<const char*, std::function<CheckResult()>>> criteria = {
      {"01", [&] { return qcp::verify::check_helstrom_equivalence(opts); }},
      {"02", [&] { return qcp::verify::check_povm_equivalence(opts); }},
      {"03", [&] { return qcp::verify::check_mc_average(opts); }},
      {"04", [] { return qcp::verify::check_specialization_coherence(); }},
      {"05", [&] { return qcp::verify::check_haar_bridge(opts); }},
      {"06a", [] { return qcp::verify::check_recoupling_sixj(); }},
      {"06b", [] { return qcp::verify::check_recoupling_cg(); }},
      {"07", [&] { return qcp::verify::check_pq_normalization(opts); }},
      {"08", [] { return qcp::verify::check_limits(); }},
      {"09", [] { return qcp::verify::check_rate_function(); }},
      {"10", [] { return qcp::verify::check_finite_size_rate(); }},
      {"11", [] { return qcp::verify::check_figure_data(); }},
  };

  int failures = 0;
  for (const auto& [id, check] : criteria) {
    const auto start = std::chrono::steady_clock::now();
    const CheckResult r = check();
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (!r.pass) ++failures;
    std::printf("[%s] %-4s %-26s max-dev %.3e (tol %.3e) [%.1fs] %s\n",
                r.pass ? "PASS" : "FAIL", id, r.name.c_str(), r.deviation, r.tolerance, secs,
                r.detail.c_str());
    std::fflush(stdout);
  }
  if (failures) std::printf("%d criterion group(s) FAILED\n", failures);
  else std::printf("all criteria passed\n");
  return failures == 0 ? 0 : 1;
}
