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

// Command-line front-end: single evaluations, sweeps, figure data, limits,
// and the verification suites.  JSON records by default, CSV tables by
// flag.  Exit codes: 0 success, 1 verification failure, 2 bad arguments,
// 3 I/O failure.

#include <cmath>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "qcp/analytics.hpp"
#include "qcp/asymptotics.hpp"
#include "qcp/combinatorics.hpp"
#include "qcp/oracle.hpp"
#include "qcp/run_record.hpp"
#include "qcp/verify.hpp"
#include "qcp/version.hpp"

namespace {

using nlohmann::json;

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct GlobalOpts {
  std::string format = "json";
  std::string out_path;
  std::uint64_t seed = 0;
  bool seed_given = false;
  int samples = 10000;
  long long dim_cap = 0;  // 0: fall back to QCP_DIM_CAP / built-in default

  long long effective_dim_cap() const {
    return dim_cap > 0 ? dim_cap : qcp::oracle::default_dim_cap();
  }
};

// Opens --out (or stdout) for the whole command output.
class Sink {
 public:
  explicit Sink(const std::string& path) {
    if (!path.empty()) {
      file_ = std::make_unique<std::ofstream>(path);
      if (!*file_) throw IoError("cannot open output path: " + path);
    }
  }
  std::ostream& stream() { return file_ ? *file_ : std::cout; }
  void finish() {
    if (file_ && !*file_) throw IoError("short write to output file");
  }

 private:
  std::unique_ptr<std::ofstream> file_;
};

json per_k_json(const std::vector<qcp::PerKTerm>& per_k, bool with_pq) {
  json rows = json::array();
  for (const auto& t : per_k) {
    json row{{"k", t.k}, {"dim", t.dim}, {"cos_phi", t.cos_phi}, {"term", t.term}};
    if (with_pq) {
      row["p_k"] = t.p_k;
      row["q_k"] = t.q_k;
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

void emit_record(const GlobalOpts& g, const qcp::RunRecord& record,
                 const std::function<void(qcp::CsvWriter&)>& csv_body) {
  Sink sink(g.out_path);
  if (g.format == "csv") {
    qcp::CsvWriter csv(sink.stream());
    csv_body(csv);
  } else {
    sink.stream() << record.to_json().dump(2) << '\n';
  }
  sink.finish();
}

int cmd_avg_error(const GlobalOpts& g, int m, int n1, int n2, int d, const std::string& path) {
  qcp::EvalPath eval = qcp::EvalPath::Auto;
  if (path == "exact") eval = qcp::EvalPath::Exact;
  else if (path == "log") eval = qcp::EvalPath::LogSpace;
  else if (path != "auto") throw std::invalid_argument("--path must be auto, exact or log");

  const auto size = qcp::ProblemSize::make(m, n1, n2, d);
  const auto report = qcp::avg_error_min(size, eval);

  qcp::RunRecord rec;
  rec.command = "avg-error";
  rec.inputs = {{"M", m}, {"N1", n1}, {"N2", n2}, {"d", d}, {"path", path}};
  rec.formula_path = report.formula_path;
  rec.outputs["value"] = qcp::tagged(report.value, report.formula_path);
  rec.outputs["relabeled"] = report.relabeled;
  rec.outputs["per_k"] = per_k_json(report.per_k, false);
  emit_record(g, rec, [&](qcp::CsvWriter& csv) {
    csv.row({"k", "dim", "cos_phi", "term"});
    for (const auto& t : report.per_k)
      csv.row({std::to_string(t.k), qcp::format_number(t.dim), qcp::format_number(t.cos_phi),
               qcp::format_number(t.term)});
  });
  return 0;
}

int cmd_error(const GlobalOpts& g, int m, int n1, int n2, int d, double q) {
  const auto size = qcp::ProblemSize::make(m, n1, n2, d);
  const auto report = qcp::error_given_overlap(size, qcp::OverlapQ(q));

  qcp::RunRecord rec;
  rec.command = "error";
  rec.inputs = {{"M", m}, {"N1", n1}, {"N2", n2}, {"d", d}, {"q", q}};
  rec.formula_path = report.formula_path;
  rec.outputs["value"] = qcp::tagged(report.value, report.formula_path);
  rec.outputs["relabeled"] = report.relabeled;
  rec.outputs["per_k"] = per_k_json(report.per_k, true);
  emit_record(g, rec, [&](qcp::CsvWriter& csv) {
    csv.row({"k", "dim", "cos_phi", "p_k", "q_k", "term"});
    for (const auto& t : report.per_k)
      csv.row({std::to_string(t.k), qcp::format_number(t.dim), qcp::format_number(t.cos_phi),
               qcp::format_number(t.p_k), qcp::format_number(t.q_k),
               qcp::format_number(t.term)});
  });
  return 0;
}

int cmd_rate(const GlobalOpts& g, double alpha, double q, bool with_approx) {
  const auto r = qcp::rate(alpha, qcp::OverlapQ(q));

  qcp::RunRecord rec;
  rec.command = "rate";
  rec.inputs = {{"alpha", alpha}, {"q", q}, {"with_approx", with_approx}};
  rec.formula_path = "rate/closed-form-minimum";
  rec.outputs["beta1"] = qcp::tagged(r.beta1, "rate/stationary-point");
  rec.outputs["gamma1"] = qcp::tagged(r.gamma1, "rate/stationary-point");
  rec.outputs["h_min"] = qcp::tagged(r.h_min, "rate/closed-form-minimum");
  if (with_approx) rec.outputs["approx"] = qcp::tagged(r.approx, "rate/large-alpha");
  rec.outputs["chernoff"] = qcp::tagged(r.chernoff, "rate/chernoff");
  emit_record(g, rec, [&](qcp::CsvWriter& csv) {
    std::vector<std::string> header{"alpha", "q", "beta1", "gamma1", "h_min"};
    std::vector<std::string> row{qcp::format_number(alpha), qcp::format_number(q),
                                 qcp::format_number(r.beta1), qcp::format_number(r.gamma1),
                                 qcp::format_number(r.h_min)};
    if (with_approx) {
      header.push_back("approx");
      row.push_back(qcp::format_number(r.approx));
    }
    header.push_back("chernoff");
    row.push_back(qcp::format_number(r.chernoff));
    csv.row(header);
    csv.row(row);
  });
  return 0;
}

int cmd_fig(const GlobalOpts& g, int id, const std::string& out_path) {
  const auto rows = qcp::figure_sweep(id);
  {
    Sink sink(out_path);
    qcp::CsvWriter csv(sink.stream());
    csv.row({id == 2 ? "q" : "alpha", "h_min", "approx", "chernoff"});
    for (const auto& r : rows)
      csv.row({qcp::format_number(id == 2 ? r.q : r.alpha), qcp::format_number(r.h_min),
               qcp::format_number(r.approx), qcp::format_number(r.chernoff)});
    sink.finish();
  }
  qcp::RunRecord rec;
  rec.command = "fig";
  rec.inputs = {{"id", id}, {"out", out_path}};
  rec.formula_path = "rate/sweep";
  rec.outputs["rows"] = rows.size();
  rec.outputs["columns"] = json::array({id == 2 ? "q" : "alpha", "h_min", "approx", "chernoff"});
  std::cout << rec.to_json().dump(2) << '\n';
  return 0;
}

int cmd_limits(const GlobalOpts& g, std::optional<int> m, std::optional<int> n2, int d) {
  if (m.has_value() == n2.has_value())
    throw std::invalid_argument("limits: give exactly one of --M or --N2");
  qcp::RunRecord rec;
  rec.command = "limits";
  rec.inputs["d"] = d;
  double value;
  if (m) {
    value = qcp::limit_n1_infinite(*m, d);
    rec.inputs["M"] = *m;
    rec.formula_path = "limit/flanking-copies-infinite";
  } else {
    value = qcp::limit_m_infinite(*n2, d);
    rec.inputs["N2"] = *n2;
    rec.formula_path = "limit/middle-copies-infinite";
  }
  rec.outputs["value"] = qcp::tagged(value, rec.formula_path);
  emit_record(g, rec, [&](qcp::CsvWriter& csv) {
    csv.row({m ? "M" : "N2", "d", "value"});
    csv.row({std::to_string(m ? *m : *n2), std::to_string(d), qcp::format_number(value)});
  });
  return 0;
}

struct SweepArgs {
  std::string variable;
  double from = 0.0, to = 0.0;
  int steps = 0;
  int m = -1, n1 = -1, n2 = -1, d = 2;
  double q = std::numeric_limits<double>::quiet_NaN();
};

int require_int_lattice(double v, const char* what) {
  const double r = std::round(v);
  if (std::abs(v - r) > 1e-9 || r < 0)
    throw std::invalid_argument(std::string("sweep: ") + what +
                                " must land on nonnegative integers");
  return static_cast<int>(r);
}

int cmd_sweep(const GlobalOpts& g, const SweepArgs& a) {
  if (a.steps < 2) throw std::invalid_argument("sweep: --steps must be >= 2");
  if (!(a.from <= a.to)) throw std::invalid_argument("sweep: need --from <= --to");
  auto point = [&](int i) { return a.from + (a.to - a.from) * i / (a.steps - 1); };

  auto need = [](int v, const char* what) {
    if (v < 0) throw std::invalid_argument(std::string("sweep: missing fixed parameter ") + what);
    return v;
  };

  qcp::RunRecord rec;
  rec.command = "sweep";
  rec.inputs = {{"variable", a.variable}, {"from", a.from}, {"to", a.to}, {"steps", a.steps}};
  json rows = json::array();
  std::vector<std::vector<std::string>> csv_rows;
  std::vector<std::string> header;

  if (a.variable == "q") {
    const auto size = qcp::ProblemSize::make(need(a.m, "--M"), need(a.n1, "--N1"),
                                             need(a.n2, "--N2"), a.d);
    rec.inputs["M"] = a.m;
    rec.inputs["N1"] = a.n1;
    rec.inputs["N2"] = a.n2;
    rec.inputs["d"] = a.d;
    rec.formula_path = "per-pair-error/optimal-povm";
    const qcp::PairErrorEvaluator eval(size);
    header = {"q", "error"};
    for (int i = 0; i < a.steps; ++i) {
      const double q = point(i);
      const double value = eval.value(qcp::OverlapQ(q).value);
      rows.push_back({{"q", q}, {"error", value}});
      csv_rows.push_back({qcp::format_number(q), qcp::format_number(value)});
    }
  } else if (a.variable == "M" || a.variable == "N1" || a.variable == "N2") {
    rec.inputs["d"] = a.d;
    rec.formula_path = "averaged-error/general";
    header = {a.variable, "avg_error"};
    for (int i = 0; i < a.steps; ++i) {
      const int v = require_int_lattice(point(i), a.variable.c_str());
      const auto size = qcp::ProblemSize::make(a.variable == "M" ? v : need(a.m, "--M"),
                                               a.variable == "N1" ? v : need(a.n1, "--N1"),
                                               a.variable == "N2" ? v : need(a.n2, "--N2"), a.d);
      const double value = qcp::avg_error_min(size).value;
      rows.push_back({{a.variable, v}, {"avg_error", value}});
      csv_rows.push_back({std::to_string(v), qcp::format_number(value)});
    }
    rec.inputs["M"] = a.m;
    rec.inputs["N1"] = a.n1;
    rec.inputs["N2"] = a.n2;
  } else if (a.variable == "alpha") {
    if (std::isnan(a.q)) throw std::invalid_argument("sweep: missing fixed parameter --q");
    rec.inputs["q"] = a.q;
    rec.formula_path = "rate/closed-form-minimum";
    header = {"alpha", "h_min", "approx", "chernoff"};
    for (int i = 0; i < a.steps; ++i) {
      const double alpha = point(i);
      const auto r = qcp::rate(alpha, qcp::OverlapQ(a.q));
      rows.push_back(
          {{"alpha", alpha}, {"h_min", r.h_min}, {"approx", r.approx}, {"chernoff", r.chernoff}});
      csv_rows.push_back({qcp::format_number(alpha), qcp::format_number(r.h_min),
                          qcp::format_number(r.approx), qcp::format_number(r.chernoff)});
    }
  } else {
    throw std::invalid_argument("sweep: --variable must be one of q, M, N1, N2, alpha");
  }

  rec.outputs["rows"] = rows;
  emit_record(g, rec, [&](qcp::CsvWriter& csv) {
    csv.row(header);
    for (const auto& row : csv_rows) csv.row(row);
  });
  return 0;
}

int cmd_verify(const GlobalOpts& g, const std::string& suite_name) {
  qcp::verify::Suite suite;
  if (suite_name == "all") suite = qcp::verify::Suite::All;
  else if (suite_name == "analytic") suite = qcp::verify::Suite::Analytic;
  else if (suite_name == "oracle") suite = qcp::verify::Suite::Oracle;
  else if (suite_name == "recoupling") suite = qcp::verify::Suite::Recoupling;
  else throw std::invalid_argument("verify: --suite must be all, analytic, oracle or recoupling");

  const bool stochastic =
      suite == qcp::verify::Suite::All || suite == qcp::verify::Suite::Oracle;
  if (stochastic && !g.seed_given)
    throw std::invalid_argument("verify: this suite samples states; give an explicit --seed");

  qcp::verify::Options opts;
  if (g.seed_given) opts.seed = g.seed;
  opts.mc_samples = g.samples;
  opts.dim_cap = std::min<long long>(g.effective_dim_cap(), 1024);

  const bool as_json = g.format == "json" && !g.out_path.empty();
  auto print_row = [](const qcp::verify::CheckResult& r) {
    std::ostringstream line;
    line << (r.pass ? "[PASS] " : "[FAIL] ") << r.name;
    line << "  max-dev " << qcp::format_number(r.deviation) << " (tol "
         << qcp::format_number(r.tolerance) << ")";
    if (!r.detail.empty()) line << "  " << r.detail;
    std::cout << line.str() << std::endl;
  };
  const auto results = qcp::verify::run_suite(suite, opts, print_row);

  bool all_pass = true;
  for (const auto& r : results) all_pass = all_pass && r.pass;

  if (as_json) {
    json out = json::array();
    for (const auto& r : results)
      out.push_back({{"name", r.name},
                     {"pass", r.pass},
                     {"deviation", r.deviation},
                     {"tolerance", r.tolerance},
                     {"detail", r.detail}});
    Sink sink(g.out_path);
    sink.stream() << out.dump(2) << '\n';
    sink.finish();
  }
  return all_pass ? 0 : 1;
}

int run(int argc, char** argv) {
  CLI::App app{"Two-candidate quantum changepoint numerics"};
  app.set_version_flag("--version", qcp::kVersion);
  app.require_subcommand(1);

  GlobalOpts g;
  app.add_option("--format", g.format, "Output format")
      ->check(CLI::IsMember({"json", "csv"}))
      ->capture_default_str();
  app.add_option("--out", g.out_path, "Write output to this path instead of stdout");
  auto* seed_opt = app.add_option("--seed", g.seed, "Seed for sampled checks");
  app.add_option("--samples", g.samples, "Monte Carlo sample count")->capture_default_str();
  app.add_option("--dim-cap", g.dim_cap, "Dense oracle dimension cap (QCP_DIM_CAP also works)");

  int m = 0, n1 = 0, n2 = 0, d = 2;
  double q = 0.0, alpha = 1.0;
  std::string path = "auto";

  auto* avg = app.add_subcommand("avg-error", "Minimum averaged error probability");
  avg->add_option("--M", m, "Copies in System 0")->required();
  avg->add_option("--N1", n1, "Copies in System 1")->required();
  avg->add_option("--N2", n2, "Copies in System 2")->required();
  avg->add_option("--d", d, "Local dimension")->required();
  avg->add_option("--path", path, "Arithmetic route: auto, exact or log");

  auto* err = app.add_subcommand("error", "Per-pair error at a given overlap");
  err->add_option("--M", m)->required();
  err->add_option("--N1", n1)->required();
  err->add_option("--N2", n2)->required();
  err->add_option("--d", d)->required();
  err->add_option("--q", q, "Overlap Tr[rho1 rho2]")->required();

  bool with_approx = false;
  auto* rt = app.add_subcommand("rate", "Exponential decay rate of the error");
  rt->add_option("--alpha", alpha, "Copy ratio n1 = n2 = alpha m")->required();
  rt->add_option("--q", q)->required();
  rt->add_flag("--with-approx", with_approx, "Also emit the large-alpha approximation");

  int fig_id = 2;
  std::string fig_out;
  auto* fg = app.add_subcommand("fig", "Emit rate-plot data as CSV");
  fg->add_option("--id", fig_id, "Figure id (2: q sweep, 3: alpha sweep)")->required();
  fg->add_option("--out", fig_out, "CSV output path")->required();

  SweepArgs sweep;
  auto* sw = app.add_subcommand("sweep", "Sweep one variable, one row per point");
  sw->add_option("--variable", sweep.variable)->required();
  sw->add_option("--from", sweep.from)->required();
  sw->add_option("--to", sweep.to)->required();
  sw->add_option("--steps", sweep.steps)->required();
  sw->add_option("--M", sweep.m);
  sw->add_option("--N1", sweep.n1);
  sw->add_option("--N2", sweep.n2);
  sw->add_option("--d", sweep.d);
  sw->add_option("--q", sweep.q);

  std::optional<int> lim_m, lim_n2;
  auto* lm = app.add_subcommand("limits", "Limiting error values");
  lm->add_option("--M", lim_m, "Flanking copies to infinity at this M");
  lm->add_option("--N2", lim_n2, "Middle copies to infinity at this N2");
  lm->add_option("--d", d);

  std::string suite = "all";
  auto* vf = app.add_subcommand("verify", "Run the verification suites");
  vf->add_option("--suite", suite, "all, analytic, oracle or recoupling")
      ->capture_default_str();

  for (auto* sub : {avg, err, rt, fg, sw, lm, vf}) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  g.seed_given = seed_opt->count() > 0;

  if (*avg) return cmd_avg_error(g, m, n1, n2, d, path);
  if (*err) return cmd_error(g, m, n1, n2, d, q);
  if (*rt) return cmd_rate(g, alpha, q, with_approx);
  if (*fg) return cmd_fig(g, fig_id, fig_out);
  if (*sw) return cmd_sweep(g, sweep);
  if (*lm) return cmd_limits(g, lim_m, lim_n2, d);
  if (*vf) return cmd_verify(g, suite);
  return 2;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  } catch (const qcp::oracle::DimCapError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::out_of_range& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
