// Batch verification campaigns: envelope-verify, tian, gm-check.
// Exit codes: 0 pass, 1 verification failure, 2 usage/config error.

#include <CLI11.hpp>
#include <atomic>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <random>
#include <sstream>
#include <thread>

#include "symenv/envelope.hpp"
#include "symenv/geometry.hpp"
#include "symenv/integrals.hpp"
#include "symenv/json_io.hpp"
#include "symenv/testfuncs.hpp"

namespace {

using namespace symenv;
using nlohmann::json;

constexpr int kExitPass = 0;
constexpr int kExitVerificationFailure = 1;
constexpr int kExitConfigError = 2;

int thread_count() {
  if (const char* env = std::getenv("SYMENV_THREADS")) {
    const int n = std::atoi(env);
    if (n >= 1) return n;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

std::string iso_timestamp() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t tt = std::chrono::system_clock::to_time_t(now);
  std::ostringstream os;
  os << std::put_time(std::gmtime(&tt), "%FT%TZ");
  return os.str();
}

// CSV with '#'-prefixed metadata; the timestamp line is excluded from the
// determinism contract.
class CsvWriter {
 public:
  explicit CsvWriter(const std::string& path) : out_(path) {
    if (!out_) throw Error("cannot open output file: " + path);
    out_ << "# timestamp=" << iso_timestamp() << "\n";
    out_ << std::setprecision(17);
  }
  void meta(const std::string& key, const std::string& value) {
    out_ << "# " << key << "=" << value << "\n";
  }
  void row(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) out_ << (i ? "," : "") << cells[i];
    out_ << "\n";
  }
  template <typename T>
  static std::string cell(T v) {
    std::ostringstream os;
    os << std::setprecision(17) << v;
    return os.str();
  }

 private:
  std::ofstream out_;
};

struct RunConfig {
  TupleShape shape{2, 2};
  double a_m = 0.0;  // 0 means "chern" (m+1)
  GridSpec grid;
  std::vector<double> alpha_list;
  std::vector<std::uint64_t> seeds{12345};
  double tol = 1e-6;
  int quad_nodes = 160;
  long long mc_samples = 2'000'000;
  long long psi_mc_samples = 8'000'000;
  std::vector<TestFunctionSpec> funcs;
  GridSpec calibration_grid{1e-2, 7, true};
  bool inject_non_invariant = false;
  json divergence;  // optional: {"alpha": 1.0, "cutoffs": [...]}
  int num_points = 50;

  double effective_a_m() const { return a_m > 0.0 ? a_m : shape.m + 1; }
};

RunConfig parse_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidSpec("cannot open config file: " + path);
  json j = json::parse(in);

  RunConfig cfg{.shape = TupleShape(j.value("shape", json{{"n", 2}, {"k", 2}}).at("n").get<int>(),
                                    j.value("shape", json{{"n", 2}, {"k", 2}}).at("k").get<int>())};
  if (j.contains("a_m")) {
    if (j["a_m"].is_string()) {
      if (j["a_m"] != "chern") throw InvalidSpec("a_m must be a number or \"chern\"");
    } else {
      cfg.a_m = j["a_m"].get<double>();
      if (cfg.a_m <= 0.0) throw InvalidSpec("a_m must be positive");
    }
  }
  if (j.contains("grid")) {
    cfg.grid.delta = j["grid"].value("delta", 1e-3);
    cfg.grid.points_per_axis = j["grid"].value("points_per_axis", 11);
    cfg.grid.log_spacing = j["grid"].value("log_spacing", true);
  }
  if (j.contains("calibration_grid")) {
    cfg.calibration_grid.delta = j["calibration_grid"].value("delta", 1e-2);
    cfg.calibration_grid.points_per_axis = j["calibration_grid"].value("points_per_axis", 7);
    cfg.calibration_grid.log_spacing = j["calibration_grid"].value("log_spacing", true);
  }
  if (j.contains("alpha_list")) cfg.alpha_list = j["alpha_list"].get<std::vector<double>>();
  if (j.contains("seeds")) cfg.seeds = j["seeds"].get<std::vector<std::uint64_t>>();
  if (cfg.seeds.empty()) cfg.seeds = {12345};
  cfg.tol = j.value("tol", 1e-6);
  cfg.quad_nodes = j.value("quad_nodes", 160);
  cfg.mc_samples = j.value("mc_samples", 2'000'000LL);
  cfg.psi_mc_samples = j.value("psi_mc_samples", 8'000'000LL);
  cfg.inject_non_invariant = j.value("inject_non_invariant", false);
  cfg.num_points = j.value("num_points", 50);
  if (j.contains("divergence")) cfg.divergence = j["divergence"];

  const double am = cfg.effective_a_m();
  if (j.contains("test_functions")) {
    for (const json& f : j["test_functions"]) {
      TestFunctionSpec spec{.family = TestFunctionSpec::Family::power_ratio,
                            .degree = f.value("degree", 2),
                            .weights = f.value("weights", std::vector<double>{}),
                            .epsilon = f.value("epsilon", -1.0),
                            .shape = cfg.shape,
                            .a_m = am};
      const std::string family = f.value("family", "power_ratio");
      if (family == "power_ratio")
        spec.family = TestFunctionSpec::Family::power_ratio;
      else if (family == "tuple_norm_mix")
        spec.family = TestFunctionSpec::Family::tuple_norm_mix;
      else
        throw InvalidSpec("unknown test function family: " + family);
      cfg.funcs.push_back(spec);
    }
  } else {
    cfg.funcs = {{TestFunctionSpec::Family::power_ratio, 2, {}, -1.0, cfg.shape, am},
                 {TestFunctionSpec::Family::power_ratio, 3, {}, -1.0, cfg.shape, am},
                 {TestFunctionSpec::Family::tuple_norm_mix, 2, {1.0}, -1.0, cfg.shape, am}};
  }
  return cfg;
}

// Generate, calibrate (epsilon < 0 in the spec means "auto"), and
// sup-normalize the configured family.
std::vector<std::pair<std::string, ScalarField>> build_test_functions(const RunConfig& cfg) {
  const MetricSpec metric = MetricSpec::fubini_study(cfg.shape, cfg.effective_a_m());
  std::vector<std::pair<std::string, ScalarField>> out;
  for (std::size_t i = 0; i < cfg.funcs.size(); ++i) {
    TestFunctionSpec spec = cfg.funcs[i];
    const ScalarField profile = base_profile(spec);
    double eps = spec.epsilon;
    if (eps < 0.0)
      eps = 0.5 * calibrate_admissible(profile, metric, cfg.calibration_grid);
    spec.epsilon = eps;
    const ScalarField raw = make_test_function(spec);
    const NormalizedField norm = normalize_sup(raw, cfg.shape, cfg.grid);
    std::ostringstream name;
    name << "f" << i << "_"
         << (spec.family == TestFunctionSpec::Family::power_ratio ? "power_ratio" : "tuple_norm_mix")
         << "_eps" << std::setprecision(6) << eps;
    out.emplace_back(name.str(), norm.field);
  }
  if (cfg.inject_non_invariant) {
    // negative control: not G-invariant and far below the envelope at [1,..,1]
    const double a = cfg.effective_a_m();
    const double drop = 2.0 * a * std::log(cfg.shape.m + 1.0);
    out.emplace_back("injected_non_invariant", ScalarField([drop](const ChartPoint& p) {
                       return -drop * p.affine[0].real();
                     }));
  }
  return out;
}

int cmd_envelope_verify(const RunConfig& cfg, const std::string& out_prefix) {
  const double am = cfg.effective_a_m();
  const auto funcs = build_test_functions(cfg);

  std::vector<EnvelopeReport> reports(
      funcs.size(), EnvelopeReport{0.0, {}, 0, 0, cfg.grid, cfg.shape});
  std::vector<double> center(funcs.size());
  std::vector<double> inv_dev(funcs.size());

  // one verification job per function, capped by SYMENV_THREADS
  const int workers = std::min<int>(thread_count(), static_cast<int>(funcs.size()));
  std::vector<std::thread> pool;
  std::atomic<std::size_t> next{0};
  auto work = [&]() {
    for (std::size_t i = next.fetch_add(1); i < funcs.size(); i = next.fetch_add(1)) {
      reports[i] = verify_envelope(funcs[i].second, cfg.shape, am, cfg.grid, 1e-7);
      center[i] = verify_center_bound(funcs[i].second, cfg.shape, am);
      CVector probe = CVector::Constant(cfg.shape.m + 1, Complex(1.0, 0.0));
      for (int c = 0; c <= cfg.shape.m; ++c) probe[c] = Complex(1.0, 0.1 * (c + 1));
      inv_dev[i] =
          check_invariance(funcs[i].second, ProjectivePoint(probe, cfg.shape), 64, cfg.seeds[0]);
    }
  };
  for (int w = 0; w < workers; ++w) pool.emplace_back(work);
  for (auto& th : pool) th.join();

  bool pass = true;
  json jfuncs = json::array();
  CsvWriter csv(out_prefix + ".csv");
  csv.meta("subcommand", "envelope-verify");
  csv.meta("shape", "n=" + std::to_string(cfg.shape.n) + ",k=" + std::to_string(cfg.shape.k));
  csv.meta("a_m", CsvWriter::cell(am));
  csv.row({"function", "min_gap", "argmin", "violations", "center_gap", "invariance_dev"});
  for (std::size_t i = 0; i < funcs.size(); ++i) {
    const EnvelopeReport& r = reports[i];
    const bool ok = r.min_gap >= -cfg.tol && r.monotone_violations == 0 &&
                    center[i] >= -cfg.tol && inv_dev[i] <= 1e-8;
    pass = pass && ok;
    std::ostringstream argmin;
    for (std::size_t a = 0; a < r.argmin.size(); ++a)
      argmin << (a ? ";" : "") << std::setprecision(17) << r.argmin[a];
    csv.row({funcs[i].first, CsvWriter::cell(r.min_gap), argmin.str(),
             CsvWriter::cell(r.monotone_violations), CsvWriter::cell(center[i]),
             CsvWriter::cell(inv_dev[i])});
    json jf = to_json(r);
    jf["function"] = funcs[i].first;
    jf["center_gap"] = center[i];
    jf["invariance_deviation"] = inv_dev[i];
    jf["pass"] = ok;
    jfuncs.push_back(jf);
  }
  std::ofstream(out_prefix + ".json") << json{{"subcommand", "envelope-verify"},
                                              {"a_m", am},
                                              {"tol", cfg.tol},
                                              {"functions", jfuncs},
                                              {"pass", pass}}
                                             .dump(2)
                                      << "\n";
  return pass ? kExitPass : kExitVerificationFailure;
}

int cmd_tian(const RunConfig& cfg, const std::string& out_prefix) {
  const int m = cfg.shape.m;
  std::vector<double> alphas = cfg.alpha_list;
  if (alphas.empty()) alphas = {0.25, 0.5, 0.75};
  const auto funcs = build_test_functions(cfg);

  bool pass = true;
  CsvWriter csv(out_prefix + ".csv");
  csv.meta("subcommand", "tian");
  csv.meta("m", CsvWriter::cell(m));
  csv.meta("seed", CsvWriter::cell(cfg.seeds[0]));
  csv.row({"alpha", "m", "quad", "oracle", "ratio", "function", "mc_value", "mc_stderr",
           "dominated"});
  json jrows = json::array();
  for (double alpha : alphas) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw InvalidSpec("convergence alphas must lie in (0,1)");
    const IntegralEstimate quad =
        tian_psi_integral(alpha, m, cfg.quad_nodes, cfg.psi_mc_samples, cfg.seeds[0]);
    const double oracle = dirichlet_oracle(alpha, m);
    const double ratio = quad.value / oracle;
    const double ratio_tol =
        quad.method == IntegralEstimate::Method::monte_carlo ? 1e-2 : 1e-4;
    pass = pass && std::abs(ratio - 1.0) < ratio_tol;
    csv.row({CsvWriter::cell(alpha), CsvWriter::cell(m), CsvWriter::cell(quad.value),
             CsvWriter::cell(oracle), CsvWriter::cell(ratio), "psi", "", "", ""});
    jrows.push_back({{"alpha", alpha},
                     {"quad", to_json(quad, alpha, m)},
                     {"oracle", oracle},
                     {"ratio", ratio}});
    for (const auto& [name, f] : funcs) {
      const IntegralEstimate mc = tian_mc_integral(f, alpha, m, cfg.mc_samples, cfg.seeds[0],
                                                   cfg.shape);
      // Theorem-1 domination: exp(-alpha phi) <= exp(-alpha psi) pointwise
      const bool dominated =
          mc.value <= quad.value + 3.0 * (mc.abs_error_estimate + quad.abs_error_estimate);
      pass = pass && dominated;
      csv.row({CsvWriter::cell(alpha), CsvWriter::cell(m), CsvWriter::cell(quad.value),
               CsvWriter::cell(oracle), CsvWriter::cell(ratio), name, CsvWriter::cell(mc.value),
               CsvWriter::cell(mc.abs_error_estimate), dominated ? "1" : "0"});
      jrows.push_back({{"alpha", alpha},
                       {"function", name},
                       {"mc", to_json(mc, alpha, m)},
                       {"bound", quad.value},
                       {"dominated", dominated}});
    }
  }

  json jdiv;
  if (!cfg.divergence.is_null()) {
    const double alpha = cfg.divergence.value("alpha", 1.0);
    const std::vector<double> cutoffs =
        cfg.divergence.value("cutoffs", std::vector<double>{10.0, 100.0, 1000.0});
    const auto sweep = divergence_sweep(alpha, m, cutoffs);
    CsvWriter dcsv(out_prefix + ".divergence.csv");
    dcsv.meta("subcommand", "tian-divergence");
    dcsv.meta("alpha", CsvWriter::cell(alpha));
    dcsv.row({"cutoff", "partial_integral"});
    jdiv = json::array();
    double prev = 0.0;
    for (const auto& [R, val] : sweep) {
      dcsv.row({CsvWriter::cell(R), CsvWriter::cell(val)});
      jdiv.push_back({{"cutoff", R}, {"partial_integral", val}});
      pass = pass && val > prev;
      prev = val;
    }
  }

  json jout = {{"subcommand", "tian"}, {"m", m}, {"rows", jrows}, {"pass", pass}};
  if (!jdiv.is_null()) jout["divergence"] = jdiv;
  std::ofstream(out_prefix + ".json") << jout.dump(2) << "\n";
  return pass ? kExitPass : kExitVerificationFailure;
}

int cmd_gm_check(const RunConfig& cfg, const std::string& out_prefix) {
  const TupleShape& s = cfg.shape;
  std::mt19937_64 rng(cfg.seeds[0]);
  auto uniform = [&rng](double lo, double hi) {
    return lo + (hi - lo) * (static_cast<double>(rng() >> 11) * 0x1.0p-53);
  };

  const ScalarField psi_m = psi_M_chart_field();
  double max_det_err = 0.0, max_hess_err = 0.0;
  int checked = 0, skipped = 0;
  CsvWriter csv(out_prefix + ".csv");
  csv.meta("subcommand", "gm-check");
  csv.meta("shape", "n=" + std::to_string(s.n) + ",k=" + std::to_string(s.k));
  csv.meta("seed", CsvWriter::cell(cfg.seeds[0]));
  csv.row({"point", "det_formula", "det_numeric", "det_rel_err", "hessian_rel_err", "skipped"});
  for (int i = 0; i < cfg.num_points; ++i) {
    CVector aff(s.m);
    for (int c = 0; c < s.m; ++c) aff[c] = Complex(uniform(-1.0, 1.0), uniform(-1.0, 1.0));
    const ChartPoint p(0, aff, s);
    // skip near-degenerate tuples and near-zero coordinates; the formulas and
    // the finite-difference stencils blow up there
    bool degenerate = false;
    {
      std::vector<double> norms(s.k, 0.0);
      norms[0] = 1.0;
      for (int c = 1; c <= s.m; ++c) norms[s.tuple_of(c)] += std::norm(aff[c - 1]);
      for (int h = 1; h < s.k; ++h) degenerate = degenerate || norms[h] < 1e-2;
      for (int c = 0; c < s.m; ++c) degenerate = degenerate || std::abs(aff[c]) < 0.2;
    }
    if (degenerate) {
      ++skipped;
      csv.row({CsvWriter::cell(i), "", "", "", "", "1"});
      continue;
    }
    const double det_formula = gM_det_formula(p);
    const HermitianForm g = gM_metric(p);
    const double det_numeric = g.entries().determinant().real();
    const double det_err = std::abs(det_numeric / det_formula - 1.0);

    const HermitianForm hpsi = complex_hessian(psi_m, p);
    const double hess_err = (hpsi.entries() + g.entries()).norm() / g.entries().norm();

    max_det_err = std::max(max_det_err, det_err);
    max_hess_err = std::max(max_hess_err, hess_err);
    ++checked;
    csv.row({CsvWriter::cell(i), CsvWriter::cell(det_formula), CsvWriter::cell(det_numeric),
             CsvWriter::cell(det_err), CsvWriter::cell(hess_err), "0"});
  }
  const bool pass = checked > 0 && max_det_err < 1e-5 && max_hess_err < 1e-5;
  std::ofstream(out_prefix + ".json") << json{{"subcommand", "gm-check"},
                                              {"checked", checked},
                                              {"skipped", skipped},
                                              {"max_det_rel_err", max_det_err},
                                              {"max_hessian_rel_err", max_hess_err},
                                              {"pass", pass}}
                                             .dump(2)
                                      << "\n";
  return pass ? kExitPass : kExitVerificationFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical verification campaigns for symmetric envelopes on P_m(C)"};
  app.require_subcommand(1);

  std::string config_path, out_prefix;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "JSON config file")->required();
    sub->add_option("--out", out_prefix, "output path prefix (.csv/.json appended)")->required();
  };
  CLI::App* envelope = app.add_subcommand("envelope-verify", "check phi >= psi on a grid");
  CLI::App* tian = app.add_subcommand("tian", "quadrature/Monte Carlo integral checks");
  CLI::App* gm = app.add_subcommand("gm-check", "g^M determinant and Hessian cross-checks");
  add_common(envelope);
  add_common(tian);
  add_common(gm);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitPass : kExitConfigError;  // --help is not an error
  }

  try {
    const RunConfig cfg = parse_config(config_path);
    if (envelope->parsed()) return cmd_envelope_verify(cfg, out_prefix);
    if (tian->parsed()) return cmd_tian(cfg, out_prefix);
    return cmd_gm_check(cfg, out_prefix);
  } catch (const InvalidSpec& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfigError;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitVerificationFailure;
  }
}
