#include "hardy/cli.hpp"

#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "hardy/acceptance.hpp"
#include "hardy/divisor.hpp"
#include "hardy/errors.hpp"
#include "hardy/explicit_formula.hpp"
#include "hardy/expsum.hpp"
#include "hardy/quadrature.hpp"
#include "hardy/saddle.hpp"
#include "hardy/zeta.hpp"

namespace hardy {

namespace {

using nlohmann::json;

std::string utc_now() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t tt = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&tt, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

// A tolerance or assertion failure after output was produced.
struct Failure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

class Outputs {
 public:
  Outputs(std::string command, std::string csv, std::string json_path)
      : command_(std::move(command)), csv_path_(std::move(csv)), json_path_(std::move(json_path)),
        started_(utc_now()) {}

  void param(const std::string& key, json value) { params_[key] = std::move(value); }
  void csv_header(const std::string& h) { csv_ << h << "\n"; }
  void csv_row(const std::string& r) { csv_ << r << "\n"; }
  void csv_raw(const std::string& block) { csv_ << block; }
  json& data() { return data_; }
  void calibration(const Calibration& cal) { calibration_ = cal.to_map(); }
  void extra_output(const std::string& path) { outputs_.push_back(path); }

  void fail_marker(const std::string& message) {
    std::string clean = message;
    for (char& ch : clean) {
      if (ch == '\n' || ch == ',') ch = ' ';
    }
    csv_ << "FAILED," << clean << "\n";
    data_["failed"] = message;
  }

  void flush() {
    std::vector<std::string> written = outputs_;
    if (!csv_path_.empty()) {
      write_file(csv_path_, csv_.str());
      written.push_back(csv_path_);
    }
    if (!json_path_.empty()) {
      write_file(json_path_, data_.dump(2) + "\n");
      written.push_back(json_path_);
    }
    if (written.empty()) return;
    json manifest;
    manifest["command"] = command_;
    manifest["parameters"] = params_;
    manifest["tool_version"] = HARDY_VERSION;
    manifest["started"] = started_;
    manifest["finished"] = utc_now();
    manifest["outputs"] = written;
    manifest["calibration_constants"] = calibration_;
    write_file(written.front() + ".manifest.json", manifest.dump(2) + "\n");
  }

 private:
  static void write_file(const std::string& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw ResourceError("cannot write " + path);
    f << content;
  }

  std::string command_;
  std::string csv_path_;
  std::string json_path_;
  std::string started_;
  json params_ = json::object();
  json data_ = json::object();
  std::map<std::string, double> calibration_;
  std::vector<std::string> outputs_;
  std::ostringstream csv_;
};

std::int64_t table_bound_for(std::int64_t needed) {
  std::int64_t b = 1024;
  while (b < needed) b *= 2;
  return std::min(b, kMaxSieveBound);
}

Calibration active_calibration(const std::string& path) {
  if (!path.empty()) return load_calibration(path);
  const auto def = default_calibration_path();
  std::error_code ec;
  if (std::filesystem::exists(def, ec)) return load_calibration(def);
  return {};
}

std::string num(double x) { return format_double(x); }

}  // namespace

int cli_dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Numerical checks for shifted moments of Hardy's Z-function", "hardy"};
  app.require_subcommand(1);
  app.set_version_flag("--version", HARDY_VERSION);

  std::string csv_path;
  std::string json_path;
  const auto add_outputs = [&](CLI::App* sub) {
    sub->add_option("--csv", csv_path, "write CSV rows to this path");
    sub->add_option("--json", json_path, "write a JSON summary to this path");
  };

  double t = 0.0;
  std::string method = "rs";
  auto* z_eval = app.add_subcommand("z-eval", "evaluate Hardy's Z(t)");
  z_eval->add_option("--t", t, "height")->required();
  z_eval->add_option("--method", method, "rs or oracle")->check(CLI::IsMember({"rs", "oracle"}));
  add_outputs(z_eval);

  std::int64_t n = 0;
  std::string dump_path;
  auto* sieve = app.add_subcommand("sieve", "build or load the divisor table");
  sieve->add_option("--n", n, "table bound")->required();
  sieve->add_option("--dump", dump_path, "write n,d,d3,d3_squared,d3sq_prefix rows");
  add_outputs(sieve);

  double u = 0.0;
  auto* saddle = app.add_subcommand("saddle", "solve the saddle equation");
  saddle->add_option("--n", n, "index")->required();
  saddle->add_option("--u", u, "shift")->required();
  add_outputs(saddle);

  std::string kind_name;
  int ppo = 12;
  std::string rule = "gl16";
  auto* moment = app.add_subcommand("moment", "integrate a moment of Z");
  moment->add_option("--kind", kind_name, "m1|m2shift|m3shift|m3conj|m4|abs3")
      ->required()
      ->check(CLI::IsMember({"m1", "m2shift", "m3shift", "m3conj", "m4", "abs3"}));
  moment->add_option("--t", t, "upper limit T")->required();
  moment->add_option("--u", u, "shift");
  moment->add_option("--ppo", ppo, "points per oscillation (>= 8)");
  moment->add_option("--rule", rule, "gl16 or simpson")->check(CLI::IsMember({"gl16", "simpson"}));
  add_outputs(moment);

  std::string variant = "exact";
  bool conjugate = false;
  std::string calibration_path;
  auto* compare = app.add_subcommand("compare", "compare the cubic moment with the explicit formula");
  compare->add_option("--t", t, "upper limit T")->required();
  compare->add_option("--u", u, "shift")->required();
  compare->add_option("--variant", variant, "exact or thm1")->check(CLI::IsMember({"exact", "thm1"}));
  compare->add_flag("--conjugate", conjugate, "use Z(t+U)^2 Z(t)");
  compare->add_option("--calibration", calibration_path, "calibration JSON");
  add_outputs(compare);

  double alpha = 0.0;
  std::int64_t nprime = 0;
  auto* expsum = app.add_subcommand("expsum", "evaluate S(alpha, N) and the unweighted sum");
  expsum->add_option("--n", n, "N")->required();
  expsum->add_option("--alpha", alpha, "alpha")->required();
  expsum->add_option("--nprime", nprime, "upper end N' (default 2N)");
  add_outputs(expsum);

  double a = 0.0;
  double b = 0.0;
  bool find_point = false;
  auto* msq = app.add_subcommand("msq", "mean square of S(alpha, N) over [a, b]");
  msq->add_option("--n", n, "N")->required();
  msq->add_option("--a", a, "A")->required();
  msq->add_option("--b", b, "B")->required();
  msq->add_flag("--find-point", find_point, "locate a point C with small |S(C, N)|");
  add_outputs(msq);

  std::string level = "smoke";
  bool calibrate = false;
  std::vector<int> only;
  auto* suite = app.add_subcommand("suite", "run the acceptance grid");
  suite->add_option("--level", level, "smoke or full")->check(CLI::IsMember({"smoke", "full"}));
  suite->add_flag("--calibrate", calibrate, "write measured constants to the calibration file");
  suite->add_option("--calibration", calibration_path, "calibration JSON");
  suite->add_option("--only", only, "criterion numbers to run");
  add_outputs(suite);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForVersion&) {
    out << HARDY_VERSION << "\n";
    return kExitOk;
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::Success&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "hardy: " << e.what() << "\n" << app.help();
    return kExitUsage;
  }

  CLI::App* sub = app.get_subcommands().front();
  Outputs io(sub->get_name(), csv_path, json_path);
  for (const auto* opt : sub->get_options()) {
    const std::string name = opt->get_single_name();
    if (name == "help" || name.empty() || opt->count() == 0) continue;
    const auto results = opt->results();
    io.param(name, results.size() == 1 ? json(results.front()) : json(results));
  }

  int code = kExitOk;
  try {
    if (sub == z_eval) {
      const ZMethod m = method == "rs" ? ZMethod::RiemannSiegel : ZMethod::Oracle;
      const ZEvaluation z = hardy_z(t, m);
      out << "t = " << num(z.t) << "\nZ(t) = " << num(z.z) << "\nmethod = " << method
          << "\nest_error = " << num(z.est_error) << "\n";
      io.csv_header("t,z,method,est_error");
      io.csv_row(num(z.t) + "," + num(z.z) + "," + method + "," + num(z.est_error));
      io.data() = {{"t", z.t}, {"z", z.z}, {"method", method}, {"est_error", z.est_error},
                   {"imag_residue", z.imag_residue}};
    } else if (sub == sieve) {
      const auto table = load_or_build_table(n);
      const auto total = sum_d3_squared(n, *table);
      out << "bound = " << n << "\nsum d3^2 = " << total << "\ncache = " << sieve_cache_path(n).string() << "\n";
      if (n >= 2) out << "ratio = " << num(d3_squared_ratio(n, *table)) << "\n";
      const auto rows = [&](std::ostream& o) {
        o << "n,d,d3,d3_squared,d3sq_prefix\n";
        for (std::int64_t k = 1; k <= n; ++k) {
          const std::uint64_t d3 = table->d3(k);
          o << k << "," << table->d(k) << "," << d3 << "," << d3 * d3 << "," << table->d3sq_prefix(k) << "\n";
        }
      };
      if (!dump_path.empty()) {
        std::ofstream f(dump_path);
        if (!f) throw ResourceError("cannot write " + dump_path);
        rows(f);
        io.extra_output(dump_path);
      }
      if (!csv_path.empty()) {
        std::ostringstream s;
        rows(s);
        io.csv_raw(s.str());
      }
      io.data() = {{"bound", n}, {"sum_d3_squared", total}};
    } else if (sub == saddle) {
      const SaddlePoint sp = solve_saddle(n, u);
      const auto errs = sp.expansion_errors();
      out << "n = " << sp.n << "\nU = " << num(sp.U) << "\nt_n = " << num(sp.t_n) << "\nresidual = " << num(sp.residual)
          << "\napprox1 = " << num(sp.approx1) << "\napprox2 = " << num(sp.approx2) << "\napprox3 = " << num(sp.approx3)
          << "\niterations = " << sp.iterations << "\n";
      io.csv_header("n,U,t_n,residual,approx1,approx2,approx3,err1,err2,err3");
      io.csv_row(std::to_string(sp.n) + "," + num(sp.U) + "," + num(sp.t_n) + "," + num(sp.residual) + "," +
                 num(sp.approx1) + "," + num(sp.approx2) + "," + num(sp.approx3) + "," + num(errs[0]) + "," +
                 num(errs[1]) + "," + num(errs[2]));
      io.data() = {{"n", sp.n}, {"U", sp.U}, {"t_n", sp.t_n}, {"residual", sp.residual},
                   {"approx", {sp.approx1, sp.approx2, sp.approx3}}, {"iterations", sp.iterations}};
    } else if (sub == moment) {
      QuadratureSpec spec;
      spec.points_per_oscillation = ppo;
      spec.panel_rule = rule == "gl16" ? PanelRule::GaussLegendre16 : PanelRule::AdaptiveSimpson;
      const MomentKind kind = parse_moment_kind(kind_name);
      if (kind == MomentKind::Abs3) {
        spec.rel_tol = 1e-4;
        spec.strict = false;
      }
      const MomentResult r = integrate_moment(kind, t, u, spec);
      out << "kind = " << kind_name << "\nT = " << num(r.T) << "\nU = " << num(r.U) << "\nrange = [" << num(r.a) << ", "
          << num(r.b) << "]\nvalue = " << num(r.value) << "\nest_error = " << num(r.est_error)
          << "\nevaluations = " << r.evaluations << "\ndiagnostic = " << num(r.diagnostic) << "\n";
      io.csv_header("kind,T,U,value,est_error,evaluations,diagnostic");
      io.csv_row(kind_name + "," + num(r.T) + "," + num(r.U) + "," + num(r.value) + "," + num(r.est_error) + "," +
                 std::to_string(r.evaluations) + "," + num(r.diagnostic));
      io.data() = {{"kind", kind_name},        {"T", r.T},
                   {"U", r.U},                 {"value", r.value},
                   {"est_error", r.est_error}, {"evaluations", r.evaluations},
                   {"diagnostic", r.diagnostic}, {"converged", r.converged}};
      if (!r.converged) throw Failure("quadrature tolerance not met");
    } else if (sub == compare) {
      const Calibration cal = active_calibration(calibration_path);
      io.calibration(cal);
      const auto range = summation_range(t, u);
      const auto table = load_or_build_table(table_bound_for(std::max<std::int64_t>(range.n_hi, 1)));
      const MomentComparison c = compare_theorem1(t, u, {}, *table, parse_formula_variant(variant), conjugate);
      io.csv_header(comparison_csv_header());
      io.csv_row(comparison_csv_row(c));
      out << "T = " << num(c.T) << "\nU = " << num(c.U) << "\nvariant = " << variant << (conjugate ? " (conjugate)" : "")
          << "\nlhs = " << num(c.lhs) << "\nrhs = " << num(c.rhs.real()) << " + " << num(c.rhs.imag()) << "i"
          << "\nabs_diff = " << num(c.abs_diff) << "\nnormalized = " << num(c.normalized)
          << "\nim_leak / T^(3/4) = " << num(c.im_leak / std::pow(c.T, 0.75)) << "\nn_terms = " << c.n_terms << "\n";
      io.data() = {{"T", c.T},           {"U", c.U},
                   {"variant", variant}, {"conjugate", conjugate},
                   {"lhs", c.lhs},       {"rhs_re", c.rhs.real()},
                   {"rhs_im", c.rhs.imag()}, {"abs_diff", c.abs_diff},
                   {"normalized", c.normalized}, {"n_terms", c.n_terms},
                   {"evaluations", c.evaluations}};
      if (c.normalized > cal.thm1_normalized) throw Failure("normalized difference above calibrated bound");
      if (c.im_leak / std::pow(c.T, 0.75) > cal.thm1_im_leak) throw Failure("imaginary part above calibrated bound");
    } else if (sub == expsum) {
      const std::int64_t top = nprime == 0 ? 2 * n : nprime;
      const auto table = load_or_build_table(table_bound_for(top));
      const ComplexValue s = exp_sum_d3(alpha, n, top, *table);
      const PlainExpSum p = exp_sum_plain(alpha, n, top);
      out << "N = " << n << "\nN' = " << top << "\nalpha = " << num(alpha) << "\nS = " << num(s.real()) << " + "
          << num(s.imag()) << "i\n|S| = " << num(std::abs(s)) << "\nT = " << num(p.value.real()) << " + "
          << num(p.value.imag()) << "i\n|T| |alpha| / N^(1/3) = " << num(p.normalized) << "\n";
      io.csv_header("N,Nprime,alpha,S_re,S_im,abs_S,T_re,T_im,T_normalized");
      io.csv_row(std::to_string(n) + "," + std::to_string(top) + "," + num(alpha) + "," + num(s.real()) + "," +
                 num(s.imag()) + "," + num(std::abs(s)) + "," + num(p.value.real()) + "," + num(p.value.imag()) + "," +
                 num(p.normalized));
      io.data() = {{"N", n}, {"Nprime", top}, {"alpha", alpha}, {"S_re", s.real()}, {"S_im", s.imag()},
                   {"T_re", p.value.real()}, {"T_im", p.value.imag()},
                   {"T_normalized", std::isfinite(p.normalized) ? json(p.normalized) : json()}};
    } else if (sub == msq) {
      const auto table = load_or_build_table(table_bound_for(2 * n));
      const ExpSumScan scan = scan_exp_sum(a, b, n, *table, find_point);
      io.csv_raw(scan_csv(scan));
      io.data() = json::parse(scan_summary_json(scan));
      out << "N = " << n << "\n[A, B] = [" << num(a) << ", " << num(b) << "]\nsamples = " << scan.grid.size()
          << "\nms_exact = " << num(scan.ms_exact) << "\nms_quad = " << num(scan.ms_quad)
          << "\nratio = " << num(scan.ratio) << "\n";
      if (scan.good_point) {
        out << "C = " << num(scan.good_point->C) << "\n|S(C)| = " << num(scan.good_point->magnitude)
            << "\nbound = " << num(scan.good_point->bound) << "\n";
      }
      if (std::isfinite(scan.ms_exact) && std::abs(scan.ms_exact - scan.ms_quad) > 1e-6 * scan.ms_exact) {
        throw Failure("exact and quadrature mean squares disagree");
      }
      if (scan.good_point && !scan.good_point->within_bound) throw Failure("no point below the bound on the scan");
    } else if (sub == suite) {
      const SuiteLevel lv = level == "full" ? SuiteLevel::Full : SuiteLevel::Smoke;
      const Calibration cal = calibrate ? Calibration{} : active_calibration(calibration_path);
      const AcceptanceReport report = run_acceptance(lv, cal, only);
      out << format_report(report);
      io.csv_header("criterion,check,status,detail");
      json crit = json::array();
      for (const auto& c : report.criteria) {
        json checks = json::array();
        for (const auto& ch : c.checks) {
          const std::string status = c.informational ? "info" : (ch.passed ? "pass" : (ch.known_red ? "known_fail" : "fail"));
          std::string detail = ch.detail;
          for (char& x : detail) {
            if (x == ',') x = ';';
          }
          io.csv_row(std::to_string(c.id) + "," + ch.name + "," + status + "," + detail);
          checks.push_back({{"name", ch.name}, {"status", status}, {"detail", ch.detail}});
        }
        crit.push_back({{"id", c.id}, {"title", c.title}, {"seconds", c.seconds}, {"checks", checks}});
      }
      io.data() = {{"level", level}, {"criteria", crit}, {"measured", report.measured}};
      if (calibrate) {
        const Calibration fitted = calibrate_from(report);
        const std::string path = calibration_path.empty() ? default_calibration_path().string() : calibration_path;
        save_calibration(path, fitted);
        io.calibration(fitted);
        io.extra_output(path);
        out << "calibration written to " << path << "\n";
      } else {
        io.calibration(cal);
      }
      if (report.unexpected_failures() > 0) throw Failure(std::to_string(report.unexpected_failures()) + " criteria failed");
    }
  } catch (const Failure& e) {
    err << "hardy: " << e.what() << "\n";
    io.fail_marker(e.what());
    code = kExitFailure;
  } catch (const DomainError& e) {
    err << "hardy: " << e.what() << "\n";
    io.fail_marker(e.what());
    code = kExitUsage;
  } catch (const RangeError& e) {
    err << "hardy: " << e.what() << "\n";
    io.fail_marker(e.what());
    code = kExitUsage;
  } catch (const std::exception& e) {
    err << "hardy: " << e.what() << "\n";
    io.fail_marker(e.what());
    code = kExitFailure;
  }
  try {
    io.flush();
  } catch (const std::exception& e) {
    err << "hardy: " << e.what() << "\n";
    return kExitFailure;
  }
  return code;
}

int cli_dispatch(int argc, char** argv) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return cli_dispatch(args, std::cout, std::cerr);
}

}  // namespace hardy
