// tj: validate, simulate and check triple-junction configurations.
//
// Exit codes: 0 pass, 1 check failure, 2 input error, 3 regime exit.

#include "CLI11.hpp"

#include "tj/checks.hpp"
#include "tj/config_file.hpp"
#include "tj/reports.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

namespace fs = std::filesystem;
using namespace tj;

namespace {

enum Exit { kPass = 0, kCheckFailure = 1, kInputError = 2, kRegimeExit = 3 };

struct Options {
  std::string config;
  std::string out = ".";
  std::uint64_t seed = 1;
  std::vector<std::string> tol;
  int snapshots = 0;
  std::string which;
};

TolOverrides parse_tol(const std::vector<std::string>& items) {
  TolOverrides out;
  for (const auto& item : items) {
    const auto eq = item.find('=');
    if (eq == std::string::npos || eq == 0) throw ConfigError(0, item, "--tol expects KEY=VAL");
    out[item.substr(0, eq)] = item.substr(eq + 1);
  }
  return out;
}

fs::path prepare_out(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) throw ConfigError(0, "--out", "cannot create directory " + dir);
  return dir;
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::trunc);
  if (!f) throw ConfigError(0, "--out", "cannot write " + path.string());
  f << text;
}

int cmd_validate(const Options& o) {
  const auto p = load_config(o.config, parse_tol(o.tol));
  const auto out = prepare_out(o.out);
  if (p.solver.manufactured) {
    const std::string msg = "manufactured solution: conjugation conditions hold by construction\nstatus PASS\n";
    write_file(out / "validate.txt", msg);
    std::cout << msg;
    return kPass;
  }
  const auto r = compatibility_report(p.solver);
  const std::string text = r.to_text() + "status " + (r.passed() ? "PASS" : "FAIL") + '\n';
  write_file(out / "validate.txt", text);
  std::cout << "order0 max residual " << r.order0.max_abs() << " (tol " << p.solver.order0_tol << ")\n"
            << "order1 max residual " << r.order1.max_abs() << " (tol " << p.solver.order1_tol << ")\n";
  if (!r.order0_ok) {
    for (const auto& name : r.order0.names) {
      if (r.order0.max_abs(name) > p.solver.order0_tol) {
        std::cout << "violated: " << name << " max " << r.order0.max_abs(name) << '\n';
      }
    }
  }
  std::cout << "status " << (r.passed() ? "PASS" : "FAIL") << '\n';
  return r.passed() ? kPass : kCheckFailure;
}

int cmd_simulate(const Options& o) {
  auto p = load_config(o.config, parse_tol(o.tol));
  const auto out = prepare_out(o.out);
  SolverConfig& c = p.solver;
  if (o.snapshots < 0) throw ConfigError(0, "--snapshots", "must be nonnegative");
  if (o.snapshots > 2) {
    const int steps = static_cast<int>(std::ceil(c.t_end / c.dt - 1e-9));
    c.snapshot_every = std::max(1, static_cast<int>(std::ceil(steps / double(o.snapshots - 1))));
  }
  for (const auto& entry : fs::directory_iterator(out)) {
    const auto name = entry.path().filename().string();
    if (name.rfind("snapshot_", 0) == 0) fs::remove(entry.path());
  }

  int written = 0;
  RunResult result;
  try {
    result = run(c, [&](const SolverState& s) {
      std::ofstream f(out / snapshot_filename(written++), std::ios::trunc);
      write_snapshot(f, s);
    });
  } catch (const CompatibilityError& e) {
    write_file(out / "validate.txt", e.report());
    std::cerr << e.what() << " (per-node report in " << (out / "validate.txt").string() << ")\n";
    return kCheckFailure;
  } catch (const StepRejected& e) {
    std::cerr << "step rejected after all retries: " << e.what() << '\n';
    return kCheckFailure;
  }

  std::ofstream log(out / "steps.log", std::ios::trunc);
  write_step_log_header(log);
  for (const auto& r : result.reports) write_step_log_line(log, r);

  const auto& last = result.snapshots.back();
  std::ostringstream summary;
  summary << std::setprecision(12) << "status " << (result.regime_exit ? "regime_exit" : "completed") << '\n'
          << "t " << last.t << "\nsteps " << last.steps << "\nsnapshots " << written
          << "\nenergy_increases " << result.energy_increases << '\n';
  if (result.regime_exit) summary << "message " << result.message << '\n';
  write_file(out / "summary.txt", summary.str());
  std::cout << summary.str();
  return result.regime_exit ? kRegimeExit : kPass;
}

int cmd_check(const Options& o) {
  const auto tol = parse_tol(o.tol);
  const auto p = o.config.empty() ? parse_config("", "<defaults>", tol) : load_config(o.config, tol);
  const auto out = prepare_out(o.out);
  CheckOptions opt;
  opt.seed = o.seed;
  opt.junction = p.junction;
  CheckSuite suite;
  if (o.which == "lemmas") {
    suite = check_lemmas(opt);
  } else if (o.which == "complementarity") {
    suite = check_complementarity(opt);
  } else if (o.which == "linearization") {
    suite = check_linearization(opt);
  } else if (o.which == "equivalence") {
    suite = check_equivalence(opt);
  } else {
    suite = check_extensions(opt);
  }
  const std::string text = suite.to_text();
  write_file(out / ("check_" + o.which + ".txt"), text);
  std::cout << text;
  return suite.passed() ? kPass : kCheckFailure;
}

void common_options(CLI::App* sub, Options& o) {
  sub->add_option("--out", o.out, "Output directory for reports");
  sub->add_option("--seed", o.seed, "Seed for randomized sweeps");
  sub->add_option("--tol", o.tol, "Tolerance override KEY=VAL (repeatable)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Mean-curvature motion of a triple junction of graphs"};
  app.require_subcommand(1);
  Options o;

  auto* validate = app.add_subcommand("validate", "Check the compatibility conditions of the initial data");
  validate->add_option("config", o.config, "Configuration file")->required();
  common_options(validate, o);

  auto* simulate = app.add_subcommand("simulate", "Run the free-boundary solver");
  simulate->add_option("config", o.config, "Configuration file")->required();
  simulate->add_option("--snapshots", o.snapshots, "Number of snapshots to write (first and last always)");
  common_options(simulate, o);

  auto* check = app.add_subcommand("check", "Run a property suite");
  check->add_option("which", o.which, "Suite to run")
      ->required()
      ->check(CLI::IsMember({"complementarity", "linearization", "lemmas", "equivalence", "extensions"}));
  check->add_option("config", o.config, "Configuration file (junction data, tolerances)");
  common_options(check, o);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kPass : kInputError;
  }

  try {
    if (*validate) return cmd_validate(o);
    if (*simulate) return cmd_simulate(o);
    return cmd_check(o);
  } catch (const ConfigError& e) {
    std::cerr << "input error: " << e.what() << '\n';
  } catch (const GeometryError& e) {
    std::cerr << "input error: " << e.what() << '\n';
  } catch (const DomainError& e) {
    std::cerr << "input error: " << e.what() << '\n';
  } catch (const std::invalid_argument& e) {
    std::cerr << "input error: " << e.what() << '\n';
  }
  return kInputError;
}
