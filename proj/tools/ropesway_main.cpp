// Command-line front end: simulate / verify / sweep.
//
// Config resolution order (later wins): scenario preset, --config file,
// individual flags. Output directory: --out, then out.dir from the file,
// then $ROPESWAY_OUT, then ./out.
//
// Exit codes: 0 ok, 2 config error, 3 integration failure, 4 I/O failure,
// 5 verification failure.

#include <CLI11.hpp>

#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "ropesway/csv_io.hpp"
#include "ropesway/errors.hpp"
#include "ropesway/run_config.hpp"
#include "ropesway/simulation.hpp"
#include "ropesway/svg_plot.hpp"
#include "ropesway/verify.hpp"

namespace {

using namespace ropesway;

struct CommonFlags {
  std::string scenario;
  std::string controller;
  int modes = 0;
  double dt = 0.0;
  std::optional<std::uint64_t> seed;
  std::string out_dir;
  std::string config_path;
};

void add_common(CLI::App* cmd, CommonFlags& f) {
  cmd->add_option("--scenario", f.scenario, "impulse | sustained | custom");
  cmd->add_option("--controller", f.controller,
                  "none | passive | thm1 | thm2");
  cmd->add_option("--modes", f.modes, "number of retained modes");
  cmd->add_option("--dt", f.dt, "integrator step [s]");
  cmd->add_option("--seed", f.seed, "sensor noise seed");
  cmd->add_option("--out", f.out_dir, "output directory");
  cmd->add_option("--config", f.config_path, "key=value config file");
}

// Builds the resolved config: file content plus one override line per flag,
// parsed in one pass so the usual precedence (flags last) falls out of the
// parser's ordering rules.
RunConfig resolve_config(const CommonFlags& f) {
  std::string text;
  if (!f.config_path.empty()) {
    text = read_text_file(f.config_path);
    if (!text.empty() && text.back() != '\n') text += '\n';
  }
  std::ostringstream overrides;
  if (!f.scenario.empty()) overrides << "scenario=" << f.scenario << "\n";
  if (!f.controller.empty())
    overrides << "controller.mode=" << f.controller << "\n";
  if (f.modes > 0) overrides << "modes.count=" << f.modes << "\n";
  if (f.dt > 0.0) overrides << "sim.dt=" << f.dt << "\n";
  if (f.seed) overrides << "sensors.seed=" << *f.seed << "\n";
  if (!f.out_dir.empty()) overrides << "out.dir=" << f.out_dir << "\n";
  text += overrides.str();

  RunConfig cfg = parse_config_text(text, RunConfig::preset("impulse"));
  if (cfg.out_dir.empty()) {
    if (const char* env = std::getenv("ROPESWAY_OUT")) cfg.out_dir = env;
    if (cfg.out_dir.empty()) cfg.out_dir = "out";
  }
  validate_config(cfg);
  return cfg;
}

void write_run_artifacts(const RunConfig& cfg, const SimResult& res,
                         const std::string& dir) {
  write_text_atomic(dir + "/result.csv", sim_result_csv(res));
  write_text_atomic(dir + "/summary.txt", summary_text(res));
  write_text_atomic(dir + "/config_echo.cfg", emit_config(cfg));

  PlotSeries sway{"sway at probe [m]", "#1f6fb2", res.t, res.sway_probe};
  write_text_atomic(dir + "/sway.svg",
                    line_chart_svg("Rope sway at probe station", "t [s]",
                                   "sway [m]", {sway}));

  PlotSeries cmd{"U commanded", "#b2551f", res.t, res.u_cmd};
  PlotSeries app{"U applied", "#1f6fb2", res.t, res.u_app};
  write_text_atomic(dir + "/control.svg",
                    line_chart_svg("Semi-active damping coefficient", "t [s]",
                                   "U [N s/m]", {cmd, app}));
}

int cmd_simulate(const CommonFlags& flags) {
  RunConfig cfg = resolve_config(flags);
  SimResult res = run_scenario(cfg.spec);
  write_run_artifacts(cfg, res, cfg.out_dir);
  std::cout << summary_text(res);
  return static_cast<int>(ExitCode::ok);
}

int cmd_verify(const CommonFlags& flags, const VerifyOptions& base) {
  VerifyOptions opts = base;
  if (flags.dt > 0.0) opts.dt = flags.dt;
  if (flags.seed) opts.seed = *flags.seed;

  auto results = run_verification(opts);
  std::string report = verification_report(results);
  std::cout << report;
  if (!flags.out_dir.empty())
    write_text_atomic(flags.out_dir + "/verify_report.txt", report);
  return all_passed(results) ? static_cast<int>(ExitCode::ok)
                             : static_cast<int>(ExitCode::verify);
}

int cmd_sweep(const CommonFlags& flags, const std::string& key,
              const std::vector<std::string>& values, int jobs) {
  if (values.empty()) throw ConfigError("sweep needs at least one --values entry");
  RunConfig base = resolve_config(flags);
  const std::string root = base.out_dir;

  struct Row {
    std::string value, dir, error;
    SimSummary summary;
    bool ok = false;
  };
  std::vector<Row> rows(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    rows[i].value = values[i];
    rows[i].dir = root + "/" + key + "=" + values[i];
  }

  // Each run is independent and owns its subdirectory.
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next.fetch_add(1); i < rows.size();
         i = next.fetch_add(1)) {
      Row& row = rows[i];
      try {
        RunConfig cfg = parse_config_text(
            key + "=" + row.value + "\nout.dir=" + row.dir + "\n", base);
        validate_config(cfg);
        SimResult res = run_scenario(cfg.spec);
        write_run_artifacts(cfg, res, cfg.out_dir);
        row.summary = res.summary;
        row.ok = true;
      } catch (const std::exception& e) {
        row.error = e.what();
      }
    }
  };
  const int n_workers = std::max(
      1, std::min<int>(jobs > 0 ? jobs
                                : static_cast<int>(
                                      std::thread::hardware_concurrency()),
                       static_cast<int>(rows.size())));
  std::vector<std::thread> pool;
  for (int w = 0; w < n_workers; ++w) pool.emplace_back(worker);
  for (auto& th : pool) th.join();

  std::ostringstream csv;
  csv << key << ",peak_sway,steady_max,u_applied_max,v_final,status\n";
  bool all_ok = true;
  for (const Row& row : rows) {
    char buf[160];
    if (row.ok) {
      std::snprintf(buf, sizeof buf, ",%.17g,%.17g,%.17g,%.17g,ok\n",
                    row.summary.peak_sway, row.summary.steady_max,
                    row.summary.u_applied_max, row.summary.v_final);
      csv << row.value << buf;
    } else {
      all_ok = false;
      csv << row.value << ",,,,,failed: " << row.error << "\n";
    }
  }
  write_text_atomic(root + "/sweep_summary.csv", csv.str());
  std::cout << csv.str();
  if (!all_ok) throw ConfigError("one or more sweep runs failed");
  return static_cast<int>(ExitCode::ok);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Elevator rope sway simulation and semi-active damper control"};
  app.require_subcommand(1);

  CommonFlags sim_flags, ver_flags, sweep_flags;
  VerifyOptions ver_opts;
  std::string sweep_key;
  std::vector<std::string> sweep_values;
  int sweep_jobs = 0;

  CLI::App* simulate = app.add_subcommand("simulate", "run one scenario");
  add_common(simulate, sim_flags);

  CLI::App* verify = app.add_subcommand("verify", "run the acceptance checks");
  add_common(verify, ver_flags);
  verify->add_option("--cells", ver_opts.fd_cells,
                     "finite-difference grid cells");
  verify->add_option("--basis-scale", ver_opts.basis_scale,
                     "scale the mode shapes (fault injection)");

  CLI::App* sweep = app.add_subcommand("sweep", "run one config key over values");
  add_common(sweep, sweep_flags);
  sweep->add_option("--key", sweep_key, "config key to vary")->required();
  sweep->add_option("--values", sweep_values, "comma-separated values")
      ->required()
      ->delimiter(',');
  sweep->add_option("--jobs", sweep_jobs, "worker threads (default: hardware)");

  try {
    app.parse(argc, argv);
    if (simulate->parsed()) return cmd_simulate(sim_flags);
    if (verify->parsed()) return cmd_verify(ver_flags, ver_opts);
    return cmd_sweep(sweep_flags, sweep_key, sweep_values, sweep_jobs);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);  // CLI11 prints help/usage text itself
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return static_cast<int>(ExitCode::config);
  } catch (const DomainError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return static_cast<int>(ExitCode::config);
  } catch (const IntegrationError& e) {
    std::cerr << "integration error: " << e.what() << "\n";
    return static_cast<int>(ExitCode::integration);
  } catch (const IoError& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return static_cast<int>(ExitCode::io);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
