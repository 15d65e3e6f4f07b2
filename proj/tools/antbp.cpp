// Command-line front end: run / sweep / check / plot over the scenario engine.
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "antbp/harness.hpp"

namespace fs = std::filesystem;
using namespace antbp;

namespace {

// relative output paths land under the env-var root when it is set
std::string resolve_out(const std::string& dir) {
  fs::path p(dir);
  if (p.is_absolute()) return dir;
  const char* root = std::getenv(kOutRootEnv);
  if (root && *root) return (fs::path(root) / p).string();
  return dir;
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!cur.empty() || !out.empty()) out.push_back(cur);
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"time-slotted simulator for ant-backpressure routing"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);

  std::string run_config, run_out;
  uint64_t run_seed = 0;
  bool run_debug = false;
  auto* run_cmd = app.add_subcommand("run", "run every instance of a scenario config");
  run_cmd->add_option("config", run_config, "scenario config file")->required();
  run_cmd->add_option("--out", run_out, "override the configured out_dir");
  auto* run_seed_opt = run_cmd->add_option("--seed", run_seed, "override the master seed");
  run_cmd->add_flag("--debug-checks", run_debug, "enable internal invariant checks");

  std::string sweep_config, sweep_axis, sweep_values, sweep_out;
  uint64_t sweep_seed = 0;
  int sweep_seeds = 1;
  auto* sweep_cmd = app.add_subcommand("sweep", "sweep one config key across values");
  sweep_cmd->add_option("config", sweep_config, "base scenario config file")->required();
  sweep_cmd->add_option("--axis", sweep_axis, "config key to sweep, e.g. traffic.bursty_load")
      ->required();
  sweep_cmd->add_option("--values", sweep_values, "comma-separated axis values")->required();
  sweep_cmd->add_option("--seeds", sweep_seeds, "replications per value");
  sweep_cmd->add_option("--out", sweep_out, "override the configured out_dir");
  auto* sweep_seed_opt =
      sweep_cmd->add_option("--seed", sweep_seed, "override the master seed");

  std::string check_dir;
  auto* check_cmd =
      app.add_subcommand("check", "re-run a run directory and audit its files");
  check_cmd->add_option("run_dir", check_dir, "directory holding manifest.ini")->required();

  std::string plot_csv, plot_out;
  auto* plot_cmd = app.add_subcommand("plot", "redraw charts from a sweep summary CSV");
  plot_cmd->add_option("summary", plot_csv, "sweep_summary.csv path")->required();
  plot_cmd->add_option("--out", plot_out, "chart output directory (default: alongside)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (*run_cmd) {
      ScenarioConfig cfg = load_config(run_config);
      if (run_seed_opt->count()) cfg.seed = run_seed;
      if (!run_out.empty()) cfg.out_dir = run_out;
      const std::string out = resolve_out(cfg.out_dir);
      for (int ti = 0; ti < cfg.topologies; ++ti)
        for (int fi = 0; fi < cfg.flows_per_topology; ++fi) {
          RunResult res = run_scenario(cfg, ti, fi, run_debug);
          std::string dir = out + "/t" + std::to_string(ti) + "_f" + std::to_string(fi);
          emit_outputs(dir, cfg, res, ti, fi);
          std::printf(
              "%s t%d f%d: injected=%ld delivered=%ld delivery=%.4f latency=%.2f "
              "goodput=%.3f stable=%s -> %s\n",
              scheme_name(cfg.scheme), ti, fi, res.metrics.injected,
              res.metrics.delivered, res.metrics.delivery, res.metrics.latency_mean,
              res.metrics.goodput, res.metrics.stable ? "yes" : "no", dir.c_str());
        }
      return 0;
    }
    if (*sweep_cmd) {
      ScenarioConfig cfg = load_config(sweep_config);
      if (sweep_seed_opt->count()) cfg.seed = sweep_seed;
      if (!sweep_out.empty()) cfg.out_dir = sweep_out;
      std::vector<std::string> values = split_list(sweep_values);
      if (values.empty()) throw ConfigError("sweep needs at least one axis value");
      SweepTable table = run_sweep(cfg, sweep_axis, values, sweep_seeds);
      const std::string out = resolve_out(cfg.out_dir);
      emit_sweep_outputs(out, cfg, table);
      int failed = 0;
      for (const SweepCell& c : table.cells)
        if (!c.ok) {
          ++failed;
          std::fprintf(stderr, "cell %s=%s seed %d failed: %s\n", sweep_axis.c_str(),
                       c.value.c_str(), c.seed_index, c.error.c_str());
        }
      std::printf("sweep %s over %zu values x %d seeds: %d ok, %d failed -> %s\n",
                  sweep_axis.c_str(), values.size(), sweep_seeds,
                  int(table.cells.size()) - failed, failed, out.c_str());
      return failed == 0 ? 0 : 2;
    }
    if (*check_cmd) {
      std::vector<std::string> bad = audit_run_dir(check_dir);
      if (bad.empty()) {
        std::printf("audit clean: %s\n", check_dir.c_str());
        return 0;
      }
      for (const std::string& name : bad)
        std::printf("audit mismatch: %s/%s\n", check_dir.c_str(), name.c_str());
      return 2;
    }
    if (*plot_cmd) {
      std::string out = plot_out;
      if (out.empty()) {
        out = fs::path(plot_csv).parent_path().string();
        if (out.empty()) out = ".";
      }
      plot_from_summary(plot_csv, out);
      std::printf("charts written to %s\n", out.c_str());
      return 0;
    }
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 0;
}
