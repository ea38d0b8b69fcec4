// Command-line front end: run, compare, sweep, gradcheck, oracle.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "gvfd/agent.hpp"
#include "gvfd/errors.hpp"
#include "gvfd/experiment.hpp"
#include "gvfd/gradcheck.hpp"
#include "gvfd/gvf.hpp"
#include "gvfd/run_config.hpp"
#include "gvfd/svg_plot.hpp"

namespace fs = std::filesystem;
using namespace gvfd;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitRuntime = 1;
constexpr int kExitConfig = 2;

// Per-key override flags shared by run, compare and sweep.
struct Overrides {
  std::map<std::string, std::optional<std::string>> values;
  std::optional<std::string> out;
  int workers = 1;

  void attach(CLI::App& cmd, bool with_agent) {
    for (const auto& key : config_keys()) {
      if (key == "agent" && !with_agent) continue;
      cmd.add_option("--" + key, values[key], "Override config key '" + key + "'");
    }
    cmd.add_option("--out", out, "Output directory (same as --out_dir)");
    cmd.add_option("--trials-parallel", workers, "Trials run concurrently")
        ->check(CLI::PositiveNumber);
  }

  RunConfig load(const std::optional<std::string>& path,
                 const std::optional<std::string>& agent = std::nullopt) const {
    std::optional<std::string> agent_override = agent;
    if (auto it = values.find("agent"); it != values.end() && it->second) {
      agent_override = it->second;
    }
    RunConfig cfg = path ? load_config(*path, agent_override) : parse_config("", agent_override);
    for (const auto& [key, v] : values) {
      if (v && key != "agent") set_key(cfg, key, *v);
    }
    if (out) set_key(cfg, "out_dir", *out);
    validate(cfg);
    return cfg;
  }
};

void write_text(const fs::path& path, const std::string& s) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + path.string());
  f << s;
}

void report_failures(const BatchResult& b) {
  for (const auto& t : b.trials) {
    if (t.failed) {
      std::cerr << fmt::format("{}: trial {} (seed {}) failed at step {}: {}\n", b.summary.label,
                               t.trial, t.seed, t.fail_step, t.fail_message);
    }
  }
}

int cmd_run(const std::optional<std::string>& config, const Overrides& ov) {
  const RunConfig cfg = ov.load(config);
  BatchResult b = run_batch(cfg, ov.workers);
  fs::create_directories(cfg.out_dir);
  write_batch_files(cfg.out_dir, {b});
  write_text(fs::path(cfg.out_dir) / "config.cfg", dump_config(cfg));
  report_failures(b);
  std::cout << summary_text(b.summary);
  if (!b.ok()) {
    std::cerr << "error: every trial failed\n";
    return kExitRuntime;
  }
  return kExitOk;
}

int cmd_compare(const std::vector<std::string>& configs, const Overrides& ov) {
  std::vector<RunConfig> cfgs;
  if (configs.empty()) {
    for (const char* agent : {"obs-only", "expert", "meta"}) cfgs.push_back(ov.load(std::nullopt, agent));
  } else {
    if (configs.size() != 3) throw ConfigError("configs", "compare takes exactly three config files");
    for (const auto& path : configs) cfgs.push_back(ov.load(path));
  }
  const std::string out_dir = cfgs.front().out_dir;

  std::vector<BatchResult> batches;
  std::map<std::string, int> seen;
  bool ok = true;
  for (const auto& cfg : cfgs) {
    std::string label(to_string(cfg.agent));
    if (const int n = seen[label]++; n > 0) label += fmt::format("-{}", n + 1);
    batches.push_back(run_batch(cfg, ov.workers, label));
    report_failures(batches.back());
    ok = ok && batches.back().ok();
    std::cout << summary_text(batches.back().summary);
  }

  write_batch_files(out_dir, batches);
  std::vector<BatchSummary> summaries;
  for (const auto& b : batches) summaries.push_back(b.summary);
  write_text(fs::path(out_dir) / "compare.csv", comparison_csv(summaries));
  write_text(fs::path(out_dir) / "compare.svg", comparison_svg(summaries));
  if (!ok) {
    std::cerr << "error: at least one batch had no successful trial\n";
    return kExitRuntime;
  }
  return kExitOk;
}

int cmd_sweep(const std::optional<std::string>& config, const std::vector<std::string>& grid_args,
              const Overrides& ov) {
  const RunConfig base = ov.load(config);
  SweepGrid grid;
  for (const auto& arg : grid_args) {
    const auto eq = arg.find('=');
    if (eq == std::string::npos) throw ConfigError(arg, "grid entries look like key=v1,v2");
    std::vector<std::string> values;
    std::string rest = arg.substr(eq + 1);
    for (std::size_t pos = 0;;) {
      const auto comma = rest.find(',', pos);
      values.push_back(rest.substr(pos, comma - pos));
      if (comma == std::string::npos) break;
      pos = comma + 1;
    }
    const std::string key = arg.substr(0, eq);
    const auto& keys = config_keys();
    if (std::find(keys.begin(), keys.end(), key) == keys.end()) {
      throw ConfigError(key, "unknown sweep parameter");
    }
    grid.emplace_back(key, std::move(values));
  }
  const auto results = run_sweep(grid, base, ov.workers);
  write_batch_files(base.out_dir, results);
  for (const auto& b : results) {
    report_failures(b);
    std::cout << summary_text(b.summary);
  }
  return kExitOk;
}

int cmd_gradcheck(int n, std::uint64_t seed) {
  const GradcheckReport rep = run_gradcheck(n, seed);
  constexpr double kTolerance = 1e-4;
  std::cout << fmt::format("gradcheck: {} contexts, seed {}, max relative error {:.3e} (case {}), tolerance {:.0e}\n",
                           rep.n, seed, rep.max_rel_error, rep.worst_case, kTolerance);
  const bool pass = rep.max_rel_error <= kTolerance;
  std::cout << (pass ? "PASS\n" : "FAIL\n");
  return pass ? kExitOk : kExitRuntime;
}

int cmd_oracle() {
  std::array<std::array<double, kNumPhases>, kNumGvfs> v{};
  for (int i = 0; i < kNumGvfs; ++i) {
    v[i] = dp_oracle(expert_target(i), expert_cumulant(i), expert_discount(i));
  }
  AgentConfig cfg;
  cfg.kind = AgentKind::expert;
  std::cout << "phase season  growth_echo no_growth_echo T(growth) T(no_growth) control_cell\n";
  for (int p = 0; p < kNumPhases; ++p) {
    const double t0 = log_transform(v[0][p]);
    const double t1 = log_transform(v[1][p]);
    const auto cell = aggregate_predictions({t0, t1}, kPredictionMemsize, cfg.cell_rule).active_index();
    std::cout << fmt::format("{:<5} {:<7} {:<11.6g} {:<14.6g} {:<9.6g} {:<12.6g} {}\n", p,
                             to_string(season_of(p)), v[0][p], v[1][p], t0, t1, cell);
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Monsoon World agents with expert and meta-learned GVF predictions"};
  app.require_subcommand(1);

  std::optional<std::string> run_config;
  Overrides run_ov;
  auto* run = app.add_subcommand("run", "Run one batch of trials");
  run->add_option("--config", run_config, "Config file (key = value lines)");
  run_ov.attach(*run, true);

  std::vector<std::string> compare_configs;
  Overrides compare_ov;
  auto* compare = app.add_subcommand("compare", "Run three batches and plot them side by side");
  compare->add_option("--configs,configs", compare_configs,
                      "Three config files (default: built-in obs-only, expert, meta)");
  compare_ov.attach(*compare, false);

  std::optional<std::string> sweep_config;
  std::vector<std::string> grid;
  Overrides sweep_ov;
  auto* sweep = app.add_subcommand("sweep", "Grid sweep over config keys");
  sweep->add_option("--config", sweep_config, "Base config file");
  sweep->add_option("--grid", grid, "key=v1,v2,... (repeatable)")->required();
  sweep_ov.attach(*sweep, true);

  int gc_n = 100;
  std::uint64_t gc_seed = 0;
  auto* gradcheck = app.add_subcommand("gradcheck", "Check the meta-gradient by finite differences");
  gradcheck->add_option("n,--n", gc_n, "Number of random contexts")->check(CLI::PositiveNumber);
  gradcheck->add_option("--seed,--base_seed", gc_seed, "Random seed");

  auto* oracle = app.add_subcommand("oracle", "Print the exact expert GVF values per phase");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (run->parsed()) return cmd_run(run_config, run_ov);
    if (compare->parsed()) return cmd_compare(compare_configs, compare_ov);
    if (sweep->parsed()) return cmd_sweep(sweep_config, grid, sweep_ov);
    if (gradcheck->parsed()) return cmd_gradcheck(gc_n, gc_seed);
    if (oracle->parsed()) return cmd_oracle();
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return kExitRuntime;
}
