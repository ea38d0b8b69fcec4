#pragma once

// Flat key=value run configuration with per-agent defaults.

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "gvfd/agent.hpp"

namespace gvfd {

struct RunConfig {
  AgentKind agent = AgentKind::obs_only;
  std::int64_t total_steps = 1'000'000;
  std::optional<std::int64_t> train_steps;  // default: total_steps - eval_steps
  std::int64_t eval_steps = 1'000;
  double epsilon = 0.1;
  double alpha_control = 0.01;
  double alpha_gvfs = 0.1;
  double alpha_pi = 0.0;
  double alpha_c = 0.0;
  double lambda = 0.001;
  double gamma_c = 0.9;
  double t_max = kDefaultTMax;
  std::int64_t memsize = 100;
  std::int64_t n_trials = 30;
  std::uint64_t base_seed = 0;
  UnrollFeatures unroll_next_features = UnrollFeatures::same;
  std::string out_dir = "out";

  // Not file keys.
  std::int64_t log_every = 1000;
  // Importance-ratio truncation; unset means 1 / alpha_gvfs.
  std::optional<double> rho_cap;
  CellRule cell_rule = CellRule::round;
  bool obs_cells_in_control = true;

  std::int64_t effective_train_steps() const;
  friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

// Keys accepted in config files, in canonical order.
const std::vector<std::string>& config_keys();

// Tuned exploration and step-size defaults for an agent kind.
RunConfig defaults_for(AgentKind kind);

// Sets one key from its textual value. ConfigError names the key on an
// unknown key or unparsable value.
void set_key(RunConfig& cfg, const std::string& key, const std::string& value);

// Textual value of a key as it would be written to a config file.
std::string get_key(const RunConfig& cfg, const std::string& key);

// Parses "key = value" lines; '#' starts a comment. The agent key selects the
// default table, then the remaining keys are applied on top.
RunConfig parse_config(const std::string& text,
                       const std::optional<std::string>& agent_override = std::nullopt);
RunConfig load_config(const std::string& path,
                      const std::optional<std::string>& agent_override = std::nullopt);

// Whole-config consistency checks; throws ConfigError.
void validate(const RunConfig& cfg);

// All keys, one per line, in canonical order. Parsing the dump reproduces cfg.
std::string dump_config(const RunConfig& cfg);

AgentConfig agent_config(const RunConfig& cfg);

}  // namespace gvfd
