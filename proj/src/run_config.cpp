#include "gvfd/run_config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include <fmt/format.h>

#include "gvfd/errors.hpp"

namespace gvfd {

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

double parse_double(const std::string& key, const std::string& v) {
  double out = 0.0;
  const auto* end = v.data() + v.size();
  const auto [p, ec] = std::from_chars(v.data(), end, out);
  if (ec != std::errc() || p != end || !std::isfinite(out)) {
    throw ConfigError(key, "expected a finite number, got '" + v + "'");
  }
  return out;
}

std::int64_t parse_int(const std::string& key, const std::string& v) {
  std::int64_t out = 0;
  const auto* end = v.data() + v.size();
  const auto [p, ec] = std::from_chars(v.data(), end, out);
  if (ec != std::errc() || p != end) {
    throw ConfigError(key, "expected an integer, got '" + v + "'");
  }
  return out;
}

std::uint64_t parse_uint(const std::string& key, const std::string& v) {
  std::uint64_t out = 0;
  const auto* end = v.data() + v.size();
  const auto [p, ec] = std::from_chars(v.data(), end, out);
  if (ec != std::errc() || p != end) {
    throw ConfigError(key, "expected a non-negative integer, got '" + v + "'");
  }
  return out;
}

std::string_view to_string(UnrollFeatures u) {
  return u == UnrollFeatures::same ? "same" : "true-next";
}

}  // namespace

std::int64_t RunConfig::effective_train_steps() const {
  return train_steps.value_or(total_steps - eval_steps);
}

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys = {
      "agent",   "total_steps", "train_steps", "eval_steps", "epsilon",
      "alpha_control", "alpha_gvfs", "alpha_pi", "alpha_c", "lambda",
      "gamma_c", "t_max", "memsize", "n_trials", "base_seed",
      "unroll_next_features", "out_dir"};
  return keys;
}

RunConfig defaults_for(AgentKind kind) {
  RunConfig c;
  c.agent = kind;
  switch (kind) {
    case AgentKind::obs_only:
    case AgentKind::expert:
      c.epsilon = 0.1;
      c.alpha_control = 0.01;
      c.alpha_gvfs = 0.1;
      break;
    case AgentKind::meta:
      c.epsilon = 0.5;
      c.alpha_control = 0.0001;
      c.alpha_gvfs = 0.1;
      c.alpha_pi = 0.001;
      c.alpha_c = 0.1;
      break;
  }
  return c;
}

void set_key(RunConfig& c, const std::string& key, const std::string& value) {
  if (key == "agent") {
    c.agent = parse_agent_kind(value);
  } else if (key == "total_steps") {
    c.total_steps = parse_int(key, value);
  } else if (key == "train_steps") {
    if (value == "auto") {
      c.train_steps.reset();
    } else {
      c.train_steps = parse_int(key, value);
    }
  } else if (key == "eval_steps") {
    c.eval_steps = parse_int(key, value);
  } else if (key == "epsilon") {
    c.epsilon = parse_double(key, value);
  } else if (key == "alpha_control") {
    c.alpha_control = parse_double(key, value);
  } else if (key == "alpha_gvfs") {
    c.alpha_gvfs = parse_double(key, value);
  } else if (key == "alpha_pi") {
    c.alpha_pi = parse_double(key, value);
  } else if (key == "alpha_c") {
    c.alpha_c = parse_double(key, value);
  } else if (key == "lambda") {
    c.lambda = parse_double(key, value);
  } else if (key == "gamma_c") {
    c.gamma_c = parse_double(key, value);
  } else if (key == "t_max") {
    c.t_max = parse_double(key, value);
  } else if (key == "memsize") {
    c.memsize = parse_int(key, value);
  } else if (key == "n_trials") {
    c.n_trials = parse_int(key, value);
  } else if (key == "base_seed") {
    c.base_seed = parse_uint(key, value);
  } else if (key == "unroll_next_features") {
    if (value == "same") {
      c.unroll_next_features = UnrollFeatures::same;
    } else if (value == "true-next") {
      c.unroll_next_features = UnrollFeatures::true_next;
    } else {
      throw ConfigError(key, "expected same or true-next, got '" + value + "'");
    }
  } else if (key == "out_dir") {
    if (value.empty()) throw ConfigError(key, "must not be empty");
    c.out_dir = value;
  } else {
    throw ConfigError(key, "unknown key");
  }
}

std::string get_key(const RunConfig& c, const std::string& key) {
  if (key == "agent") return std::string(to_string(c.agent));
  if (key == "total_steps") return fmt::format("{}", c.total_steps);
  if (key == "train_steps") return c.train_steps ? fmt::format("{}", *c.train_steps) : "auto";
  if (key == "eval_steps") return fmt::format("{}", c.eval_steps);
  if (key == "epsilon") return fmt::format("{}", c.epsilon);
  if (key == "alpha_control") return fmt::format("{}", c.alpha_control);
  if (key == "alpha_gvfs") return fmt::format("{}", c.alpha_gvfs);
  if (key == "alpha_pi") return fmt::format("{}", c.alpha_pi);
  if (key == "alpha_c") return fmt::format("{}", c.alpha_c);
  if (key == "lambda") return fmt::format("{}", c.lambda);
  if (key == "gamma_c") return fmt::format("{}", c.gamma_c);
  if (key == "t_max") return fmt::format("{}", c.t_max);
  if (key == "memsize") return fmt::format("{}", c.memsize);
  if (key == "n_trials") return fmt::format("{}", c.n_trials);
  if (key == "base_seed") return fmt::format("{}", c.base_seed);
  if (key == "unroll_next_features") return std::string(to_string(c.unroll_next_features));
  if (key == "out_dir") return c.out_dir;
  throw ConfigError(key, "unknown key");
}

RunConfig parse_config(const std::string& text, const std::optional<std::string>& agent_override) {
  std::vector<std::pair<std::string, std::string>> entries;
  std::optional<std::string> agent = agent_override;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const std::string t = trim(line);
    if (t.empty()) continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(trim(t), fmt::format("line {}: expected key = value", lineno));
    }
    std::string key = trim(std::string_view(t).substr(0, eq));
    std::string value = trim(std::string_view(t).substr(eq + 1));
    const auto& keys = config_keys();
    if (std::find(keys.begin(), keys.end(), key) == keys.end()) {
      throw ConfigError(key, fmt::format("line {}: unknown key", lineno));
    }
    if (key == "agent") {
      if (!agent_override) agent = value;
      continue;
    }
    entries.emplace_back(std::move(key), std::move(value));
  }
  RunConfig cfg = defaults_for(agent ? parse_agent_kind(*agent) : AgentKind::obs_only);
  for (const auto& [k, v] : entries) set_key(cfg, k, v);
  return cfg;
}

RunConfig load_config(const std::string& path, const std::optional<std::string>& agent_override) {
  std::ifstream f(path);
  if (!f) throw ConfigError("config", "cannot read '" + path + "'");
  std::ostringstream ss;
  ss << f.rdbuf();
  return parse_config(ss.str(), agent_override);
}

void validate(const RunConfig& c) {
  if (c.eval_steps < 1) throw ConfigError("eval_steps", "must be >= 1");
  if (c.train_steps) {
    if (*c.train_steps < 0) throw ConfigError("train_steps", "must be >= 0");
  } else if (c.eval_steps >= c.total_steps) {
    throw ConfigError("eval_steps", "must be smaller than total_steps");
  }
  if (c.n_trials < 1) throw ConfigError("n_trials", "must be >= 1");
  if (c.memsize < 100) throw ConfigError("memsize", "must be at least 100");
  if (c.log_every < 1) throw ConfigError("log_every", "must be >= 1");
  const bool learns_gvfs = c.agent != AgentKind::obs_only;
  if (!(c.alpha_control > 0.0)) throw ConfigError("alpha_control", "must be > 0");
  if (learns_gvfs && !(c.alpha_gvfs > 0.0)) throw ConfigError("alpha_gvfs", "must be > 0");
  if (c.alpha_gvfs < 0.0) throw ConfigError("alpha_gvfs", "must be >= 0");
  if (c.agent == AgentKind::meta) {
    if (!(c.alpha_pi > 0.0)) throw ConfigError("alpha_pi", "must be > 0");
    if (!(c.alpha_c > 0.0)) throw ConfigError("alpha_c", "must be > 0");
  } else {
    if (c.alpha_pi < 0.0) throw ConfigError("alpha_pi", "must be >= 0");
    if (c.alpha_c < 0.0) throw ConfigError("alpha_c", "must be >= 0");
  }
  validate(agent_config(c));
}

std::string dump_config(const RunConfig& c) {
  std::string out;
  for (const auto& k : config_keys()) out += fmt::format("{} = {}\n", k, get_key(c, k));
  return out;
}

AgentConfig agent_config(const RunConfig& c) {
  AgentConfig a;
  a.kind = c.agent;
  a.epsilon = c.epsilon;
  a.alpha_control = c.alpha_control;
  a.alpha_gvf = c.alpha_gvfs;
  a.alpha_pi = c.alpha_pi;
  a.alpha_c = c.alpha_c;
  a.lambda = c.lambda;
  a.gamma_c = c.gamma_c;
  a.t_max = c.t_max;
  a.memsize = static_cast<std::size_t>(std::max<std::int64_t>(c.memsize, 0));
  a.unroll = c.unroll_next_features;
  a.rho_cap = c.rho_cap ? *c.rho_cap
                        : c.alpha_gvfs > 0.0 ? 1.0 / c.alpha_gvfs
                                             : std::numeric_limits<double>::infinity();
  a.cell_rule = c.cell_rule;
  a.obs_cells_in_control = c.obs_cells_in_control;
  return a;
}

}  // namespace gvfd
