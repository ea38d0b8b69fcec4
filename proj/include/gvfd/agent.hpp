#pragma once

// The per-step learning cycle: select, act, meta-step, GVF update, control
// update, for the observations-only, expert-GVF and meta-gradient agents.

#include <array>
#include <cstdint>
#include <limits>
#include <string_view>
#include <vector>

#include "gvfd/control.hpp"
#include "gvfd/gvf.hpp"
#include "gvfd/meta.hpp"
#include "gvfd/monsoon_env.hpp"
#include "gvfd/rng.hpp"

namespace gvfd {

enum class AgentKind { obs_only, expert, meta };

std::string_view to_string(AgentKind k);
// Accepts "obs-only", "expert", "meta"; throws ConfigError otherwise.
AgentKind parse_agent_kind(std::string_view s);

inline constexpr int kNumGvfs = 2;

struct AgentConfig {
  AgentKind kind = AgentKind::expert;
  double epsilon = 0.1;
  double alpha_control = 0.01;
  double alpha_gvf = 0.1;
  double alpha_pi = 0.0;
  double alpha_c = 0.0;
  double lambda = 0.001;
  double gamma_c = 0.9;
  double gvf_gamma = kEchoGamma;
  double t_max = kDefaultTMax;
  std::size_t memsize = kPredictionMemsize;
  UnrollFeatures unroll = UnrollFeatures::same;
  CellRule cell_rule = CellRule::round;
  // Truncation of the per-step importance ratio fed to the GVF TD update.
  // 1 / alpha_gvf keeps alpha * rho <= 1.
  double rho_cap = 10.0;
  // Append the two observation cells to prediction-based control states.
  bool obs_cells_in_control = true;

  friend bool operator==(const AgentConfig&, const AgentConfig&) = default;
};

enum class Stage : std::uint8_t { select, env_step, meta_step, gvf_update, control_update };

struct StepDiagnostics {
  int phase = 0;  // hidden phase the action was taken in
  Action action = Action::not_water;
  double delta_control = 0.0;
  std::array<double, kNumGvfs> delta_gvf{};
  std::array<double, kNumGvfs> cumulant{};
  std::array<TargetPolicy, kNumGvfs> policy{};
  std::array<double, kNumGvfs> prediction{};  // v after the GVF update
  std::size_t control_index = 0;              // active control cell, one-hot states only
  std::array<Stage, 5> stages{};
  int n_stages = 0;
};

struct StepResult {
  int reward = 0;
  StepDiagnostics diag;
};

struct AgentState {
  AgentConfig config;
  EnvState env;
  Observation obs;
  Action last_action = Action::not_water;
  FeatureVector x;                    // GVF state
  std::array<double, kNumGvfs> v{};   // current predictions
  FeatureVector s;                    // control state
  std::vector<GvfWeights> gvfs;       // empty for obs-only
  std::vector<MetaWeights> meta;      // empty unless meta
  QWeights q;
  Rng rng{0};
  std::uint64_t t = 0;
};

// Validates kind-specific settings; throws ConfigError naming the field.
void validate(const AgentConfig& config);

AgentState init_agent(const AgentConfig& config, std::uint64_t seed);

// One full cycle. NumericError escapes if any weight becomes non-finite.
StepResult agent_step(AgentState& state);

// Greedy, non-learning copy of the agent.
AgentState freeze_eval(AgentState state);

// Targets and discount rules of the two expert echo GVFs.
CumulantSpec expert_cumulant(int gvf);
TargetPolicy expert_target(int gvf);
DiscountSpec expert_discount(int gvf);

// Control state built from predictions, for the given agent configuration.
FeatureVector control_state(const AgentConfig& config, const std::array<double, kNumGvfs>& v,
                            const Observation& obs);

}  // namespace gvfd
