#include "gvfd/agent.hpp"

#include <algorithm>
#include <cmath>
#include <tuple>
#include <string>

#include "gvfd/errors.hpp"

namespace gvfd {

namespace {

PredictionPair transformed(const std::array<double, kNumGvfs>& v, double t_max) {
  return {log_transform(std::max(v[0], kPredictionFloor), t_max),
          log_transform(std::max(v[1], kPredictionFloor), t_max)};
}

void require(bool ok, const char* key, const char* what) {
  if (!ok) throw ConfigError(key, what);
}

}  // namespace

std::string_view to_string(AgentKind k) {
  switch (k) {
    case AgentKind::obs_only: return "obs-only";
    case AgentKind::expert: return "expert";
    case AgentKind::meta: return "meta";
  }
  return "?";
}

AgentKind parse_agent_kind(std::string_view s) {
  if (s == "obs-only") return AgentKind::obs_only;
  if (s == "expert") return AgentKind::expert;
  if (s == "meta") return AgentKind::meta;
  throw ConfigError("agent", "expected one of obs-only, expert, meta; got '" + std::string(s) + "'");
}

void validate(const AgentConfig& c) {
  require(c.epsilon >= 0.0 && c.epsilon <= 1.0, "epsilon", "must lie in [0, 1]");
  require(c.alpha_control >= 0.0 && std::isfinite(c.alpha_control), "alpha_control",
          "must be finite and >= 0");
  require(c.alpha_gvf >= 0.0 && std::isfinite(c.alpha_gvf), "alpha_gvfs",
          "must be finite and >= 0");
  require(c.alpha_pi >= 0.0 && std::isfinite(c.alpha_pi), "alpha_pi", "must be finite and >= 0");
  require(c.alpha_c >= 0.0 && std::isfinite(c.alpha_c), "alpha_c", "must be finite and >= 0");
  require(c.lambda >= 0.0 && std::isfinite(c.lambda), "lambda", "must be finite and >= 0");
  require(c.gamma_c >= 0.0 && c.gamma_c < 1.0, "gamma_c", "must lie in [0, 1)");
  require(c.gvf_gamma >= 0.0 && c.gvf_gamma < 1.0, "gvf_gamma", "must lie in [0, 1)");
  require(c.t_max > 0.0 && c.t_max <= kDefaultTMax, "t_max", "must lie in (0, 9]");
  require(c.memsize >= kPredictionMemsize, "memsize", "must be at least 100");
  require(c.rho_cap > 0.0, "rho_cap", "must be > 0");
}

CumulantSpec expert_cumulant(int gvf) {
  if (gvf < 0 || gvf >= kNumGvfs) throw ContractError("expert GVF index out of range");
  return {CumulantSpec::Kind::echo_bit, gvf};
}

// Both echoes ask "how long until this outcome if I keep watering?". Watering
// is the action whose outcome flips with the season, so its echo times reveal
// the phase.
TargetPolicy expert_target(int /*gvf*/) { return TargetPolicy::always(Action::water); }

DiscountSpec expert_discount(int /*gvf*/) {
  return {DiscountSpec::Kind::event_terminated, kEchoGamma};
}

FeatureVector control_state(const AgentConfig& config, const std::array<double, kNumGvfs>& v,
                            const Observation& obs) {
  if (config.kind == AgentKind::obs_only) return obs_feature(obs);
  FeatureVector head;
  if (config.kind == AgentKind::expert) {
    head = aggregate_predictions(transformed(v, config.t_max), config.memsize, config.cell_rule);
  } else {
    head = FeatureVector::dense(v);
  }
  return config.obs_cells_in_control ? head.concat(obs_feature(obs)) : head;
}

AgentState init_agent(const AgentConfig& config, std::uint64_t seed) {
  validate(config);
  AgentState st;
  st.config = config;
  st.rng = Rng(seed);
  std::tie(st.env, st.obs) = reset(seed);

  if (config.kind != AgentKind::obs_only) {
    st.gvfs.assign(kNumGvfs, GvfWeights(kGvfFeatureDim));
    st.v = {kPredictionFloor, kPredictionFloor};
  }
  if (config.kind == AgentKind::meta) st.meta.assign(kNumGvfs, MetaWeights{});

  st.s = control_state(config, st.v, st.obs);
  st.q = QWeights(st.s.dim(), config.gamma_c);
  st.last_action = select_action(q_values(st.q, st.s), config.epsilon, st.rng).action;
  if (!st.gvfs.empty()) {
    st.x = gvf_feature(st.obs, st.last_action, transformed(st.v, config.t_max), config.cell_rule);
  }
  return st;
}

StepResult agent_step(AgentState& st) {
  const AgentConfig& cfg = st.config;
  StepResult res;
  StepDiagnostics& d = res.diag;
  auto mark = [&d](Stage s) { d.stages[static_cast<std::size_t>(d.n_stages++)] = s; };
  d.phase = st.env.phase;

  const ActionChoice choice = select_action(q_values(st.q, st.s), cfg.epsilon, st.rng);
  const Action a_t = choice.action;
  d.action = a_t;
  mark(Stage::select);

  const StepOutcome out = step(st.env, a_t);
  const Observation& o_next = out.observation;
  res.reward = out.reward;
  mark(Stage::env_step);

  std::array<double, kNumGvfs> v_next = st.v;
  FeatureVector x_next;
  if (!st.gvfs.empty()) {
    std::array<double, kNumGvfs> v_pre{};
    for (int i = 0; i < kNumGvfs; ++i) v_pre[i] = st.x.dot(st.gvfs[i].w);
    x_next = gvf_feature(o_next, a_t, transformed(v_pre, cfg.t_max), cfg.cell_rule);
  }

  if (cfg.kind == AgentKind::meta) {
    if (cfg.alpha_pi > 0.0 || cfg.alpha_c > 0.0) {
      MetaStepContext ctx;
      ctx.cumulant_obs = o_next;
      ctx.a_t = a_t;
      ctx.behavior_prob = choice.behavior[index_of(a_t)];
      ctx.x_t = st.x;
      ctx.x_next = x_next;
      ctx.r_next = out.reward;
      ctx.s_t = st.s;
      ctx.s_next_tail = cfg.obs_cells_in_control ? obs_feature(o_next) : FeatureVector(0);
      ctx.control = &st.q;
      ctx.gvfs = &st.gvfs;
      ctx.alpha_gvf = cfg.alpha_gvf;
      ctx.gvf_gamma = cfg.gvf_gamma;
      ctx.lambda = cfg.lambda;
      ctx.rho_cap = cfg.rho_cap;
      ctx.unroll = cfg.unroll;
      meta_update(st.meta, meta_grad(ctx, st.meta), cfg.alpha_pi, cfg.alpha_c);
    }
    mark(Stage::meta_step);
  }

  if (!st.gvfs.empty()) {
    for (int i = 0; i < kNumGvfs; ++i) {
      double c = 0.0;
      double gamma_next = 0.0;
      TargetPolicy pi;
      if (cfg.kind == AgentKind::expert) {
        c = echo_cumulant(o_next, expert_cumulant(i));
        gamma_next = expert_discount(i)(c);
        pi = expert_target(i);
      } else {
        c = cumulant(st.meta[i].w_c, o_next);
        gamma_next = cfg.gvf_gamma;
        pi = policy(st.meta[i].w_pi);
      }
      const double rho = std::min(importance_ratio(pi, choice.behavior, a_t), cfg.rho_cap);
      auto& w = st.gvfs[i];
      if (cfg.alpha_gvf > 0.0 && rho > 0.0) {
        d.delta_gvf[i] = td_update(w, st.x, x_next, c, gamma_next, rho, cfg.alpha_gvf);
      } else {
        d.delta_gvf[i] = c + gamma_next * x_next.dot(w.w) - st.x.dot(w.w);
      }
      v_next[i] = st.x.dot(w.w);
      d.cumulant[i] = c;
      d.policy[i] = pi;
      d.prediction[i] = v_next[i];
    }
    mark(Stage::gvf_update);
  }

  FeatureVector s_next = control_state(cfg, v_next, o_next);
  d.delta_control = cfg.alpha_control > 0.0
                        ? q_learning_update(st.q, st.s, a_t, out.reward, s_next, cfg.alpha_control)
                        : control_td_error(st.q, st.s, a_t, out.reward, s_next);
  mark(Stage::control_update);
  if (cfg.kind != AgentKind::meta) d.control_index = s_next.entries()[0].index;

  st.env = out.next_state;
  st.obs = o_next;
  st.last_action = a_t;
  st.v = v_next;
  st.s = std::move(s_next);
  if (!st.gvfs.empty()) st.x = std::move(x_next);
  ++st.t;
  return res;
}

AgentState freeze_eval(AgentState state) {
  AgentConfig& c = state.config;
  c.epsilon = 0.0;
  c.alpha_control = 0.0;
  c.alpha_gvf = 0.0;
  c.alpha_pi = 0.0;
  c.alpha_c = 0.0;
  return state;
}

}  // namespace gvfd
