#pragma once

// The expert agent placed exactly at its learned fixed point: GVF weights at
// the dynamic-programming values on every recurrent state of season-matched
// play, and Q-values of the optimal policy.

#include <array>

#include "gvfd/agent.hpp"
#include "gvfd/gvf.hpp"

namespace fixtures {

struct FixedPoint {
  gvfd::AgentState state;
  std::array<std::size_t, 4> gvf_index;      // recurrent GVF state per phase
  std::array<std::size_t, 4> control_index;  // aggregated control cell per phase
};

inline FixedPoint expert_fixed_point(gvfd::AgentConfig cfg) {
  using namespace gvfd;
  cfg.kind = AgentKind::expert;
  std::array<std::array<double, 4>, 2> v{};
  for (int i = 0; i < 2; ++i) v[i] = dp_oracle(expert_target(i), expert_cumulant(i), expert_discount(i));
  auto values_at = [&](int p) { return std::array<double, 2>{v[0][p], v[1][p]}; };
  auto cells_of = [&](int p) {
    return PredictionPair{log_transform(v[0][p], cfg.t_max), log_transform(v[1][p], cfg.t_max)};
  };

  FixedPoint fp;
  fp.state = init_agent(cfg, 0);
  AgentState& st = fp.state;
  // Season-matched play always grows; the GVF state at phase p carries the
  // action taken in phase p - 1 and the prediction made there.
  const Observation growth = Observation::from_growth(true);
  for (int p = 0; p < 4; ++p) {
    const int prev = (p + 3) % 4;
    fp.gvf_index[p] = gvf_feature(growth, optimal_action(prev), cells_of(prev), cfg.cell_rule).active_index();
    fp.control_index[p] = control_state(cfg, values_at(prev), growth).entries()[0].index;
    for (int i = 0; i < 2; ++i) st.gvfs[i].w[fp.gvf_index[p]] = v[i][p];
  }
  const double q_star = 1.0 / (1.0 - cfg.gamma_c);
  st.q = QWeights(st.s.dim(), cfg.gamma_c);
  for (int p = 0; p < 4; ++p) st.q.w[index_of(optimal_action(p))][fp.control_index[p]] = q_star;

  st.env = EnvState{0};
  st.obs = growth;
  st.last_action = optimal_action(3);
  st.v = values_at(3);
  st.x = FeatureVector::one_hot(kGvfFeatureDim, fp.gvf_index[0]);
  st.s = control_state(cfg, st.v, st.obs);
  return fp;
}

}  // namespace fixtures
