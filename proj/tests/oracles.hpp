#pragma once

// Independent reference computations used by the tests. They share no code
// with the library beyond the environment's step function.

#include <array>
#include <cmath>
#include <vector>

#include "gvfd/monsoon_env.hpp"

namespace oracle {

// Echo value by forward simulation: under always-water, count the steps
// before the event bit fires; each non-event step discounts by gamma.
inline std::array<double, 4> echo_by_rollout(int event_bit, double gamma) {
  std::array<double, 4> v{};
  for (int p = 0; p < 4; ++p) {
    gvfd::EnvState s{p};
    double value = 1.0;
    for (int k = 0; k < 64; ++k) {
      const auto out = gvfd::step(s, gvfd::Action::water);
      if (out.observation[static_cast<std::size_t>(event_bit)] == 1.0) break;
      value *= gamma;
      s = out.next_state;
    }
    v[static_cast<std::size_t>(p)] = value;
  }
  return v;
}

// Straight-line unrolled meta loss for dense one-hot GVF features.
struct DenseMetaCase {
  std::array<std::array<double, 2>, 2> w_pi;  // [gvf][action]
  std::array<std::array<double, 2>, 2> w_c;   // [gvf][obs bit]
  std::array<double, 2> obs;                  // cumulant observation
  int a_t;
  double b_at;
  std::array<double, 2> w_x;       // GVF weight at x_t, per GVF
  std::array<double, 2> w_xnext;   // GVF weight at the bootstrap features, per GVF
  double r;
  std::array<std::array<double, 4>, 2> q;  // [action][control feature]
  std::array<double, 4> s_t;
  std::array<double, 2> next_obs_cells;
  double alpha_gvf, gamma, gamma_c, lambda;
};

inline double dense_loss(const DenseMetaCase& m) {
  double v_plus[2];
  for (int i = 0; i < 2; ++i) {
    const double z = m.w_c[i][0] * m.obs[0] + m.w_c[i][1] * m.obs[1];
    const double c = 1.0 / (1.0 + std::exp(-z));
    const double e0 = std::exp(m.w_pi[i][0]);
    const double e1 = std::exp(m.w_pi[i][1]);
    const double pi_a = (m.a_t == 0 ? e0 : e1) / (e0 + e1);
    const double rho = pi_a / m.b_at;
    const double delta_g = c + m.gamma * m.w_xnext[i] - m.w_x[i];
    v_plus[i] = m.w_x[i] + m.alpha_gvf * rho * delta_g;
  }
  const double s1[4] = {v_plus[0], v_plus[1], m.next_obs_cells[0], m.next_obs_cells[1]};
  double best = -1e300;
  for (int a = 0; a < 2; ++a) {
    double q = 0.0;
    for (int k = 0; k < 4; ++k) q += m.q[a][k] * s1[k];
    best = std::max(best, q);
  }
  double q_t = 0.0;
  for (int k = 0; k < 4; ++k) q_t += m.q[m.a_t][k] * m.s_t[k];
  const double delta = m.r + m.gamma_c * best - q_t;
  double reg = 0.0;
  for (int i = 0; i < 2; ++i) {
    reg += m.w_pi[i][0] * m.w_pi[i][0] + m.w_pi[i][1] * m.w_pi[i][1];
    reg += m.w_c[i][0] * m.w_c[i][0] + m.w_c[i][1] * m.w_c[i][1];
  }
  return delta * delta + m.lambda * reg;
}

}  // namespace oracle
