#include "gvfd/meta.hpp"

#include <algorithm>
#include <cmath>

#include "gvfd/errors.hpp"

namespace gvfd {

namespace {

void require_finite(double x, const char* what) {
  if (!std::isfinite(x)) throw NumericError(std::string("non-finite ") + what);
}

double sq_norm(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return s;
}

}  // namespace

double sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

double cumulant(const std::array<double, kObsSize>& w_c, const Observation& o) {
  double z = 0.0;
  for (int i = 0; i < kObsSize; ++i) z += w_c[i] * o[static_cast<std::size_t>(i)];
  return sigmoid(z);
}

TargetPolicy policy(const std::array<double, kNumActions>& w_pi) {
  const double m = *std::max_element(w_pi.begin(), w_pi.end());
  TargetPolicy p{};
  double sum = 0.0;
  for (int a = 0; a < kNumActions; ++a) {
    p.probs[a] = std::exp(w_pi[a] - m);
    sum += p.probs[a];
  }
  for (double& x : p.probs) x /= sum;
  return p;
}

UnrollTrace unroll(const MetaStepContext& ctx, const std::vector<MetaWeights>& meta) {
  if (ctx.control == nullptr || ctx.gvfs == nullptr) {
    throw ContractError("meta context is missing weight snapshots");
  }
  if (!(ctx.behavior_prob > 0.0)) throw ContractError("meta context needs b(a_t) > 0");
  const std::size_t n = meta.size();
  if (ctx.gvfs->size() != n) throw ContractError("meta-weight count differs from GVF count");

  UnrollTrace tr;
  tr.c.resize(n);
  tr.rho.resize(n);
  tr.rho_raw.resize(n);
  tr.delta_g.resize(n);
  tr.v_plus.resize(n);
  tr.pi.resize(n);
  tr.xx = ctx.x_t.dot(ctx.x_t);
  const FeatureVector& x_boot = ctx.unroll == UnrollFeatures::same ? ctx.x_t : ctx.x_next;

  FeatureVector v_plus_vec(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& w = (*ctx.gvfs)[i].w;
    tr.c[i] = cumulant(meta[i].w_c, ctx.cumulant_obs);
    tr.pi[i] = policy(meta[i].w_pi);
    tr.rho_raw[i] = tr.pi[i][ctx.a_t] / ctx.behavior_prob;
    tr.rho[i] = std::min(tr.rho_raw[i], ctx.rho_cap);
    const double v = ctx.x_t.dot(w);
    tr.delta_g[i] = tr.c[i] + ctx.gvf_gamma * x_boot.dot(w) - v;
    tr.v_plus[i] = v + ctx.alpha_gvf * tr.rho[i] * tr.delta_g[i] * tr.xx;
    require_finite(tr.v_plus[i], "unrolled prediction");
    v_plus_vec.set(i, tr.v_plus[i]);
  }
  tr.s_plus = v_plus_vec.concat(ctx.s_next_tail);

  const QValues q_plus = q_values(*ctx.control, tr.s_plus);
  tr.a_star = action_from_index(
      static_cast<int>(std::max_element(q_plus.begin(), q_plus.end()) - q_plus.begin()));
  const double q_t = ctx.s_t.dot(ctx.control->w[index_of(ctx.a_t)]);
  tr.delta_control = ctx.r_next + ctx.control->gamma_c * q_plus[index_of(tr.a_star)] - q_t;
  require_finite(tr.delta_control, "unrolled control TD error");
  return tr;
}

double unrolled_loss(const MetaStepContext& ctx, const std::vector<MetaWeights>& meta) {
  const UnrollTrace tr = unroll(ctx, meta);
  double reg = 0.0;
  for (const auto& m : meta) reg += sq_norm(m.w_pi) + sq_norm(m.w_c);
  const double loss = tr.delta_control * tr.delta_control + ctx.lambda * reg;
  require_finite(loss, "meta loss");
  return loss;
}

std::vector<MetaGrad> meta_grad(const MetaStepContext& ctx, const std::vector<MetaWeights>& meta) {
  const UnrollTrace tr = unroll(ctx, meta);
  const auto& w_star = ctx.control->w[index_of(tr.a_star)];
  const int a_t = index_of(ctx.a_t);

  std::vector<MetaGrad> grads(meta.size());
  for (std::size_t i = 0; i < meta.size(); ++i) {
    // d delta_control / d v_plus_i
    const double g_v = ctx.control->gamma_c * w_star[i];
    const double outer = 2.0 * tr.delta_control * g_v * ctx.alpha_gvf * tr.xx;
    const double c = tr.c[i];
    // The truncated ratio is flat in w_pi once the cap binds.
    const bool capped = tr.rho_raw[i] > ctx.rho_cap;
    for (int j = 0; j < kNumActions; ++j) {
      const double pi_a = tr.pi[i].probs[a_t];
      const double drho =
          capped ? 0.0 : pi_a * ((j == a_t ? 1.0 : 0.0) - tr.pi[i].probs[j]) / ctx.behavior_prob;
      grads[i].grad_pi[j] = outer * tr.delta_g[i] * drho + 2.0 * ctx.lambda * meta[i].w_pi[j];
    }
    for (int k = 0; k < kObsSize; ++k) {
      grads[i].grad_c[k] = outer * tr.rho[i] * c * (1.0 - c) *
                               ctx.cumulant_obs[static_cast<std::size_t>(k)] +
                           2.0 * ctx.lambda * meta[i].w_c[k];
    }
  }
  return grads;
}

void meta_update(std::vector<MetaWeights>& meta, const std::vector<MetaGrad>& grads,
                 double alpha_pi, double alpha_c) {
  if (grads.size() != meta.size()) throw ContractError("gradient count differs from weights");
  if (alpha_pi < 0.0 || alpha_c < 0.0) throw ContractError("meta step sizes must be >= 0");
  for (std::size_t i = 0; i < meta.size(); ++i) {
    if (alpha_pi > 0.0) {
      for (int j = 0; j < kNumActions; ++j) {
        meta[i].w_pi[j] -= alpha_pi * grads[i].grad_pi[j];
        require_finite(meta[i].w_pi[j], "policy meta-weight");
      }
    }
    if (alpha_c > 0.0) {
      for (int k = 0; k < kObsSize; ++k) {
        meta[i].w_c[k] -= alpha_c * grads[i].grad_c[k];
        require_finite(meta[i].w_c[k], "cumulant meta-weight");
      }
    }
  }
}

}  // namespace gvfd
