#include "gvfd/gradcheck.hpp"

#include <algorithm>
#include <cmath>

#include "gvfd/agent.hpp"
#include "gvfd/errors.hpp"

namespace gvfd {

namespace {

double uniform_pm1(Rng& rng) { return 2.0 * rng.uniform() - 1.0; }

double& param(std::vector<MetaWeights>& meta, std::size_t k) {
  constexpr std::size_t per = kNumActions + kObsSize;
  MetaWeights& m = meta[k / per];
  const std::size_t j = k % per;
  return j < kNumActions ? m.w_pi[j] : m.w_c[j - kNumActions];
}

}  // namespace

MetaStepContext GradcheckCase::context() const {
  MetaStepContext c = ctx;
  c.control = &control;
  c.gvfs = &gvfs;
  return c;
}

GradcheckCase random_gradcheck_case(Rng& rng, double min_margin) {
  for (;;) {
    GradcheckCase c;
    const std::size_t control_dim = kNumGvfs + kObsFeatureDim;
    c.control = QWeights(control_dim, 0.9);
    for (auto& row : c.control.w) {
      for (double& x : row) x = uniform_pm1(rng);
    }
    c.gvfs.assign(kNumGvfs, GvfWeights(kGvfFeatureDim));
    for (auto& g : c.gvfs) {
      for (double& x : g.w) x = uniform_pm1(rng);
    }
    c.meta.assign(kNumGvfs, MetaWeights{});
    for (auto& m : c.meta) {
      for (double& x : m.w_pi) x = uniform_pm1(rng);
      for (double& x : m.w_c) x = uniform_pm1(rng);
    }

    MetaStepContext& ctx = c.ctx;
    ctx.cumulant_obs = Observation::from_growth(rng.below(2) == 1);
    ctx.a_t = action_from_index(static_cast<int>(rng.below(kNumActions)));
    ctx.behavior_prob = 0.1 + 0.9 * rng.uniform();
    if (ctx.behavior_prob <= 0.1) continue;
    ctx.x_t = FeatureVector::one_hot(kGvfFeatureDim, rng.below(kGvfFeatureDim));
    ctx.x_next = FeatureVector::one_hot(kGvfFeatureDim, rng.below(kGvfFeatureDim));
    ctx.r_next = static_cast<double>(rng.below(2));
    const Observation o_t = Observation::from_growth(rng.below(2) == 1);
    const std::array<double, kNumGvfs> v{uniform_pm1(rng), uniform_pm1(rng)};
    ctx.s_t = FeatureVector::dense(v).concat(obs_feature(o_t));
    ctx.s_next_tail = obs_feature(ctx.cumulant_obs);
    ctx.alpha_gvf = 0.1;
    ctx.gvf_gamma = kEchoGamma;
    ctx.lambda = 0.001;
    ctx.unroll = rng.below(2) == 0 ? UnrollFeatures::same : UnrollFeatures::true_next;

    const UnrollTrace tr = unroll(c.context(), c.meta);
    const QValues q = q_values(c.control, tr.s_plus);
    if (std::abs(q[0] - q[1]) < min_margin) continue;
    return c;
  }
}

std::vector<double> flatten(const std::vector<MetaGrad>& g) {
  std::vector<double> out;
  for (const auto& m : g) {
    out.insert(out.end(), m.grad_pi.begin(), m.grad_pi.end());
    out.insert(out.end(), m.grad_c.begin(), m.grad_c.end());
  }
  return out;
}

std::vector<double> numeric_meta_grad(const GradcheckCase& c, double h) {
  const MetaStepContext ctx = c.context();
  const std::size_t n = c.meta.size() * (kNumActions + kObsSize);
  std::vector<double> g(n);
  std::vector<MetaWeights> m = c.meta;
  for (std::size_t k = 0; k < n; ++k) {
    double& p = param(m, k);
    const double orig = p;
    p = orig + h;
    const double up = unrolled_loss(ctx, m);
    p = orig - h;
    const double down = unrolled_loss(ctx, m);
    p = orig;
    g[k] = (up - down) / (2.0 * h);
  }
  return g;
}

double relative_error(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) throw ContractError("gradient sizes differ");
  double diff = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    diff += (a[i] - b[i]) * (a[i] - b[i]);
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  const double denom = std::sqrt(std::max(na, nb));
  return denom == 0.0 ? 0.0 : std::sqrt(diff) / denom;
}

GradcheckReport run_gradcheck(int n, std::uint64_t seed, double h) {
  if (n < 1) throw ContractError("gradcheck needs n >= 1");
  Rng rng(seed);
  GradcheckReport rep;
  rep.n = n;
  for (int i = 0; i < n; ++i) {
    const GradcheckCase c = random_gradcheck_case(rng);
    const double err =
        relative_error(flatten(meta_grad(c.context(), c.meta)), numeric_meta_grad(c, h));
    rep.errors.push_back(err);
    if (rep.worst_case < 0 || err > rep.max_rel_error) {
      rep.max_rel_error = err;
      rep.worst_case = i;
    }
  }
  return rep;
}

}  // namespace gvfd
