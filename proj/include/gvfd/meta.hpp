#pragma once

// Meta-learned GVF questions: a softmax target policy and a sigmoid cumulant
// per GVF, trained by descending the squared control TD error through a
// one-step unroll of each GVF's TD update.

#include <array>
#include <limits>
#include <vector>

#include "gvfd/control.hpp"
#include "gvfd/features.hpp"
#include "gvfd/gvf.hpp"
#include "gvfd/monsoon_env.hpp"

namespace gvfd {

struct MetaWeights {
  std::array<double, kNumActions> w_pi{};
  std::array<double, kObsSize> w_c{};
  friend bool operator==(const MetaWeights&, const MetaWeights&) = default;
};

struct MetaGrad {
  std::array<double, kNumActions> grad_pi{};
  std::array<double, kObsSize> grad_c{};
};

double sigmoid(double z);

// sigmoid(w_c . o)
double cumulant(const std::array<double, kObsSize>& w_c, const Observation& o);

// softmax(w_pi) with max-subtraction.
TargetPolicy policy(const std::array<double, kNumActions>& w_pi);

enum class UnrollFeatures { same, true_next };

// Everything the unrolled loss replays for one transition. The control
// state layout is [v_0 .. v_{n-1}, observation cells...]; only the leading
// prediction entries depend on the meta-weights.
struct MetaStepContext {
  Observation cumulant_obs;          // observation the cumulant is read from
  Action a_t = Action::not_water;
  double behavior_prob = 1.0;        // b(a_t) recorded at selection
  FeatureVector x_t;                 // GVF state at t
  FeatureVector x_next;              // used only for UnrollFeatures::true_next
  double r_next = 0.0;
  FeatureVector s_t;                 // control state at t
  FeatureVector s_next_tail;         // control entries after the predictions
  const QWeights* control = nullptr;
  const std::vector<GvfWeights>* gvfs = nullptr;
  double alpha_gvf = 0.1;
  double gvf_gamma = kEchoGamma;
  double lambda = 0.001;
  double rho_cap = std::numeric_limits<double>::infinity();
  UnrollFeatures unroll = UnrollFeatures::same;
};

// Intermediate quantities of one unroll, shared by the loss and gradient.
struct UnrollTrace {
  std::vector<double> c, rho, rho_raw, delta_g, v_plus;
  std::vector<TargetPolicy> pi;
  double xx = 0.0;
  FeatureVector s_plus;
  Action a_star = Action::not_water;
  double delta_control = 0.0;
};

UnrollTrace unroll(const MetaStepContext& ctx, const std::vector<MetaWeights>& meta);

// delta_control^2 + lambda * sum_i (|w_pi_i|^2 + |w_c_i|^2).
double unrolled_loss(const MetaStepContext& ctx, const std::vector<MetaWeights>& meta);

// Analytic semi-gradient of unrolled_loss: the greedy action at the unrolled
// state and all control weights are held fixed.
std::vector<MetaGrad> meta_grad(const MetaStepContext& ctx, const std::vector<MetaWeights>& meta);

// Plain gradient descent. A zero step size leaves that weight set untouched.
void meta_update(std::vector<MetaWeights>& meta, const std::vector<MetaGrad>& grads,
                 double alpha_pi, double alpha_c);

}  // namespace gvfd
