#include "gvfd/gvf.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "gvfd/errors.hpp"

namespace gvfd {

namespace {

void require_finite(double x, const char* what) {
  if (!std::isfinite(x)) throw NumericError(std::string("non-finite ") + what);
}

}  // namespace

double DiscountSpec::operator()(double c) const {
  return kind == Kind::event_terminated ? echo_discount(c, gamma) : gamma;
}

TargetPolicy TargetPolicy::make(std::array<double, kNumActions> probs) {
  double sum = 0.0;
  for (double p : probs) {
    if (!(p >= 0.0)) throw ContractError("target policy has a negative entry");
    sum += p;
  }
  if (std::abs(sum - 1.0) > 1e-9) throw ContractError("target policy does not sum to 1");
  return TargetPolicy{probs};
}

TargetPolicy TargetPolicy::always(Action a) {
  TargetPolicy p{{0.0, 0.0}};
  p.probs[index_of(a)] = 1.0;
  return p;
}

double echo_cumulant(const Observation& obs, const CumulantSpec& spec) {
  if (spec.kind != CumulantSpec::Kind::echo_bit) {
    throw ContractError("echo_cumulant needs an echo-bit cumulant spec");
  }
  if (spec.event_bit < 0 || spec.event_bit >= kObsSize) {
    throw ContractError("event bit out of range");
  }
  return obs[static_cast<std::size_t>(spec.event_bit)];
}

double echo_discount(double c, double gamma) { return c == 1.0 ? 0.0 : gamma; }

double predict(const GvfWeights& w, const FeatureVector& x) {
  return std::max(x.dot(w.w), kPredictionFloor);
}

double importance_ratio(const TargetPolicy& target, const BehaviorDistribution& behavior,
                        Action a) {
  const double b = behavior[index_of(a)];
  if (!(b > 0.0)) throw ContractError("unsupported action under behavior");
  return target[a] / b;
}

double td_update(GvfWeights& w, const FeatureVector& x_t, const FeatureVector& x_next,
                 double c, double gamma_next, double rho, double alpha) {
  require_finite(c, "cumulant");
  require_finite(gamma_next, "discount");
  require_finite(rho, "importance ratio");
  require_finite(alpha, "step size");
  if (!(alpha > 0.0)) throw ContractError("td_update needs alpha > 0");
  if (!(rho >= 0.0)) throw ContractError("td_update needs rho >= 0");

  const double delta = c + gamma_next * x_next.dot(w.w) - x_t.dot(w.w);
  require_finite(delta, "GVF TD error");
  x_t.add_scaled_to(w.w, alpha * rho * delta);
  for (const auto& e : x_t.entries()) require_finite(w.w[e.index], "GVF weight");
  return delta;
}

double log_transform(double v, double t_max) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw NumericError("log_transform needs a positive finite value");
  }
  // + 0.0 turns the -0.0 of log(1) into +0.0.
  return std::clamp(std::log(v) / std::log(kEchoGamma), 0.0, t_max) + 0.0;
}

std::array<double, kNumPhases> dp_oracle(const TargetPolicy& target,
                                         const CumulantSpec& cumulant,
                                         const DiscountSpec& discount) {
  constexpr double kTolerance = 1e-12;
  constexpr int kMaxSweeps = 10000;

  std::array<double, kNumPhases> v{};
  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    std::array<double, kNumPhases> next{};
    for (int p = 0; p < kNumPhases; ++p) {
      for (int ai = 0; ai < kNumActions; ++ai) {
        const Action a = action_from_index(ai);
        if (target[a] == 0.0) continue;
        const StepOutcome out = step(EnvState{p}, a);
        const double c = echo_cumulant(out.observation, cumulant);
        next[static_cast<std::size_t>(p)] +=
            target[a] * (c + discount(c) * v[static_cast<std::size_t>(out.next_state.phase)]);
      }
    }
    double change = 0.0;
    for (int p = 0; p < kNumPhases; ++p) {
      change = std::max(change, std::abs(next[p] - v[p]));
    }
    v = next;
    if (change < kTolerance) break;
  }
  return v;
}

}  // namespace gvfd
