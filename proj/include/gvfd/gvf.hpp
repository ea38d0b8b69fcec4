#pragma once

// Linear General Value Function learners: echo cumulant/discount rules,
// prediction, off-policy TD(0), the log-space "time to event" transform and
// a dynamic-programming oracle over the hidden season cycle.

#include <array>
#include <span>
#include <vector>

#include "gvfd/features.hpp"
#include "gvfd/monsoon_env.hpp"

namespace gvfd {

inline constexpr double kPredictionFloor = 1e-6;
inline constexpr double kEchoGamma = 0.9;
inline constexpr double kDefaultTMax = 9.0;

struct GvfWeights {
  std::vector<double> w;

  GvfWeights() = default;
  explicit GvfWeights(std::size_t dim) : w(dim, 0.0) {}
  std::size_t dim() const { return w.size(); }
  friend bool operator==(const GvfWeights&, const GvfWeights&) = default;
};

struct DiscountSpec {
  enum class Kind { fixed, event_terminated };
  Kind kind = Kind::fixed;
  double gamma = kEchoGamma;

  // Discount applied after a step whose cumulant was c.
  double operator()(double c) const;
};

struct CumulantSpec {
  enum class Kind { echo_bit, parameterized };
  Kind kind = Kind::echo_bit;
  int event_bit = 0;
};

struct TargetPolicy {
  std::array<double, kNumActions> probs{0.5, 0.5};

  // Validates non-negativity and normalization (1e-9); throws ContractError.
  static TargetPolicy make(std::array<double, kNumActions> probs);
  static TargetPolicy always(Action a);
  double operator[](Action a) const { return probs[index_of(a)]; }
};

using BehaviorDistribution = std::array<double, kNumActions>;

// c = obs[event_bit]. Throws ContractError for a non-echo spec.
double echo_cumulant(const Observation& obs, const CumulantSpec& spec);

// 0 once the event has happened (c == 1), gamma otherwise.
double echo_discount(double c, double gamma);

// w . x, floored at kPredictionFloor so the log transform stays defined.
double predict(const GvfWeights& w, const FeatureVector& x);

// target(a) / behavior(a). Throws ContractError when behavior(a) == 0.
double importance_ratio(const TargetPolicy& target, const BehaviorDistribution& behavior,
                        Action a);

// Off-policy TD(0) in place:
//   delta = c + gamma_next * (w . x_next) - (w . x_t)
//   w    += alpha * rho * delta * x_t
// Returns delta. Non-finite inputs or results raise NumericError.
double td_update(GvfWeights& w, const FeatureVector& x_t, const FeatureVector& x_next,
                 double c, double gamma_next, double rho, double alpha);

// clip(log(v) / log(0.9), 0, t_max): the number of 0.9-discounted steps until
// the event, for an echo prediction v. Throws NumericError for v <= 0.
double log_transform(double v, double t_max = kDefaultTMax);

// Exact value of each hidden phase under a target policy, by sweeping the
// deterministic four-cycle until successive sweeps differ by < 1e-12.
std::array<double, kNumPhases> dp_oracle(const TargetPolicy& target,
                                         const CumulantSpec& cumulant,
                                         const DiscountSpec& discount);

}  // namespace gvfd
