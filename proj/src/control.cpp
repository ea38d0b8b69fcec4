#include "gvfd/control.hpp"

#include <algorithm>
#include <cmath>

#include "gvfd/errors.hpp"

namespace gvfd {

int prediction_cell(double v_transformed, CellRule rule) {
  if (!(v_transformed >= 0.0) || !std::isfinite(v_transformed)) {
    throw ContractError("transformed prediction must be finite and non-negative");
  }
  const double shifted = rule == CellRule::round ? v_transformed + 0.5 : v_transformed;
  return std::min(static_cast<int>(shifted), kCellsPerAxis - 1);
}

FeatureVector aggregate_predictions(const PredictionPair& v_transformed, std::size_t memsize,
                                    CellRule rule) {
  const auto i = static_cast<std::size_t>(prediction_cell(v_transformed[0], rule) +
                                          kCellsPerAxis * prediction_cell(v_transformed[1], rule));
  if (i >= memsize) throw ContractError("aggregated index exceeds memsize");
  return FeatureVector::one_hot(memsize, i);
}

FeatureVector gvf_feature(const Observation& obs, Action a, const PredictionPair& v_transformed,
                          CellRule rule) {
  const std::size_t cell = aggregate_predictions(v_transformed, kPredictionMemsize, rule)
                               .active_index();
  const std::size_t growth = obs.growth() ? 1 : 0;
  return FeatureVector::one_hot(
      kGvfFeatureDim, growth + 2 * static_cast<std::size_t>(index_of(a)) + 4 * cell);
}

FeatureVector obs_feature(const Observation& obs) {
  return FeatureVector::one_hot(kObsFeatureDim, obs.growth() ? 0 : 1);
}

QWeights::QWeights(std::size_t dim, double gamma) : gamma_c(gamma) {
  for (auto& row : w) row.assign(dim, 0.0);
}

QValues q_values(const QWeights& w, const FeatureVector& s) {
  QValues q{};
  for (int a = 0; a < kNumActions; ++a) q[a] = s.dot(w.w[a]);
  return q;
}

BehaviorDistribution behavior_distribution(const QValues& q, double epsilon) {
  const double best = *std::max_element(q.begin(), q.end());
  const auto n_best = static_cast<double>(std::count(q.begin(), q.end(), best));
  BehaviorDistribution b{};
  for (int a = 0; a < kNumActions; ++a) {
    b[a] = epsilon / kNumActions + (q[a] == best ? (1.0 - epsilon) / n_best : 0.0);
  }
  return b;
}

ActionChoice select_action(const QValues& q, double epsilon, Rng& rng) {
  if (!(epsilon >= 0.0 && epsilon <= 1.0)) throw ContractError("epsilon outside [0, 1]");
  int chosen = 0;
  if (rng.uniform() < epsilon) {
    chosen = static_cast<int>(rng.below(kNumActions));
  } else {
    const double best = *std::max_element(q.begin(), q.end());
    std::array<int, kNumActions> maximizers{};
    int n = 0;
    for (int a = 0; a < kNumActions; ++a) {
      if (q[a] == best) maximizers[n++] = a;
    }
    chosen = n == 1 ? maximizers[0] : maximizers[rng.below(static_cast<std::uint64_t>(n))];
  }
  return {action_from_index(chosen), behavior_distribution(q, epsilon)};
}

double control_td_error(const QWeights& w, const FeatureVector& s, Action a, double r,
                        const FeatureVector& s_next) {
  const QValues q_next = q_values(w, s_next);
  const double target = r + w.gamma_c * *std::max_element(q_next.begin(), q_next.end());
  return target - s.dot(w.w[index_of(a)]);
}

double q_learning_update(QWeights& w, const FeatureVector& s, Action a, double r,
                         const FeatureVector& s_next, double alpha) {
  if (!(alpha > 0.0)) throw ContractError("q_learning_update needs alpha > 0");
  const double delta = control_td_error(w, s, a, r, s_next);
  if (!std::isfinite(delta)) throw NumericError("non-finite control TD error");
  auto& row = w.w[index_of(a)];
  s.add_scaled_to(row, alpha * delta);
  for (const auto& e : s.entries()) {
    if (!std::isfinite(row[e.index])) throw NumericError("non-finite control weight");
  }
  return delta;
}

}  // namespace gvfd
