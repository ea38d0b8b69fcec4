#pragma once

// Linear Q-learning control with epsilon-greedy selection, and the feature
// maps that turn observations and transformed predictions into control and
// GVF states.

#include <array>
#include <vector>

#include "gvfd/features.hpp"
#include "gvfd/gvf.hpp"
#include "gvfd/monsoon_env.hpp"
#include "gvfd/rng.hpp"

namespace gvfd {

inline constexpr int kCellsPerAxis = 10;
inline constexpr std::size_t kPredictionMemsize = 100;
inline constexpr std::size_t kGvfFeatureDim = 400;
inline constexpr std::size_t kObsFeatureDim = 2;

// How a transformed prediction in [0, 9] is assigned to one of ten cells.
//   floor: cell = floor(T)
//   round: cell = floor(T + 0.5), capped at 9
// The echo fixed points land on integers, which are the floor boundaries:
// log(0.81) / log(0.9) evaluates to 1.9999999999999996 and floors to 1.
// Rounding keeps them at the centre of a cell.
enum class CellRule { floor, round };

int prediction_cell(double v_transformed, CellRule rule);

using PredictionPair = std::array<double, 2>;

// One-hot at cell(v0) + 10 * cell(v1) over memsize entries.
FeatureVector aggregate_predictions(const PredictionPair& v_transformed, std::size_t memsize,
                                    CellRule rule = CellRule::round);

// One-hot over (growth bit) x (action) x (prediction cell), length 400:
//   index = growth + 2 * action + 4 * (cell(v0) + 10 * cell(v1))
// where growth is 1 for a growth observation.
FeatureVector gvf_feature(const Observation& obs, Action a, const PredictionPair& v_transformed,
                          CellRule rule = CellRule::round);

// One-hot over the two observation outcomes: growth -> 0, no growth -> 1.
FeatureVector obs_feature(const Observation& obs);

struct QWeights {
  std::array<std::vector<double>, kNumActions> w;
  double gamma_c = 0.9;

  QWeights() = default;
  QWeights(std::size_t dim, double gamma_c);
  std::size_t dim() const { return w[0].size(); }
  friend bool operator==(const QWeights&, const QWeights&) = default;
};

using QValues = std::array<double, kNumActions>;

QValues q_values(const QWeights& w, const FeatureVector& s);

struct ActionChoice {
  Action action;
  BehaviorDistribution behavior;
};

// Behavior distribution implied by epsilon-greedy with uniform tie-breaking.
BehaviorDistribution behavior_distribution(const QValues& q, double epsilon);

ActionChoice select_action(const QValues& q, double epsilon, Rng& rng);

// r + gamma_c * max_a' Q(s_next, a') - Q(s, a)
double control_td_error(const QWeights& w, const FeatureVector& s, Action a, double r,
                        const FeatureVector& s_next);

// Applies w[a] += alpha * delta * s and returns delta. NumericError on a
// non-finite error or weight.
double q_learning_update(QWeights& w, const FeatureVector& s, Action a, double r,
                         const FeatureVector& s_next, double alpha);

}  // namespace gvfd
