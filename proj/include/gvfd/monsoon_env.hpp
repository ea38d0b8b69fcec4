#pragma once

// Monsoon World: a four-phase season cycle (two monsoon phases followed by
// two drought phases). The agent either waters its field or not; watering
// pays off only during drought, holding off only during monsoon. The season
// itself is never observed, only the outcome of the last action.

#include <array>
#include <cstdint>
#include <string_view>
#include <utility>

namespace gvfd {

inline constexpr int kNumPhases = 4;
inline constexpr int kNumActions = 2;
inline constexpr int kObsSize = 2;

enum class Season { monsoon, drought };

enum class Action : int { not_water = 0, water = 1 };

inline constexpr int index_of(Action a) { return static_cast<int>(a); }
Action action_from_index(int i);
std::string_view to_string(Season s);

struct EnvState {
  int phase = 0;
  friend bool operator==(const EnvState&, const EnvState&) = default;
};

// One-hot over {growth, no-growth}.
struct Observation {
  std::array<double, kObsSize> bits{0.0, 1.0};

  static Observation from_growth(bool growth) {
    return growth ? Observation{{1.0, 0.0}} : Observation{{0.0, 1.0}};
  }
  bool growth() const { return bits[0] == 1.0; }
  double operator[](std::size_t i) const { return bits[i]; }
  friend bool operator==(const Observation&, const Observation&) = default;
};

struct StepOutcome {
  int reward = 0;
  Observation observation;
  EnvState next_state;
};

// Throws ContractError for phases outside {0,1,2,3}.
Season season_of(int phase);

// The seed is accepted for interface symmetry; the world itself is deterministic.
std::pair<EnvState, Observation> reset(std::uint64_t seed);

StepOutcome step(EnvState state, Action action);

// Reward the action earns in the given phase, without advancing time.
int reward_for(int phase, Action action);

// The season-matched action.
Action optimal_action(int phase);

}  // namespace gvfd
