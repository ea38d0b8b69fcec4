#include "gvfd/monsoon_env.hpp"

#include <string>

#include "gvfd/errors.hpp"

namespace gvfd {

Action action_from_index(int i) {
  if (i != 0 && i != 1) {
    throw ContractError("action index must be 0 or 1, got " + std::to_string(i));
  }
  return static_cast<Action>(i);
}

std::string_view to_string(Season s) {
  return s == Season::monsoon ? "monsoon" : "drought";
}

Season season_of(int phase) {
  if (phase < 0 || phase >= kNumPhases) {
    throw ContractError("phase out of range: " + std::to_string(phase));
  }
  return phase < 2 ? Season::monsoon : Season::drought;
}

std::pair<EnvState, Observation> reset(std::uint64_t /*seed*/) {
  return {EnvState{0}, Observation::from_growth(false)};
}

int reward_for(int phase, Action action) {
  const bool drought = season_of(phase) == Season::drought;
  const bool water = action == Action::water;
  return drought == water ? 1 : 0;
}

Action optimal_action(int phase) {
  return season_of(phase) == Season::drought ? Action::water : Action::not_water;
}

StepOutcome step(EnvState state, Action action) {
  const int r = reward_for(state.phase, action);
  return StepOutcome{r, Observation::from_growth(r == 1),
                     EnvState{(state.phase + 1) % kNumPhases}};
}

}  // namespace gvfd
