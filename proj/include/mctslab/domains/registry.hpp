#pragma once

#include <memory>
#include <string>

#include <json.hpp>

#include "mctslab/mdp.hpp"

namespace mctslab::domains {

/// Builds a domain from its name and a parameter table. Recognized names:
/// navigation, navigation_fig2, sysadmin, game_of_life, racetrack,
/// sailing_wind, tictactoe, connect4, and the abstraction_testbed layered
/// preset. Unknown parameter keys are hard errors.
std::unique_ptr<Mdp> build_domain(const std::string& name,
                                  const nlohmann::json& params = nlohmann::json::object());

}  // namespace mctslab::domains
