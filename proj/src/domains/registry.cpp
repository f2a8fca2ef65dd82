#include "mctslab/domains/registry.hpp"

#include <set>

#include "mctslab/domains/board_games.hpp"
#include "mctslab/domains/game_of_life.hpp"
#include "mctslab/domains/layered_domain.hpp"
#include "mctslab/domains/navigation.hpp"
#include "mctslab/domains/racetrack.hpp"
#include "mctslab/domains/sailing.hpp"
#include "mctslab/domains/sysadmin.hpp"
#include "mctslab/domains/testbed.hpp"

namespace mctslab::domains {

namespace {

using nlohmann::json;

void check_keys(const json& params, const std::set<std::string>& allowed) {
    if (!params.is_object())
        throw InvalidSpec("domain params must be an object");
    for (const auto& [key, value] : params.items()) {
        (void)value;
        if (!allowed.count(key))
            throw InvalidSpec("unknown domain parameter '" + key + "'");
    }
}

template <typename T>
T get_or(const json& params, const std::string& key, T fallback) {
    auto it = params.find(key);
    return it == params.end() ? fallback : it->get<T>();
}

}  // namespace

std::unique_ptr<Mdp> build_domain(const std::string& name, const json& params) {
    if (name == "navigation_fig2") {
        check_keys(params, {});
        return build_navigation(navigation_fig2_spec());
    }
    if (name == "navigation") {
        check_keys(params, {"width", "height", "start_cell", "goal_cell", "reset_prob"});
        NavigationSpec spec;
        spec.width = params.at("width").get<int>();
        spec.height = params.at("height").get<int>();
        spec.start_cell = params.at("start_cell").get<int>();
        spec.goal_cell = params.at("goal_cell").get<int>();
        spec.reset_prob = params.at("reset_prob").get<std::vector<double>>();
        return build_navigation(spec);
    }
    if (name == "sysadmin") {
        check_keys(params, {"topology", "machines", "grid_width", "grid_height"});
        SysAdminSpec spec;
        std::string topo = get_or<std::string>(params, "topology", "ring");
        if (topo == "ring")
            spec.topology = SysAdminSpec::Topology::ring;
        else if (topo == "grid")
            spec.topology = SysAdminSpec::Topology::grid;
        else
            throw InvalidSpec("sysadmin: unknown topology '" + topo + "'");
        spec.machines = get_or(params, "machines", spec.machines);
        spec.grid_width = get_or(params, "grid_width", spec.grid_width);
        spec.grid_height = get_or(params, "grid_height", spec.grid_height);
        return build_sysadmin(spec);
    }
    if (name == "game_of_life") {
        check_keys(params, {"width", "height", "noise"});
        GameOfLifeSpec spec;
        spec.width = get_or(params, "width", spec.width);
        spec.height = get_or(params, "height", spec.height);
        spec.noise = get_or(params, "noise", spec.noise);
        return build_game_of_life(spec);
    }
    if (name == "racetrack") {
        check_keys(params, {"map", "slip", "max_speed"});
        RacetrackSpec spec = racetrack_default_spec();
        if (params.count("map"))
            spec.map = params.at("map").get<std::vector<std::string>>();
        spec.slip = get_or(params, "slip", spec.slip);
        spec.max_speed = get_or(params, "max_speed", spec.max_speed);
        return build_racetrack(spec);
    }
    if (name == "sailing_wind") {
        check_keys(params, {"width", "height", "shift_prob"});
        SailingSpec spec;
        spec.width = get_or(params, "width", spec.width);
        spec.height = get_or(params, "height", spec.height);
        spec.shift_prob = get_or(params, "shift_prob", spec.shift_prob);
        return build_sailing(spec);
    }
    if (name == "tictactoe") {
        check_keys(params, {});
        return build_tictactoe();
    }
    if (name == "connect4") {
        check_keys(params, {});
        return build_connect4();
    }
    if (name == "abstraction_testbed") {
        check_keys(params, {});
        return build_layered(abstraction_testbed(), "abstraction_testbed");
    }
    throw UnknownDomain("unknown domain '" + name + "'");
}

}  // namespace mctslab::domains
