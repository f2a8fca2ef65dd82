#pragma once

#include <array>
#include <unordered_map>
#include <vector>

#include "mctslab/mdp.hpp"
#include "mctslab/oracle/layered_mdp.hpp"
#include "mctslab/oracle/value_iteration.hpp"

namespace mctslab::oracle {

/// Fully enumerated reachable state space of a bound domain, in BFS
/// discovery order from the initial state.
struct GroundModel {
    struct Action {
        double reward = 0.0;
        std::vector<std::pair<int, double>> outcomes;  // (state index, probability)
    };

    std::vector<EnvState> states;
    std::vector<std::vector<Action>> actions;  // empty for terminal states
    std::unordered_map<EnvState, int, EnvStateHash> index;

    bool terminal(int s) const { return states[static_cast<std::size_t>(s)].terminal; }

    static GroundModel enumerate(const Mdp& mdp, std::size_t max_states = 1u << 20);
};

/// V[h][s] and Q[h][s][a] with h = remaining steps (h = 0 is all zero).
struct HorizonTables {
    std::vector<std::vector<double>> v;
    std::vector<std::vector<std::vector<double>>> q;

    double value(int remaining, int state) const {
        return v[static_cast<std::size_t>(remaining)][static_cast<std::size_t>(state)];
    }
    double qvalue(int remaining, int state, int action) const {
        return q[static_cast<std::size_t>(remaining)][static_cast<std::size_t>(state)]
                [static_cast<std::size_t>(action)];
    }

    static HorizonTables compute(const GroundModel& model, int horizon);
};

/// A domain unrolled into explicit layered form. layer_index maps
/// (depth, state) back to the layered state id.
struct Unrolled {
    LayeredMdp mdp;
    std::vector<std::unordered_map<EnvState, int, EnvStateHash>> layer_index;
};

/// Layers are the depth-d reachable sets from the initial state; states at
/// depth == horizon are cut off as terminal.
Unrolled unroll_reachable(const Mdp& mdp, int horizon, std::size_t max_states = 1u << 22);

/// Every layer holds the full reachable state set, so layer d values are
/// the remaining-horizon (H - d) values of every state.
Unrolled unroll_stationary(const Mdp& mdp, int horizon, std::size_t max_states = 1u << 20);

struct ValueEquivalenceReport {
    std::array<double, 3> v_abs{};  // V*-equality ratio after i = 0, 1, 2 steps
    std::array<double, 3> q_abs{};  // Q*-equality ratio for the action taken at step i
};

/// Samples pairs of reachable non-terminal states uniformly, walks each
/// side with i independent random actions, and compares V* of the reached
/// states and Q* of one further random action at remaining horizon H - i.
/// Trials that hit a terminal state before the comparison are redrawn.
/// Value comparisons use a 1e-9 tolerance.
ValueEquivalenceReport value_equivalence_ratios(const GroundModel& model,
                                                const HorizonTables& tables, int horizon,
                                                std::uint64_t samples, Rng& rng);

}  // namespace mctslab::oracle
