#pragma once

#include <limits>
#include <vector>

#include "mctslab/oracle/layered_mdp.hpp"
#include "mctslab/oracle/value_iteration.hpp"

namespace mctslab::oracle {

/// Disjoint blocks covering the states (or state-action pairs) of every
/// layer. Block ids are globally unique; two nodes are grouped iff their
/// ids are equal.
struct Partition {
    enum class Kind { state, qpair };

    Kind kind = Kind::state;
    // state kind: block_of_state[depth][state]
    std::vector<std::vector<int>> state_block;
    // qpair kind: block_of_pair[depth][state][action]
    std::vector<std::vector<std::vector<int>>> pair_block;

    int of_state(int depth, int state) const {
        return state_block[static_cast<std::size_t>(depth)][static_cast<std::size_t>(state)];
    }
    int of_pair(int depth, int state, int action) const {
        return pair_block[static_cast<std::size_t>(depth)][static_cast<std::size_t>(state)]
                         [static_cast<std::size_t>(action)];
    }
};

struct FixedPointResult {
    Partition states;
    Partition qpairs;
};

constexpr double kInfEps = std::numeric_limits<double>::infinity();

/// Exact bottom-up construction: terminal states of a layer share one
/// block; pair blocks require reward difference <= eps_a and class-total
/// transition distance <= eps_t (successors below alpha times the maximum
/// probability are dropped first, without renormalization); state blocks
/// require mutual action matching over the full action sets.
FixedPointResult exact_asap_fixed_point(const LayeredMdp& mdp, double eps_a = 0.0,
                                        double eps_t = 0.0, double alpha = 0.0);

/// Same alternation, but the state rule only quantifies over the optimal
/// actions (argmax of Q within 1e-9), matched against the full action set
/// of the other state. The pair rule is the exact one (eps = 0).
FixedPointResult exact_ipa_fixed_point(const LayeredMdp& mdp, const ValueTables& values);

}  // namespace mctslab::oracle
