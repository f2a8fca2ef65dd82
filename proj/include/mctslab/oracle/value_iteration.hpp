#pragma once

#include <functional>
#include <vector>

#include "mctslab/oracle/layered_mdp.hpp"

namespace mctslab::oracle {

/// Exact finite-horizon values: V[depth][state], Q[depth][state][action].
/// Terminal states have V = 0; elsewhere V(d,s) = max_a Q(d,s,a).
struct ValueTables {
    std::vector<std::vector<double>> v;
    std::vector<std::vector<std::vector<double>>> q;

    double value(int depth, int state) const {
        return v[static_cast<std::size_t>(depth)][static_cast<std::size_t>(state)];
    }
    double qvalue(int depth, int state, int action) const {
        return q[static_cast<std::size_t>(depth)][static_cast<std::size_t>(state)]
                [static_cast<std::size_t>(action)];
    }
};

/// Exact backward induction with gamma = 1.
ValueTables value_iteration(const LayeredMdp& mdp);

/// Expected return of a fixed deterministic policy (depth, state) -> action.
/// Returns V^pi tables (Q left empty).
std::vector<std::vector<double>> evaluate_policy(
    const LayeredMdp& mdp, const std::function<int(int, const LayeredState&)>& policy);

}  // namespace mctslab::oracle
