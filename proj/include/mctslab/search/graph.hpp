#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include "mctslab/mdp.hpp"
#include "mctslab/search/config.hpp"

namespace mctslab::search {

struct StateNode;
struct QNode;

/// A group of same-depth nodes sharing aggregate statistics. The
/// aggregates track the member sums exactly; creation ids break join
/// ties.
template <typename NodeT>
struct AbstractNodeT {
    std::vector<NodeT*> members;
    std::uint64_t visits = 0;
    double total_return = 0.0;
    NodeT* representative = nullptr;
    std::uint64_t creation_id = 0;
    int depth = 0;
    bool terminal_group = false;
    bool alive = true;

    int size() const { return static_cast<int>(members.size()); }
};

using AbstractStateNode = AbstractNodeT<StateNode>;
using AbstractQNode = AbstractNodeT<QNode>;

/// Snapshot of the pruned action set of a state node.
struct JSet {
    std::vector<ActionIndex> kept;
    std::uint32_t computed_at_visits = 0;
    bool valid = false;
};

struct QNode {
    StateNode* parent = nullptr;
    ActionIndex action = 0;
    double reward = 0.0;  // R(parent state, action)

    std::uint32_t visits = 0;       // N_a
    double total_return = 0.0;      // V_a, perspective of the player to move at parent
    double total_return_sq = 0.0;   // for confidence-interval pruning

    std::vector<std::pair<StateNode*, double>> successors;  // (node, model probability)
    std::ptrdiff_t expected_support = -1;                   // lazily filled
    bool full = false;                                      // all successors sampled

    AbstractQNode* group = nullptr;
    int recency = 0;
    std::uint32_t node_id = 0;

    double q() const { return total_return / static_cast<double>(visits); }
};

struct StateNode {
    EnvState state;
    int depth = 0;
    std::vector<QNode> children;   // one per legal action, in action order
    std::vector<QNode*> parents;   // q nodes with this node among their successors

    std::uint32_t visits = 0;
    double total_return = 0.0;     // player-0 return-to-go sum
    std::uint32_t end_visits = 0;  // iterations whose descent ended here

    AbstractStateNode* group = nullptr;
    JSet jset;
    int recency = 0;
    bool abs_updated = false;  // some gated abstraction update has run
    std::uint32_t node_id = 0;

    bool fully_expanded() const {
        for (const auto& q : children)
            if (q.visits == 0)
                return false;
        return true;
    }
};

enum class StatsSource { ground, aggregate };

/// UCB score of a Q node: mean return plus lambda * sqrt(ln(parent
/// visits) / visits), with visits and returns drawn from the chosen
/// source. Unvisited nodes score +infinity.
inline double ucb_value(const QNode& q, std::uint64_t parent_visits, double lambda,
                        StatsSource source) {
    const std::uint64_t n = source == StatsSource::aggregate ? q.group->visits : q.visits;
    if (n == 0)
        return std::numeric_limits<double>::infinity();
    const double v = source == StatsSource::aggregate ? q.group->total_return : q.total_return;
    const double mean = v / static_cast<double>(n);
    if (lambda == 0.0)
        return mean;
    return mean + lambda * std::sqrt(std::log(static_cast<double>(parent_visits)) /
                                     static_cast<double>(n));
}

/// Running population statistics over the ground Q values of all visited
/// Q nodes; sigma() falls back when degenerate.
struct GlobalStdTracker {
    std::uint64_t count = 0;
    double sum = 0.0;
    double sum_sq = 0.0;

    void insert(double q) {
        ++count;
        sum += q;
        sum_sq += q * q;
    }
    void replace(double old_q, double new_q) {
        sum += new_q - old_q;
        sum_sq += new_q * new_q - old_q * old_q;
    }
    double sigma(double fallback) const {
        if (count < 2)
            return fallback;
        const double mean = sum / static_cast<double>(count);
        const double var = std::max(0.0, sum_sq / static_cast<double>(count) - mean * mean);
        const double sd = std::sqrt(var);
        return sd > 0.0 ? sd : fallback;
    }
};

}  // namespace mctslab::search
