#pragma once

#include <deque>
#include <stdexcept>
#include <string>
#include <vector>

#include "mctslab/search/config.hpp"
#include "mctslab/search/graph.hpp"

namespace mctslab::search {

struct NotFullyExpanded : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Maintains the state and state-action-pair partitions over the live
/// search graph: singleton creation, terminal grouping, recency-gated
/// recomputation, representative bookkeeping, and the aggregate sums the
/// tree policy reads. Confined to one search graph; not thread-safe.
class AbstractionManager {
public:
    AbstractionManager(const AbstractionPolicy& policy, int recency_k, Rng* rng);

    // --- graph lifecycle hooks -------------------------------------------
    void on_state_created(StateNode* s);
    void on_q_created(QNode* q);
    void on_backup_q(QNode* q, double signed_return);
    void on_backup_state(StateNode* s, double player0_return);

    /// Sigma consulted by the pruning UCB during this iteration's updates.
    void set_sigma(double sigma) { sigma_ = sigma; }

    // --- recency-gated updates -------------------------------------------
    /// Returns true iff q changed group. Propagates a state update to the
    /// parent on change.
    bool update_q_abstraction(QNode* q, bool gated = true);
    /// Returns true iff s changed group. Propagates q updates to the
    /// parents on change.
    bool update_state_abstraction(StateNode* s, bool gated = true);

    // --- the grouping predicates and pruners -----------------------------
    /// Pair rule: rewards within eps_a and class-total transition distance
    /// within eps_t, successors below alpha * max probability dropped
    /// first. Throws NotFullyExpanded unless both pairs are fully sampled.
    bool q_pair_equivalent(const QNode& q1, const QNode& q2) const;

    /// Actions whose pruning-UCB reaches the maximum Q value, ground
    /// statistics. lambda_p = infinity keeps everything; 0 keeps the
    /// argmax set. Throws NotFullyExpanded unless every child is visited.
    JSet compute_j_ucb(const StateNode& s, double lambda_p, double sigma) const;

    /// Confidence-interval pruning: keep actions whose upper bound reaches
    /// the best lower bound.
    JSet conf_prune(const StateNode& s, double p_c) const;

    /// Keep the n_matches highest-Q actions once the node has n_min
    /// visits.
    JSet topn_prune(const StateNode& s, int n_matches, int n_min) const;

    /// Mutual matching of the kept actions inside the current pair
    /// partition.
    bool states_similar(const StateNode& s1, const StateNode& s2, const JSet& j1,
                        const JSet& j2) const;

    /// Singleton states move to a uniformly random same-depth group with
    /// probability p_move.
    void rstate_update(StateNode* s);

    // --- introspection ----------------------------------------------------
    const std::vector<AbstractStateNode*>& state_groups_at(int depth) const;
    const std::vector<AbstractQNode*>& q_groups_at(int depth) const;
    int max_depth() const { return static_cast<int>(state_groups_.size()) - 1; }

    /// Canonical dump of both partitions (group -> sorted member node
    /// ids), for reduction tests.
    std::string signature() const;

    /// Recomputes every aggregate from the members and compares; throws
    /// on mismatch (test support).
    void check_consistency() const;

    /// Fraction of eligible state groups of size one; excludes terminal
    /// groups and singletons that never received an update. Throws
    /// NoEligibleGroups when nothing qualifies.
    double abstraction_rate() const;

    const AbstractionPolicy& policy() const { return policy_; }

private:
    JSet full_jset(const StateNode& s) const;
    JSet state_jset(const StateNode& s) const;  // dispatch on variant
    bool pair_rule_applicable(const QNode& q) const { return q.full; }

    AbstractStateNode* new_state_group(StateNode* s);
    AbstractQNode* new_q_group(QNode* q);
    AbstractStateNode* terminal_group_at(int depth);
    void move_state(StateNode* s, AbstractStateNode* target);
    void move_q(QNode* q, AbstractQNode* target);

    AbstractionPolicy policy_;
    int recency_k_;
    Rng* rng_;
    double sigma_ = 1.0;
    double conf_z_ = 0.0;

    std::deque<AbstractStateNode> state_pool_;
    std::deque<AbstractQNode> q_pool_;
    std::vector<std::vector<AbstractStateNode*>> state_groups_;  // by depth
    std::vector<std::vector<AbstractQNode*>> q_groups_;          // by parent depth
    std::vector<AbstractStateNode*> terminal_groups_;            // by depth, may be null
    std::uint64_t next_state_group_id_ = 0;
    std::uint64_t next_q_group_id_ = 0;
};

struct NoEligibleGroups : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace mctslab::search
