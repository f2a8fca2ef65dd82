#pragma once

#include <deque>
#include <memory>
#include <optional>
#include <unordered_map>

#include "mctslab/mdp.hpp"
#include "mctslab/search/abstraction.hpp"
#include "mctslab/search/config.hpp"
#include "mctslab/search/graph.hpp"

namespace mctslab::search {

struct NoVisitedChild : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Layered search DAG with transposition (one node per (depth, state)),
/// UCB tree policy over aggregate abstraction statistics, uniform random
/// rollouts, and Global-Std exploration. Confined to a single episode
/// worker.
class SearchGraph {
public:
    SearchGraph(const Mdp& mdp, EnvState root, const SearchConfig& config);

    /// One selection-expansion-rollout-backup pass plus the recency-gated
    /// abstraction updates along the path.
    void run_iteration();
    void run();  // config.iterations times

    /// Greedy root decision over ground Q values; unvisited children are
    /// excluded, ties go to the lowest action index.
    ActionIndex decide() const;

    /// Current Global-Std exploration factor C * sigma.
    double exploration_lambda() const;

    const StateNode& root() const { return *root_; }
    StateNode& root() { return *root_; }
    const Mdp& mdp() const { return mdp_; }
    const SearchConfig& config() const { return config_; }
    AbstractionManager& abstraction() { return abstraction_; }
    const AbstractionManager& abstraction() const { return abstraction_; }
    const GlobalStdTracker& q_stats() const { return stats_; }
    std::size_t node_count() const { return nodes_.size(); }

    /// All state nodes in creation order (test support).
    const std::deque<StateNode>& nodes() const { return nodes_; }

    StateNode* find_node(int depth, const EnvState& state);

private:
    StateNode* intern(int depth, const EnvState& state, bool& created);
    ActionIndex select_action(const StateNode& s, double lambda) const;
    double rollout(const StateNode& leaf);

    struct TranspoKey {
        int depth;
        StateKey key;
        bool operator==(const TranspoKey& o) const { return depth == o.depth && key == o.key; }
    };
    struct TranspoHash {
        std::size_t operator()(const TranspoKey& k) const {
            return static_cast<std::size_t>(k.key.hash() ^
                                            (static_cast<std::uint64_t>(k.depth) * 0x9e3779b9));
        }
    };

    const Mdp& mdp_;
    SearchConfig config_;
    Rng rng_;
    std::deque<StateNode> nodes_;
    std::unordered_map<TranspoKey, StateNode*, TranspoHash> index_;
    StateNode* root_ = nullptr;
    AbstractionManager abstraction_;
    GlobalStdTracker stats_;
    std::uint32_t next_node_id_ = 0;
    std::vector<std::pair<StateNode*, QNode*>> path_;  // reused between iterations
};

/// Global-Std exploration factor of a graph: C times the population
/// standard deviation of the ground Q values, or C * fallback when fewer
/// than two Q values exist or the deviation is zero.
double global_std_exploration(const SearchGraph& graph, double c, double fallback);

struct EpisodeResult {
    double episode_return = 0.0;      // evaluated agent's perspective
    int moves = 0;
    double decision_time_ms_mean = 0.0;
    std::optional<double> abstraction_rate_mean;  // when measured
    std::vector<ActionIndex> actions;             // when recorded
};

struct EpisodeOptions {
    bool measure_abstraction_rate = false;
    int agent_player = 0;         // seat of the evaluated agent in two-player games
    std::uint64_t stream_id = 0;  // differentiates the agent's search streams only
    bool record_moves = false;
};

/// Plays one episode with a fresh search per decision (no tree reuse).
/// Two-player games require an opponent config; returns are reported from
/// the evaluated agent's perspective. Identical seeds and configs give
/// identical returns.
EpisodeResult play_episode(const Mdp& mdp, const SearchConfig& agent,
                           const std::optional<SearchConfig>& opponent, std::uint64_t seed,
                           const EpisodeOptions& options = {});

}  // namespace mctslab::search
