#include "mctslab/search/engine.hpp"

#include <chrono>

namespace mctslab::search {

SearchGraph::SearchGraph(const Mdp& mdp, EnvState root, const SearchConfig& config)
    : mdp_(mdp),
      config_(config),
      rng_(config.rng_seed),
      abstraction_(config.abstraction, config.recency_k, &rng_) {
    config_.validate();
    bool created = false;
    root_ = intern(0, std::move(root), created);
}

StateNode* SearchGraph::find_node(int depth, const EnvState& state) {
    auto it = index_.find(TranspoKey{depth, state.key});
    return it == index_.end() ? nullptr : it->second;
}

StateNode* SearchGraph::intern(int depth, const EnvState& state, bool& created) {
    TranspoKey key{depth, state.key};
    auto it = index_.find(key);
    if (it != index_.end()) {
        created = false;
        return it->second;
    }
    nodes_.emplace_back();
    StateNode* node = &nodes_.back();
    node->state = state;
    node->depth = depth;
    node->node_id = next_node_id_++;
    const int n = state.terminal || depth >= mdp_.descriptor().horizon
                      ? 0
                      : mdp_.num_actions(state);
    node->children.reserve(static_cast<std::size_t>(n));
    for (int a = 0; a < n; ++a) {
        QNode q;
        q.parent = node;
        q.action = a;
        q.reward = mdp_.reward(state, a);
        q.node_id = next_node_id_++;
        node->children.push_back(std::move(q));
    }
    index_.emplace(key, node);
    abstraction_.on_state_created(node);
    for (auto& q : node->children)
        abstraction_.on_q_created(&q);
    created = true;
    return node;
}

double SearchGraph::exploration_lambda() const {
    return config_.exploration_c * stats_.sigma(config_.sigma_fallback);
}

double global_std_exploration(const SearchGraph& graph, double c, double fallback) {
    return c * graph.q_stats().sigma(fallback);
}

ActionIndex SearchGraph::select_action(const StateNode& s, double lambda) const {
    std::uint64_t parent_visits = 0;
    for (const auto& q : s.children)
        parent_visits += q.group->visits;
    ActionIndex best = 0;
    double best_score = -std::numeric_limits<double>::infinity();
    for (std::size_t a = 0; a < s.children.size(); ++a) {
        const double score =
            ucb_value(s.children[a], parent_visits, lambda, StatsSource::aggregate);
        if (score > best_score) {
            best_score = score;
            best = static_cast<ActionIndex>(a);
        }
    }
    return best;
}

double SearchGraph::rollout(const StateNode& leaf) {
    EnvState state = leaf.state;
    double total = 0.0;
    for (int step = leaf.depth; step < mdp_.descriptor().horizon && !state.terminal; ++step) {
        const int n = mdp_.num_actions(state);
        const auto result = mdp_.sample(state, uniform_int(rng_, n), rng_);
        total += result.reward;
        state = result.successor;
    }
    return total;
}

void SearchGraph::run_iteration() {
    if (root_->state.terminal)
        throw InvalidSpec("run_iteration: root is terminal");

    const double lambda = exploration_lambda();
    abstraction_.set_sigma(stats_.sigma(config_.sigma_fallback));

    // selection and expansion
    path_.clear();
    StateNode* node = root_;
    while (!node->state.terminal && node->depth < mdp_.descriptor().horizon) {
        const ActionIndex action = select_action(*node, lambda);
        QNode* q = &node->children[static_cast<std::size_t>(action)];
        const auto sample = mdp_.sample(node->state, action, rng_);
        bool created = false;
        StateNode* child = intern(node->depth + 1, sample.successor, created);
        bool linked = false;
        for (const auto& [succ, prob] : q->successors) {
            if (succ == child) {
                linked = true;
                break;
            }
        }
        if (!linked) {
            q->successors.push_back({child, sample.probability});
            child->parents.push_back(q);
            if (q->expected_support < 0)
                q->expected_support = static_cast<std::ptrdiff_t>(
                    mdp_.support_size(node->state, action));
            q->full = static_cast<std::ptrdiff_t>(q->successors.size()) == q->expected_support;
        }
        path_.push_back({node, q});
        node = child;
        if (created)
            break;
    }

    // rollout from the endpoint, then backup along the path
    double g = rollout(*node);
    node->visits += 1;
    node->total_return += g;
    node->end_visits += 1;
    abstraction_.on_backup_state(node, g);
    for (std::size_t i = path_.size(); i-- > 0;) {
        auto [s, q] = path_[i];
        g = q->reward + g;
        const double signed_g = s->state.player_to_move == 0 ? g : -g;
        const double old_q = q->visits > 0 ? q->q() : 0.0;
        q->visits += 1;
        q->total_return += signed_g;
        q->total_return_sq += signed_g * signed_g;
        if (q->visits == 1)
            stats_.insert(q->q());
        else
            stats_.replace(old_q, q->q());
        abstraction_.on_backup_q(q, signed_g);
        s->visits += 1;
        s->total_return += g;
        abstraction_.on_backup_state(s, g);
    }

    // recency-gated abstraction updates, deepest first
    if (config_.abstraction.variant != AbstractionVariant::none) {
        for (std::size_t i = path_.size(); i-- > 0;) {
            auto [s, q] = path_[i];
            abstraction_.update_q_abstraction(q);
            abstraction_.update_state_abstraction(s);
        }
    }
}

void SearchGraph::run() {
    for (int i = 0; i < config_.iterations; ++i)
        run_iteration();
}

ActionIndex SearchGraph::decide() const {
    ActionIndex best = -1;
    double best_q = -std::numeric_limits<double>::infinity();
    for (std::size_t a = 0; a < root_->children.size(); ++a) {
        const auto& q = root_->children[a];
        if (q.visits == 0)
            continue;
        if (q.q() > best_q) {
            best_q = q.q();
            best = static_cast<ActionIndex>(a);
        }
    }
    if (best < 0)
        throw NoVisitedChild("decide: no visited root child");
    return best;
}

EpisodeResult play_episode(const Mdp& mdp, const SearchConfig& agent,
                           const std::optional<SearchConfig>& opponent, std::uint64_t seed,
                           const EpisodeOptions& options) {
    const auto& desc = mdp.descriptor();
    if (desc.num_players == 2 && !opponent)
        throw InvalidSpec("play_episode: two-player domain needs an opponent config");
    if (desc.num_players == 1 && opponent)
        throw InvalidSpec("play_episode: opponent config on a single-player domain");

    Rng env_rng(derive_stream(seed, 0x454e56));  // environment stream
    EnvState state = mdp.initial_state();
    double player0_return = 0.0;
    EpisodeResult result;
    double decision_ms = 0.0;
    double rate_sum = 0.0;
    int rate_count = 0;
    int agent_decisions = 0;

    for (int move = 0; move < desc.horizon && !state.terminal; ++move) {
        const bool agents_turn =
            desc.num_players == 1 || state.player_to_move == options.agent_player;
        const SearchConfig& base = agents_turn ? agent : *opponent;
        SearchConfig cfg = base;
        cfg.rng_seed =
            agents_turn
                ? derive_stream(seed, 0xa6e47u, static_cast<std::uint64_t>(move),
                                options.stream_id)
                : derive_stream(seed, 0x0bb05u, static_cast<std::uint64_t>(move));

        const auto start = std::chrono::steady_clock::now();
        SearchGraph graph(mdp, state, cfg);
        graph.run();
        const ActionIndex action = graph.decide();
        const auto stop = std::chrono::steady_clock::now();

        if (agents_turn) {
            decision_ms += std::chrono::duration<double, std::milli>(stop - start).count();
            ++agent_decisions;
            if (options.measure_abstraction_rate) {
                try {
                    rate_sum += graph.abstraction().abstraction_rate();
                    ++rate_count;
                } catch (const NoEligibleGroups&) {
                }
            }
        }
        if (options.record_moves)
            result.actions.push_back(action);
        const auto step = mdp.sample(state, action, env_rng);
        player0_return += step.reward;
        state = step.successor;
        ++result.moves;
    }

    const double sign = desc.num_players == 2 && options.agent_player == 1 ? -1.0 : 1.0;
    result.episode_return = sign * player0_return;
    if (agent_decisions > 0)
        result.decision_time_ms_mean = decision_ms / agent_decisions;
    if (options.measure_abstraction_rate && rate_count > 0)
        result.abstraction_rate_mean = rate_sum / rate_count;
    return result;
}

}  // namespace mctslab::search
