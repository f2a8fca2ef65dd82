#include "mctslab/oracle/ground_model.hpp"

#include <cmath>
#include <deque>

namespace mctslab::oracle {

GroundModel GroundModel::enumerate(const Mdp& mdp, std::size_t max_states) {
    GroundModel model;
    std::deque<int> frontier;
    auto intern = [&](const EnvState& s) {
        auto it = model.index.find(s);
        if (it != model.index.end())
            return it->second;
        if (model.states.size() >= max_states)
            throw InvalidSpec("ground model: state space exceeds " +
                              std::to_string(max_states));
        int id = static_cast<int>(model.states.size());
        model.states.push_back(s);
        model.index.emplace(s, id);
        frontier.push_back(id);
        return id;
    };
    intern(mdp.initial_state());
    while (!frontier.empty()) {
        int id = frontier.front();
        frontier.pop_front();
        EnvState state = model.states[static_cast<std::size_t>(id)];
        int n = mdp.num_actions(state);
        std::vector<Action> acts(static_cast<std::size_t>(n));
        for (int a = 0; a < n; ++a) {
            acts[static_cast<std::size_t>(a)].reward = mdp.reward(state, a);
            for (const auto& t : mdp.transitions(state, a))
                acts[static_cast<std::size_t>(a)].outcomes.push_back(
                    {intern(t.successor), t.probability});
        }
        if (static_cast<std::size_t>(id) >= model.actions.size())
            model.actions.resize(static_cast<std::size_t>(id) + 1);
        model.actions[static_cast<std::size_t>(id)] = std::move(acts);
    }
    model.actions.resize(model.states.size());
    return model;
}

HorizonTables HorizonTables::compute(const GroundModel& model, int horizon) {
    HorizonTables t;
    const std::size_t n = model.states.size();
    t.v.assign(static_cast<std::size_t>(horizon) + 1, std::vector<double>(n, 0.0));
    t.q.resize(static_cast<std::size_t>(horizon) + 1);
    t.q[0].resize(n);
    for (std::size_t s = 0; s < n; ++s)
        t.q[0][s].assign(model.actions[s].size(), 0.0);
    for (int h = 1; h <= horizon; ++h) {
        auto hu = static_cast<std::size_t>(h);
        t.q[hu].resize(n);
        for (std::size_t s = 0; s < n; ++s) {
            const auto& acts = model.actions[s];
            t.q[hu][s].assign(acts.size(), 0.0);
            if (model.terminal(static_cast<int>(s)))
                continue;
            double best = -std::numeric_limits<double>::infinity();
            for (std::size_t a = 0; a < acts.size(); ++a) {
                double q = acts[a].reward;
                for (const auto& [succ, p] : acts[a].outcomes)
                    q += p * t.v[hu - 1][static_cast<std::size_t>(succ)];
                t.q[hu][s][a] = q;
                best = std::max(best, q);
            }
            t.v[hu][s] = acts.empty() ? 0.0 : best;
        }
    }
    return t;
}

Unrolled unroll_reachable(const Mdp& mdp, int horizon, std::size_t max_states) {
    Unrolled out;
    std::size_t total = 0;
    out.layer_index.emplace_back();
    out.mdp.layers.emplace_back();
    auto intern = [&](int depth, const EnvState& s, bool force_terminal) {
        auto du = static_cast<std::size_t>(depth);
        auto it = out.layer_index[du].find(s);
        if (it != out.layer_index[du].end())
            return it->second;
        if (++total > max_states)
            throw InvalidSpec("unroll: state count exceeds " + std::to_string(max_states));
        int id = static_cast<int>(out.mdp.layers[du].size());
        LayeredState ls;
        ls.name = "s" + std::to_string(depth) + "_" + std::to_string(id);
        ls.terminal = s.terminal || force_terminal;
        out.mdp.layers[du].push_back(std::move(ls));
        out.layer_index[du].emplace(s, id);
        return id;
    };
    intern(0, mdp.initial_state(), horizon == 0);
    std::vector<EnvState> current{mdp.initial_state()};
    for (int d = 0; d < horizon && !current.empty(); ++d) {
        auto du = static_cast<std::size_t>(d);
        out.layer_index.emplace_back();
        out.mdp.layers.emplace_back();
        std::vector<EnvState> next;
        for (const auto& s : current) {
            int id = out.layer_index[du].at(s);
            auto& ls = out.mdp.layers[du][static_cast<std::size_t>(id)];
            if (ls.terminal)
                continue;
            int n = mdp.num_actions(s);
            for (int a = 0; a < n; ++a) {
                LayeredAction act;
                act.reward = mdp.reward(s, a);
                for (const auto& t : mdp.transitions(s, a)) {
                    bool fresh = !out.layer_index[du + 1].count(t.successor);
                    int succ = intern(d + 1, t.successor, d + 1 == horizon);
                    if (fresh)
                        next.push_back(t.successor);
                    act.outcomes.push_back({succ, t.probability});
                }
                ls.actions.push_back(std::move(act));
            }
        }
        if (out.mdp.layers[du + 1].empty()) {
            out.mdp.layers.pop_back();
            out.layer_index.pop_back();
            break;
        }
        current = std::move(next);
    }
    out.mdp.validate();
    return out;
}

Unrolled unroll_stationary(const Mdp& mdp, int horizon, std::size_t max_states) {
    GroundModel model = GroundModel::enumerate(mdp, max_states);
    Unrolled out;
    for (int d = 0; d <= horizon; ++d) {
        auto du = static_cast<std::size_t>(d);
        out.mdp.layers.emplace_back();
        out.layer_index.emplace_back();
        for (std::size_t s = 0; s < model.states.size(); ++s) {
            LayeredState ls;
            ls.name = "s" + std::to_string(d) + "_" + std::to_string(s);
            ls.terminal = model.terminal(static_cast<int>(s)) || d == horizon;
            if (!ls.terminal) {
                for (const auto& act : model.actions[s]) {
                    LayeredAction la;
                    la.reward = act.reward;
                    for (const auto& [succ, p] : act.outcomes)
                        la.outcomes.push_back({succ, p});
                    ls.actions.push_back(std::move(la));
                }
            }
            out.mdp.layers[du].push_back(std::move(ls));
            out.layer_index[du].emplace(model.states[s], static_cast<int>(s));
        }
    }
    out.mdp.validate();
    return out;
}

ValueEquivalenceReport value_equivalence_ratios(const GroundModel& model,
                                                const HorizonTables& tables, int horizon,
                                                std::uint64_t samples, Rng& rng) {
    std::vector<int> live;
    for (std::size_t s = 0; s < model.states.size(); ++s)
        if (!model.terminal(static_cast<int>(s)))
            live.push_back(static_cast<int>(s));
    if (live.empty())
        throw InvalidSpec("value_equivalence_ratios: no non-terminal states");

    auto walk = [&](int state, int steps, int& out_state, int& out_action) {
        for (int i = 0; i < steps; ++i) {
            if (model.terminal(state))
                return false;
            const auto& acts = model.actions[static_cast<std::size_t>(state)];
            int a = uniform_int(rng, static_cast<int>(acts.size()));
            double u = uniform_real(rng);
            double acc = 0.0;
            int succ = acts[static_cast<std::size_t>(a)].outcomes.back().first;
            for (const auto& [next, p] : acts[static_cast<std::size_t>(a)].outcomes) {
                acc += p;
                if (u < acc) {
                    succ = next;
                    break;
                }
            }
            state = succ;
        }
        if (model.terminal(state))
            return false;
        out_state = state;
        out_action = uniform_int(
            rng, static_cast<int>(model.actions[static_cast<std::size_t>(state)].size()));
        return true;
    };

    ValueEquivalenceReport report;
    for (int i = 0; i < 3; ++i) {
        if (horizon - i < 1)
            throw RangeExceeded("value_equivalence_ratios: horizon too short");
        std::uint64_t v_hits = 0, q_hits = 0;
        const std::uint64_t max_attempts = samples * 1000;
        std::uint64_t attempts = 0;
        for (std::uint64_t t = 0; t < samples; ++t) {
            int s1, s2, a1, a2;
            for (;;) {
                if (++attempts > max_attempts)
                    throw InvalidSpec("value_equivalence_ratios: too many terminal redraws");
                int start1 = live[static_cast<std::size_t>(
                    uniform_int(rng, static_cast<int>(live.size())))];
                int start2 = live[static_cast<std::size_t>(
                    uniform_int(rng, static_cast<int>(live.size())))];
                if (walk(start1, i, s1, a1) && walk(start2, i, s2, a2))
                    break;
            }
            int h = horizon - i;
            if (std::fabs(tables.value(h, s1) - tables.value(h, s2)) <= 1e-9)
                ++v_hits;
            if (std::fabs(tables.qvalue(h, s1, a1) - tables.qvalue(h, s2, a2)) <= 1e-9)
                ++q_hits;
        }
        report.v_abs[static_cast<std::size_t>(i)] =
            static_cast<double>(v_hits) / static_cast<double>(samples);
        report.q_abs[static_cast<std::size_t>(i)] =
            static_cast<double>(q_hits) / static_cast<double>(samples);
    }
    return report;
}

}  // namespace mctslab::oracle
