#include "mctslab/oracle/value_iteration.hpp"

#include <algorithm>
#include <limits>

namespace mctslab::oracle {

ValueTables value_iteration(const LayeredMdp& mdp) {
    ValueTables t;
    const std::size_t depth = mdp.num_layers();
    t.v.resize(depth);
    t.q.resize(depth);
    for (std::size_t d = depth; d-- > 0;) {
        const auto& layer = mdp.layers[d];
        t.v[d].assign(layer.size(), 0.0);
        t.q[d].resize(layer.size());
        for (std::size_t s = 0; s < layer.size(); ++s) {
            const auto& st = layer[s];
            t.q[d][s].assign(st.actions.size(), 0.0);
            if (st.terminal)
                continue;
            double best = -std::numeric_limits<double>::infinity();
            for (std::size_t a = 0; a < st.actions.size(); ++a) {
                double q = st.actions[a].reward;
                for (const auto& tr : st.actions[a].outcomes)
                    q += tr.probability * t.v[d + 1][static_cast<std::size_t>(tr.successor)];
                t.q[d][s][a] = q;
                best = std::max(best, q);
            }
            t.v[d][s] = best;
        }
    }
    return t;
}

std::vector<std::vector<double>> evaluate_policy(
    const LayeredMdp& mdp, const std::function<int(int, const LayeredState&)>& policy) {
    const std::size_t depth = mdp.num_layers();
    std::vector<std::vector<double>> v(depth);
    for (std::size_t d = depth; d-- > 0;) {
        const auto& layer = mdp.layers[d];
        v[d].assign(layer.size(), 0.0);
        for (std::size_t s = 0; s < layer.size(); ++s) {
            const auto& st = layer[s];
            if (st.terminal)
                continue;
            int a = policy(static_cast<int>(d), st);
            const auto& act = st.actions[static_cast<std::size_t>(a)];
            double val = act.reward;
            for (const auto& tr : act.outcomes)
                val += tr.probability * v[d + 1][static_cast<std::size_t>(tr.successor)];
            v[d][s] = val;
        }
    }
    return v;
}

}  // namespace mctslab::oracle
