#include "mctslab/oracle/fixed_point.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace mctslab::oracle {

namespace {

constexpr double kTol = 1e-9;

// Successor distribution folded over the state blocks of the next layer,
// after alpha pruning of low-probability successors (no renormalization).
std::map<int, double> class_distribution(const LayeredAction& action,
                                         const std::vector<int>& next_blocks, double alpha) {
    double max_p = 0.0;
    for (const auto& t : action.outcomes)
        max_p = std::max(max_p, t.probability);
    std::map<int, double> dist;
    for (const auto& t : action.outcomes) {
        if (t.probability < alpha * max_p)
            continue;
        dist[next_blocks[static_cast<std::size_t>(t.successor)]] += t.probability;
    }
    return dist;
}

bool pair_equivalent(double r1, const std::map<int, double>& d1, double r2,
                     const std::map<int, double>& d2, double eps_a, double eps_t) {
    if (!(eps_a == kInfEps) && std::fabs(r1 - r2) > eps_a + kTol)
        return false;
    double f = 0.0;
    auto it1 = d1.begin();
    auto it2 = d2.begin();
    while (it1 != d1.end() || it2 != d2.end()) {
        if (it2 == d2.end() || (it1 != d1.end() && it1->first < it2->first)) {
            f += std::fabs(it1->second);
            ++it1;
        } else if (it1 == d1.end() || it2->first < it1->first) {
            f += std::fabs(it2->second);
            ++it2;
        } else {
            f += std::fabs(it1->second - it2->second);
            ++it1;
            ++it2;
        }
    }
    return f <= eps_t + kTol;
}

struct Block {
    int id;
    int size;
    int rep;  // index of the representative element in per-layer numbering
};

// Largest block whose representative satisfies pred; ties by lowest id.
template <typename Pred>
Block* pick_block(std::vector<Block>& blocks, Pred&& pred) {
    Block* best = nullptr;
    for (auto& b : blocks) {
        if (!pred(b.rep))
            continue;
        if (!best || b.size > best->size || (b.size == best->size && b.id < best->id))
            best = &b;
    }
    return best;
}

FixedPointResult fixed_point(const LayeredMdp& mdp, double eps_a, double eps_t, double alpha,
                             const ValueTables* values) {
    const std::size_t depth = mdp.num_layers();
    FixedPointResult res;
    res.states.kind = Partition::Kind::state;
    res.qpairs.kind = Partition::Kind::qpair;
    res.states.state_block.resize(depth);
    res.qpairs.pair_block.resize(depth);
    int next_id = 0;

    // The optimal-action sets when building IPA; full sets for ASAP.
    auto kept_actions = [&](std::size_t d, std::size_t s) {
        const auto& st = mdp.layers[d][s];
        std::vector<int> kept;
        for (std::size_t a = 0; a < st.actions.size(); ++a) {
            if (!values ||
                values->q[d][s][a] >= values->v[d][s] - kTol)
                kept.push_back(static_cast<int>(a));
        }
        return kept;
    };

    for (std::size_t d = depth; d-- > 0;) {
        const auto& layer = mdp.layers[d];
        auto& sblock = res.states.state_block[d];
        auto& pblock = res.qpairs.pair_block[d];
        sblock.assign(layer.size(), -1);
        pblock.resize(layer.size());

        // Pair partition from the state partition one layer deeper.
        std::vector<std::vector<std::map<int, double>>> dists(layer.size());
        std::vector<Block> pair_blocks;
        // per-layer flat numbering of pairs, for representatives
        std::vector<std::pair<int, int>> flat;
        for (std::size_t s = 0; s < layer.size(); ++s) {
            const auto& st = layer[s];
            pblock[s].assign(st.actions.size(), -1);
            dists[s].resize(st.actions.size());
            for (std::size_t a = 0; a < st.actions.size(); ++a) {
                dists[s][a] =
                    class_distribution(st.actions[a], res.states.state_block[d + 1], alpha);
                auto matches = [&](int rep) {
                    auto [rs, ra] = flat[static_cast<std::size_t>(rep)];
                    return pair_equivalent(
                        st.actions[a].reward, dists[s][a],
                        layer[static_cast<std::size_t>(rs)]
                            .actions[static_cast<std::size_t>(ra)]
                            .reward,
                        dists[static_cast<std::size_t>(rs)][static_cast<std::size_t>(ra)], eps_a,
                        eps_t);
                };
                Block* target = pick_block(pair_blocks, matches);
                flat.push_back({static_cast<int>(s), static_cast<int>(a)});
                if (target) {
                    ++target->size;
                    pblock[s][a] = target->id;
                } else {
                    pair_blocks.push_back({next_id, 1, static_cast<int>(flat.size()) - 1});
                    pblock[s][a] = next_id;
                    ++next_id;
                }
            }
        }

        // State partition: terminals of a layer share one block, the rest
        // join by mutual matching of kept actions in the pair partition.
        int terminal_block = -1;
        std::vector<Block> state_blocks;
        std::vector<std::vector<int>> kept(layer.size());
        for (std::size_t s = 0; s < layer.size(); ++s) {
            if (layer[s].terminal) {
                if (terminal_block < 0)
                    terminal_block = next_id++;
                sblock[s] = terminal_block;
                continue;
            }
            kept[s] = kept_actions(d, s);
            auto similar = [&](int rep) {
                auto sr = static_cast<std::size_t>(rep);
                for (int a1 : kept[s]) {
                    bool found = false;
                    for (std::size_t a2 = 0; a2 < layer[sr].actions.size() && !found; ++a2)
                        found = pblock[s][static_cast<std::size_t>(a1)] == pblock[sr][a2];
                    if (!found)
                        return false;
                }
                for (int a2 : kept[sr]) {
                    bool found = false;
                    for (std::size_t a1 = 0; a1 < layer[s].actions.size() && !found; ++a1)
                        found = pblock[sr][static_cast<std::size_t>(a2)] == pblock[s][a1];
                    if (!found)
                        return false;
                }
                return true;
            };
            Block* target = pick_block(state_blocks, similar);
            if (target) {
                ++target->size;
                sblock[s] = target->id;
            } else {
                state_blocks.push_back({next_id, 1, static_cast<int>(s)});
                sblock[s] = next_id;
                ++next_id;
            }
        }
    }
    return res;
}

}  // namespace

FixedPointResult exact_asap_fixed_point(const LayeredMdp& mdp, double eps_a, double eps_t,
                                        double alpha) {
    return fixed_point(mdp, eps_a, eps_t, alpha, nullptr);
}

FixedPointResult exact_ipa_fixed_point(const LayeredMdp& mdp, const ValueTables& values) {
    return fixed_point(mdp, 0.0, 0.0, 0.0, &values);
}

}  // namespace mctslab::oracle
