#include "mctslab/domains/layered_domain.hpp"

namespace mctslab::domains {

LayeredDomain::LayeredDomain(oracle::LayeredMdp mdp, std::string name) : mdp_(std::move(mdp)) {
    mdp_.validate();
    if (mdp_.layers[0].empty())
        throw InvalidSpec("layered domain: empty root layer");
    descriptor_.horizon = static_cast<int>(mdp_.num_layers()) - 1;
    descriptor_.discount = 1.0;
    descriptor_.num_players = 1;
    descriptor_.domain_name = std::move(name);
}

int LayeredDomain::layer_of(const EnvState& state) {
    int v = 0;
    for (int i = 0; i < 4; ++i)
        v |= static_cast<int>(state.key.bytes[static_cast<std::size_t>(i)]) << (8 * i);
    return v;
}

int LayeredDomain::index_of(const EnvState& state) {
    int v = 0;
    for (int i = 0; i < 4; ++i)
        v |= static_cast<int>(state.key.bytes[static_cast<std::size_t>(4 + i)]) << (8 * i);
    return v;
}

EnvState LayeredDomain::state_at(int layer, int index) const {
    EnvState s;
    s.key.push_u32(static_cast<std::uint32_t>(layer));
    s.key.push_u32(static_cast<std::uint32_t>(index));
    s.terminal = mdp_.state(layer, index).terminal;
    return s;
}

EnvState LayeredDomain::initial_state() const { return state_at(0, 0); }

int LayeredDomain::num_actions(const EnvState& state) const {
    return static_cast<int>(mdp_.state(layer_of(state), index_of(state)).actions.size());
}

double LayeredDomain::reward(const EnvState& state, ActionIndex action) const {
    check_action(state, action);
    return mdp_.state(layer_of(state), index_of(state))
        .actions[static_cast<std::size_t>(action)]
        .reward;
}

std::vector<TransitionEntry> LayeredDomain::transitions(const EnvState& state,
                                                        ActionIndex action) const {
    check_action(state, action);
    int layer = layer_of(state);
    const auto& act =
        mdp_.state(layer, index_of(state)).actions[static_cast<std::size_t>(action)];
    std::vector<TransitionEntry> out;
    out.reserve(act.outcomes.size());
    for (const auto& t : act.outcomes)
        out.push_back({state_at(layer + 1, t.successor), t.probability});
    return out;
}

std::unique_ptr<Mdp> build_layered(oracle::LayeredMdp mdp, std::string name) {
    return std::make_unique<LayeredDomain>(std::move(mdp), std::move(name));
}

}  // namespace mctslab::domains
