#pragma once

#include <memory>

#include "mctslab/mdp.hpp"
#include "mctslab/oracle/layered_mdp.hpp"

namespace mctslab::domains {

/// Exposes an explicitly enumerated layered MDP through the domain
/// interface; the layer is part of the state encoding. The root is the
/// first state of layer 0.
class LayeredDomain : public Mdp {
public:
    explicit LayeredDomain(oracle::LayeredMdp mdp, std::string name = "layered");

    EnvState initial_state() const override;
    int num_actions(const EnvState& state) const override;
    double reward(const EnvState& state, ActionIndex action) const override;
    std::vector<TransitionEntry> transitions(const EnvState& state,
                                             ActionIndex action) const override;

    const oracle::LayeredMdp& layered() const { return mdp_; }

    static int layer_of(const EnvState& state);
    static int index_of(const EnvState& state);
    EnvState state_at(int layer, int index) const;

private:
    oracle::LayeredMdp mdp_;
};

std::unique_ptr<Mdp> build_layered(oracle::LayeredMdp mdp, std::string name = "layered");

}  // namespace mctslab::domains
