#pragma once

#include <memory>

#include "mctslab/mdp.hpp"

namespace mctslab::domains {

/// Conway board the agent can seed. Actions 0..w*h-1 force the
/// corresponding cell alive in the next state, action w*h does nothing.
/// The next board is the B3/S23 update of the current one (dead border),
/// then the chosen cell is forced alive, then every cell flips
/// independently with the noise probability. Reward per step is the
/// current live-cell count. No terminal states.
struct GameOfLifeSpec {
    int width = 3;
    int height = 3;
    double noise = 0.05;

    void validate() const;
};

class GameOfLife : public Mdp {
public:
    explicit GameOfLife(GameOfLifeSpec spec);

    EnvState initial_state() const override;
    int num_actions(const EnvState& state) const override;
    double reward(const EnvState& state, ActionIndex action) const override;
    std::vector<TransitionEntry> transitions(const EnvState& state,
                                             ActionIndex action) const override;
    std::size_t support_size(const EnvState& state, ActionIndex action) const override;
    SampleResult sample(const EnvState& state, ActionIndex action, Rng& rng) const override;

private:
    std::uint32_t step_deterministic(std::uint32_t mask, ActionIndex action) const;
    std::uint32_t mask_of(const EnvState& state) const;
    EnvState make_state(std::uint32_t mask) const;

    GameOfLifeSpec spec_;
    int cells_ = 0;
};

std::unique_ptr<Mdp> build_game_of_life(const GameOfLifeSpec& spec);

}  // namespace mctslab::domains
