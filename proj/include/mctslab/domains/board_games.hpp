#pragma once

#include <memory>

#include "mctslab/mdp.hpp"

namespace mctslab::domains {

/// Two-player zero-sum games. Rewards are reported from player 0's
/// perspective: the move that ends the game yields +1 (player 0 won),
/// -1 (player 1 won) or 0 (draw); every other move yields 0.

/// Actions are the empty cells in row-major order.
class TicTacToe : public Mdp {
public:
    TicTacToe();

    EnvState initial_state() const override;
    int num_actions(const EnvState& state) const override;
    double reward(const EnvState& state, ActionIndex action) const override;
    std::vector<TransitionEntry> transitions(const EnvState& state,
                                             ActionIndex action) const override;
    std::string action_name(const EnvState& state, ActionIndex action) const override;

    /// Terminal value from player 0's perspective (+1/-1/0).
    static double terminal_value(const EnvState& state);

private:
    EnvState apply(const EnvState& state, ActionIndex action) const;
    int cell_of_action(const EnvState& state, ActionIndex action) const;
};

/// Actions are the non-full columns from left to right.
class Connect4 : public Mdp {
public:
    Connect4();

    EnvState initial_state() const override;
    int num_actions(const EnvState& state) const override;
    double reward(const EnvState& state, ActionIndex action) const override;
    std::vector<TransitionEntry> transitions(const EnvState& state,
                                             ActionIndex action) const override;
    std::string action_name(const EnvState& state, ActionIndex action) const override;

private:
    EnvState apply(const EnvState& state, ActionIndex action) const;
    int column_of_action(const EnvState& state, ActionIndex action) const;
};

std::unique_ptr<Mdp> build_tictactoe();
std::unique_ptr<Mdp> build_connect4();

}  // namespace mctslab::domains
