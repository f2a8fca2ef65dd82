#pragma once

#include <memory>
#include <vector>

#include "mctslab/mdp.hpp"

namespace mctslab::domains {

/// Grid-walk with per-cell reset probabilities. Cells are addressed
/// 1-based as displayed (index = x + 1 + width * y, y growing upward);
/// internal encoding is the 0-based cell x + width * y.
struct NavigationSpec {
    int width = 0;
    int height = 0;
    std::vector<double> reset_prob;  // row-major by 0-based cell
    int start_cell = 0;              // 1-based
    int goal_cell = 0;               // 1-based

    void validate() const;
};

/// Dynamics: four move actions in the order [up, down, left, right].
/// A move out of the current cell c is annulled with probability
/// reset_prob(c): the agent stays on c and the step cost is not
/// collected, so R(s,a) = -(1 - reset_prob(c)). Off-grid moves keep the
/// position, always cost the full step, and skip the reset check. The
/// goal cell is terminal.
class Navigation : public Mdp {
public:
    explicit Navigation(NavigationSpec spec);

    EnvState initial_state() const override;
    int num_actions(const EnvState& state) const override;
    double reward(const EnvState& state, ActionIndex action) const override;
    std::vector<TransitionEntry> transitions(const EnvState& state,
                                             ActionIndex action) const override;
    SampleResult sample(const EnvState& state, ActionIndex action, Rng& rng) const override;
    std::string action_name(const EnvState& state, ActionIndex action) const override;

    EnvState state_at_cell(int one_based_cell) const;
    int cell_of(const EnvState& state) const;  // 1-based

private:
    int destination(int cell, ActionIndex action) const;  // 0-based in, 0-based out
    EnvState make_state(int cell) const;                  // 0-based

    NavigationSpec spec_;
    int start_ = 0;  // 0-based
    int goal_ = 0;   // 0-based
};

std::unique_ptr<Mdp> build_navigation(const NavigationSpec& spec);

/// The 5x4 instance with start cell 3, goal cell 18, and reset
/// probability 0.5 on cells {1,5,6,8,10,15,16,17,19,20}.
NavigationSpec navigation_fig2_spec();

}  // namespace mctslab::domains
