#pragma once

#include <memory>

#include "mctslab/mdp.hpp"

namespace mctslab::domains {

/// Sailboat on a grid with a shifting wind. Headings are the eight
/// compass directions 0..7 (0 = north = +y, clockwise); sailing straight
/// into the wind is not offered, so every state has seven legal actions
/// ordered by heading. The step cost depends on the angular distance
/// between heading and wind direction: 1, 2, 3, 4 for 0..3 sectors of
/// 45 degrees. After the move the wind rotates one sector left or right
/// with probability 0.3 each. Off-grid headings keep the position but
/// still cost the step. The north-east corner is the terminal goal.
struct SailingSpec {
    int width = 8;
    int height = 8;
    double shift_prob = 0.3;

    void validate() const;
};

class SailingWind : public Mdp {
public:
    explicit SailingWind(SailingSpec spec);

    EnvState initial_state() const override;
    int num_actions(const EnvState& state) const override;
    double reward(const EnvState& state, ActionIndex action) const override;
    std::vector<TransitionEntry> transitions(const EnvState& state,
                                             ActionIndex action) const override;
    SampleResult sample(const EnvState& state, ActionIndex action, Rng& rng) const override;
    std::string action_name(const EnvState& state, ActionIndex action) const override;

private:
    int heading_of(const EnvState& state, ActionIndex action) const;
    EnvState make_state(int x, int y, int wind) const;

    SailingSpec spec_;
};

std::unique_ptr<Mdp> build_sailing(const SailingSpec& spec);

}  // namespace mctslab::domains
