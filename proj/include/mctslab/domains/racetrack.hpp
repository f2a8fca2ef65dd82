#pragma once

#include <memory>
#include <string>
#include <vector>

#include "mctslab/mdp.hpp"

namespace mctslab::domains {

/// Velocity-vector race on an ASCII map ('#' wall, '.' track, 'S' start
/// line, 'F' finish line; row 0 is the top line). The nine actions are the
/// accelerations (ax, ay) in row-major order over {-1,0,1}^2. With
/// probability 0.1 the acceleration slips and is ignored. Crossing a wall
/// or leaving the map resets the car to the first start cell with zero
/// velocity; crossing a finish cell ends the episode. Reward is -1 per
/// step.
struct RacetrackSpec {
    std::vector<std::string> map;
    double slip = 0.1;
    int max_speed = 5;

    void validate() const;
};

class Racetrack : public Mdp {
public:
    explicit Racetrack(RacetrackSpec spec);

    EnvState initial_state() const override;
    int num_actions(const EnvState& state) const override;
    double reward(const EnvState& state, ActionIndex action) const override;
    std::vector<TransitionEntry> transitions(const EnvState& state,
                                             ActionIndex action) const override;
    SampleResult sample(const EnvState& state, ActionIndex action, Rng& rng) const override;
    std::string action_name(const EnvState& state, ActionIndex action) const override;

private:
    struct Car {
        int x, y, vx, vy;
    };

    Car car_of(const EnvState& state) const;
    EnvState make_state(const Car& car, bool terminal) const;
    // applies one acceleration outcome; returns the resulting state
    EnvState move(const Car& car, int ax, int ay) const;
    char at(int x, int y) const;

    RacetrackSpec spec_;
    int width_ = 0, height_ = 0;
    int start_x_ = 0, start_y_ = 0;
};

std::unique_ptr<Mdp> build_racetrack(const RacetrackSpec& spec);

/// Compact default course with one left turn.
RacetrackSpec racetrack_default_spec();

}  // namespace mctslab::domains
