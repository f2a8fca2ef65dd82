#include "mctslab/domains/racetrack.hpp"

#include <algorithm>
#include <cmath>

namespace mctslab::domains {

void RacetrackSpec::validate() const {
    if (map.empty() || map[0].empty())
        throw InvalidSpec("racetrack: empty map");
    bool has_start = false, has_finish = false;
    for (const auto& row : map) {
        if (row.size() != map[0].size())
            throw InvalidSpec("racetrack: ragged map rows");
        for (char c : row) {
            if (c != '#' && c != '.' && c != 'S' && c != 'F')
                throw InvalidSpec(std::string("racetrack: bad map character '") + c + "'");
            has_start |= c == 'S';
            has_finish |= c == 'F';
        }
    }
    if (!has_start || !has_finish)
        throw InvalidSpec("racetrack: start and finish lines must be non-empty");
    if (slip < 0.0 || slip > 1.0)
        throw InvalidSpec("racetrack: slip probability out of [0,1]");
    if (max_speed < 1 || max_speed > 7)
        throw InvalidSpec("racetrack: max_speed out of [1,7]");
}

Racetrack::Racetrack(RacetrackSpec spec) : spec_(std::move(spec)) {
    spec_.validate();
    width_ = static_cast<int>(spec_.map[0].size());
    height_ = static_cast<int>(spec_.map.size());
    bool found = false;
    for (int y = 0; y < height_ && !found; ++y)
        for (int x = 0; x < width_ && !found; ++x)
            if (at(x, y) == 'S') {
                start_x_ = x;
                start_y_ = y;
                found = true;
            }
    descriptor_.horizon = 50;
    descriptor_.discount = 1.0;
    descriptor_.num_players = 1;
    descriptor_.domain_name = "racetrack";
}

char Racetrack::at(int x, int y) const {
    if (x < 0 || x >= width_ || y < 0 || y >= height_)
        return '#';
    return spec_.map[static_cast<std::size_t>(y)][static_cast<std::size_t>(x)];
}

Racetrack::Car Racetrack::car_of(const EnvState& state) const {
    Car car;
    car.x = state.key.bytes[0];
    car.y = state.key.bytes[1];
    car.vx = static_cast<int>(state.key.bytes[2]) - 8;
    car.vy = static_cast<int>(state.key.bytes[3]) - 8;
    return car;
}

EnvState Racetrack::make_state(const Car& car, bool terminal) const {
    EnvState s;
    s.key.push(static_cast<std::uint8_t>(car.x));
    s.key.push(static_cast<std::uint8_t>(car.y));
    s.key.push(static_cast<std::uint8_t>(car.vx + 8));
    s.key.push(static_cast<std::uint8_t>(car.vy + 8));
    s.terminal = terminal;
    return s;
}

EnvState Racetrack::initial_state() const {
    return make_state({start_x_, start_y_, 0, 0}, false);
}

int Racetrack::num_actions(const EnvState& state) const { return state.terminal ? 0 : 9; }

EnvState Racetrack::move(const Car& car, int ax, int ay) const {
    int vx = std::clamp(car.vx + ax, -spec_.max_speed, spec_.max_speed);
    int vy = std::clamp(car.vy + ay, -spec_.max_speed, spec_.max_speed);
    int tx = car.x + vx, ty = car.y + vy;
    // walk the segment cell by cell; crash on walls, stop on finish
    int steps = std::max(std::abs(vx), std::abs(vy));
    for (int i = 1; i <= steps; ++i) {
        int cx = car.x + static_cast<int>(std::lround(static_cast<double>(vx * i) / steps));
        int cy = car.y + static_cast<int>(std::lround(static_cast<double>(vy * i) / steps));
        char c = at(cx, cy);
        if (c == '#')
            return make_state({start_x_, start_y_, 0, 0}, false);
        if (c == 'F')
            return make_state({cx, cy, 0, 0}, true);
    }
    return make_state({tx, ty, vx, vy}, false);
}

double Racetrack::reward(const EnvState& state, ActionIndex action) const {
    check_action(state, action);
    return -1.0;
}

std::vector<TransitionEntry> Racetrack::transitions(const EnvState& state,
                                                    ActionIndex action) const {
    check_action(state, action);
    Car car = car_of(state);
    int ax = action / 3 - 1, ay = action % 3 - 1;
    EnvState intended = move(car, ax, ay);
    if ((ax == 0 && ay == 0) || spec_.slip == 0.0)
        return {{intended, 1.0}};
    EnvState slipped = move(car, 0, 0);
    if (slipped == intended)
        return {{intended, 1.0}};
    return {{intended, 1.0 - spec_.slip}, {slipped, spec_.slip}};
}

SampleResult Racetrack::sample(const EnvState& state, ActionIndex action, Rng& rng) const {
    check_action(state, action);
    auto dist = transitions(state, action);
    if (dist.size() == 1)
        return {dist[0].successor, -1.0, 1.0};
    if (uniform_real(rng) < spec_.slip)
        return {dist[1].successor, -1.0, dist[1].probability};
    return {dist[0].successor, -1.0, dist[0].probability};
}

std::string Racetrack::action_name(const EnvState&, ActionIndex action) const {
    return "ax" + std::to_string(action / 3 - 1) + "ay" + std::to_string(action % 3 - 1);
}

std::unique_ptr<Mdp> build_racetrack(const RacetrackSpec& spec) {
    return std::make_unique<Racetrack>(spec);
}

RacetrackSpec racetrack_default_spec() {
    RacetrackSpec spec;
    spec.map = {
        "########",
        "#....FF#",
        "#.##.###",
        "#.##...#",
        "#.##.#.#",
        "#......#",
        "#SS##..#",
        "########",
    };
    return spec;
}

}  // namespace mctslab::domains
