#include "mctslab/domains/sailing.hpp"

#include <algorithm>
#include <cmath>

namespace mctslab::domains {

namespace {
// compass headings, 0 = N, clockwise
constexpr int kDx[8] = {0, 1, 1, 1, 0, -1, -1, -1};
constexpr int kDy[8] = {1, 1, 0, -1, -1, -1, 0, 1};
constexpr const char* kHeadings[8] = {"N", "NE", "E", "SE", "S", "SW", "W", "NW"};
constexpr double kCost[4] = {1.0, 2.0, 3.0, 4.0};

int sector_distance(int a, int b) {
    int d = std::abs(a - b);
    return std::min(d, 8 - d);
}
}  // namespace

void SailingSpec::validate() const {
    if (width < 2 || height < 2)
        throw InvalidSpec("sailing: grid must be at least 2x2");
    if (width > 255 || height > 255)
        throw InvalidSpec("sailing: grid too large");
    if (shift_prob < 0.0 || shift_prob > 0.5)
        throw InvalidSpec("sailing: shift probability out of [0, 0.5]");
}

SailingWind::SailingWind(SailingSpec spec) : spec_(spec) {
    spec_.validate();
    descriptor_.horizon = 50;
    descriptor_.discount = 1.0;
    descriptor_.num_players = 1;
    descriptor_.domain_name = "sailing_wind";
}

EnvState SailingWind::make_state(int x, int y, int wind) const {
    EnvState s;
    s.key.push(static_cast<std::uint8_t>(x));
    s.key.push(static_cast<std::uint8_t>(y));
    s.key.push(static_cast<std::uint8_t>(wind));
    s.terminal = x == spec_.width - 1 && y == spec_.height - 1;
    return s;
}

EnvState SailingWind::initial_state() const { return make_state(0, 0, 0); }

int SailingWind::num_actions(const EnvState& state) const { return state.terminal ? 0 : 7; }

// The legal headings are 0..7 without the one opposite to the wind,
// in ascending heading order.
int SailingWind::heading_of(const EnvState& state, ActionIndex action) const {
    int wind = state.key.bytes[2];
    int into = (wind + 4) % 8;
    return action < into ? action : action + 1;
}

double SailingWind::reward(const EnvState& state, ActionIndex action) const {
    check_action(state, action);
    int wind = state.key.bytes[2];
    return -kCost[sector_distance(heading_of(state, action), wind)];
}

std::vector<TransitionEntry> SailingWind::transitions(const EnvState& state,
                                                      ActionIndex action) const {
    check_action(state, action);
    int heading = heading_of(state, action);
    int x = state.key.bytes[0], y = state.key.bytes[1], wind = state.key.bytes[2];
    int nx = x + kDx[heading], ny = y + kDy[heading];
    if (nx < 0 || nx >= spec_.width || ny < 0 || ny >= spec_.height) {
        nx = x;
        ny = y;
    }
    std::vector<TransitionEntry> out;
    if (spec_.shift_prob > 0.0)
        out.push_back({make_state(nx, ny, (wind + 7) % 8), spec_.shift_prob});
    if (spec_.shift_prob < 0.5)
        out.push_back({make_state(nx, ny, wind), 1.0 - 2.0 * spec_.shift_prob});
    if (spec_.shift_prob > 0.0)
        out.push_back({make_state(nx, ny, (wind + 1) % 8), spec_.shift_prob});
    return out;
}

SampleResult SailingWind::sample(const EnvState& state, ActionIndex action, Rng& rng) const {
    check_action(state, action);
    auto dist = transitions(state, action);
    double u = uniform_real(rng);
    double acc = 0.0;
    for (const auto& t : dist) {
        acc += t.probability;
        if (u < acc || &t == &dist.back())
            return {t.successor, reward(state, action), t.probability};
    }
    return {dist.back().successor, reward(state, action), dist.back().probability};
}

std::string SailingWind::action_name(const EnvState& state, ActionIndex action) const {
    return kHeadings[heading_of(state, action)];
}

std::unique_ptr<Mdp> build_sailing(const SailingSpec& spec) {
    return std::make_unique<SailingWind>(spec);
}

}  // namespace mctslab::domains
