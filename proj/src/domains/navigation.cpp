#include "mctslab/domains/navigation.hpp"

#include <cmath>

namespace mctslab::domains {

namespace {
// [up, down, left, right]
constexpr int kDx[4] = {0, 0, -1, 1};
constexpr int kDy[4] = {1, -1, 0, 0};
constexpr const char* kNames[4] = {"up", "down", "left", "right"};
}  // namespace

void NavigationSpec::validate() const {
    if (width < 1 || height < 1)
        throw InvalidSpec("navigation: grid dimensions must be positive");
    if (reset_prob.size() != static_cast<std::size_t>(width * height))
        throw InvalidSpec("navigation: reset_prob size mismatch");
    for (double p : reset_prob)
        if (p < 0.0 || p > 1.0)
            throw InvalidSpec("navigation: reset probability out of [0,1]");
    if (start_cell < 1 || start_cell > width * height || goal_cell < 1 ||
        goal_cell > width * height)
        throw InvalidSpec("navigation: start/goal cell out of range");
    if (start_cell == goal_cell)
        throw InvalidSpec("navigation: start equals goal");
    if (reset_prob[static_cast<std::size_t>(goal_cell - 1)] != 0.0)
        throw InvalidSpec("navigation: goal cell must have reset probability 0");
}

Navigation::Navigation(NavigationSpec spec) : spec_(std::move(spec)) {
    spec_.validate();
    start_ = spec_.start_cell - 1;
    goal_ = spec_.goal_cell - 1;
    descriptor_.horizon = 50;
    descriptor_.discount = 1.0;
    descriptor_.num_players = 1;
    descriptor_.domain_name = "navigation";
}

EnvState Navigation::make_state(int cell) const {
    EnvState s;
    s.key.push_u16(static_cast<std::uint16_t>(cell));
    s.terminal = cell == goal_;
    return s;
}

EnvState Navigation::initial_state() const { return make_state(start_); }

EnvState Navigation::state_at_cell(int one_based_cell) const {
    return make_state(one_based_cell - 1);
}

int Navigation::cell_of(const EnvState& state) const {
    return static_cast<int>(state.key.bytes[0]) + (static_cast<int>(state.key.bytes[1]) << 8) +
           1;
}

int Navigation::num_actions(const EnvState& state) const { return state.terminal ? 0 : 4; }

int Navigation::destination(int cell, ActionIndex action) const {
    int x = cell % spec_.width + kDx[action];
    int y = cell / spec_.width + kDy[action];
    if (x < 0 || x >= spec_.width || y < 0 || y >= spec_.height)
        return cell;  // off-grid: stay
    return x + spec_.width * y;
}

double Navigation::reward(const EnvState& state, ActionIndex action) const {
    check_action(state, action);
    int cell = cell_of(state) - 1;
    int dest = destination(cell, action);
    if (dest == cell)
        return -1.0;  // off-grid move, no reset check
    return -(1.0 - spec_.reset_prob[static_cast<std::size_t>(cell)]);
}

std::vector<TransitionEntry> Navigation::transitions(const EnvState& state,
                                                     ActionIndex action) const {
    check_action(state, action);
    int cell = cell_of(state) - 1;
    int dest = destination(cell, action);
    if (dest == cell)
        return {{make_state(cell), 1.0}};
    double p = spec_.reset_prob[static_cast<std::size_t>(cell)];
    if (p == 0.0)
        return {{make_state(dest), 1.0}};
    if (p == 1.0)
        return {{make_state(cell), 1.0}};
    return {{make_state(dest), 1.0 - p}, {make_state(cell), p}};
}

SampleResult Navigation::sample(const EnvState& state, ActionIndex action, Rng& rng) const {
    check_action(state, action);
    int cell = cell_of(state) - 1;
    int dest = destination(cell, action);
    double r = reward(state, action);
    if (dest == cell)
        return {make_state(cell), r, 1.0};
    double p = spec_.reset_prob[static_cast<std::size_t>(cell)];
    if (p >= 1.0)
        return {make_state(cell), r, 1.0};
    if (p > 0.0 && uniform_real(rng) < p)
        return {make_state(cell), r, p};
    return {make_state(dest), r, 1.0 - p};
}

std::string Navigation::action_name(const EnvState&, ActionIndex action) const {
    return kNames[action];
}

std::unique_ptr<Mdp> build_navigation(const NavigationSpec& spec) {
    return std::make_unique<Navigation>(spec);
}

NavigationSpec navigation_fig2_spec() {
    NavigationSpec spec;
    spec.width = 5;
    spec.height = 4;
    spec.start_cell = 3;
    spec.goal_cell = 18;
    spec.reset_prob.assign(20, 0.0);
    for (int cell : {1, 5, 6, 8, 10, 15, 16, 17, 19, 20})
        spec.reset_prob[static_cast<std::size_t>(cell - 1)] = 0.5;
    return spec;
}

}  // namespace mctslab::domains
