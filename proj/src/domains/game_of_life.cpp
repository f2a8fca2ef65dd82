#include "mctslab/domains/game_of_life.hpp"

#include <bit>

namespace mctslab::domains {

void GameOfLifeSpec::validate() const {
    if (width < 1 || height < 1)
        throw InvalidSpec("game_of_life: grid dimensions must be positive");
    if (width * height > 20)
        throw InvalidSpec("game_of_life: at most 20 cells supported");
    if (noise < 0.0 || noise >= 0.5)
        throw InvalidSpec("game_of_life: noise must be in [0, 0.5)");
}

GameOfLife::GameOfLife(GameOfLifeSpec spec) : spec_(spec) {
    spec_.validate();
    cells_ = spec_.width * spec_.height;
    descriptor_.horizon = 50;
    descriptor_.discount = 1.0;
    descriptor_.num_players = 1;
    descriptor_.domain_name = "game_of_life";
}

std::uint32_t GameOfLife::mask_of(const EnvState& state) const {
    std::uint32_t mask = 0;
    for (int i = 0; i < (cells_ + 7) / 8; ++i)
        mask |= static_cast<std::uint32_t>(state.key.bytes[static_cast<std::size_t>(i)])
                << (8 * i);
    return mask;
}

EnvState GameOfLife::make_state(std::uint32_t mask) const {
    EnvState s;
    for (int i = 0; i < (cells_ + 7) / 8; ++i)
        s.key.push(static_cast<std::uint8_t>((mask >> (8 * i)) & 0xff));
    return s;
}

EnvState GameOfLife::initial_state() const {
    // a single live cell in the middle
    return make_state(1u << (cells_ / 2));
}

int GameOfLife::num_actions(const EnvState&) const { return cells_ + 1; }

double GameOfLife::reward(const EnvState& state, ActionIndex action) const {
    check_action(state, action);
    return static_cast<double>(std::popcount(mask_of(state)));
}

std::uint32_t GameOfLife::step_deterministic(std::uint32_t mask, ActionIndex action) const {
    const int w = spec_.width, h = spec_.height;
    std::uint32_t next = 0;
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            int live = 0;
            for (int dy = -1; dy <= 1; ++dy) {
                for (int dx = -1; dx <= 1; ++dx) {
                    if (dx == 0 && dy == 0)
                        continue;
                    int nx = x + dx, ny = y + dy;
                    if (nx < 0 || nx >= w || ny < 0 || ny >= h)
                        continue;
                    live += mask >> (nx + w * ny) & 1u;
                }
            }
            bool alive = mask >> (x + w * y) & 1u;
            if (alive ? (live == 2 || live == 3) : live == 3)
                next |= 1u << (x + w * y);
        }
    }
    if (action < cells_)
        next |= 1u << action;
    return next;
}

std::size_t GameOfLife::support_size(const EnvState& state, ActionIndex action) const {
    check_action(state, action);
    return spec_.noise == 0.0 ? 1 : std::size_t{1} << cells_;
}

std::vector<TransitionEntry> GameOfLife::transitions(const EnvState& state,
                                                     ActionIndex action) const {
    check_action(state, action);
    std::uint32_t base = step_deterministic(mask_of(state), action);
    if (spec_.noise == 0.0)
        return {{make_state(base), 1.0}};
    std::vector<TransitionEntry> out;
    out.reserve(std::size_t{1} << cells_);
    for (std::uint32_t flips = 0; flips < (1u << cells_); ++flips) {
        int k = std::popcount(flips);
        double p = 1.0;
        for (int i = 0; i < k; ++i)
            p *= spec_.noise;
        for (int i = 0; i < cells_ - k; ++i)
            p *= 1.0 - spec_.noise;
        out.push_back({make_state(base ^ flips), p});
    }
    return out;
}

SampleResult GameOfLife::sample(const EnvState& state, ActionIndex action, Rng& rng) const {
    check_action(state, action);
    std::uint32_t next = step_deterministic(mask_of(state), action);
    double prob = 1.0;
    for (int i = 0; i < cells_; ++i) {
        if (spec_.noise > 0.0 && uniform_real(rng) < spec_.noise) {
            next ^= 1u << i;
            prob *= spec_.noise;
        } else {
            prob *= 1.0 - spec_.noise;
        }
    }
    return {make_state(next), reward(state, action), prob};
}

std::unique_ptr<Mdp> build_game_of_life(const GameOfLifeSpec& spec) {
    return std::make_unique<GameOfLife>(spec);
}

}  // namespace mctslab::domains
