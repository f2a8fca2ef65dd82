#include "mctslab/domains/sysadmin.hpp"

#include <bit>

namespace mctslab::domains {

namespace {
constexpr double kBaseUp = 0.45;
constexpr double kCoupling = 0.5;
constexpr double kRebootCost = 0.75;
}  // namespace

void SysAdminSpec::validate() const {
    if (topology == Topology::ring) {
        if (machines < 2)
            throw InvalidSpec("sysadmin: ring needs >= 2 machines");
    } else if (grid_width < 1 || grid_height < 1) {
        throw InvalidSpec("sysadmin: grid dimensions must be positive");
    }
    if (machine_count() > 24)
        throw InvalidSpec("sysadmin: at most 24 machines supported");
}

SysAdmin::SysAdmin(SysAdminSpec spec) : spec_(spec) {
    spec_.validate();
    n_ = spec_.machine_count();
    neighbors_.resize(static_cast<std::size_t>(n_));
    if (spec_.topology == SysAdminSpec::Topology::ring) {
        for (int i = 0; i < n_; ++i) {
            neighbors_[static_cast<std::size_t>(i)] = {(i + 1) % n_, (i + n_ - 1) % n_};
        }
    } else {
        int w = spec_.grid_width, h = spec_.grid_height;
        for (int y = 0; y < h; ++y) {
            for (int x = 0; x < w; ++x) {
                auto& nb = neighbors_[static_cast<std::size_t>(x + w * y)];
                if (x > 0) nb.push_back(x - 1 + w * y);
                if (x + 1 < w) nb.push_back(x + 1 + w * y);
                if (y > 0) nb.push_back(x + w * (y - 1));
                if (y + 1 < h) nb.push_back(x + w * (y + 1));
            }
        }
    }
    descriptor_.horizon = 50;
    descriptor_.discount = 1.0;
    descriptor_.num_players = 1;
    descriptor_.domain_name = "sysadmin";
}

std::uint32_t SysAdmin::mask_of(const EnvState& state) const {
    std::uint32_t mask = 0;
    for (int i = 0; i < (n_ + 7) / 8; ++i)
        mask |= static_cast<std::uint32_t>(state.key.bytes[static_cast<std::size_t>(i)])
                << (8 * i);
    return mask;
}

EnvState SysAdmin::make_state(std::uint32_t mask) const {
    EnvState s;
    for (int i = 0; i < (n_ + 7) / 8; ++i)
        s.key.push(static_cast<std::uint8_t>((mask >> (8 * i)) & 0xff));
    return s;
}

EnvState SysAdmin::initial_state() const { return make_state((1u << n_) - 1u); }

int SysAdmin::num_actions(const EnvState&) const { return n_ + 1; }

double SysAdmin::up_probability(std::uint32_t mask, int machine, ActionIndex action) const {
    if (action == machine)
        return 1.0;
    if (!(mask >> machine & 1u))
        return 0.0;
    const auto& nb = neighbors_[static_cast<std::size_t>(machine)];
    int running = 0;
    for (int j : nb)
        running += mask >> j & 1u;
    return kBaseUp + kCoupling * static_cast<double>(running) / static_cast<double>(nb.size());
}

double SysAdmin::reward(const EnvState& state, ActionIndex action) const {
    check_action(state, action);
    return static_cast<double>(std::popcount(mask_of(state))) -
           (action < n_ ? kRebootCost : 0.0);
}

std::size_t SysAdmin::support_size(const EnvState& state, ActionIndex action) const {
    check_action(state, action);
    std::uint32_t mask = mask_of(state);
    int uncertain = 0;
    for (int i = 0; i < n_; ++i) {
        double p = up_probability(mask, i, action);
        uncertain += p > 0.0 && p < 1.0;
    }
    return std::size_t{1} << uncertain;
}

std::vector<TransitionEntry> SysAdmin::transitions(const EnvState& state,
                                                   ActionIndex action) const {
    check_action(state, action);
    std::uint32_t mask = mask_of(state);
    std::vector<double> up(static_cast<std::size_t>(n_));
    for (int i = 0; i < n_; ++i)
        up[static_cast<std::size_t>(i)] = up_probability(mask, i, action);

    std::vector<TransitionEntry> out;
    std::vector<std::pair<std::uint32_t, double>> partial{{0u, 1.0}};
    for (int i = 0; i < n_; ++i) {
        double p = up[static_cast<std::size_t>(i)];
        std::vector<std::pair<std::uint32_t, double>> next;
        next.reserve(partial.size() * 2);
        for (const auto& [m, prob] : partial) {
            if (p > 0.0)
                next.push_back({m | (1u << i), prob * p});
            if (p < 1.0)
                next.push_back({m, prob * (1.0 - p)});
        }
        partial = std::move(next);
    }
    out.reserve(partial.size());
    for (const auto& [m, prob] : partial)
        out.push_back({make_state(m), prob});
    return out;
}

SampleResult SysAdmin::sample(const EnvState& state, ActionIndex action, Rng& rng) const {
    check_action(state, action);
    std::uint32_t mask = mask_of(state);
    std::uint32_t next = 0;
    double prob = 1.0;
    for (int i = 0; i < n_; ++i) {
        double p = up_probability(mask, i, action);
        if (p >= 1.0) {
            next |= 1u << i;
            continue;
        }
        if (p <= 0.0)
            continue;
        if (uniform_real(rng) < p) {
            next |= 1u << i;
            prob *= p;
        } else {
            prob *= 1.0 - p;
        }
    }
    return {make_state(next), reward(state, action), prob};
}

std::string SysAdmin::action_name(const EnvState&, ActionIndex action) const {
    return action < n_ ? "reboot" + std::to_string(action) : "none";
}

std::unique_ptr<Mdp> build_sysadmin(const SysAdminSpec& spec) {
    return std::make_unique<SysAdmin>(spec);
}

}  // namespace mctslab::domains
