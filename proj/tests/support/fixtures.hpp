#pragma once

#include <memory>
#include <string>
#include <vector>

#include "mctslab/mdp.hpp"
#include "mctslab/oracle/layered_mdp.hpp"

namespace mctslab::testing {

/// Single non-terminal state with one self-loop action.
class SelfLoopMdp : public Mdp {
public:
    explicit SelfLoopMdp(double reward = 1.0) : reward_(reward) {
        descriptor_.horizon = 10;
        descriptor_.num_players = 1;
        descriptor_.domain_name = "self_loop";
    }
    EnvState initial_state() const override {
        EnvState s;
        s.key.push(0);
        return s;
    }
    int num_actions(const EnvState&) const override { return 1; }
    double reward(const EnvState& s, ActionIndex a) const override {
        check_action(s, a);
        return reward_;
    }
    std::vector<TransitionEntry> transitions(const EnvState& s, ActionIndex a) const override {
        check_action(s, a);
        return {{initial_state(), 1.0}};
    }

private:
    double reward_;
};

/// Deterministic chain 0 -> 1 -> ... -> n with reward -1 per step, so
/// every non-terminal state has a distinct finite-horizon value.
class ChainMdp : public Mdp {
public:
    explicit ChainMdp(int length, int horizon = 50) : length_(length) {
        descriptor_.horizon = horizon;
        descriptor_.num_players = 1;
        descriptor_.domain_name = "chain";
    }
    EnvState initial_state() const override { return at(0); }
    EnvState at(int i) const {
        EnvState s;
        s.key.push_u16(static_cast<std::uint16_t>(i));
        s.terminal = i == length_;
        return s;
    }
    int num_actions(const EnvState& s) const override { return s.terminal ? 0 : 1; }
    double reward(const EnvState& s, ActionIndex a) const override {
        check_action(s, a);
        return -1.0;
    }
    std::vector<TransitionEntry> transitions(const EnvState& s, ActionIndex a) const override {
        check_action(s, a);
        int i = static_cast<int>(s.key.bytes[0]) + (static_cast<int>(s.key.bytes[1]) << 8);
        return {{at(i + 1), 1.0}};
    }

private:
    int length_;
};

/// 2x2 gridworld with commuting deterministic moves (right/up), so two
/// action orders reach the same corner state. Terminal at (1,1).
class CommutingGridMdp : public Mdp {
public:
    CommutingGridMdp() {
        descriptor_.horizon = 10;
        descriptor_.num_players = 1;
        descriptor_.domain_name = "commuting_grid";
    }
    EnvState at(int x, int y) const {
        EnvState s;
        s.key.push(static_cast<std::uint8_t>(x));
        s.key.push(static_cast<std::uint8_t>(y));
        s.terminal = x == 1 && y == 1;
        return s;
    }
    EnvState initial_state() const override { return at(0, 0); }
    int num_actions(const EnvState& s) const override { return s.terminal ? 0 : 2; }
    double reward(const EnvState& s, ActionIndex a) const override {
        check_action(s, a);
        return -1.0;
    }
    std::vector<TransitionEntry> transitions(const EnvState& s, ActionIndex a) const override {
        check_action(s, a);
        int x = s.key.bytes[0], y = s.key.bytes[1];
        if (a == 0)
            x = std::min(x + 1, 1);
        else
            y = std::min(y + 1, 1);
        return {{at(x, y), 1.0}};
    }
};

/// Two root-layer states that share their unique optimal action target
/// but differ on the suboptimal one: detectable by optimal-action
/// matching, not by full matching. A fan-in root makes it searchable.
inline oracle::LayeredMdp shared_optimum_mdp() {
    return oracle::LayeredMdp::parse_string(R"(
layer 0
state r
layer 1
state a
state b
layer 2
state c
state d
state e
layer 3
state t terminal

edge r 0 a:0.5 b:0.5 r=0
edge a 0 c:1 r=0
edge a 1 d:1 r=0
edge b 0 c:1 r=0
edge b 1 e:1 r=0
edge c 0 t:1 r=1
edge d 0 t:1 r=0.5
edge e 0 t:1 r=0.25
)");
}

}  // namespace mctslab::testing
