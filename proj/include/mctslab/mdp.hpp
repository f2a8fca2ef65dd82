#pragma once

#include <array>
#include <cstdint>
#include <cstring>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace mctslab {

// Positional index into the canonical legal-action ordering of a state.
// Index i always names the same ground action for a given state; domains
// document their ordering.
using ActionIndex = int;

struct IllegalAction : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct InvalidSpec : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct UnknownDomain : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Fixed-width canonical byte encoding of a domain state. Equality and
/// hashing operate on these bytes only, so two states compare equal iff
/// their encodings are byte-identical.
struct StateKey {
    static constexpr std::size_t kMaxBytes = 24;

    std::array<std::uint8_t, kMaxBytes> bytes{};
    std::uint8_t size = 0;

    void push(std::uint8_t b) {
        if (size >= kMaxBytes)
            throw InvalidSpec("StateKey: encoding exceeds " + std::to_string(kMaxBytes) + " bytes");
        bytes[size++] = b;
    }
    void push_u16(std::uint16_t v) {
        push(static_cast<std::uint8_t>(v & 0xff));
        push(static_cast<std::uint8_t>(v >> 8));
    }
    void push_u32(std::uint32_t v) {
        push_u16(static_cast<std::uint16_t>(v & 0xffff));
        push_u16(static_cast<std::uint16_t>(v >> 16));
    }
    void push_u64(std::uint64_t v) {
        push_u32(static_cast<std::uint32_t>(v & 0xffffffffu));
        push_u32(static_cast<std::uint32_t>(v >> 32));
    }

    friend bool operator==(const StateKey& a, const StateKey& b) {
        return a.size == b.size && std::memcmp(a.bytes.data(), b.bytes.data(), a.size) == 0;
    }
    friend bool operator!=(const StateKey& a, const StateKey& b) { return !(a == b); }

    // FNV-1a over the used bytes.
    std::uint64_t hash() const {
        std::uint64_t h = 0xcbf29ce484222325ull;
        for (std::uint8_t i = 0; i < size; ++i) {
            h ^= bytes[i];
            h *= 0x100000001b3ull;
        }
        return h;
    }
};

/// Ground state of a bound domain. player_to_move is always 0 in
/// single-player domains. Terminal states have empty legal-action sets.
struct EnvState {
    StateKey key;
    std::uint8_t player_to_move = 0;
    bool terminal = false;

    friend bool operator==(const EnvState& a, const EnvState& b) { return a.key == b.key; }
    friend bool operator!=(const EnvState& a, const EnvState& b) { return !(a == b); }
};

struct EnvStateHash {
    std::size_t operator()(const EnvState& s) const { return static_cast<std::size_t>(s.key.hash()); }
};

struct MdpDescriptor {
    int horizon = 1;           // finite-horizon episode length, >= 1
    double discount = 1.0;     // gamma in (0,1]; all shipped configs use 1
    int num_players = 1;       // 1 or 2
    std::string domain_name;
};

struct TransitionEntry {
    EnvState successor;
    double probability = 0.0;  // in (0, 1]
};

struct SampleResult {
    EnvState successor;
    double reward = 0.0;       // R(state, action)
    double probability = 0.0;  // model probability of the drawn successor
};

using Rng = std::mt19937_64;

// splitmix64; used to derive independent seed streams from a base seed.
inline std::uint64_t mix_seed(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

inline std::uint64_t derive_stream(std::uint64_t base, std::uint64_t a, std::uint64_t b = 0,
                                   std::uint64_t c = 0) {
    return mix_seed(mix_seed(mix_seed(base ^ mix_seed(a)) ^ mix_seed(b)) ^ mix_seed(c));
}

inline double uniform_real(Rng& rng) {
    return std::uniform_real_distribution<double>(0.0, 1.0)(rng);
}

inline int uniform_int(Rng& rng, int n) {
    return std::uniform_int_distribution<int>(0, n - 1)(rng);
}

/// Finite MDP with explicit transition enumeration. Domain objects are
/// immutable after construction and safe to share across threads; rng
/// streams are owned by a single episode.
///
/// Rewards are attached to (state, action) and reported from player 0's
/// perspective in two-player domains.
class Mdp {
public:
    virtual ~Mdp() = default;

    const MdpDescriptor& descriptor() const { return descriptor_; }

    virtual EnvState initial_state() const = 0;

    /// Number of legal actions; 0 iff state is terminal.
    virtual int num_actions(const EnvState& state) const = 0;

    virtual double reward(const EnvState& state, ActionIndex action) const = 0;

    /// Full explicit successor distribution. Probabilities sum to 1 within
    /// 1e-9 and successors are deduplicated.
    virtual std::vector<TransitionEntry> transitions(const EnvState& state,
                                                     ActionIndex action) const = 0;

    /// Number of distinct successors of (state, action). Overridden by
    /// domains whose support is cheap to count but expensive to materialize.
    virtual std::size_t support_size(const EnvState& state, ActionIndex action) const {
        return transitions(state, action).size();
    }

    /// Draws a successor with the exact probabilities of transitions().
    virtual SampleResult sample(const EnvState& state, ActionIndex action, Rng& rng) const {
        auto dist = transitions(state, action);
        double u = uniform_real(rng);
        double acc = 0.0;
        for (const auto& entry : dist) {
            acc += entry.probability;
            if (u < acc || &entry == &dist.back())
                return SampleResult{entry.successor, reward(state, action), entry.probability};
        }
        // unreachable: dist is non-empty and sums to 1
        throw IllegalAction("sample: empty transition distribution");
    }

    virtual std::string action_name(const EnvState& state, ActionIndex action) const {
        (void)state;
        return "a" + std::to_string(action);
    }

protected:
    void check_action(const EnvState& state, ActionIndex action) const {
        if (action < 0 || action >= num_actions(state))
            throw IllegalAction(descriptor_.domain_name + ": action " + std::to_string(action) +
                                " not legal in state");
    }

    MdpDescriptor descriptor_;
};

/// The canonical legal-action list: {0, ..., num_actions - 1}. Empty iff
/// the state is terminal.
inline std::vector<ActionIndex> legal_actions(const Mdp& mdp, const EnvState& state) {
    std::vector<ActionIndex> actions(static_cast<std::size_t>(mdp.num_actions(state)));
    for (std::size_t i = 0; i < actions.size(); ++i)
        actions[i] = static_cast<ActionIndex>(i);
    return actions;
}

}  // namespace mctslab
