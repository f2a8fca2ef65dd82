#pragma once

#include <cstddef>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

namespace mctslab::oracle {

struct RangeExceeded : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// One (successor, probability) entry; successor indexes into the next layer.
struct LayeredTransition {
    int successor = 0;
    double probability = 0.0;
};

struct LayeredAction {
    double reward = 0.0;
    std::vector<LayeredTransition> outcomes;
};

struct LayeredState {
    std::string name;
    bool terminal = false;
    std::vector<LayeredAction> actions;
};

/// Explicitly enumerated MDP whose transitions all land one layer deeper.
/// Layer H states are terminal; terminal states have no actions.
///
/// Text format (line oriented, '#' comments):
///   layer <d>
///   state <id> [terminal]
///   edge <state> <action> <succ>:<prob>... r=<reward>
struct LayeredMdp {
    std::vector<std::vector<LayeredState>> layers;

    std::size_t num_layers() const { return layers.size(); }
    const LayeredState& state(int depth, int idx) const {
        return layers[static_cast<std::size_t>(depth)][static_cast<std::size_t>(idx)];
    }

    int find_state(int depth, const std::string& name) const;

    /// Throws InvalidSpec on structural violations (dangling successors,
    /// probability mass != 1, actionless non-terminal states, non-terminal
    /// final layer).
    void validate() const;

    static LayeredMdp parse(std::istream& in);
    static LayeredMdp parse_string(const std::string& text);
    std::string serialize() const;
};

}  // namespace mctslab::oracle
