#pragma once

#include <cstdint>

#include "mctslab/oracle/pabs.hpp"

namespace mctslab::testing {

// Exhaustive count of group assignments of n + l actions to m groups where
// both sides use the same group set. Independent of the closed form; walks
// all m^(n+l) assignments.
inline std::uint64_t count_matching_assignments(int n, int l, int m) {
    std::uint64_t count = 0;
    // depth-first over the n + l slots, accumulating per-side used-group masks
    struct Frame {
        int slot;
        std::uint32_t used1, used2;
    };
    std::vector<Frame> stack{{0, 0, 0}};
    while (!stack.empty()) {
        auto [slot, used1, used2] = stack.back();
        stack.pop_back();
        if (slot == n + l) {
            count += used1 == used2;
            continue;
        }
        for (int g = 0; g < m; ++g) {
            if (slot < n)
                stack.push_back({slot + 1, used1 | (1u << g), used2});
            else
                stack.push_back({slot + 1, used1, used2 | (1u << g)});
        }
    }
    return count;
}

}  // namespace mctslab::testing
