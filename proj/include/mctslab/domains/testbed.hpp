#pragma once

#include "mctslab/oracle/layered_mdp.hpp"

namespace mctslab::domains {

/// Fixed 20-state, 5-layer benchmark MDP with dyadic rewards and
/// probabilities. Layers 1..3 each contain twin states that share their
/// optimal continuation but differ on a suboptimal action, so they are
/// detectable by optimal-action matching but not by full action matching;
/// layer 3 additionally contains one exactly matching twin pair.
oracle::LayeredMdp abstraction_testbed();

}  // namespace mctslab::domains
