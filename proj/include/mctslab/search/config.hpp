#pragma once

#include <cstdint>
#include <limits>
#include <string>

#include "mctslab/mdp.hpp"

namespace mctslab::search {

enum class AbstractionVariant { none, oga, rstate, ipa, conf, topn };

std::string to_string(AbstractionVariant v);
AbstractionVariant variant_from_string(const std::string& name);

/// Configuration of the on-the-go abstraction maintained during search.
/// Only the fields relevant to the chosen variant are read. ipa with
/// lambda_p = infinity behaves exactly like oga.
struct AbstractionPolicy {
    AbstractionVariant variant = AbstractionVariant::none;

    // state-action pair rule (oga, rstate, ipa, conf, topn)
    double eps_a = 0.0;  // reward tolerance, may be infinity
    double eps_t = 0.0;  // transition-distance tolerance
    double alpha = 0.0;  // successor pruning cutoff, in [0,1]

    // state rule
    double lambda_p = std::numeric_limits<double>::infinity();  // ipa pruning constant
    double p_move = 0.0;                                        // rstate reassignment prob
    double p_c = 0.9;                                           // conf confidence level
    int n_matches = 1;                                          // topn actions kept
    int n_min = 0;                                              // topn visit threshold

    // open-interpretation switches
    bool lambda_p_scaled = true;             // lambda_p multiplies the Global-Std sigma
    bool propagate_bypasses_recency = true;  // propagated updates skip the recency gate

    void validate() const;
};

struct SearchConfig {
    int iterations = 1000;
    double exploration_c = 2.0;   // C of the Global-Std exploration factor
    double sigma_fallback = 1.0;  // used when fewer than 2 Q values or sigma = 0
    AbstractionPolicy abstraction;
    int recency_k = 3;
    std::uint64_t rng_seed = 0;

    void validate() const;
};

}  // namespace mctslab::search
