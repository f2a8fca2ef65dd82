#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <utility>

#include "mctslab/mdp.hpp"
#include "mctslab/oracle/layered_mdp.hpp"

namespace mctslab::oracle {

using BigInt = boost::multiprecision::cpp_int;

BigInt binomial(int n, int k);

/// Number of surjections from an n-element set onto a k-element set, by
/// inclusion-exclusion. f(n,k) = 0 for k > n or k = 0 (n >= 1).
/// Throws RangeExceeded for n > 20.
BigInt surjection_count(int n, int k);

/// Exact numerator of p_abs: the number of assignments of n + l actions
/// to m groups for which both states use the same group set,
/// sum_{k=1..min(n,l,m)} C(m,k) f(n,k) f(l,k). Denominator is m^(n+l).
BigInt p_abs_match_count(int n, int l, int m);

struct PabsResult {
    double probability = 0.0;  // exact rational, evaluated to double
    double upper_bound = 0.0;  // (2c/m)^(n+l), c = min{n,l,m}
};

/// Throws RangeExceeded unless n, l >= 1, m >= 1, n + l <= 30, m <= 20.
PabsResult p_abs_closed_form(int n, int l, int m);

struct MonteCarloEstimate {
    double estimate = 0.0;
    double std_error = 0.0;
};

/// Frequency of {abs(a_i)} = {abs(b_j)} under uniform group assignment.
MonteCarloEstimate p_abs_monte_carlo(int n, int l, int m, std::uint64_t trials, Rng& rng);

}  // namespace mctslab::oracle
