#include "mctslab/oracle/pabs.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include <boost/multiprecision/cpp_int.hpp>

namespace mctslab::oracle {

using boost::multiprecision::cpp_rational;

BigInt binomial(int n, int k) {
    if (k < 0 || k > n)
        return 0;
    BigInt result = 1;
    for (int i = 1; i <= k; ++i) {
        result *= n - k + i;
        result /= i;
    }
    return result;
}

BigInt surjection_count(int n, int k) {
    if (n < 1)
        throw RangeExceeded("surjection_count: n must be positive");
    if (n > 20)
        throw RangeExceeded("surjection_count: n > 20");
    if (k < 0)
        throw RangeExceeded("surjection_count: k must be nonnegative");
    if (k > n || k == 0)
        return 0;
    BigInt total = 0;
    for (int j = 0; j <= k; ++j) {
        BigInt term = binomial(k, j);
        BigInt powed = 1;
        for (int i = 0; i < n; ++i)
            powed *= k - j;
        term *= powed;
        if (j % 2 == 0)
            total += term;
        else
            total -= term;
    }
    return total;
}

namespace {

void check_pabs_range(int n, int l, int m) {
    if (n < 1 || l < 1 || m < 1)
        throw RangeExceeded("p_abs: n, l, m must be positive");
    if (n + l > 30)
        throw RangeExceeded("p_abs: n + l > 30");
    if (m > 20)
        throw RangeExceeded("p_abs: m > 20");
}

BigInt ipow(BigInt base, int exp) {
    BigInt r = 1;
    for (int i = 0; i < exp; ++i)
        r *= base;
    return r;
}

}  // namespace

BigInt p_abs_match_count(int n, int l, int m) {
    check_pabs_range(n, l, m);
    const int c = std::min({n, l, m});
    BigInt total = 0;
    for (int k = 1; k <= c; ++k)
        total += binomial(m, k) * surjection_count(n, k) * surjection_count(l, k);
    return total;
}

PabsResult p_abs_closed_form(int n, int l, int m) {
    check_pabs_range(n, l, m);
    const int c = std::min({n, l, m});
    cpp_rational prob(p_abs_match_count(n, l, m), ipow(m, n + l));
    cpp_rational bound(ipow(2 * c, n + l), ipow(m, n + l));
    PabsResult res;
    res.probability = static_cast<double>(prob);
    res.upper_bound = static_cast<double>(bound);
    return res;
}

MonteCarloEstimate p_abs_monte_carlo(int n, int l, int m, std::uint64_t trials, Rng& rng) {
    check_pabs_range(n, l, m);
    if (trials < 1)
        throw RangeExceeded("p_abs_monte_carlo: trials must be >= 1");
    std::uint64_t hits = 0;
    std::uniform_int_distribution<int> pick(0, m - 1);
    for (std::uint64_t t = 0; t < trials; ++t) {
        std::uint32_t used1 = 0, used2 = 0;  // m <= 20, so bitmasks suffice
        for (int i = 0; i < n; ++i)
            used1 |= 1u << pick(rng);
        for (int i = 0; i < l; ++i)
            used2 |= 1u << pick(rng);
        if (used1 == used2)
            ++hits;
    }
    MonteCarloEstimate est;
    est.estimate = static_cast<double>(hits) / static_cast<double>(trials);
    est.std_error =
        std::sqrt(est.estimate * (1.0 - est.estimate) / static_cast<double>(trials));
    return est;
}

}  // namespace mctslab::oracle
