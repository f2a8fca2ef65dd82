#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <fstream>
#include <map>
#include <set>

#include "mctslab/domains/navigation.hpp"
#include "mctslab/domains/game_of_life.hpp"
#include "mctslab/domains/sysadmin.hpp"
#include "mctslab/domains/testbed.hpp"
#include "mctslab/oracle/fixed_point.hpp"
#include "mctslab/oracle/ground_model.hpp"
#include "mctslab/oracle/layered_mdp.hpp"
#include "mctslab/oracle/pabs.hpp"
#include "mctslab/oracle/value_iteration.hpp"
#include "support/enumeration.hpp"
#include "support/fixtures.hpp"

using namespace mctslab;
using namespace mctslab::oracle;

namespace {

int find_cell(const domains::Navigation& nav, const Unrolled& unrolled, int depth, int cell) {
    const auto& index = unrolled.layer_index[static_cast<std::size_t>(depth)];
    auto it = index.find(nav.state_at_cell(cell));
    return it == index.end() ? -1 : it->second;
}

// earliest depth where both cells appear in the unrolled graph
int first_common_layer(const domains::Navigation& nav, const Unrolled& unrolled, int c1,
                       int c2) {
    for (std::size_t d = 0; d < unrolled.layer_index.size(); ++d) {
        if (find_cell(nav, unrolled, static_cast<int>(d), c1) >= 0 &&
            find_cell(nav, unrolled, static_cast<int>(d), c2) >= 0)
            return static_cast<int>(d);
    }
    return -1;
}

}  // namespace

TEST_CASE("layered mdp text format round-trips") {
    auto mdp = domains::abstraction_testbed();
    CHECK(mdp.num_layers() == 5);
    int total = 0;
    for (const auto& layer : mdp.layers)
        total += static_cast<int>(layer.size());
    CHECK(total == 20);

    auto reparsed = LayeredMdp::parse_string(mdp.serialize());
    CHECK(reparsed.serialize() == mdp.serialize());
}

TEST_CASE("layered mdp golden file matches the built-in testbed") {
    std::ifstream in(std::string(MCTSLAB_TEST_DATA) + "/abstraction_testbed.lmdp");
    REQUIRE(in.good());
    auto golden = LayeredMdp::parse(in);
    CHECK(golden.serialize() == domains::abstraction_testbed().serialize());
}

TEST_CASE("layered mdp parser rejects malformed input") {
    CHECK_THROWS_AS(LayeredMdp::parse_string("bogus x"), ParseError);
    CHECK_THROWS_AS(LayeredMdp::parse_string("layer 0\nstate a\nedge a 0 b:1 r=0"),
                    ParseError);
    // probability mass off by 0.5
    CHECK_THROWS_AS(LayeredMdp::parse_string(R"(
layer 0
state a
layer 1
state b terminal
edge a 0 b:0.5 r=0
)"),
                    InvalidSpec);
    // non-terminal final layer
    CHECK_THROWS_AS(LayeredMdp::parse_string("layer 0\nstate a\n"), InvalidSpec);
}

TEST_CASE("value iteration on trivial layered mdps") {
    SUBCASE("all-terminal layer") {
        auto mdp = LayeredMdp::parse_string("layer 0\nstate a terminal\nstate b terminal\n");
        auto tables = value_iteration(mdp);
        CHECK(tables.value(0, 0) == 0.0);
        CHECK(tables.value(0, 1) == 0.0);
    }
    SUBCASE("three-step chain of -1 rewards") {
        auto mdp = LayeredMdp::parse_string(R"(
layer 0
state a
layer 1
state b
layer 2
state c
layer 3
state t terminal
edge a 0 b:1 r=-1
edge b 0 c:1 r=-1
edge c 0 t:1 r=-1
)");
        auto tables = value_iteration(mdp);
        CHECK(tables.value(0, 0) == doctest::Approx(-3.0).epsilon(1e-12));
    }
}

TEST_CASE("navigation fig2 oracle values") {
    domains::Navigation nav(domains::navigation_fig2_spec());
    auto unrolled = unroll_reachable(nav, 50);
    auto tables = value_iteration(unrolled.mdp);

    int root = find_cell(nav, unrolled, 0, 3);
    REQUIRE(root >= 0);
    CHECK(std::fabs(tables.value(0, root) - (-3.0)) <= 1e-9);

    // fixed detour policies read their action from the current cell
    auto cell_policy = [&](const std::map<int, int>& plan) {
        // layered index -> cell lookup per depth
        std::vector<std::map<int, int>> cell_at(unrolled.layer_index.size());
        for (std::size_t d = 0; d < unrolled.layer_index.size(); ++d)
            for (const auto& [state, idx] : unrolled.layer_index[d])
                cell_at[d][idx] = nav.cell_of(state);
        return [&unrolled, plan, cell_at](int depth, const LayeredState& st) {
            int idx = unrolled.mdp.find_state(depth, st.name);
            int cell = cell_at[static_cast<std::size_t>(depth)].at(idx);
            auto it = plan.find(cell);
            return it == plan.end() ? 0 : it->second;
        };
    };
    // action order [up, down, left, right]
    auto left_detour = cell_policy({{3, 2}, {2, 0}, {7, 0}, {12, 3}, {13, 0}});
    auto right_detour = cell_policy({{3, 3}, {4, 0}, {9, 0}, {14, 2}, {13, 0}});
    auto v_left = evaluate_policy(unrolled.mdp, left_detour);
    auto v_right = evaluate_policy(unrolled.mdp, right_detour);
    CHECK(std::fabs(v_left[0][static_cast<std::size_t>(root)] - (-5.0)) <= 1e-9);
    CHECK(std::fabs(v_right[0][static_cast<std::size_t>(root)] - (-5.0)) <= 1e-9);
}

TEST_CASE("navigation fig2 fixed-point groupings") {
    domains::Navigation nav(domains::navigation_fig2_spec());
    auto unrolled = unroll_reachable(nav, 50);
    auto values = value_iteration(unrolled.mdp);
    auto asap = exact_asap_fixed_point(unrolled.mdp);
    auto ipa = exact_ipa_fixed_point(unrolled.mdp, values);

    auto grouped = [&](const FixedPointResult& fp, int c1, int c2) {
        int d = first_common_layer(nav, unrolled, c1, c2);
        REQUIRE(d >= 0);
        int i1 = find_cell(nav, unrolled, d, c1);
        int i2 = find_cell(nav, unrolled, d, c2);
        return fp.states.of_state(d, i1) == fp.states.of_state(d, i2);
    };

    CHECK_FALSE(grouped(asap, 12, 14));
    CHECK(grouped(ipa, 2, 4));
    CHECK(grouped(ipa, 7, 9));
    CHECK(grouped(ipa, 12, 14));
}

TEST_CASE("fixed points on the abstraction testbed") {
    auto mdp = domains::abstraction_testbed();
    auto values = value_iteration(mdp);
    auto asap = exact_asap_fixed_point(mdp);
    auto ipa = exact_ipa_fixed_point(mdp, values);

    auto block = [&](const FixedPointResult& fp, int layer, const char* name) {
        int idx = mdp.find_state(layer, name);
        REQUIRE(idx >= 0);
        return fp.states.of_state(layer, idx);
    };

    SUBCASE("terminal states share one block") {
        CHECK(block(asap, 4, "t0") == block(asap, 4, "t1"));
        CHECK(block(asap, 4, "t1") == block(asap, 4, "t2"));
    }
    SUBCASE("exact twins are grouped by both constructions") {
        CHECK(block(asap, 3, "w0") == block(asap, 3, "w1"));
        CHECK(block(ipa, 3, "w0") == block(ipa, 3, "w1"));
    }
    SUBCASE("optimal-action twins are only grouped by the pruning construction") {
        CHECK(block(asap, 3, "w0") != block(asap, 3, "w2"));
        CHECK(block(ipa, 3, "w0") == block(ipa, 3, "w2"));
        CHECK(block(ipa, 3, "w5") == block(ipa, 3, "w6"));
        CHECK(block(ipa, 2, "x0") == block(ipa, 2, "x1"));
        CHECK(block(ipa, 2, "x1") == block(ipa, 2, "x2"));
        CHECK(block(asap, 2, "x0") != block(asap, 2, "x1"));
        CHECK(block(ipa, 1, "y0") == block(ipa, 1, "y1"));
        CHECK(block(ipa, 1, "y1") == block(ipa, 1, "y2"));
    }
    SUBCASE("states with different values stay apart") {
        CHECK(block(ipa, 3, "w0") != block(ipa, 3, "w3"));
        CHECK(block(ipa, 2, "x0") != block(ipa, 2, "x3"));
        CHECK(block(ipa, 2, "x0") != block(ipa, 2, "x4"));
        CHECK(block(ipa, 1, "y0") != block(ipa, 1, "y3"));
    }
}

TEST_CASE("shared-optimum fixture separates the constructions") {
    auto mdp = testing::shared_optimum_mdp();
    auto values = value_iteration(mdp);
    auto asap = exact_asap_fixed_point(mdp);
    auto ipa = exact_ipa_fixed_point(mdp, values);
    int a = mdp.find_state(1, "a"), b = mdp.find_state(1, "b");
    CHECK(asap.states.of_state(1, a) != asap.states.of_state(1, b));
    CHECK(ipa.states.of_state(1, a) == ipa.states.of_state(1, b));
}

TEST_CASE("asap blocks refine ipa blocks and both are value-sound") {
    auto run = [](const LayeredMdp& mdp) {
        auto values = value_iteration(mdp);
        auto asap = exact_asap_fixed_point(mdp);
        auto ipa = exact_ipa_fixed_point(mdp, values);

        // refinement: states sharing an asap block share an ipa block
        for (std::size_t d = 0; d < mdp.num_layers(); ++d) {
            std::map<int, int> seen;  // asap block -> ipa block
            for (std::size_t s = 0; s < mdp.layers[d].size(); ++s) {
                int ab = asap.states.of_state(static_cast<int>(d), static_cast<int>(s));
                int ib = ipa.states.of_state(static_cast<int>(d), static_cast<int>(s));
                auto [it, fresh] = seen.emplace(ab, ib);
                if (!fresh)
                    CHECK(it->second == ib);
            }
        }
        // soundness: V* spread zero in ipa state blocks, Q* spread zero in
        // ipa pair blocks
        std::map<int, double> first_v, first_q;
        for (std::size_t d = 0; d < mdp.num_layers(); ++d) {
            for (std::size_t s = 0; s < mdp.layers[d].size(); ++s) {
                int b = ipa.states.of_state(static_cast<int>(d), static_cast<int>(s));
                double v = values.v[d][s];
                auto [it, fresh] = first_v.emplace(b, v);
                if (!fresh)
                    CHECK(std::fabs(it->second - v) <= 1e-9);
                for (std::size_t a = 0; a < mdp.layers[d][s].actions.size(); ++a) {
                    int qb = ipa.qpairs.of_pair(static_cast<int>(d), static_cast<int>(s),
                                                static_cast<int>(a));
                    double q = values.q[d][s][a];
                    auto [qit, qfresh] = first_q.emplace(qb, q);
                    if (!qfresh)
                        CHECK(std::fabs(qit->second - q) <= 1e-9);
                }
            }
        }
    };
    run(domains::abstraction_testbed());
    run(testing::shared_optimum_mdp());
    domains::Navigation nav(domains::navigation_fig2_spec());
    run(unroll_reachable(nav, 20).mdp);
}

TEST_CASE("surjection counts") {
    CHECK(surjection_count(3, 3) == 6);
    CHECK(surjection_count(2, 3) == 0);
    CHECK(surjection_count(3, 2) == 6);
    CHECK(surjection_count(5, 0) == 0);
    CHECK_THROWS_AS(surjection_count(21, 3), RangeExceeded);

    // f(n,k) = k (f(n-1,k) + f(n-1,k-1))
    for (int n = 2; n <= 10; ++n)
        for (int k = 1; k <= n; ++k)
            CHECK(surjection_count(n, k) ==
                  k * (surjection_count(n - 1, k) + surjection_count(n - 1, k - 1)));
}

TEST_CASE("p_abs closed form matches small enumerations") {
    CHECK(p_abs_closed_form(1, 1, 2).probability == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(p_abs_closed_form(2, 1, 2).probability == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(p_abs_closed_form(3, 2, 1).probability == doctest::Approx(1.0));
    CHECK_THROWS_AS(p_abs_closed_form(16, 15, 5), RangeExceeded);
    CHECK_THROWS_AS(p_abs_closed_form(2, 2, 21), RangeExceeded);

    for (int n = 1; n <= 3; ++n) {
        for (int l = 1; l <= 3; ++l) {
            for (int m = 1; m <= 4; ++m) {
                auto count = testing::count_matching_assignments(n, l, m);
                CHECK(BigInt(count) == p_abs_match_count(n, l, m));
            }
        }
    }
}

TEST_CASE("p_abs versus the (2c/m)^(n+l) bound") {
    // The bound fails exactly when one state has a single action and the
    // pool is large: p_abs(n,l,m) = 1/m for min(n,l) = 1, which exceeds
    // (2/m)^(n+l) as soon as m > 2^(n+l). The closed form is checked
    // against enumeration elsewhere, so these are real counterexamples,
    // not artifacts.
    for (int n = 1; n <= 5; ++n) {
        for (int l = 1; l <= 5; ++l) {
            for (int m = 1; m <= 10; ++m) {
                const int c = std::min({n, l, m});
                // exact integer comparison of match count vs (2c)^(n+l)
                BigInt bound = 1;
                for (int i = 0; i < n + l; ++i)
                    bound *= 2 * c;
                const bool counterexample = std::min(n, l) == 1 && m > (1 << (n + l));
                CHECK((p_abs_match_count(n, l, m) <= bound) == !counterexample);
            }
        }
    }
}

TEST_CASE("p_abs monte carlo") {
    Rng rng(7);
    auto one = p_abs_monte_carlo(3, 2, 1, 1000, rng);
    CHECK(one.estimate == 1.0);
    CHECK(one.std_error == 0.0);

    auto est = p_abs_monte_carlo(2, 1, 2, 1000000, rng);
    CHECK(std::fabs(est.estimate - 0.25) <= 3.0 * est.std_error);
    CHECK(est.estimate >= 0.0);
    CHECK(est.estimate <= 1.0);
}

TEST_CASE("value equivalence ratios") {
    SUBCASE("single looping state gives all ones") {
        testing::SelfLoopMdp mdp;
        auto model = GroundModel::enumerate(mdp);
        auto tables = HorizonTables::compute(model, 10);
        Rng rng(3);
        auto report = value_equivalence_ratios(model, tables, 10, 2000, rng);
        for (double v : report.v_abs)
            CHECK(v == 1.0);
        for (double q : report.q_abs)
            CHECK(q == 1.0);
    }
    SUBCASE("distinct-value chain matches the same-state sampling rate") {
        testing::ChainMdp mdp(12, 20);
        auto model = GroundModel::enumerate(mdp);
        auto tables = HorizonTables::compute(model, 20);
        Rng rng(11);
        auto report = value_equivalence_ratios(model, tables, 20, 20000, rng);
        // 12 non-terminal states with pairwise distinct values: equality
        // only when the same state is drawn twice
        CHECK(report.v_abs[0] == doctest::Approx(1.0 / 12.0).epsilon(0.15));
    }
}

TEST_CASE("symmetric 3x3 instances contain distinct equal-value states") {
    auto scan = [](const Mdp& mdp) {
        auto model = GroundModel::enumerate(mdp);
        auto tables = HorizonTables::compute(model, 10);
        int hits = 0;
        for (std::size_t i = 0; i < model.states.size() && hits == 0; ++i) {
            if (model.terminal(static_cast<int>(i)))
                continue;
            for (std::size_t j = i + 1; j < model.states.size(); ++j) {
                if (model.terminal(static_cast<int>(j)))
                    continue;
                if (std::fabs(tables.value(10, static_cast<int>(i)) -
                              tables.value(10, static_cast<int>(j))) <= 1e-9) {
                    ++hits;
                    break;
                }
            }
        }
        return hits;
    };
    domains::SysAdminSpec sys;
    sys.topology = domains::SysAdminSpec::Topology::grid;
    sys.grid_width = 3;
    sys.grid_height = 3;
    CHECK(scan(domains::SysAdmin(sys)) > 0);

    domains::GameOfLifeSpec life;
    life.width = 3;
    life.height = 3;
    CHECK(scan(domains::GameOfLife(life)) > 0);
}
