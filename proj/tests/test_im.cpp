#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "monstor/im.hpp"
#include "test_util.hpp"

using namespace monstor;

TEST_CASE("greedy picks the larger star first") {
    DirectedGraph g = testutil::two_stars();
    auto f = InfluenceFunction::exact_oracle();
    SelectionResult r = greedy_select(g, 2, f);
    REQUIRE(r.trace.size() == 2);
    CHECK(r.trace[0].first == 8);  // c1, 5 leaves
    CHECK(r.trace[0].second == doctest::Approx(6.0));
    CHECK(r.trace[1].first == 9);  // c2, 3 leaves
    CHECK(r.trace[1].second == doctest::Approx(4.0));
}

TEST_CASE("k equal to the node count saturates") {
    DirectedGraph g = testutil::diamond(0.4);
    auto f = InfluenceFunction::exact_oracle();
    SelectionResult r = greedy_select(g, 4, f);
    CHECK(r.seeds.size() == 4);
    CHECK(f(g, r.seeds) == doctest::Approx(4.0));
}

TEST_CASE("tie-break picks the lowest node ids on an edgeless graph") {
    DirectedGraph g(6, {});
    auto f = InfluenceFunction::exact_oracle();
    SelectionResult r = greedy_select(g, 3, f);
    CHECK(r.seeds.nodes() == std::vector<int>{0, 1, 2});
    for (const auto& [node, gain] : r.trace) CHECK(gain == doctest::Approx(1.0));

    SelectionResult lazy = lazy_greedy_select(g, 3, f);
    CHECK(lazy.seeds.nodes() == std::vector<int>{0, 1, 2});
}

TEST_CASE("k bounds are validated") {
    DirectedGraph g = testutil::diamond(0.4);
    auto f = InfluenceFunction::exact_oracle();
    CHECK_THROWS_AS(greedy_select(g, 0, f), std::invalid_argument);
    CHECK_THROWS_AS(greedy_select(g, 5, f), std::invalid_argument);
    CHECK_THROWS_AS(lazy_greedy_select(g, 0, f), std::invalid_argument);
}

TEST_CASE("lazy greedy equals greedy on small oracle instances") {
    for (uint64_t seed = 0; seed < 12; ++seed) {
        DirectedGraph g = testutil::random_graph(7, 10, 0.1, 0.9, 4200 + seed);
        auto f = InfluenceFunction::exact_oracle();
        int k = 1 + static_cast<int>(seed % 4);
        SelectionResult a = greedy_select(g, k, f);
        SelectionResult b = lazy_greedy_select(g, k, f);
        CHECK(a.seeds.nodes() == b.seeds.nodes());
        for (size_t i = 0; i < a.trace.size(); ++i) {
            CHECK(a.trace[i].first == b.trace[i].first);
            CHECK(a.trace[i].second == doctest::Approx(b.trace[i].second));
        }
    }
}

TEST_CASE("lazy greedy evaluates strictly less on the two-star fixture") {
    DirectedGraph g = testutil::two_stars();
    auto f = InfluenceFunction::exact_oracle();
    SelectionResult greedy = greedy_select(g, 2, f);
    SelectionResult lazy = lazy_greedy_select(g, 2, f);
    CHECK(lazy.seeds.nodes() == greedy.seeds.nodes());
    CHECK(lazy.evaluations < greedy.evaluations);
    CHECK(greedy.evaluations == 10 + 9);
}

TEST_CASE("k=1 lazy greedy is plain greedy") {
    DirectedGraph g = testutil::two_stars();
    auto f = InfluenceFunction::exact_oracle();
    SelectionResult a = greedy_select(g, 1, f);
    SelectionResult b = lazy_greedy_select(g, 1, f);
    CHECK(a.seeds.nodes() == b.seeds.nodes());
    CHECK(a.evaluations == b.evaluations);
}

TEST_CASE("greedy gains are non-increasing under the exact oracle") {
    for (uint64_t seed = 0; seed < 8; ++seed) {
        DirectedGraph g = testutil::random_graph(7, 10, 0.1, 0.9, 5200 + seed);
        SelectionResult r = greedy_select(g, 4, InfluenceFunction::exact_oracle());
        for (size_t i = 0; i + 1 < r.trace.size(); ++i)
            CHECK(r.trace[i].second >= r.trace[i + 1].second - 1e-9);
    }
}

TEST_CASE("influence function basics") {
    DirectedGraph g = testutil::path3(1.0);
    auto oracle = InfluenceFunction::exact_oracle();
    CHECK(oracle(g, SeedSet()) == 0.0);  // empty set, no evaluation charged
    CHECK(oracle.evaluations() == 0);
    CHECK(oracle(g, SeedSet({0})) == doctest::Approx(3.0));
    CHECK(oracle.evaluations() == 1);
    CHECK(oracle.backend() == "exact");

    auto mc = InfluenceFunction::monte_carlo(500, 7);
    double v1 = mc(g, SeedSet({0}));
    double v2 = mc(g, SeedSet({0}));
    CHECK(v1 == v2);  // fixed master seed
    CHECK(mc(g, SeedSet({0, 1, 2})) >= 3.0 - 1e-12);
}

TEST_CASE("a zero surrogate still yields a valid selection") {
    DirectedGraph g = testutil::two_stars();
    ModelParams params = init_params(Hyperparams::standard(2, 2, 2, 0.3, 4), 0);
    for (LayerParams& layer : params.layers) {
        layer.w1.setZero();
        layer.b1.setZero();
        layer.w2.setZero();
        layer.b2.setZero();
    }
    auto f = InfluenceFunction::surrogate(params);
    // Zero head: every stack returns its input, so f(S) = |S| exactly.
    CHECK(f(g, SeedSet({8})) == doctest::Approx(1.0));
    CHECK(f(g, SeedSet({0, 8})) == doctest::Approx(2.0));
    SeedSet seeds = maximize_with_surrogate(g, 3, params);
    CHECK(seeds.size() == 3);
    CHECK(seeds.nodes() == std::vector<int>{0, 1, 2});  // all tied, lowest ids
}
