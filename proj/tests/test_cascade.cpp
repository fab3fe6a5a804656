#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "monstor/cascade.hpp"
#include "monstor/graph.hpp"
#include "monstor/model.hpp"
#include "test_util.hpp"

using namespace monstor;
namespace fs = std::filesystem;

TEST_CASE("single node with no edges") {
    DirectedGraph g(1, {});
    SimulationResult r = simulate(g, SeedSet({0}), 100, 1);
    REQUIRE(r.per_step.size() == 1);
    CHECK(r.per_step[0][0] == 1.0);
    CHECK(r.influence == doctest::Approx(1.0));
}

TEST_CASE("path influence matches the chain product") {
    // 1 + 0.5 + 0.25 = 1.75; per-run spread in {1,2,3} with variance 0.6875
    SimulationResult r = simulate(testutil::path3(0.5), SeedSet({0}), 100000, 7);
    double se = std::sqrt(0.6875 / 100000.0);
    CHECK(std::abs(r.influence - 1.75) <= 3 * se);
}

TEST_CASE("diamond influence matches the live-edge enumeration") {
    DirectedGraph g = testutil::diamond(0.5);
    ExactResult exact = exact_influence(g, SeedSet({0}));
    CHECK(exact.influence == doctest::Approx(2.4375).epsilon(1e-12));
    CHECK(exact.per_step.back()[3] == doctest::Approx(0.4375).epsilon(1e-12));

    SimulationResult mc = simulate(g, SeedSet({0}), 100000, 3);
    CHECK(std::abs(mc.influence - 2.4375) < 0.03);
}

TEST_CASE("exact per-step vectors on the path") {
    ExactResult r = exact_influence(testutil::path3(0.5), SeedSet({0}));
    REQUIRE(r.per_step.size() == 3);
    CHECK(r.per_step[0][0] == 1.0);
    CHECK(r.per_step[0][1] == 0.0);
    CHECK(r.per_step[1][1] == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(r.per_step[1][2] == 0.0);
    CHECK(r.per_step[2][2] == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(r.influence == doctest::Approx(1.75).epsilon(1e-12));
}

TEST_CASE("seeding every node saturates") {
    DirectedGraph g = testutil::diamond(0.3);
    ExactResult r = exact_influence(g, SeedSet({0, 1, 2, 3}));
    REQUIRE(r.per_step.size() == 1);
    CHECK(r.per_step[0].minCoeff() == 1.0);
    CHECK(r.influence == doctest::Approx(4.0));
}

TEST_CASE("exact oracle rejects large graphs and empty seeds") {
    DirectedGraph g = testutil::random_graph(30, 23, 0.2, 0.8, 1);
    if (g.edge_count() > 22) CHECK_THROWS_AS(exact_influence(g, SeedSet({0})), std::invalid_argument);
    CHECK_THROWS_AS(exact_influence(testutil::path3(0.5), SeedSet()), std::invalid_argument);
    CHECK_THROWS_AS(simulate(testutil::path3(0.5), SeedSet(), 10, 1), std::invalid_argument);
    CHECK_THROWS_AS(simulate(testutil::path3(0.5), SeedSet({0}), 0, 1), std::invalid_argument);
}

TEST_CASE("monte carlo per-step vectors are monotone and keep seeds at 1") {
    for (uint64_t seed = 0; seed < 8; ++seed) {
        DirectedGraph g = testutil::random_graph(12, 20, 0.1, 0.9, seed);
        SeedSet seeds({0, 3});
        SimulationResult r = simulate(g, seeds, 2000, seed);
        for (size_t i = 0; i + 1 < r.per_step.size(); ++i)
            CHECK((r.per_step[i + 1] - r.per_step[i]).minCoeff() >= 0.0);
        for (const Vector& pi : r.per_step)
            for (int s : seeds.nodes()) CHECK(pi[s] == 1.0);
        CHECK(r.influence == doctest::Approx(r.per_step.back().sum()).epsilon(1e-9));
    }
}

TEST_CASE("simulation is deterministic in the master seed") {
    DirectedGraph g = testutil::random_graph(15, 25, 0.1, 0.9, 9);
    SimulationResult a = simulate(g, SeedSet({1, 2}), 5000, 123);
    SimulationResult b = simulate(g, SeedSet({1, 2}), 5000, 123);
    REQUIRE(a.per_step.size() == b.per_step.size());
    for (size_t i = 0; i < a.per_step.size(); ++i) CHECK(a.per_step[i] == b.per_step[i]);
    SimulationResult c = simulate(g, SeedSet({1, 2}), 5000, 124);
    CHECK(a.influence != c.influence);  // different stream, almost surely different estimate
}

TEST_CASE("monte carlo agrees with the oracle within 3 standard errors") {
    int ok = 0;
    const int trials = 25;
    for (int t = 0; t < trials; ++t) {
        DirectedGraph g = testutil::random_graph(8, 12, 0.1, 0.9, 3000 + t);
        SeedSet seeds({0});
        ExactResult exact = exact_influence(g, seeds);
        SimulationResult mc = simulate(g, seeds, 10000, 4000 + t);
        double band = 3 * mc.influence_stderr + 1e-12;  // stderr 0 when the spread is constant
        if (std::abs(mc.influence - exact.influence) <= band) ++ok;
    }
    CHECK(ok >= trials - 1);
}

TEST_CASE("theorem-style upper bound holds on exact step vectors") {
    for (uint64_t seed = 0; seed < 20; ++seed) {
        DirectedGraph g = testutil::random_graph(9, 12, 0.1, 0.9, 7000 + seed);
        ExactResult r = exact_influence(g, SeedSet({0, 1}));
        const auto& pi = r.per_step;
        for (size_t i = 1; i < pi.size(); ++i) {
            Vector prev_prev = i >= 2 ? pi[i - 2] : Vector(Vector::Zero(g.node_count()));
            Vector u = pi[i - 1] + propagate(pi[i - 1] - prev_prev, g);
            CHECK((u - pi[i]).minCoeff() >= -1e-9);
        }
    }
}

TEST_CASE("influence is monotone and submodular on oracle-evaluated graphs") {
    for (uint64_t seed = 0; seed < 3; ++seed) {
        DirectedGraph g = testutil::random_graph(5, 9, 0.2, 0.9, 8100 + seed);
        const int n = g.node_count();
        std::vector<double> f(size_t{1} << n, 0.0);
        for (uint32_t mask = 1; mask < (1u << n); ++mask) {
            std::vector<int> nodes;
            for (int v = 0; v < n; ++v)
                if ((mask >> v) & 1) nodes.push_back(v);
            f[mask] = exact_influence(g, SeedSet(nodes)).influence;
        }
        for (uint32_t s = 0; s < (1u << n); ++s) {
            for (uint32_t t = s; t < (1u << n); ++t) {
                if ((s & t) != s) continue;  // require S subset of T
                for (int x = 0; x < n; ++x) {
                    if ((t >> x) & 1) continue;
                    double gain_s = f[s | (1u << x)] - f[s];
                    double gain_t = f[t | (1u << x)] - f[t];
                    CHECK(gain_s >= gain_t - 1e-9);
                    CHECK(gain_t >= -1e-9);  // monotone
                }
            }
        }
    }
}

TEST_CASE("tuple generation boundary and determinism") {
    // p = 1 path of length 3: every cascade converges by step 3, so e = 4
    // can never be satisfied.
    DirectedGraph path4(4, {{0, 1, 1.0}, {1, 2, 1.0}, {2, 3, 1.0}});
    CHECK_THROWS_AS(generate_tuples(path4, "p4", 1, 4, 50, 1), std::runtime_error);

    // e = 3 is reachable whenever node 0 is drawn as the seed.
    auto tuples = generate_tuples(path4, "p4", 2, 3, 50, 1);
    REQUIRE(tuples.size() == 2);
    for (const auto& t : tuples) {
        CHECK(t.step_index >= 3);
        CHECK(t.history.size() == 3);
        CHECK(t.graph_ref == "p4");
        CHECK((t.target - t.history[0]).minCoeff() >= 0.0);
    }

    auto again = generate_tuples(path4, "p4", 2, 3, 50, 1);
    for (size_t i = 0; i < tuples.size(); ++i) {
        CHECK(tuples[i].step_index == again[i].step_index);
        CHECK(tuples[i].target == again[i].target);
        for (size_t j = 0; j < tuples[i].history.size(); ++j)
            CHECK(tuples[i].history[j] == again[i].history[j]);
    }

    CHECK_THROWS_AS(generate_tuples(path4, "p4", 1, 1, 50, 1), std::invalid_argument);
    CHECK_THROWS_AS(generate_tuples(path4, "p4", 0, 3, 50, 1), std::invalid_argument);
}

TEST_CASE("tuple container round-trips bit-exactly") {
    DirectedGraph g = testutil::random_graph(20, 40, 0.3, 0.9, 42);
    TupleFile file;
    file.node_count = g.node_count();
    file.e = 2;
    file.tuples = generate_tuples(g, "fixture.tsv", 5, 2, 200, 11);
    REQUIRE(file.tuples.size() == 5);

    fs::path p = fs::temp_directory_path() / "tuples.mont";
    save_tuples(p, file);
    TupleFile loaded = load_tuples(p);
    CHECK(loaded.node_count == file.node_count);
    CHECK(loaded.e == file.e);
    REQUIRE(loaded.tuples.size() == file.tuples.size());
    for (size_t i = 0; i < file.tuples.size(); ++i) {
        CHECK(loaded.tuples[i].step_index == file.tuples[i].step_index);
        CHECK(loaded.tuples[i].graph_ref == file.tuples[i].graph_ref);
        CHECK(loaded.tuples[i].target == file.tuples[i].target);
        for (size_t j = 0; j < file.tuples[i].history.size(); ++j)
            CHECK(loaded.tuples[i].history[j] == file.tuples[i].history[j]);
    }

    // Container magic.
    std::ifstream in(p, std::ios::binary);
    char magic[4];
    in.read(magic, 4);
    CHECK(std::string(magic, 4) == "MONT");
}
