#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>

#include "monstor/metrics.hpp"
#include "test_util.hpp"

using namespace monstor;
namespace fs = std::filesystem;

TEST_CASE("correlation of identical series is 1") {
    std::vector<double> x = {1.0, 3.0, 2.0, 5.0};
    CorrelationReport r = correlation(x, x);
    CHECK(r.pearson == doctest::Approx(1.0));
    CHECK(r.spearman == doctest::Approx(1.0));
    CHECK(r.n == 4);
}

TEST_CASE("reversed ranks give spearman -1") {
    std::vector<double> x = {1.0, 2.0, 3.0, 4.0};
    std::vector<double> y = {9.0, 7.0, 5.0, 2.0};  // strictly decreasing
    CorrelationReport r = correlation(x, y);
    CHECK(r.spearman == doctest::Approx(-1.0));
}

TEST_CASE("pearson closed form on a fixed fixture") {
    std::vector<double> x = {1.0, 2.0, 3.0, 4.0};
    std::vector<double> y = {1.1, 1.9, 3.2, 3.8};
    // deviations x: (-1.5,-0.5,0.5,1.5), y: (-1.4,-0.6,0.7,1.3)
    // sum xy = 4.7, sum x^2 = 5, sum y^2 = 4.5 -> r = 4.7/sqrt(22.5)
    double expect = 4.7 / std::sqrt(22.5);
    CorrelationReport r = correlation(x, y);
    CHECK(r.pearson == doctest::Approx(expect).epsilon(1e-12));
    CHECK(r.spearman == doctest::Approx(1.0));
}

TEST_CASE("spearman averages tied ranks") {
    std::vector<double> x = {1.0, 2.0, 2.0, 4.0};
    std::vector<double> y = {1.0, 2.0, 3.0, 4.0};
    // ranks x: 1, 2.5, 2.5, 4  vs  y: 1,2,3,4
    CorrelationReport r = correlation(x, y);
    double expect = 4.5 / std::sqrt(4.5 * 5.0);
    CHECK(r.spearman == doctest::Approx(expect).epsilon(1e-12));
}

TEST_CASE("correlation input validation") {
    std::vector<double> flat = {2.0, 2.0, 2.0};
    std::vector<double> ok = {1.0, 2.0, 3.0};
    CHECK_THROWS_AS(correlation(flat, ok), std::invalid_argument);
    CHECK_THROWS_AS(correlation(ok, flat), std::invalid_argument);
    std::vector<double> one = {1.0};
    CHECK_THROWS_AS(correlation(one, one), std::invalid_argument);
    std::vector<double> two = {1.0, 2.0};
    CHECK_THROWS_AS(correlation(two, ok), std::invalid_argument);
}

TEST_CASE("exact influence is submodular in the probe") {
    for (uint64_t seed = 0; seed < 4; ++seed) {
        DirectedGraph g = testutil::random_graph(6, 10, 0.2, 0.9, 6100 + seed);
        auto f = InfluenceFunction::exact_oracle();
        SubmodularityReport r = submodularity_probe(g, f, 50, 0.0, 0.4, seed);
        CHECK(r.pairs_tested == 50);
        CHECK(r.holds_ratio == 1.0);
        CHECK(r.violations == 0);
        CHECK(r.violation_mape == 0.0);
    }
}

TEST_CASE("a modular function holds with equality") {
    DirectedGraph g(12, {});
    auto f = InfluenceFunction::exact_oracle();  // no edges: f(S) = |S|
    SubmodularityReport r = submodularity_probe(g, f, 30, 0.0, 0.5, 3);
    CHECK(r.holds_ratio == 1.0);
}

TEST_CASE("a supermodular function is flagged") {
    DirectedGraph g(12, {});
    InfluenceFunction f("square", [](const DirectedGraph&, const SeedSet& s) {
        return static_cast<double>(s.size()) * s.size();
    });
    SubmodularityReport r = submodularity_probe(g, f, 40, 0.1, 0.5, 4);
    CHECK(r.holds_ratio < 1.0);
    CHECK(r.violations > 0);
    CHECK(r.violation_mape > 0.0);
}

TEST_CASE("a perfect estimator scores pearson 1") {
    DirectedGraph g = testutil::random_graph(60, 20, 0.3, 0.9, 7100);
    auto oracle = InfluenceFunction::exact_oracle();
    CorrelationReport r = run_ie_eval(g, oracle, 30, 2000, 5);
    CHECK(r.pearson > 0.99);
    CHECK(r.spearman > 0.9);
    CHECK(r.n == 30);
}

TEST_CASE("ie eval writes a scatter dump") {
    DirectedGraph g = testutil::random_graph(60, 20, 0.3, 0.9, 7200);
    fs::path p = fs::temp_directory_path() / "scatter.tsv";
    CorrelationReport r = run_ie_eval(g, InfluenceFunction::exact_oracle(), 10, 500, 6,
                                      p.string());
    CHECK(r.scatter_path == p.string());
    std::ifstream in(p);
    std::string header;
    std::getline(in, header);
    CHECK(header == "set\tsize\tmc_influence\testimated");
    int rows = 0;
    std::string line;
    while (std::getline(in, line))
        if (!line.empty()) ++rows;
    CHECK(rows == 10);
}

TEST_CASE("a single estimation on a tiny graph is fast") {
    ModelParams params = init_params(Hyperparams::standard(4, 3, 3, 0.3, 16), 1);
    DirectedGraph g = assign_weighted_cascade(generate_rmat(4, 0.7, 0.1, 0.1, 0.1, 2));
    auto start = std::chrono::steady_clock::now();
    stacked_inference(g, SeedSet({0}), params);
    double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    CHECK(seconds < 1.0);
}

TEST_CASE("scalability table covers the requested sizes") {
    ModelParams params = init_params(Hyperparams::standard(4, 3, 2, 0.3, 16), 1);
    std::vector<int> sizes = {8, 10};
    auto table = run_scalability(sizes, 3, params, 11);
    REQUIRE(table.size() == 2);
    CHECK(table[0].log2_edges == 8);
    CHECK(table[1].log2_edges == 10);
    CHECK(table[0].edges <= 256);
    CHECK(table[0].seconds_per_stack > 0.0);
    CHECK_THROWS_AS(run_scalability(std::vector<int>{30}, 1, params, 1), std::invalid_argument);
}
