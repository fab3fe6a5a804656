#include "monstor/metrics.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <stdexcept>
#include <unordered_set>

#include "monstor/cascade.hpp"
#include "monstor/rng.hpp"

namespace monstor {

namespace {

double pearson_checked(std::span<const double> x, std::span<const double> y) {
    const size_t n = x.size();
    double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
    double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
    double sxy = 0, sxx = 0, syy = 0;
    for (size_t i = 0; i < n; ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
        syy += (y[i] - my) * (y[i] - my);
    }
    if (sxx <= 0.0 || syy <= 0.0)
        throw std::invalid_argument("correlation: zero variance input");
    return sxy / std::sqrt(sxx * syy);
}

// Average ranks, 1-based; tied values share the mean of their rank range.
std::vector<double> average_ranks(std::span<const double> values) {
    const size_t n = values.size();
    std::vector<size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](size_t a, size_t b) { return values[a] < values[b]; });
    std::vector<double> ranks(n);
    size_t i = 0;
    while (i < n) {
        size_t j = i;
        while (j + 1 < n && values[order[j + 1]] == values[order[i]]) ++j;
        double mean_rank = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
        for (size_t k = i; k <= j; ++k) ranks[order[k]] = mean_rank;
        i = j + 1;
    }
    return ranks;
}

std::vector<int> draw_seed_nodes(std::mt19937_64& gen, int node_count, int size) {
    std::unordered_set<int> taken;
    std::vector<int> chosen;
    chosen.reserve(size);
    while (static_cast<int>(chosen.size()) < size) {
        int v = static_cast<int>(uniform_int(gen, 0, node_count - 1));
        if (taken.insert(v).second) chosen.push_back(v);
    }
    return chosen;
}

}  // namespace

CorrelationReport correlation(std::span<const double> true_vals,
                              std::span<const double> est_vals) {
    if (true_vals.size() != est_vals.size())
        throw std::invalid_argument("correlation: length mismatch");
    if (true_vals.size() < 2) throw std::invalid_argument("correlation: need at least 2 samples");
    CorrelationReport report;
    report.n = static_cast<int>(true_vals.size());
    report.pearson = pearson_checked(true_vals, est_vals);
    std::vector<double> rt = average_ranks(true_vals);
    std::vector<double> re = average_ranks(est_vals);
    report.spearman = pearson_checked(rt, re);
    return report;
}

SubmodularityReport submodularity_probe(const DirectedGraph& g, const InfluenceFunction& f,
                                        int n_pairs, double lo_frac, double hi_frac,
                                        uint64_t seed) {
    if (n_pairs < 1) throw std::invalid_argument("submodularity_probe: n_pairs must be >= 1");
    const int n = g.node_count();
    int size_lo = std::max(1, static_cast<int>(std::floor(lo_frac * n)));
    int size_hi = std::max(size_lo, static_cast<int>(std::floor(hi_frac * n)));
    size_hi = std::min(size_hi, n);

    // Smallest pool whose pair count covers n_pairs.
    int pool = 2;
    while (static_cast<int64_t>(pool) * (pool - 1) / 2 < n_pairs) ++pool;

    std::mt19937_64 gen = make_stream(seed, 0x50b);
    std::vector<SeedSet> sets;
    std::vector<double> values;
    sets.reserve(pool);
    for (int i = 0; i < pool; ++i) {
        int size = static_cast<int>(uniform_int(gen, size_lo, size_hi));
        sets.emplace_back(draw_seed_nodes(gen, n, size));
        values.push_back(f(g, sets.back()));
    }

    SubmodularityReport report;
    double mape_sum = 0.0;
    for (int i = 0; i < pool && report.pairs_tested < n_pairs; ++i) {
        for (int j = i + 1; j < pool && report.pairs_tested < n_pairs; ++j) {
            SeedSet u = SeedSet::set_union(sets[i], sets[j]);
            SeedSet x = SeedSet::set_intersection(sets[i], sets[j]);
            double fu = f(g, u);
            double fx = f(g, x);  // 0 for the empty intersection
            double rhs = fu + fx;
            double violation = rhs - values[i] - values[j];
            ++report.pairs_tested;
            if (violation > 1e-9 * (1.0 + std::abs(rhs))) {
                ++report.violations;
                mape_sum += violation / rhs;
            }
        }
    }
    report.holds_ratio =
        static_cast<double>(report.pairs_tested - report.violations) / report.pairs_tested;
    report.violation_mape = report.violations > 0 ? mape_sum / report.violations : 0.0;
    return report;
}

CorrelationReport run_ie_eval(const DirectedGraph& g, const InfluenceFunction& estimator,
                              int n_sets, int runs, uint64_t seed,
                              const std::string& scatter_path) {
    if (n_sets < 2) throw std::invalid_argument("run_ie_eval: need at least 2 seed sets");
    const int n = g.node_count();
    const int max_size = std::max(1, n / 50);
    std::mt19937_64 gen = make_stream(seed, 0x1e);

    std::vector<SeedSet> sets;
    sets.reserve(n_sets);
    for (int k = 0; k < n_sets; ++k) {
        int size = static_cast<int>(uniform_int(gen, 1, max_size));
        sets.emplace_back(draw_seed_nodes(gen, n, size));
    }
    std::vector<double> truth(n_sets), est(n_sets);
    for (int k = 0; k < n_sets; ++k) {
        truth[k] = simulate(g, sets[k], runs, splitmix64(seed ^ (0xabcdULL + k))).influence;
        est[k] = estimator(g, sets[k]);
    }

    CorrelationReport report = correlation(truth, est);
    if (!scatter_path.empty()) {
        std::ofstream out(scatter_path);
        if (!out) throw std::runtime_error("cannot write scatter dump: " + scatter_path);
        out << "set\tsize\tmc_influence\testimated\n";
        char buf[128];
        for (int k = 0; k < n_sets; ++k) {
            std::snprintf(buf, sizeof(buf), "%d\t%d\t%.9f\t%.9f\n", k, sets[k].size(), truth[k],
                          est[k]);
            out << buf;
        }
        report.scatter_path = scatter_path;
    }
    return report;
}

CorrelationReport run_ie_eval(const DirectedGraph& g, const ModelParams& params, int n_sets,
                              int runs, uint64_t seed, const std::string& scatter_path) {
    return run_ie_eval(g, InfluenceFunction::surrogate(params), n_sets, runs, seed, scatter_path);
}

std::vector<ScalePoint> run_scalability(std::span<const int> log2_edges, int estimations,
                                        const ModelParams& params, uint64_t seed) {
    if (estimations < 1) throw std::invalid_argument("run_scalability: estimations must be >= 1");
    std::vector<ScalePoint> table;
    for (int log2e : log2_edges) {
        if (log2e > 26)
            throw std::invalid_argument("run_scalability: 2^" + std::to_string(log2e) +
                                        " edges exceeds the memory cap (2^26)");
        DirectedGraph g = assign_weighted_cascade(
            generate_rmat(log2e, 0.7, 0.1, 0.1, 0.1, splitmix64(seed ^ log2e)));
        const int n = g.node_count();
        const int max_size = std::max(1, n / 10);
        std::mt19937_64 gen = make_stream(seed, 0x5ca1e + log2e);

        std::vector<SeedSet> sets;
        sets.reserve(estimations);
        for (int k = 0; k < estimations; ++k) {
            int size = static_cast<int>(uniform_int(gen, 1, max_size));
            sets.emplace_back(draw_seed_nodes(gen, n, size));
        }

        stacked_inference(g, sets[0], params);  // warmup, untimed
        auto start = std::chrono::steady_clock::now();
        for (const SeedSet& s : sets) stacked_inference(g, s, params);
        auto stop = std::chrono::steady_clock::now();
        double seconds = std::chrono::duration<double>(stop - start).count();

        ScalePoint point;
        point.log2_edges = log2e;
        point.edges = g.edge_count();
        point.node_count = n;
        point.seconds_per_stack = seconds / params.hyper.s;
        table.push_back(point);
    }
    return table;
}

}  // namespace monstor
