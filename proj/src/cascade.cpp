#include "monstor/cascade.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "monstor/binary_io.hpp"
#include "monstor/rng.hpp"

namespace monstor {

namespace {

// Frontier cascade for one run. infection_step[v] = step at which v got
// infected, -1 if never. Each infected node attempts each out-edge once;
// already-infected targets are skipped without consuming a draw.
void run_cascade(const DirectedGraph& g, const std::vector<int>& seeds, std::mt19937_64& gen,
                 std::vector<int>& infection_step, std::vector<int>& frontier,
                 std::vector<int>& next_frontier) {
    infection_step.assign(g.node_count(), -1);
    frontier.clear();
    for (int s : seeds) {
        infection_step[s] = 0;
        frontier.push_back(s);
    }
    int step = 0;
    while (!frontier.empty()) {
        ++step;
        next_frontier.clear();
        for (int u : frontier) {
            auto dsts = g.out_neighbors(u);
            auto probs = g.out_probs(u);
            for (size_t k = 0; k < dsts.size(); ++k) {
                int v = dsts[k];
                if (infection_step[v] >= 0) continue;
                if (uniform01(gen) < probs[k]) {
                    infection_step[v] = step;
                    next_frontier.push_back(v);
                }
            }
        }
        frontier.swap(next_frontier);
    }
}

}  // namespace

SimulationResult simulate(const DirectedGraph& g, const SeedSet& seeds, int runs,
                          uint64_t master_seed) {
    seeds.validate(g);
    if (runs < 1) throw std::invalid_argument("simulate: runs must be >= 1");

    const int n = g.node_count();
    // counts[t][v] = number of runs where v was newly infected at step t.
    // Integer accumulation keeps the result independent of worker count.
    std::vector<std::vector<int64_t>> newly;
    int64_t spread_sum = 0, spread_sumsq = 0;

#ifdef _OPENMP
    int workers = omp_get_max_threads();
#else
    int workers = 1;
#endif
    std::vector<std::vector<std::vector<int64_t>>> partial(workers);
    std::vector<int64_t> partial_sum(workers, 0), partial_sumsq(workers, 0);

#pragma omp parallel num_threads(workers)
    {
#ifdef _OPENMP
        int tid = omp_get_thread_num();
#else
        int tid = 0;
#endif
        auto& local = partial[tid];
        std::vector<int> infection_step, frontier, next_frontier;
#pragma omp for schedule(static)
        for (int r = 0; r < runs; ++r) {
            std::mt19937_64 gen = make_stream(master_seed, static_cast<uint64_t>(r));
            run_cascade(g, seeds.nodes(), gen, infection_step, frontier, next_frontier);
            int64_t spread = 0;
            for (int v = 0; v < n; ++v) {
                int t = infection_step[v];
                if (t < 0) continue;
                ++spread;
                if (static_cast<int>(local.size()) <= t)
                    local.resize(t + 1, std::vector<int64_t>(n, 0));
                local[t][v]++;
            }
            partial_sum[tid] += spread;
            partial_sumsq[tid] += spread * spread;
        }
    }
    for (int w = 0; w < workers; ++w) {
        auto& local = partial[w];
        if (local.size() > newly.size()) newly.resize(local.size(), std::vector<int64_t>(n, 0));
        for (size_t t = 0; t < local.size(); ++t)
            for (int v = 0; v < n; ++v) newly[t][v] += local[t][v];
        spread_sum += partial_sum[w];
        spread_sumsq += partial_sumsq[w];
    }

    SimulationResult result;
    result.runs = runs;
    std::vector<int64_t> cumulative(n, 0);
    for (const auto& step_counts : newly) {
        for (int v = 0; v < n; ++v) cumulative[v] += step_counts[v];
        Vector pi(n);
        for (int v = 0; v < n; ++v)
            pi[v] = static_cast<double>(cumulative[v]) / static_cast<double>(runs);
        result.per_step.push_back(std::move(pi));
    }
    result.influence = result.per_step.back().sum();
    if (runs > 1) {
        double mean = static_cast<double>(spread_sum) / runs;
        double var =
            (static_cast<double>(spread_sumsq) - static_cast<double>(runs) * mean * mean) /
            (runs - 1);
        result.influence_stderr = std::sqrt(std::max(0.0, var) / runs);
    }
    return result;
}

ExactResult exact_influence(const DirectedGraph& g, const SeedSet& seeds) {
    seeds.validate(g);
    const int64_t m = g.edge_count();
    if (m > 22)
        throw std::invalid_argument("exact_influence: edge count " + std::to_string(m) +
                                    " exceeds enumeration guard (22)");
    const int n = g.node_count();
    const std::vector<Edge> edges = g.edges();

    // Live-edge adjacency rebuilt per subset via the mask; BFS uses epoch
    // stamping instead of clearing.
    std::vector<std::vector<std::pair<int, int>>> out(n);  // (edge index, dst)
    for (int k = 0; k < m; ++k) out[edges[k].src].push_back({k, edges[k].dst});

    std::vector<std::vector<long double>> newly_mass(1, std::vector<long double>(n, 0.0L));
    std::vector<int> visit_epoch(n, -1), dist(n, 0), frontier, next_frontier;
    const uint64_t subsets = uint64_t{1} << m;

    for (uint64_t mask = 0; mask < subsets; ++mask) {
        long double prob = 1.0L;
        for (int k = 0; k < m; ++k)
            prob *= (mask >> k) & 1 ? static_cast<long double>(edges[k].prob)
                                    : 1.0L - static_cast<long double>(edges[k].prob);
        if (prob == 0.0L) continue;

        // BFS over live edges from the seed set. visit_epoch is stamped with
        // mask+1 instead of being cleared (mask < 2^22 fits an int).
        const int stamp = static_cast<int>(mask) + 1;
        frontier.clear();
        for (int s : seeds.nodes()) {
            visit_epoch[s] = stamp;
            dist[s] = 0;
            frontier.push_back(s);
        }
        int level = 0;
        while (!frontier.empty()) {
            ++level;
            next_frontier.clear();
            for (int u : frontier) {
                for (auto [k, v] : out[u]) {
                    if (!((mask >> k) & 1)) continue;
                    if (visit_epoch[v] == stamp) continue;
                    visit_epoch[v] = stamp;
                    dist[v] = level;
                    next_frontier.push_back(v);
                }
            }
            frontier.swap(next_frontier);
        }
        for (int v = 0; v < n; ++v) {
            if (visit_epoch[v] != stamp) continue;
            if (static_cast<int>(newly_mass.size()) <= dist[v])
                newly_mass.resize(dist[v] + 1, std::vector<long double>(n, 0.0L));
            newly_mass[dist[v]][v] += prob;
        }
    }

    ExactResult result;
    std::vector<long double> cumulative(n, 0.0L);
    for (const auto& step_mass : newly_mass) {
        bool any = false;
        for (int v = 0; v < n; ++v) {
            cumulative[v] += step_mass[v];
            if (step_mass[v] > 0.0L) any = true;
        }
        if (!any && !result.per_step.empty()) break;
        Vector pi(n);
        for (int v = 0; v < n; ++v)
            pi[v] = std::min(1.0, static_cast<double>(cumulative[v]));
        result.per_step.push_back(std::move(pi));
    }
    result.influence = result.per_step.back().sum();
    return result;
}

std::vector<TrainingTuple> generate_tuples(const DirectedGraph& g, const std::string& graph_ref,
                                           int n_tuples, int e, int runs, uint64_t master_seed) {
    if (e < 2) throw std::invalid_argument("generate_tuples: e must be >= 2");
    if (n_tuples < 1) throw std::invalid_argument("generate_tuples: n_tuples must be >= 1");

    const int n = g.node_count();
    const int max_size = std::max(1, n / 50);
    std::mt19937_64 picker = make_stream(master_seed, 0x5eedUL);
    std::vector<TrainingTuple> tuples;
    tuples.reserve(n_tuples);

    const int64_t max_attempts = 200 + 40LL * n_tuples;
    int64_t attempts = 0;
    while (static_cast<int>(tuples.size()) < n_tuples) {
        if (++attempts > max_attempts)
            throw std::runtime_error(
                "generate_tuples: cascades keep converging before step e=" + std::to_string(e) +
                "; collected " + std::to_string(tuples.size()) + " of " +
                std::to_string(n_tuples) + " tuples");
        int size = static_cast<int>(uniform_int(picker, 1, max_size));
        std::vector<int> chosen;
        chosen.reserve(size);
        while (static_cast<int>(chosen.size()) < size) {
            int v = static_cast<int>(uniform_int(picker, 0, n - 1));
            if (std::find(chosen.begin(), chosen.end(), v) == chosen.end()) chosen.push_back(v);
        }
        uint64_t sim_seed = splitmix64(master_seed ^ splitmix64(static_cast<uint64_t>(attempts)));
        SimulationResult sim = simulate(g, SeedSet(chosen), runs, sim_seed);
        int h = static_cast<int>(sim.per_step.size()) - 1;
        for (int i = e; i <= h && static_cast<int>(tuples.size()) < n_tuples; ++i) {
            TrainingTuple t;
            t.step_index = i;
            t.target = sim.per_step[i];
            for (int j = 1; j <= e; ++j) t.history.push_back(sim.per_step[i - j]);
            t.graph_ref = graph_ref;
            tuples.push_back(std::move(t));
        }
    }
    return tuples;
}

namespace {
constexpr char kTupleMagic[4] = {'M', 'O', 'N', 'T'};
constexpr uint32_t kTupleVersion = 1;
}  // namespace

void save_tuples(const std::filesystem::path& path, const TupleFile& file) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write tuple file: " + path.string());
    out.write(kTupleMagic, 4);
    io::put_u32(out, kTupleVersion);
    io::put_u32(out, static_cast<uint32_t>(file.node_count));
    io::put_u32(out, static_cast<uint32_t>(file.e));
    io::put_u32(out, static_cast<uint32_t>(file.tuples.size()));
    for (const TrainingTuple& t : file.tuples) {
        if (t.target.size() != file.node_count ||
            static_cast<int>(t.history.size()) != file.e)
            throw std::invalid_argument("save_tuples: tuple shape does not match header");
        io::put_u32(out, static_cast<uint32_t>(t.step_index));
        for (int v = 0; v < file.node_count; ++v) io::put_f64(out, t.target[v]);
        for (const Vector& h : t.history) {
            if (h.size() != file.node_count)
                throw std::invalid_argument("save_tuples: history vector length mismatch");
            for (int v = 0; v < file.node_count; ++v) io::put_f64(out, h[v]);
        }
        io::put_string(out, t.graph_ref);
    }
}

TupleFile load_tuples(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open tuple file: " + path.string());
    io::expect_magic(in, kTupleMagic, "tuple container");
    uint32_t version = io::get_u32(in);
    if (version != kTupleVersion)
        throw std::runtime_error("unsupported tuple container version " + std::to_string(version));
    TupleFile file;
    file.node_count = static_cast<int>(io::get_u32(in));
    file.e = static_cast<int>(io::get_u32(in));
    uint32_t count = io::get_u32(in);
    file.tuples.reserve(count);
    for (uint32_t i = 0; i < count; ++i) {
        TrainingTuple t;
        t.step_index = static_cast<int>(io::get_u32(in));
        t.target.resize(file.node_count);
        for (int v = 0; v < file.node_count; ++v) t.target[v] = io::get_f64(in);
        t.history.resize(file.e);
        for (int j = 0; j < file.e; ++j) {
            t.history[j].resize(file.node_count);
            for (int v = 0; v < file.node_count; ++v) t.history[j][v] = io::get_f64(in);
        }
        t.graph_ref = io::get_string(in);
        file.tuples.push_back(std::move(t));
    }
    return file;
}

}  // namespace monstor
