#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "monstor/graph.hpp"

namespace monstor {

/// Per-step infection probability vectors from step 0 (the seed indicator)
/// up to the first step h with pi_h = pi_{h+1}. Vectors are elementwise
/// non-decreasing by construction.
struct SimulationResult {
    std::vector<Vector> per_step;
    double influence = 0.0;
    double influence_stderr = 0.0;  // sample std of per-run spread / sqrt(runs)
    int runs = 0;
};

/// Monte Carlo estimate over `runs` independent cascades. Each run uses its
/// own generator stream derived from (master_seed, run index), so the result
/// is identical for any worker count. per_step[i][x] = fraction of runs in
/// which x was infected at step <= i.
SimulationResult simulate(const DirectedGraph& g, const SeedSet& seeds, int runs,
                          uint64_t master_seed);

struct ExactResult {
    std::vector<Vector> per_step;
    double influence = 0.0;
};

/// Exact infection probabilities by enumerating all 2^|E| live-edge subsets
/// (each edge live independently with its probability; infection = live-edge
/// reachability). Guarded to |E| <= 22.
ExactResult exact_influence(const DirectedGraph& g, const SeedSet& seeds);

/// One supervised sample: target pi_i plus the e preceding vectors,
/// newest first.
struct TrainingTuple {
    int step_index = 0;                // i
    Vector target;                     // pi_i
    std::vector<Vector> history;       // pi_{i-1}, ..., pi_{i-e}
    std::string graph_ref;
};

/// Draws random seed sets (size uniform in [1, max(1, |V|/50)]), simulates
/// each, and emits one tuple per step index i with e <= i <= h until
/// n_tuples are collected. Deterministic for a fixed master_seed.
std::vector<TrainingTuple> generate_tuples(const DirectedGraph& g, const std::string& graph_ref,
                                           int n_tuples, int e, int runs, uint64_t master_seed);

struct TupleFile {
    int node_count = 0;
    int e = 0;
    std::vector<TrainingTuple> tuples;
};

// Binary container: magic "MONT", version, |V|, e, tuple count; per tuple the
// step index, target plus history vectors (newest first) as f64 LE, and the
// graph identifier.
void save_tuples(const std::filesystem::path& path, const TupleFile& file);
TupleFile load_tuples(const std::filesystem::path& path);

}  // namespace monstor
