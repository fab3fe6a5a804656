#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "monstor/graph.hpp"
#include "monstor/im.hpp"
#include "monstor/model.hpp"

namespace monstor {

struct CorrelationReport {
    double pearson = 0.0;
    double spearman = 0.0;
    int n = 0;
    std::string scatter_path;  // empty unless a scatter dump was written
};

/// Product-moment Pearson plus Spearman (Pearson on average ranks, ties get
/// the mean rank). Throws on fewer than 2 samples or zero variance.
CorrelationReport correlation(std::span<const double> true_vals, std::span<const double> est_vals);

struct SubmodularityReport {
    int64_t pairs_tested = 0;
    int64_t violations = 0;
    double holds_ratio = 0.0;
    double violation_mape = 0.0;  // mean over violating pairs; 0 when none
};

/// Draws a pool of random seed sets (sizes in [max(1, lo_frac |V|),
/// max(1, hi_frac |V|)]) and checks f(S) + f(T) >= f(S u T) + f(S n T) over
/// n_pairs distinct pairs. The violation MAPE is
/// (f(SuT) + f(SnT) - f(S) - f(T)) / (f(SuT) + f(SnT)).
SubmodularityReport submodularity_probe(const DirectedGraph& g, const InfluenceFunction& f,
                                        int n_pairs, double lo_frac, double hi_frac,
                                        uint64_t seed);

/// Influence-estimation protocol: n_sets random seed sets (size uniform in
/// [1, max(1, |V|/50)]), estimator vs the mean of `runs` MC simulations.
/// Writes a TSV scatter dump when scatter_path is nonempty.
CorrelationReport run_ie_eval(const DirectedGraph& g, const InfluenceFunction& estimator,
                              int n_sets, int runs, uint64_t seed,
                              const std::string& scatter_path = "");
CorrelationReport run_ie_eval(const DirectedGraph& g, const ModelParams& params, int n_sets,
                              int runs, uint64_t seed, const std::string& scatter_path = "");

struct ScalePoint {
    int log2_edges = 0;
    int64_t edges = 0;
    int node_count = 0;
    double seconds_per_stack = 0.0;  // wall time of all estimations / s
};

/// For each size: R-MAT graph + weighted cascade, then `estimations` stacked
/// inferences with random seed sets (sizes 1..10% of |V|). Timing covers
/// inference only.
std::vector<ScalePoint> run_scalability(std::span<const int> log2_edges, int estimations,
                                        const ModelParams& params, uint64_t seed);

}  // namespace monstor
