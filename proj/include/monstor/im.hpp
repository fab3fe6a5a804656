#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "monstor/graph.hpp"
#include "monstor/model.hpp"

namespace monstor {

/// Pluggable influence estimator for seed selection. Deterministic for a
/// fixed configuration; the empty set evaluates to 0. Tracks how many times
/// it was called (CELF's whole point is calling it less).
class InfluenceFunction {
public:
    InfluenceFunction(std::string backend,
                      std::function<double(const DirectedGraph&, const SeedSet&)> fn)
        : backend_(std::move(backend)), fn_(std::move(fn)),
          evaluations_(std::make_shared<int64_t>(0)) {}

    double operator()(const DirectedGraph& g, const SeedSet& seeds) const {
        if (seeds.empty()) return 0.0;
        ++*evaluations_;
        return fn_(g, seeds);
    }

    const std::string& backend() const { return backend_; }
    int64_t evaluations() const { return *evaluations_; }
    void reset_evaluations() const { *evaluations_ = 0; }

    static InfluenceFunction monte_carlo(int runs, uint64_t master_seed);
    static InfluenceFunction surrogate(const ModelParams& params);
    static InfluenceFunction exact_oracle();

private:
    std::string backend_;
    std::function<double(const DirectedGraph&, const SeedSet&)> fn_;
    std::shared_ptr<int64_t> evaluations_;
};

struct SelectionResult {
    SeedSet seeds;
    std::vector<std::pair<int, double>> trace;  // (node, marginal gain) per pick
    int64_t evaluations = 0;
};

/// Plain greedy: each round adds argmax_v f(S + v) - f(S), ties to the
/// lowest node id.
SelectionResult greedy_select(const DirectedGraph& g, int k, const InfluenceFunction& f);

/// CELF-style lazy greedy: cached marginal gains are upper bounds under
/// submodularity, so only the queue top needs re-evaluation. Same output as
/// greedy_select for deterministic submodular f (same tie-break).
SelectionResult lazy_greedy_select(const DirectedGraph& g, int k, const InfluenceFunction& f);

/// Lazy greedy with the stacked-estimator influence.
SeedSet maximize_with_surrogate(const DirectedGraph& g, int k, const ModelParams& params);

}  // namespace monstor
