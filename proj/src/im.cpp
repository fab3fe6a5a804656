#include "monstor/im.hpp"

#include <algorithm>
#include <queue>
#include <stdexcept>

#include "monstor/cascade.hpp"

namespace monstor {

InfluenceFunction InfluenceFunction::monte_carlo(int runs, uint64_t master_seed) {
    return InfluenceFunction("mc", [runs, master_seed](const DirectedGraph& g, const SeedSet& s) {
        return simulate(g, s, runs, master_seed).influence;
    });
}

InfluenceFunction InfluenceFunction::surrogate(const ModelParams& params) {
    return InfluenceFunction("surrogate", [params](const DirectedGraph& g, const SeedSet& s) {
        return stacked_inference(g, s, params).influence;
    });
}

InfluenceFunction InfluenceFunction::exact_oracle() {
    return InfluenceFunction("exact", [](const DirectedGraph& g, const SeedSet& s) {
        return exact_influence(g, s).influence;
    });
}

namespace {

void check_k(const DirectedGraph& g, int k) {
    if (k < 1 || k > g.node_count())
        throw std::invalid_argument("k must be in [1, node_count], got " + std::to_string(k));
}

}  // namespace

SelectionResult greedy_select(const DirectedGraph& g, int k, const InfluenceFunction& f) {
    check_k(g, k);
    f.reset_evaluations();
    SelectionResult result;
    SeedSet current;
    double current_value = 0.0;
    std::vector<bool> taken(g.node_count(), false);

    for (int round = 0; round < k; ++round) {
        int best_node = -1;
        double best_gain = -std::numeric_limits<double>::infinity();
        for (int v = 0; v < g.node_count(); ++v) {
            if (taken[v]) continue;
            double gain = f(g, current.with(v)) - current_value;
            if (gain > best_gain) {  // strict: ties keep the lowest id
                best_gain = gain;
                best_node = v;
            }
        }
        taken[best_node] = true;
        current = current.with(best_node);
        current_value += best_gain;
        result.trace.push_back({best_node, best_gain});
    }
    result.seeds = current;
    result.evaluations = f.evaluations();
    return result;
}

SelectionResult lazy_greedy_select(const DirectedGraph& g, int k, const InfluenceFunction& f) {
    check_k(g, k);
    f.reset_evaluations();
    SelectionResult result;
    SeedSet current;
    double current_value = 0.0;

    struct Entry {
        double gain;
        int node;
        int round;  // round the gain was computed in
    };
    // Max-heap on gain, ties broken toward the lowest node id.
    auto cmp = [](const Entry& a, const Entry& b) {
        if (a.gain != b.gain) return a.gain < b.gain;
        return a.node > b.node;
    };
    std::priority_queue<Entry, std::vector<Entry>, decltype(cmp)> queue(cmp);
    for (int v = 0; v < g.node_count(); ++v)
        queue.push({f(g, current.with(v)), v, 0});

    for (int round = 0; round < k; ++round) {
        for (;;) {
            Entry top = queue.top();
            queue.pop();
            if (top.round == round) {
                current = current.with(top.node);
                current_value += top.gain;
                result.trace.push_back({top.node, top.gain});
                break;
            }
            top.gain = f(g, current.with(top.node)) - current_value;
            top.round = round;
            queue.push(top);
        }
    }
    result.seeds = current;
    result.evaluations = f.evaluations();
    return result;
}

SeedSet maximize_with_surrogate(const DirectedGraph& g, int k, const ModelParams& params) {
    return lazy_greedy_select(g, k, InfluenceFunction::surrogate(params)).seeds;
}

}  // namespace monstor
