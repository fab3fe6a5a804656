#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "monstor/cascade.hpp"
#include "monstor/graph.hpp"

namespace monstor {

/// One graph-convolution layer. w1/b1 transform the in-neighbor messages
/// (d_{i-1} -> d_{i-1}), w2/b2 mix the node state with the aggregated
/// message (2 d_{i-1} -> d_i).
struct LayerParams {
    Matrix w1;
    Vector b1;
    Matrix w2;
    Vector b2;
};

struct Hyperparams {
    int e = 4;           // history length (also the input feature width d_0)
    int l = 3;           // convolution layers
    int s = 3;           // inference stack count
    double lambda = 0.3; // weight of the influence term in the loss
    std::vector<int> dims;  // d_0..d_l; d_0 = e, d_l = 1

    static Hyperparams standard(int e = 4, int l = 3, int s = 3, double lambda = 0.3,
                                int hidden = 16);
    void validate() const;
};

struct ModelParams {
    Hyperparams hyper;
    std::vector<LayerParams> layers;
};

/// Uniform init in [-sqrt(1/fan_in), +sqrt(1/fan_in)], seeded.
ModelParams init_params(const Hyperparams& hyper, uint64_t seed);

/// Node features from the last e vectors (newest first): e-1 infection
/// deltas, oldest first, then the newest probability. Width e.
/// Throws if any delta is below -1e-9.
NodeMatrix build_features(const std::vector<Vector>& history);

/// Theorem-style union bound: min(pi_{i-1} + (pi_{i-1} - pi_{i-2}) P, 1),
/// taking the two newest vectors of `history`.
Vector upper_bound(const std::vector<Vector>& history, const DirectedGraph& g);

/// One estimated cascade step, clamped into [pi_{i-1}, upper]. The default
/// overload derives the bound from the history itself.
Vector forward_step(const DirectedGraph& g, const std::vector<Vector>& history,
                    const ModelParams& params);
Vector forward_step(const DirectedGraph& g, const std::vector<Vector>& history,
                    const ModelParams& params, const Vector& upper);

/// Per-sample loss: ||pred - target||_1 / |V| + lambda |sum(pred) - sum(target)| / sum(target).
double loss(const Vector& predicted, const Vector& target, double lambda);

// -- internals shared by training and the gradient tests ---------------------

struct LayerTrace {
    NodeMatrix input;         // H^{i-1}
    NodeMatrix z;             // input w1 + b1
    NodeMatrix a;             // max-aggregated message
    std::vector<int> argmax;  // winning in-edge position per (node, channel), -1 if none
    NodeMatrix preact;        // concat(input, a) w2 + b2
    NodeMatrix output;        // relu(preact)
};

struct ForwardTrace {
    std::vector<LayerTrace> layers;
    Vector prev;    // pi_{i-1}
    Vector upper;   // u_i
    Vector h_last;  // scalar head per node
    Vector output;  // min(prev + h_last, upper)
};

ForwardTrace forward_traced(const DirectedGraph& g, const NodeMatrix& features,
                            const Vector& prev, const Vector& upper, const ModelParams& params);

struct Gradients {
    std::vector<LayerParams> layers;  // same shapes as the parameters
    static Gradients zeros_like(const ModelParams& params);
    void add(const Gradients& other);
    void scale(double factor);
};

/// Loss and its analytic gradient for one tuple (forward + full backward).
std::pair<double, Gradients> loss_gradients(const DirectedGraph& g, const TrainingTuple& tuple,
                                            const ModelParams& params);

// -- stacked inference --------------------------------------------------------

struct StackedResult {
    std::vector<Vector> vectors;  // pi_0 and the s stacked estimates
    double influence = 0.0;
};

/// Applies the step estimator s times starting from the seed indicator.
/// History is backfilled with pi_0; the first step uses the
/// pi_{-1} := 0 bound (pi_0 + pi_0 P).
StackedResult stacked_inference(const DirectedGraph& g, const SeedSet& seeds,
                                const ModelParams& params);

// -- training ------------------------------------------------------------------

struct TrainConfig {
    int epochs = 100;
    int batch_size = 16;
    double val_fraction = 0.2;
    uint64_t seed = 7;
    int s_search_max = 8;   // best s picked in {1..s_search_max} on validation data
    int val_ie_sets = 40;   // seed sets per graph for the s search
    int val_ie_runs = 2000; // MC runs backing the s-search ground truth
    bool verbose = false;
};

/// Mini-batch gradient descent with the epoch schedule
/// lr(t) = 1e-4 t for t <= 10, else 1e-2 / t. A held-out validation split
/// selects the best checkpoint; the stack count s is then chosen by Pearson
/// correlation on fresh MC-simulated seed sets from the training graphs.
ModelParams train(const std::vector<TrainingTuple>& tuples,
                  const std::map<std::string, DirectedGraph>& graphs,
                  const Hyperparams& hyper, const TrainConfig& config);

// Checkpoint container: magic "MNST", version, hyperparameters, then layer
// matrices row-major f64 LE. Round-trips bit-exactly.
void save_checkpoint(const std::filesystem::path& path, const ModelParams& params);
ModelParams load_checkpoint(const std::filesystem::path& path);

}  // namespace monstor
