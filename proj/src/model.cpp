#include "monstor/model.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <stdexcept>

#include "monstor/binary_io.hpp"
#include "monstor/rng.hpp"

namespace monstor {

Hyperparams Hyperparams::standard(int e, int l, int s, double lambda, int hidden) {
    Hyperparams h;
    h.e = e;
    h.l = l;
    h.s = s;
    h.lambda = lambda;
    h.dims.push_back(e);
    for (int i = 1; i < l; ++i) h.dims.push_back(hidden);
    h.dims.push_back(1);
    return h;
}

void Hyperparams::validate() const {
    if (e < 2) throw std::invalid_argument("hyperparams: e must be >= 2");
    if (l < 1) throw std::invalid_argument("hyperparams: l must be >= 1");
    if (s < 1) throw std::invalid_argument("hyperparams: s must be >= 1");
    if (static_cast<int>(dims.size()) != l + 1)
        throw std::invalid_argument("hyperparams: need l+1 layer widths");
    if (dims.front() != e) throw std::invalid_argument("hyperparams: d_0 must equal e");
    if (dims.back() != 1) throw std::invalid_argument("hyperparams: d_l must equal 1");
    for (int d : dims)
        if (d < 1) throw std::invalid_argument("hyperparams: layer widths must be >= 1");
}

ModelParams init_params(const Hyperparams& hyper, uint64_t seed) {
    hyper.validate();
    ModelParams params;
    params.hyper = hyper;
    for (int i = 0; i < hyper.l; ++i) {
        int din = hyper.dims[i], dout = hyper.dims[i + 1];
        LayerParams layer;
        layer.w1.resize(din, din);
        layer.b1.resize(din);
        layer.w2.resize(2 * din, dout);
        layer.b2.resize(dout);
        double bound1 = std::sqrt(1.0 / din);
        double bound2 = std::sqrt(1.0 / (2 * din));
        std::mt19937_64 gen = make_stream(seed, static_cast<uint64_t>(i));
        for (int r = 0; r < din; ++r)
            for (int c = 0; c < din; ++c) layer.w1(r, c) = (2 * uniform01(gen) - 1) * bound1;
        for (int r = 0; r < din; ++r) layer.b1[r] = (2 * uniform01(gen) - 1) * bound1;
        for (int r = 0; r < 2 * din; ++r)
            for (int c = 0; c < dout; ++c) layer.w2(r, c) = (2 * uniform01(gen) - 1) * bound2;
        // Node activations are strongly correlated across the graph, so a
        // random sign on this bias can gate the ReLU shut for every node at
        // once and freeze training. A small positive start keeps the head
        // alive.
        layer.b2.setConstant(0.01);
        params.layers.push_back(std::move(layer));
    }
    return params;
}

NodeMatrix build_features(const std::vector<Vector>& history) {
    if (history.empty()) throw std::invalid_argument("build_features: empty history");
    const int e = static_cast<int>(history.size());
    const Eigen::Index n = history[0].size();
    for (const Vector& v : history)
        if (v.size() != n) throw std::invalid_argument("build_features: vector length mismatch");

    NodeMatrix f(n, e);
    // Column j < e-1 holds the delta pi_{i-e+1+j} - pi_{i-e+j}; the history
    // list is newest-first so that is history[e-2-j] - history[e-1-j].
    for (int j = 0; j + 1 < e; ++j) {
        Vector delta = history[e - 2 - j] - history[e - 1 - j];
        if (delta.minCoeff() < -1e-9)
            throw std::invalid_argument("build_features: history violates monotonicity");
        f.col(j) = delta.cwiseMax(0.0);
    }
    f.col(e - 1) = history[0];
    return f;
}

Vector upper_bound(const std::vector<Vector>& history, const DirectedGraph& g) {
    if (history.size() < 2) throw std::invalid_argument("upper_bound: need at least 2 vectors");
    if (history[0].size() != g.node_count() || history[1].size() != g.node_count())
        throw std::invalid_argument("upper_bound: vector length does not match node count");
    Vector delta = history[0] - history[1];
    return (history[0] + propagate(delta, g)).cwiseMin(1.0);
}

ForwardTrace forward_traced(const DirectedGraph& g, const NodeMatrix& features,
                            const Vector& prev, const Vector& upper, const ModelParams& params) {
    params.hyper.validate();
    const int n = g.node_count();
    if (features.rows() != n || prev.size() != n || upper.size() != n)
        throw std::invalid_argument("forward: input size does not match node count");
    if (features.cols() != params.hyper.dims[0])
        throw std::invalid_argument("forward: feature width does not match d_0");

    ForwardTrace trace;
    trace.prev = prev;
    trace.upper = upper;
    NodeMatrix h = features;
    for (int i = 0; i < params.hyper.l; ++i) {
        const LayerParams& layer = params.layers[i];
        const int din = params.hyper.dims[i];
        const int dout = params.hyper.dims[i + 1];
        LayerTrace lt;
        lt.input = h;
        NodeMatrix z = h * layer.w1;
        z.rowwise() += layer.b1.transpose();
        lt.z = z;

        NodeMatrix a = NodeMatrix::Zero(n, din);
        lt.argmax.assign(static_cast<size_t>(n) * din, -1);
        for (int v = 0; v < n; ++v) {
            auto srcs = g.in_neighbors(v);
            auto probs = g.in_probs(v);
            if (srcs.empty()) continue;
            double* arow = a.data() + static_cast<size_t>(v) * din;
            int* am = lt.argmax.data() + static_cast<size_t>(v) * din;
            for (size_t j = 0; j < srcs.size(); ++j) {
                const double p = probs[j];
                const double* zrow = z.data() + static_cast<size_t>(srcs[j]) * din;
                if (j == 0) {
                    for (int c = 0; c < din; ++c) {
                        arow[c] = p * zrow[c];
                        am[c] = 0;
                    }
                } else {
                    // strict > keeps the lowest in-neighbor id on ties
                    for (int c = 0; c < din; ++c) {
                        double val = p * zrow[c];
                        if (val > arow[c]) {
                            arow[c] = val;
                            am[c] = static_cast<int>(j);
                        }
                    }
                }
            }
        }
        lt.a = a;

        NodeMatrix concat(n, 2 * din);
        concat.leftCols(din) = h;
        concat.rightCols(din) = a;
        NodeMatrix preact = concat * layer.w2;
        preact.rowwise() += layer.b2.transpose();
        lt.preact = preact;
        lt.output = preact.cwiseMax(0.0);
        if (!lt.output.allFinite())
            throw std::runtime_error("forward: non-finite activation at layer " +
                                     std::to_string(i + 1));
        h = lt.output;
        (void)dout;
        trace.layers.push_back(std::move(lt));
    }
    trace.h_last = h.col(0);
    trace.output = (prev + trace.h_last).cwiseMin(upper);
    return trace;
}

Vector forward_step(const DirectedGraph& g, const std::vector<Vector>& history,
                    const ModelParams& params, const Vector& upper) {
    if (static_cast<int>(history.size()) != params.hyper.e)
        throw std::invalid_argument("forward_step: history length must equal e");
    NodeMatrix features = build_features(history);
    return forward_traced(g, features, history[0], upper, params).output;
}

Vector forward_step(const DirectedGraph& g, const std::vector<Vector>& history,
                    const ModelParams& params) {
    return forward_step(g, history, params, upper_bound(history, g));
}

double loss(const Vector& predicted, const Vector& target, double lambda) {
    if (predicted.size() != target.size())
        throw std::invalid_argument("loss: vector length mismatch");
    double target_sum = target.sum();
    if (!(target_sum > 0.0)) throw std::invalid_argument("loss: target sum must be positive");
    double l1 = (predicted - target).cwiseAbs().sum() / static_cast<double>(predicted.size());
    double influence_err = std::abs(predicted.sum() - target_sum) / target_sum;
    return l1 + lambda * influence_err;
}

Gradients Gradients::zeros_like(const ModelParams& params) {
    Gradients g;
    for (const LayerParams& layer : params.layers) {
        LayerParams zero;
        zero.w1 = Matrix::Zero(layer.w1.rows(), layer.w1.cols());
        zero.b1 = Vector::Zero(layer.b1.size());
        zero.w2 = Matrix::Zero(layer.w2.rows(), layer.w2.cols());
        zero.b2 = Vector::Zero(layer.b2.size());
        g.layers.push_back(std::move(zero));
    }
    return g;
}

void Gradients::add(const Gradients& other) {
    for (size_t i = 0; i < layers.size(); ++i) {
        layers[i].w1 += other.layers[i].w1;
        layers[i].b1 += other.layers[i].b1;
        layers[i].w2 += other.layers[i].w2;
        layers[i].b2 += other.layers[i].b2;
    }
}

void Gradients::scale(double factor) {
    for (LayerParams& layer : layers) {
        layer.w1 *= factor;
        layer.b1 *= factor;
        layer.w2 *= factor;
        layer.b2 *= factor;
    }
}

namespace {

inline double sign_of(double x) { return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0); }

// Backward pass through the traced forward; accumulates parameter gradients
// and returns the loss value.
double backward_into(const DirectedGraph& g, const ForwardTrace& trace, const Vector& target,
                     const ModelParams& params, Gradients& grads) {
    const int n = g.node_count();
    const double lambda = params.hyper.lambda;
    const Vector& out = trace.output;
    const double target_sum = target.sum();
    if (!(target_sum > 0.0)) throw std::invalid_argument("loss: target sum must be positive");

    const double l1 = (out - target).cwiseAbs().sum() / n;
    const double sum_diff = out.sum() - target_sum;
    const double loss_value = l1 + lambda * std::abs(sum_diff) / target_sum;

    // d loss / d out, then through the clamp: gradient flows only where the
    // model branch of min(prev + h, upper) is strictly active.
    const double influence_grad = lambda * sign_of(sum_diff) / target_sum;
    Vector g_h(n);
    for (int v = 0; v < n; ++v) {
        double go = sign_of(out[v] - target[v]) / n + influence_grad;
        bool model_branch = trace.prev[v] + trace.h_last[v] < trace.upper[v];
        g_h[v] = model_branch ? go : 0.0;
    }

    NodeMatrix grad_out = g_h;  // n x 1, gradient w.r.t. H^l
    for (int i = params.hyper.l - 1; i >= 0; --i) {
        const LayerTrace& lt = trace.layers[i];
        const LayerParams& layer = params.layers[i];
        const int din = params.hyper.dims[i];

        NodeMatrix d_preact =
            (lt.preact.array() > 0.0).select(grad_out, NodeMatrix::Zero(n, grad_out.cols()));

        NodeMatrix concat(n, 2 * din);
        concat.leftCols(din) = lt.input;
        concat.rightCols(din) = lt.a;
        grads.layers[i].w2 += concat.transpose() * d_preact;
        grads.layers[i].b2 += d_preact.colwise().sum().transpose();

        NodeMatrix d_concat = d_preact * layer.w2.transpose();
        NodeMatrix d_input = d_concat.leftCols(din);
        NodeMatrix d_a = d_concat.rightCols(din);

        NodeMatrix d_z = NodeMatrix::Zero(n, din);
        for (int v = 0; v < n; ++v) {
            const int* am = lt.argmax.data() + static_cast<size_t>(v) * din;
            const double* darow = d_a.data() + static_cast<size_t>(v) * din;
            auto srcs = g.in_neighbors(v);
            auto probs = g.in_probs(v);
            for (int c = 0; c < din; ++c) {
                int j = am[c];
                if (j < 0) continue;
                d_z.data()[static_cast<size_t>(srcs[j]) * din + c] += probs[j] * darow[c];
            }
        }
        grads.layers[i].w1 += lt.input.transpose() * d_z;
        grads.layers[i].b1 += d_z.colwise().sum().transpose();

        grad_out = d_input + d_z * layer.w1.transpose();
    }
    return loss_value;
}

struct PreparedTuple {
    const DirectedGraph* graph = nullptr;
    NodeMatrix features;
    Vector prev;
    Vector upper;
    Vector target;
};

PreparedTuple prepare(const DirectedGraph& g, const TrainingTuple& tuple, int e) {
    if (static_cast<int>(tuple.history.size()) != e)
        throw std::invalid_argument("tuple history length does not match e");
    PreparedTuple p;
    p.graph = &g;
    p.features = build_features(tuple.history);
    p.prev = tuple.history[0];
    p.upper = upper_bound(tuple.history, g);
    p.target = tuple.target;
    return p;
}

double tuple_loss(const PreparedTuple& p, const ModelParams& params) {
    ForwardTrace trace = forward_traced(*p.graph, p.features, p.prev, p.upper, params);
    return loss(trace.output, p.target, params.hyper.lambda);
}

double tuple_backward(const PreparedTuple& p, const ModelParams& params, Gradients& grads) {
    ForwardTrace trace = forward_traced(*p.graph, p.features, p.prev, p.upper, params);
    return backward_into(*p.graph, trace, p.target, params, grads);
}

double pearson_or_nan(const std::vector<double>& x, const std::vector<double>& y) {
    const size_t n = x.size();
    double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
    double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
    double sxy = 0, sxx = 0, syy = 0;
    for (size_t i = 0; i < n; ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
        syy += (y[i] - my) * (y[i] - my);
    }
    if (sxx <= 0 || syy <= 0) return std::numeric_limits<double>::quiet_NaN();
    return sxy / std::sqrt(sxx * syy);
}

StackedResult stacked_with_s(const DirectedGraph& g, const SeedSet& seeds,
                             const ModelParams& params, int s) {
    seeds.validate(g);
    const int e = params.hyper.e;
    Vector pi0 = seeds.indicator(g.node_count());
    std::vector<Vector> history(e, pi0);  // newest first, padded with pi_0
    StackedResult result;
    result.vectors.push_back(pi0);
    for (int t = 1; t <= s; ++t) {
        Vector upper = t == 1 ? Vector((pi0 + propagate(pi0, g)).cwiseMin(1.0))
                              : upper_bound(history, g);
        Vector out = forward_step(g, history, params, upper);
        history.insert(history.begin(), out);
        history.pop_back();
        result.vectors.push_back(std::move(out));
    }
    result.influence = result.vectors.back().sum();
    return result;
}

}  // namespace

std::pair<double, Gradients> loss_gradients(const DirectedGraph& g, const TrainingTuple& tuple,
                                            const ModelParams& params) {
    PreparedTuple p = prepare(g, tuple, params.hyper.e);
    Gradients grads = Gradients::zeros_like(params);
    double value = tuple_backward(p, params, grads);
    return {value, std::move(grads)};
}

StackedResult stacked_inference(const DirectedGraph& g, const SeedSet& seeds,
                                const ModelParams& params) {
    return stacked_with_s(g, seeds, params, params.hyper.s);
}

ModelParams train(const std::vector<TrainingTuple>& tuples,
                  const std::map<std::string, DirectedGraph>& graphs,
                  const Hyperparams& hyper, const TrainConfig& config) {
    hyper.validate();
    if (tuples.empty()) throw std::invalid_argument("train: no tuples");

    std::vector<PreparedTuple> prepared;
    prepared.reserve(tuples.size());
    for (const TrainingTuple& t : tuples) {
        auto it = graphs.find(t.graph_ref);
        if (it == graphs.end())
            throw std::invalid_argument("train: unresolved graph reference '" + t.graph_ref + "'");
        prepared.push_back(prepare(it->second, t, hyper.e));
    }

    // Seeded shuffle, then split off the validation tail.
    std::vector<int> order(prepared.size());
    std::iota(order.begin(), order.end(), 0);
    std::mt19937_64 shuffler = make_stream(config.seed, 0x517);
    for (size_t i = order.size(); i > 1; --i)
        std::swap(order[i - 1], order[uniform_int(shuffler, 0, static_cast<int64_t>(i) - 1)]);
    size_t val_count = static_cast<size_t>(std::llround(config.val_fraction * prepared.size()));
    val_count = std::min(val_count, prepared.size() - 1);
    std::vector<int> train_idx(order.begin(), order.end() - val_count);
    std::vector<int> val_idx(order.end() - val_count, order.end());

    ModelParams params = init_params(hyper, config.seed);
    ModelParams best = params;
    double best_val = std::numeric_limits<double>::infinity();

    auto mean_loss = [&](const std::vector<int>& idx) {
        if (idx.empty()) return 0.0;
        std::vector<double> losses(idx.size());
#pragma omp parallel for schedule(static)
        for (size_t k = 0; k < idx.size(); ++k)
            losses[k] = tuple_loss(prepared[idx[k]], params);
        double total = std::accumulate(losses.begin(), losses.end(), 0.0);
        return total / static_cast<double>(idx.size());
    };

    for (int epoch = 1; epoch <= config.epochs; ++epoch) {
        double lr = epoch <= 10 ? 1e-4 * epoch : 1e-2 / epoch;
        std::mt19937_64 epoch_gen = make_stream(config.seed, 0x1000 + epoch);
        for (size_t i = train_idx.size(); i > 1; --i)
            std::swap(train_idx[i - 1], train_idx[uniform_int(epoch_gen, 0, static_cast<int64_t>(i) - 1)]);

        double epoch_loss = 0.0;
        size_t batches = 0;
        for (size_t start = 0; start < train_idx.size(); start += config.batch_size) {
            size_t end = std::min(start + config.batch_size, train_idx.size());
            size_t count = end - start;
            std::vector<Gradients> slots(count);
            std::vector<double> losses(count);
#pragma omp parallel for schedule(static)
            for (size_t k = 0; k < count; ++k) {
                slots[k] = Gradients::zeros_like(params);
                losses[k] = tuple_backward(prepared[train_idx[start + k]], params, slots[k]);
            }
            Gradients batch_grads = Gradients::zeros_like(params);
            double batch_loss = 0.0;
            for (size_t k = 0; k < count; ++k) {  // fixed reduction order
                batch_grads.add(slots[k]);
                batch_loss += losses[k];
            }
            batch_grads.scale(1.0 / static_cast<double>(count));
            batch_loss /= static_cast<double>(count);
            if (!std::isfinite(batch_loss))
                throw std::runtime_error("train: non-finite loss at epoch " +
                                         std::to_string(epoch) + ", batch " +
                                         std::to_string(batches + 1));
            for (int i = 0; i < hyper.l; ++i) {
                params.layers[i].w1 -= lr * batch_grads.layers[i].w1;
                params.layers[i].b1 -= lr * batch_grads.layers[i].b1;
                params.layers[i].w2 -= lr * batch_grads.layers[i].w2;
                params.layers[i].b2 -= lr * batch_grads.layers[i].b2;
            }
            epoch_loss += batch_loss;
            ++batches;
        }
        epoch_loss /= static_cast<double>(std::max<size_t>(1, batches));

        double val_loss = val_idx.empty() ? epoch_loss : mean_loss(val_idx);
        if (val_loss < best_val) {
            best_val = val_loss;
            best = params;
        }
        if (config.verbose)
            std::fprintf(stderr, "epoch %3d  lr %.6f  train %.8f  val %.8f\n", epoch, lr,
                         epoch_loss, val_loss);
    }

    // Best s by Pearson correlation against MC influence on fresh seed sets
    // drawn from the training graphs.
    if (config.s_search_max >= 1 && config.val_ie_sets > 0 && !graphs.empty()) {
        struct Case {
            const DirectedGraph* g;
            SeedSet seeds;
            double truth;
        };
        std::vector<Case> cases;
        uint64_t graph_index = 0;
        for (const auto& [name, g] : graphs) {
            std::mt19937_64 gen = make_stream(config.seed, 0x2000 + graph_index);
            int max_size = std::max(1, g.node_count() / 50);
            for (int k = 0; k < config.val_ie_sets; ++k) {
                int size = static_cast<int>(uniform_int(gen, 1, max_size));
                std::vector<int> chosen;
                while (static_cast<int>(chosen.size()) < size) {
                    int v = static_cast<int>(uniform_int(gen, 0, g.node_count() - 1));
                    if (std::find(chosen.begin(), chosen.end(), v) == chosen.end())
                        chosen.push_back(v);
                }
                SeedSet seeds(chosen);
                double truth =
                    simulate(g, seeds, config.val_ie_runs, splitmix64(config.seed ^ (graph_index << 20) ^ k))
                        .influence;
                cases.push_back({&g, std::move(seeds), truth});
            }
            ++graph_index;
        }
        std::vector<double> truths;
        for (const Case& c : cases) truths.push_back(c.truth);

        int best_s = best.hyper.s;
        double best_score = -std::numeric_limits<double>::infinity();
        for (int s = 1; s <= config.s_search_max; ++s) {
            std::vector<double> est(cases.size());
#pragma omp parallel for schedule(static)
            for (size_t k = 0; k < cases.size(); ++k)
                est[k] = stacked_with_s(*cases[k].g, cases[k].seeds, best, s).influence;
            double score = pearson_or_nan(truths, est);
            if (config.verbose)
                std::fprintf(stderr, "s=%d  validation pearson %.6f\n", s,
                             std::isnan(score) ? -1.0 : score);
            if (std::isfinite(score) && score > best_score) {
                best_score = score;
                best_s = s;
            }
        }
        best.hyper.s = best_s;
    }
    return best;
}

namespace {
constexpr char kCheckpointMagic[4] = {'M', 'N', 'S', 'T'};
constexpr uint32_t kCheckpointVersion = 1;
}  // namespace

void save_checkpoint(const std::filesystem::path& path, const ModelParams& params) {
    params.hyper.validate();
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write checkpoint: " + path.string());
    out.write(kCheckpointMagic, 4);
    io::put_u32(out, kCheckpointVersion);
    io::put_u32(out, static_cast<uint32_t>(params.hyper.e));
    io::put_u32(out, static_cast<uint32_t>(params.hyper.l));
    io::put_u32(out, static_cast<uint32_t>(params.hyper.s));
    io::put_f64(out, params.hyper.lambda);
    io::put_u32(out, static_cast<uint32_t>(params.hyper.dims.size()));
    for (int d : params.hyper.dims) io::put_u32(out, static_cast<uint32_t>(d));
    for (const LayerParams& layer : params.layers) {
        for (Eigen::Index r = 0; r < layer.w1.rows(); ++r)
            for (Eigen::Index c = 0; c < layer.w1.cols(); ++c) io::put_f64(out, layer.w1(r, c));
        for (Eigen::Index r = 0; r < layer.b1.size(); ++r) io::put_f64(out, layer.b1[r]);
        for (Eigen::Index r = 0; r < layer.w2.rows(); ++r)
            for (Eigen::Index c = 0; c < layer.w2.cols(); ++c) io::put_f64(out, layer.w2(r, c));
        for (Eigen::Index r = 0; r < layer.b2.size(); ++r) io::put_f64(out, layer.b2[r]);
    }
}

ModelParams load_checkpoint(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open checkpoint: " + path.string());
    io::expect_magic(in, kCheckpointMagic, "checkpoint");
    uint32_t version = io::get_u32(in);
    if (version != kCheckpointVersion)
        throw std::runtime_error("unsupported checkpoint version " + std::to_string(version));
    ModelParams params;
    params.hyper.e = static_cast<int>(io::get_u32(in));
    params.hyper.l = static_cast<int>(io::get_u32(in));
    params.hyper.s = static_cast<int>(io::get_u32(in));
    params.hyper.lambda = io::get_f64(in);
    uint32_t dim_count = io::get_u32(in);
    if (dim_count != static_cast<uint32_t>(params.hyper.l) + 1)
        throw std::runtime_error("checkpoint: layer width count does not match l");
    for (uint32_t i = 0; i < dim_count; ++i)
        params.hyper.dims.push_back(static_cast<int>(io::get_u32(in)));
    params.hyper.validate();  // rejects mismatched (e, l, dims)
    for (int i = 0; i < params.hyper.l; ++i) {
        int din = params.hyper.dims[i], dout = params.hyper.dims[i + 1];
        LayerParams layer;
        layer.w1.resize(din, din);
        layer.b1.resize(din);
        layer.w2.resize(2 * din, dout);
        layer.b2.resize(dout);
        for (int r = 0; r < din; ++r)
            for (int c = 0; c < din; ++c) layer.w1(r, c) = io::get_f64(in);
        for (int r = 0; r < din; ++r) layer.b1[r] = io::get_f64(in);
        for (int r = 0; r < 2 * din; ++r)
            for (int c = 0; c < dout; ++c) layer.w2(r, c) = io::get_f64(in);
        for (int r = 0; r < dout; ++r) layer.b2[r] = io::get_f64(in);
        params.layers.push_back(std::move(layer));
    }
    return params;
}

}  // namespace monstor
