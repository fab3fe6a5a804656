// Command-line front end: probability building, simulation, tuple
// generation, training, estimation, seed selection, and the evaluation
// drivers. Machine-readable outputs carry a header comment with the git
// revision, master seed, and configuration.

#include <CLI11.hpp>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "monstor/action_log.hpp"
#include "monstor/cascade.hpp"
#include "monstor/graph.hpp"
#include "monstor/im.hpp"
#include "monstor/metrics.hpp"
#include "monstor/model.hpp"
#include "monstor/rng.hpp"

namespace {

using namespace monstor;

std::string git_revision() {
    FILE* pipe = popen("git rev-parse --short HEAD 2>/dev/null", "r");
    if (!pipe) return "unknown";
    char buf[64] = {0};
    std::string rev;
    if (fgets(buf, sizeof(buf), pipe)) rev = buf;
    pclose(pipe);
    while (!rev.empty() && (rev.back() == '\n' || rev.back() == '\r')) rev.pop_back();
    return rev.empty() ? "unknown" : rev;
}

std::string report_header(uint64_t seed, const std::string& config) {
    return "# rev " + git_revision() + " seed " + std::to_string(seed) + " config " + config +
           "\n";
}

SeedSet parse_seed_labels(const DirectedGraph& g, const std::string& csv) {
    std::vector<int> ids;
    std::stringstream ss(csv);
    std::string label;
    while (std::getline(ss, label, ',')) {
        size_t a = label.find_first_not_of(" \t");
        size_t b = label.find_last_not_of(" \t");
        if (a == std::string::npos) continue;
        label = label.substr(a, b - a + 1);
        int id = g.id_of(label);
        if (id < 0) throw std::runtime_error("unknown node label '" + label + "'");
        ids.push_back(id);
    }
    if (ids.empty()) throw std::runtime_error("no seed nodes given");
    return SeedSet(ids);
}

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6f", v);
    return buf;
}

int run(int argc, char** argv) {
    CLI::App app{"Influence estimation and maximization under the independent cascade model"};
    app.require_subcommand(1);
    int threads = 0;
    app.add_option("--threads", threads, "worker threads (0 = library default)");

    // ---- gen-rmat ----
    auto* rmat = app.add_subcommand("gen-rmat", "generate a recursive-matrix random graph");
    int rmat_log2 = 16;
    double qa = 0.7, qb = 0.1, qc = 0.1, qd = 0.1;
    uint64_t rmat_seed = 1;
    bool rmat_wc = false;
    std::string rmat_out;
    rmat->add_option("--log2-edges", rmat_log2, "draw 2^k edges")->required();
    rmat->add_option("--a", qa, "top-left quadrant probability");
    rmat->add_option("--b", qb, "top-right quadrant probability");
    rmat->add_option("--c", qc, "bottom-left quadrant probability");
    rmat->add_option("--d", qd, "bottom-right quadrant probability");
    rmat->add_option("--seed", rmat_seed, "generator seed");
    rmat->add_flag("--weighted-cascade", rmat_wc, "set p(u,v) = 1/in-degree(v)");
    rmat->add_option("--out", rmat_out, "output edge list")->required();

    // ---- build-probs ----
    auto* probs = app.add_subcommand("build-probs",
                                     "activation probabilities from an action log");
    std::string probs_log, probs_measure, probs_out;
    double split_at = 0.5;
    probs->add_option("--log", probs_log, "action log TSV")->required();
    probs->add_option("--measure", probs_measure, "bt | ji | lp")->required();
    probs->add_option("--split-at", split_at, "train/test split fraction");
    probs->add_option("--out", probs_out, "output prefix")->required();

    // ---- simulate ----
    auto* sim = app.add_subcommand("simulate", "Monte Carlo cascade simulation");
    std::string sim_graph, sim_seeds, sim_out;
    int sim_runs = 10000;
    uint64_t sim_seed = 42;
    sim->add_option("--graph", sim_graph, "edge list")->required();
    sim->add_option("--seeds", sim_seeds, "comma-separated node labels")->required();
    sim->add_option("--runs", sim_runs, "number of simulations");
    sim->add_option("--seed", sim_seed, "master seed");
    sim->add_option("--out", sim_out, "per-node per-step TSV dump");

    // ---- gen-tuples ----
    auto* tup = app.add_subcommand("gen-tuples", "training tuples from random seed sets");
    std::string tup_graph, tup_out, tup_graph_id;
    int tup_count = 1600, tup_e = 4, tup_runs = 10000;
    uint64_t tup_seed = 42;
    tup->add_option("--graph", tup_graph, "edge list")->required();
    tup->add_option("--count", tup_count, "tuples to collect");
    tup->add_option("--e", tup_e, "history length");
    tup->add_option("--runs", tup_runs, "MC runs per seed set");
    tup->add_option("--seed", tup_seed, "master seed");
    tup->add_option("--graph-id", tup_graph_id, "identifier stored per tuple (default: file name)");
    tup->add_option("--out", tup_out, "output tuple container")->required();

    // ---- train ----
    auto* tr = app.add_subcommand("train", "fit the step estimator");
    std::string tr_tuples, tr_graphs, tr_out;
    int tr_epochs = 100, tr_batch = 16, tr_layers = 3, tr_hidden = 16, tr_smax = 8;
    int tr_val_sets = 40, tr_val_runs = 2000;
    double tr_val_frac = 0.2, tr_lambda = 0.3;
    uint64_t tr_seed = 7;
    bool tr_quiet = false;
    tr->add_option("--tuples", tr_tuples, "tuple container(s), comma-separated")->required();
    tr->add_option("--graphs", tr_graphs, "directory with the referenced edge lists")->required();
    tr->add_option("--epochs", tr_epochs, "training epochs");
    tr->add_option("--batch", tr_batch, "batch size");
    tr->add_option("--val-frac", tr_val_frac, "validation fraction");
    tr->add_option("--seed", tr_seed, "training seed");
    tr->add_option("--layers", tr_layers, "graph-convolution layers");
    tr->add_option("--hidden", tr_hidden, "hidden width");
    tr->add_option("--lambda", tr_lambda, "influence-term weight");
    tr->add_option("--s-max", tr_smax, "largest stack count tried on validation data");
    tr->add_option("--val-ie-sets", tr_val_sets, "seed sets per graph for the s search");
    tr->add_option("--val-ie-runs", tr_val_runs, "MC runs for the s search");
    tr->add_flag("--quiet", tr_quiet, "suppress per-epoch logging");
    tr->add_option("--out", tr_out, "checkpoint path")->required();

    // ---- estimate ----
    auto* est = app.add_subcommand("estimate", "stacked-estimator influence of a seed set");
    std::string est_graph, est_model, est_seeds, est_out;
    bool est_verbose = false;
    est->add_option("--graph", est_graph, "edge list")->required();
    est->add_option("--model", est_model, "checkpoint")->required();
    est->add_option("--seeds", est_seeds, "comma-separated node labels")->required();
    est->add_option("--out", est_out, "per-node vector TSV");
    est->add_flag("--verbose", est_verbose, "print per-stack influence");

    // ---- maximize ----
    auto* mx = app.add_subcommand("maximize", "seed selection by lazy greedy");
    std::string mx_graph, mx_backend = "mc", mx_model, mx_out;
    int mx_k = 10, mx_runs = 10000;
    uint64_t mx_seed = 42;
    mx->add_option("--graph", mx_graph, "edge list")->required();
    mx->add_option("--k", mx_k, "number of seeds")->required();
    mx->add_option("--backend", mx_backend, "mc | surrogate | exact");
    mx->add_option("--model", mx_model, "checkpoint (surrogate backend)");
    mx->add_option("--runs", mx_runs, "MC runs per evaluation (mc backend)");
    mx->add_option("--seed", mx_seed, "MC master seed");
    mx->add_option("--out", mx_out, "seed list output")->required();

    // ---- eval ----
    auto* ev = app.add_subcommand("eval", "evaluation drivers");
    ev->require_subcommand(1);

    auto* ie = ev->add_subcommand("ie", "estimator vs MC influence correlation");
    std::string ie_graph, ie_model, ie_out, ie_scatter;
    int ie_sets = 200, ie_runs = 10000;
    uint64_t ie_seed = 42;
    ie->add_option("--graph", ie_graph, "edge list")->required();
    ie->add_option("--model", ie_model, "checkpoint")->required();
    ie->add_option("--sets", ie_sets, "seed sets");
    ie->add_option("--runs", ie_runs, "MC runs per set");
    ie->add_option("--seed", ie_seed, "master seed");
    ie->add_option("--out", ie_out, "report TSV")->required();
    ie->add_option("--scatter", ie_scatter, "scatter dump TSV");

    auto* sub = ev->add_subcommand("submod", "empirical submodularity probe");
    std::string sub_graph, sub_backend = "surrogate", sub_model, sub_out;
    int sub_pairs = 200, sub_runs = 10000;
    double sub_lo = 0.0, sub_hi = 0.1;
    uint64_t sub_seed = 42;
    sub->add_option("--graph", sub_graph, "edge list")->required();
    sub->add_option("--backend", sub_backend, "mc | surrogate | exact");
    sub->add_option("--model", sub_model, "checkpoint (surrogate backend)");
    sub->add_option("--runs", sub_runs, "MC runs per evaluation (mc backend)");
    sub->add_option("--pairs", sub_pairs, "seed-set pairs tested");
    sub->add_option("--size-lo", sub_lo, "seed size lower bound, fraction of |V|");
    sub->add_option("--size-hi", sub_hi, "seed size upper bound, fraction of |V|");
    sub->add_option("--seed", sub_seed, "master seed");
    sub->add_option("--out", sub_out, "report TSV")->required();

    auto* sc = ev->add_subcommand("scale", "estimation time across graph sizes");
    std::string sc_model, sc_out;
    int sc_min = 14, sc_max = 18, sc_estimations = 30;
    uint64_t sc_seed = 42;
    sc->add_option("--model", sc_model, "checkpoint")->required();
    sc->add_option("--log2-min", sc_min, "smallest size, 2^k edges");
    sc->add_option("--log2-max", sc_max, "largest size, 2^k edges");
    sc->add_option("--estimations", sc_estimations, "stacked inferences per size");
    sc->add_option("--seed", sc_seed, "master seed");
    sc->add_option("--out", sc_out, "report TSV")->required();

    CLI11_PARSE(app, argc, argv);

#ifdef _OPENMP
    if (threads > 0) omp_set_num_threads(threads);
#endif

    if (rmat->parsed()) {
        DirectedGraph g = generate_rmat(rmat_log2, qa, qb, qc, qd, rmat_seed);
        if (rmat_wc) g = assign_weighted_cascade(g);
        save_edge_list(g, rmat_out);
        std::cout << "wrote " << rmat_out << ": " << g.node_count() << " nodes, "
                  << g.edge_count() << " edges\n";
        return 0;
    }

    if (probs->parsed()) {
        ActionLog log = load_action_log(probs_log);
        ProbMeasure measure = parse_measure(probs_measure);
        auto [train_log, test_log] = split_log(log, split_at);
        DirectedGraph train_g = build_probabilities(train_log, measure);
        DirectedGraph test_g = build_probabilities(test_log, measure);
        save_edge_list(train_g, probs_out + ".train.edges.tsv");
        save_edge_list(test_g, probs_out + ".test.edges.tsv");
        std::cout << "train: " << train_g.node_count() << " nodes, " << train_g.edge_count()
                  << " edges, mean p " << fmt(mean_edge_probability(train_g)) << "\n";
        std::cout << "test:  " << test_g.node_count() << " nodes, " << test_g.edge_count()
                  << " edges, mean p " << fmt(mean_edge_probability(test_g)) << "\n";
        return 0;
    }

    if (sim->parsed()) {
        DirectedGraph g = load_edge_list(sim_graph);
        SeedSet seeds = parse_seed_labels(g, sim_seeds);
        SimulationResult result = simulate(g, seeds, sim_runs, sim_seed);
        std::cout << "steps " << result.per_step.size() - 1 << "  influence "
                  << fmt(result.influence) << "  runs " << result.runs << "\n";
        if (!sim_out.empty()) {
            std::ofstream out(sim_out);
            if (!out) throw std::runtime_error("cannot write " + sim_out);
            out << report_header(sim_seed, "simulate graph=" + sim_graph + " seeds=" + sim_seeds +
                                               " runs=" + std::to_string(sim_runs));
            out << "node";
            for (size_t i = 0; i < result.per_step.size(); ++i) out << "\trho_" << i;
            out << "\n";
            for (int v = 0; v < g.node_count(); ++v) {
                out << g.label(v);
                for (const Vector& pi : result.per_step) out << '\t' << fmt(pi[v]);
                out << "\n";
            }
        }
        return 0;
    }

    if (tup->parsed()) {
        DirectedGraph g = load_edge_list(tup_graph);
        if (tup_graph_id.empty())
            tup_graph_id = std::filesystem::path(tup_graph).filename().string();
        TupleFile file;
        file.node_count = g.node_count();
        file.e = tup_e;
        file.tuples = generate_tuples(g, tup_graph_id, tup_count, tup_e, tup_runs, tup_seed);
        save_tuples(tup_out, file);
        std::cout << "wrote " << tup_out << ": " << file.tuples.size() << " tuples (e=" << tup_e
                  << ", graph " << tup_graph_id << ")\n";
        return 0;
    }

    if (tr->parsed()) {
        std::vector<TrainingTuple> tuples;
        int e = -1;
        std::stringstream ss(tr_tuples);
        std::string token;
        while (std::getline(ss, token, ',')) {
            TupleFile file = load_tuples(token);
            if (e < 0) e = file.e;
            if (file.e != e) throw std::runtime_error("tuple files disagree on e");
            for (TrainingTuple& t : file.tuples) tuples.push_back(std::move(t));
        }
        if (tuples.empty()) throw std::runtime_error("no tuples loaded");

        std::map<std::string, DirectedGraph> graphs;
        std::set<std::string> refs;
        for (const TrainingTuple& t : tuples) refs.insert(t.graph_ref);
        for (const std::string& ref : refs)
            graphs.emplace(ref, load_edge_list(std::filesystem::path(tr_graphs) / ref));

        Hyperparams hyper = Hyperparams::standard(e, tr_layers, 1, tr_lambda, tr_hidden);
        TrainConfig config;
        config.epochs = tr_epochs;
        config.batch_size = tr_batch;
        config.val_fraction = tr_val_frac;
        config.seed = tr_seed;
        config.s_search_max = tr_smax;
        config.val_ie_sets = tr_val_sets;
        config.val_ie_runs = tr_val_runs;
        config.verbose = !tr_quiet;
        ModelParams params = train(tuples, graphs, hyper, config);
        save_checkpoint(tr_out, params);
        std::cout << "wrote " << tr_out << " (e=" << params.hyper.e << " l=" << params.hyper.l
                  << " s=" << params.hyper.s << ")\n";
        return 0;
    }

    if (est->parsed()) {
        DirectedGraph g = load_edge_list(est_graph);
        ModelParams params = load_checkpoint(est_model);
        SeedSet seeds = parse_seed_labels(g, est_seeds);
        StackedResult result = stacked_inference(g, seeds, params);
        if (est_verbose)
            for (size_t t = 0; t < result.vectors.size(); ++t)
                std::cout << "stack " << t << "  influence " << fmt(result.vectors[t].sum())
                          << "\n";
        std::cout << "influence " << fmt(result.influence) << "\n";
        if (!est_out.empty()) {
            std::ofstream out(est_out);
            if (!out) throw std::runtime_error("cannot write " + est_out);
            out << report_header(0, "estimate graph=" + est_graph + " model=" + est_model +
                                        " seeds=" + est_seeds);
            out << "node\trho\n";
            const Vector& final = result.vectors.back();
            for (int v = 0; v < g.node_count(); ++v)
                out << g.label(v) << '\t' << fmt(final[v]) << "\n";
        }
        return 0;
    }

    if (mx->parsed()) {
        DirectedGraph g = load_edge_list(mx_graph);
        InfluenceFunction f = [&]() {
            if (mx_backend == "mc") return InfluenceFunction::monte_carlo(mx_runs, mx_seed);
            if (mx_backend == "exact") return InfluenceFunction::exact_oracle();
            if (mx_backend == "surrogate") {
                if (mx_model.empty())
                    throw std::runtime_error("surrogate backend needs --model");
                return InfluenceFunction::surrogate(load_checkpoint(mx_model));
            }
            throw std::runtime_error("unknown backend '" + mx_backend + "'");
        }();
        SelectionResult sel = lazy_greedy_select(g, mx_k, f);
        double estimate = f(g, sel.seeds);
        std::ofstream out(mx_out);
        if (!out) throw std::runtime_error("cannot write " + mx_out);
        for (int v : sel.seeds.nodes()) out << g.label(v) << "\n";
        out << "# influence " << fmt(estimate) << " backend " << mx_backend << " k " << mx_k
            << " evaluations " << sel.evaluations << "\n";
        std::cout << "selected " << mx_k << " seeds, estimated influence " << fmt(estimate)
                  << " (" << sel.evaluations << " evaluations)\n";
        return 0;
    }

    if (ie->parsed()) {
        DirectedGraph g = load_edge_list(ie_graph);
        ModelParams params = load_checkpoint(ie_model);
        CorrelationReport report = run_ie_eval(g, params, ie_sets, ie_runs, ie_seed, ie_scatter);
        std::ofstream out(ie_out);
        if (!out) throw std::runtime_error("cannot write " + ie_out);
        out << report_header(ie_seed, "eval-ie graph=" + ie_graph + " model=" + ie_model +
                                          " sets=" + std::to_string(ie_sets) +
                                          " runs=" + std::to_string(ie_runs));
        out << "pearson\tspearman\tn\n";
        out << fmt(report.pearson) << '\t' << fmt(report.spearman) << '\t' << report.n << "\n";
        std::cout << "pearson " << fmt(report.pearson) << "  spearman " << fmt(report.spearman)
                  << "  n " << report.n << "\n";
        return 0;
    }

    if (sub->parsed()) {
        DirectedGraph g = load_edge_list(sub_graph);
        InfluenceFunction f = [&]() {
            if (sub_backend == "mc") return InfluenceFunction::monte_carlo(sub_runs, sub_seed);
            if (sub_backend == "exact") return InfluenceFunction::exact_oracle();
            if (sub_backend == "surrogate") {
                if (sub_model.empty())
                    throw std::runtime_error("surrogate backend needs --model");
                return InfluenceFunction::surrogate(load_checkpoint(sub_model));
            }
            throw std::runtime_error("unknown backend '" + sub_backend + "'");
        }();
        SubmodularityReport report =
            submodularity_probe(g, f, sub_pairs, sub_lo, sub_hi, sub_seed);
        std::ofstream out(sub_out);
        if (!out) throw std::runtime_error("cannot write " + sub_out);
        out << report_header(sub_seed, "eval-submod graph=" + sub_graph + " backend=" +
                                           sub_backend + " pairs=" + std::to_string(sub_pairs));
        out << "# mape = (f(SuT)+f(SnT)-f(S)-f(T)) / (f(SuT)+f(SnT)), mean over violating pairs\n";
        out << "pairs\tviolations\tholds_ratio\tviolation_mape\n";
        char buf[160];
        std::snprintf(buf, sizeof(buf), "%lld\t%lld\t%.6f\t%.9e\n",
                      static_cast<long long>(report.pairs_tested),
                      static_cast<long long>(report.violations), report.holds_ratio,
                      report.violation_mape);
        out << buf;
        std::cout << "pairs " << report.pairs_tested << "  holds_ratio "
                  << fmt(report.holds_ratio) << "  mape " << report.violation_mape << "\n";
        return 0;
    }

    if (sc->parsed()) {
        ModelParams params = load_checkpoint(sc_model);
        std::vector<int> sizes;
        for (int k = sc_min; k <= sc_max; ++k) sizes.push_back(k);
        std::vector<ScalePoint> table = run_scalability(sizes, sc_estimations, params, sc_seed);
        std::ofstream out(sc_out);
        if (!out) throw std::runtime_error("cannot write " + sc_out);
        out << report_header(sc_seed, "eval-scale model=" + sc_model + " estimations=" +
                                          std::to_string(sc_estimations));
        out << "# seconds_per_stack is measured wall time and varies between runs\n";
        out << "log2_edges\tedges\tnodes\tseconds_per_stack\n";
        for (const ScalePoint& p : table) {
            out << p.log2_edges << '\t' << p.edges << '\t' << p.node_count << '\t'
                << fmt(p.seconds_per_stack) << "\n";
            std::cout << "2^" << p.log2_edges << "  edges " << p.edges << "  "
                      << fmt(p.seconds_per_stack) << " s/stack\n";
        }
        return 0;
    }

    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
