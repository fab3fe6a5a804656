#include "monstor/graph.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

#include "monstor/rng.hpp"

namespace monstor {

DirectedGraph::DirectedGraph(int node_count, std::vector<Edge> edges,
                             std::vector<std::string> labels)
    : node_count_(node_count) {
    if (node_count < 0) throw std::invalid_argument("node_count must be >= 0");
    for (const Edge& e : edges) {
        if (e.src < 0 || e.src >= node_count || e.dst < 0 || e.dst >= node_count)
            throw std::invalid_argument("edge endpoint out of range");
        if (e.src == e.dst)
            throw std::invalid_argument("self-loop rejected: node " + std::to_string(e.src));
        if (!(e.prob >= 0.0 && e.prob <= 1.0))
            throw std::invalid_argument("probability out of range [0,1] on edge " +
                                        std::to_string(e.src) + "->" + std::to_string(e.dst));
    }

    std::sort(edges.begin(), edges.end(), [](const Edge& a, const Edge& b) {
        return a.src != b.src ? a.src < b.src : a.dst < b.dst;
    });
    for (size_t i = 1; i < edges.size(); ++i) {
        if (edges[i].src == edges[i - 1].src && edges[i].dst == edges[i - 1].dst)
            throw std::invalid_argument("duplicate edge " + std::to_string(edges[i].src) +
                                        "->" + std::to_string(edges[i].dst));
    }

    out_off_.assign(node_count + 1, 0);
    for (const Edge& e : edges) out_off_[e.src + 1]++;
    for (int v = 0; v < node_count; ++v) out_off_[v + 1] += out_off_[v];
    out_dst_.resize(edges.size());
    out_prob_.resize(edges.size());
    for (size_t i = 0; i < edges.size(); ++i) {
        out_dst_[i] = edges[i].dst;
        out_prob_[i] = edges[i].prob;
    }

    // In-CSR sorted by (dst, src): in-neighbors iterate in increasing src id.
    std::sort(edges.begin(), edges.end(), [](const Edge& a, const Edge& b) {
        return a.dst != b.dst ? a.dst < b.dst : a.src < b.src;
    });
    in_off_.assign(node_count + 1, 0);
    for (const Edge& e : edges) in_off_[e.dst + 1]++;
    for (int v = 0; v < node_count; ++v) in_off_[v + 1] += in_off_[v];
    in_src_.resize(edges.size());
    in_prob_.resize(edges.size());
    for (size_t i = 0; i < edges.size(); ++i) {
        in_src_[i] = edges[i].src;
        in_prob_[i] = edges[i].prob;
    }

    if (labels.empty()) {
        labels_.reserve(node_count);
        for (int v = 0; v < node_count; ++v) labels_.push_back(std::to_string(v));
    } else {
        if (static_cast<int>(labels.size()) != node_count)
            throw std::invalid_argument("label count does not match node count");
        labels_ = std::move(labels);
    }
}

int DirectedGraph::id_of(const std::string& label) const {
    for (int v = 0; v < node_count_; ++v)
        if (labels_[v] == label) return v;
    return -1;
}

std::vector<Edge> DirectedGraph::edges() const {
    std::vector<Edge> result;
    result.reserve(out_dst_.size());
    for (int u = 0; u < node_count_; ++u)
        for (int k = out_off_[u]; k < out_off_[u + 1]; ++k)
            result.push_back({u, out_dst_[k], out_prob_[k]});
    return result;
}

SeedSet::SeedSet(std::vector<int> nodes) : nodes_(std::move(nodes)) {
    std::sort(nodes_.begin(), nodes_.end());
    auto dup = std::adjacent_find(nodes_.begin(), nodes_.end());
    if (dup != nodes_.end())
        throw std::invalid_argument("duplicate seed node " + std::to_string(*dup));
}

bool SeedSet::contains(int v) const {
    return std::binary_search(nodes_.begin(), nodes_.end(), v);
}

void SeedSet::validate(const DirectedGraph& g) const {
    if (nodes_.empty()) throw std::invalid_argument("seed set is empty");
    if (nodes_.front() < 0 || nodes_.back() >= g.node_count())
        throw std::invalid_argument("seed node id out of range");
}

SeedSet SeedSet::with(int v) const {
    if (contains(v)) return *this;
    SeedSet s;
    s.nodes_ = nodes_;
    s.nodes_.insert(std::upper_bound(s.nodes_.begin(), s.nodes_.end(), v), v);
    return s;
}

SeedSet SeedSet::set_union(const SeedSet& a, const SeedSet& b) {
    SeedSet s;
    std::set_union(a.nodes_.begin(), a.nodes_.end(), b.nodes_.begin(), b.nodes_.end(),
                   std::back_inserter(s.nodes_));
    return s;
}

SeedSet SeedSet::set_intersection(const SeedSet& a, const SeedSet& b) {
    SeedSet s;
    std::set_intersection(a.nodes_.begin(), a.nodes_.end(), b.nodes_.begin(),
                          b.nodes_.end(), std::back_inserter(s.nodes_));
    return s;
}

Vector SeedSet::indicator(int node_count) const {
    Vector v = Vector::Zero(node_count);
    for (int s : nodes_) v[s] = 1.0;
    return v;
}

namespace {

bool parse_double(const std::string& tok, double& out) {
    try {
        size_t pos = 0;
        out = std::stod(tok, &pos);
        return pos == tok.size();
    } catch (const std::exception&) {
        return false;
    }
}

}  // namespace

DirectedGraph load_edge_list(const std::filesystem::path& path, bool write_map) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open edge list: " + path.string());

    std::unordered_map<std::string, int> ids;
    std::vector<std::string> labels;
    auto intern = [&](const std::string& lbl) {
        auto [it, inserted] = ids.emplace(lbl, static_cast<int>(labels.size()));
        if (inserted) labels.push_back(lbl);
        return it->second;
    };

    std::vector<Edge> edges;
    std::unordered_set<int64_t> seen;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        size_t start = line.find_first_not_of(" \t\r");
        if (start == std::string::npos || line[start] == '#') continue;
        std::istringstream ls(line);
        std::string src_lbl, dst_lbl, prob_tok;
        if (!(ls >> src_lbl >> dst_lbl >> prob_tok))
            throw std::runtime_error(path.string() + ":" + std::to_string(line_no) +
                                     ": malformed line (expected src dst prob)");
        double prob;
        if (!parse_double(prob_tok, prob))
            throw std::runtime_error(path.string() + ":" + std::to_string(line_no) +
                                     ": malformed probability '" + prob_tok + "'");
        if (!(prob >= 0.0 && prob <= 1.0))
            throw std::runtime_error(path.string() + ":" + std::to_string(line_no) +
                                     ": probability out of range [0,1]");
        int s = intern(src_lbl);
        int d = intern(dst_lbl);
        if (s == d)
            throw std::runtime_error(path.string() + ":" + std::to_string(line_no) +
                                     ": self-loop on '" + src_lbl + "'");
        int64_t key = static_cast<int64_t>(s) * (1LL << 32) + d;
        if (!seen.insert(key).second)
            throw std::runtime_error(path.string() + ":" + std::to_string(line_no) +
                                     ": duplicate edge " + src_lbl + " -> " + dst_lbl);
        edges.push_back({s, d, prob});
    }
    if (edges.empty()) throw std::runtime_error(path.string() + ": no edges");

    const int node_count = static_cast<int>(labels.size());
    DirectedGraph g(node_count, std::move(edges), std::move(labels));
    if (write_map) {
        try {
            write_node_map(g, path.string() + ".nodes.tsv");
        } catch (const std::exception& e) {
            std::fprintf(stderr, "warning: could not write node map: %s\n", e.what());
        }
    }
    return g;
}

void save_edge_list(const DirectedGraph& g, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write edge list: " + path.string());
    char buf[64];
    for (const Edge& e : g.edges()) {
        std::snprintf(buf, sizeof(buf), "%.17g", e.prob);
        out << g.label(e.src) << '\t' << g.label(e.dst) << '\t' << buf << '\n';
    }
}

void write_node_map(const DirectedGraph& g, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write node map: " + path.string());
    for (int v = 0; v < g.node_count(); ++v) out << g.label(v) << '\t' << v << '\n';
}

Vector propagate(const Vector& v, const DirectedGraph& g) {
    if (v.size() != g.node_count())
        throw std::invalid_argument("propagate: vector length does not match node count");
    Vector w = Vector::Zero(g.node_count());
    for (int y = 0; y < g.node_count(); ++y) {
        auto srcs = g.in_neighbors(y);
        auto probs = g.in_probs(y);
        double acc = 0.0;
        for (size_t k = 0; k < srcs.size(); ++k) acc += v[srcs[k]] * probs[k];
        w[y] = acc;
    }
    return w;
}

DirectedGraph generate_rmat(int log2_edges, double a, double b, double c, double d,
                            uint64_t seed) {
    if (log2_edges < 4) throw std::invalid_argument("generate_rmat: log2_edges must be >= 4");
    if (std::abs(a + b + c + d - 1.0) > 1e-9)
        throw std::invalid_argument("generate_rmat: quadrant probabilities must sum to 1");
    if (a < 0 || b < 0 || c < 0 || d < 0)
        throw std::invalid_argument("generate_rmat: quadrant probabilities must be >= 0");

    int64_t draws = int64_t{1} << log2_edges;
    int n = static_cast<int>(std::ceil(0.2 * static_cast<double>(draws)));
    int levels = 0;
    while ((int64_t{1} << levels) < n) ++levels;

    std::mt19937_64 gen = make_stream(seed, 0);
    auto draw_edge = [&](int& src, int& dst) {
        // Redraw until both endpoints land inside [0, n); self-loops are kept
        // here and dropped by the caller (they count as drawn edges).
        for (;;) {
            int64_t r = 0, col = 0;
            for (int lvl = 0; lvl < levels; ++lvl) {
                double x = uniform01(gen);
                r <<= 1;
                col <<= 1;
                if (x < a) {
                    // top-left
                } else if (x < a + b) {
                    col |= 1;
                } else if (x < a + b + c) {
                    r |= 1;
                } else {
                    r |= 1;
                    col |= 1;
                }
            }
            if (r < n && col < n) {
                src = static_cast<int>(r);
                dst = static_cast<int>(col);
                return;
            }
        }
    };

    std::unordered_set<int64_t> seen;
    std::vector<Edge> edges;
    seen.reserve(static_cast<size_t>(draws) * 2);
    for (int64_t i = 0; i < draws; ++i) {
        int src, dst;
        draw_edge(src, dst);
        if (src == dst) continue;
        int64_t key = static_cast<int64_t>(src) * (int64_t{1} << 32) + dst;
        if (seen.insert(key).second) edges.push_back({src, dst, 0.0});
    }
    return DirectedGraph(n, std::move(edges));
}

DirectedGraph assign_weighted_cascade(const DirectedGraph& g) {
    if (g.edge_count() == 0)
        throw std::invalid_argument("assign_weighted_cascade: graph has no edges");
    std::vector<Edge> edges = g.edges();
    for (Edge& e : edges) e.prob = 1.0 / g.in_degree(e.dst);
    return DirectedGraph(g.node_count(), std::move(edges), g.labels());
}

}  // namespace monstor
