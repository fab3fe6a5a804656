#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace monstor {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
// Row = node; row-major so per-node feature rows are contiguous.
using NodeMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

struct Edge {
    int src;
    int dst;
    double prob;
};

/// Immutable directed graph with activation probabilities on edges.
/// Stored twice in CSR form: indexed by source (cascade fan-out) and by
/// destination (in-neighbor aggregation). Within a node's adjacency the
/// neighbors are sorted by id, which fixes iteration order everywhere.
class DirectedGraph {
public:
    DirectedGraph() = default;
    DirectedGraph(int node_count, std::vector<Edge> edges,
                  std::vector<std::string> labels = {});

    int node_count() const { return node_count_; }
    int64_t edge_count() const { return static_cast<int64_t>(out_dst_.size()); }

    std::span<const int> out_neighbors(int u) const {
        return {out_dst_.data() + out_off_[u], out_dst_.data() + out_off_[u + 1]};
    }
    std::span<const double> out_probs(int u) const {
        return {out_prob_.data() + out_off_[u], out_prob_.data() + out_off_[u + 1]};
    }
    std::span<const int> in_neighbors(int v) const {
        return {in_src_.data() + in_off_[v], in_src_.data() + in_off_[v + 1]};
    }
    std::span<const double> in_probs(int v) const {
        return {in_prob_.data() + in_off_[v], in_prob_.data() + in_off_[v + 1]};
    }
    int in_degree(int v) const { return in_off_[v + 1] - in_off_[v]; }
    int out_degree(int u) const { return out_off_[u + 1] - out_off_[u]; }

    const std::string& label(int v) const { return labels_[v]; }
    const std::vector<std::string>& labels() const { return labels_; }
    /// Dense id for an external label, or -1 if unknown.
    int id_of(const std::string& label) const;

    /// Edges sorted by (src, dst); the canonical edge order.
    std::vector<Edge> edges() const;

private:
    int node_count_ = 0;
    std::vector<int> out_off_, out_dst_;
    std::vector<double> out_prob_;
    std::vector<int> in_off_, in_src_;
    std::vector<double> in_prob_;
    std::vector<std::string> labels_;
};

/// Nonempty sorted set of node ids (the initially infected nodes).
/// A default-constructed SeedSet is the empty set; operations that require
/// seeds reject it.
class SeedSet {
public:
    SeedSet() = default;
    explicit SeedSet(std::vector<int> nodes);  // sorts, rejects duplicates

    bool empty() const { return nodes_.empty(); }
    int size() const { return static_cast<int>(nodes_.size()); }
    const std::vector<int>& nodes() const { return nodes_; }
    bool contains(int v) const;

    /// Throws if empty or any id is outside [0, node_count).
    void validate(const DirectedGraph& g) const;

    SeedSet with(int v) const;  // copy with one node added
    static SeedSet set_union(const SeedSet& a, const SeedSet& b);
    static SeedSet set_intersection(const SeedSet& a, const SeedSet& b);

    /// 0/1 indicator vector of length node_count.
    Vector indicator(int node_count) const;

private:
    std::vector<int> nodes_;
};

/// Parses a `src<TAB>dst<TAB>prob` edge list ('#' lines skipped; any
/// whitespace accepted as separator). External labels become dense ids in
/// first-appearance order. When write_node_map is set, a `<path>.nodes.tsv`
/// sidecar with the label->id mapping is written next to the input.
DirectedGraph load_edge_list(const std::filesystem::path& path, bool write_node_map = true);

void save_edge_list(const DirectedGraph& g, const std::filesystem::path& path);
void write_node_map(const DirectedGraph& g, const std::filesystem::path& path);

/// w[y] = sum over in-neighbors x of v[x] * p(x,y). Pure linear map (the vP
/// term); no clamping.
Vector propagate(const Vector& v, const DirectedGraph& g);

/// Recursive-matrix random graph: 2^log2_edges edges drawn by quadrant
/// descent with probabilities (a,b,c,d); duplicates collapsed and self-loops
/// dropped afterwards. node_count = ceil(0.2 * 2^log2_edges); endpoints
/// outside that range are redrawn. Deterministic for a fixed seed. Edge
/// probabilities are left at 0; see assign_weighted_cascade.
DirectedGraph generate_rmat(int log2_edges, double a, double b, double c, double d,
                            uint64_t seed);

/// Reweights every edge (u,v) to 1/in_degree(v).
DirectedGraph assign_weighted_cascade(const DirectedGraph& g);

}  // namespace monstor
