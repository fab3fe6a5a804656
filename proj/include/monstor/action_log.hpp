#pragma once

#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "monstor/graph.hpp"

namespace monstor {

struct ActionRecord {
    std::string action_id;
    std::string actor;
    std::string object;
    double timestamp = 0.0;
    bool has_timestamp = false;
};

/// Interaction log from which activation probabilities are estimated.
/// Keeps per-node index sets: done_by(x) = actions performed by x,
/// object_of(x) = actions whose object is x.
class ActionLog {
public:
    ActionLog() = default;
    explicit ActionLog(std::vector<ActionRecord> records);

    const std::vector<ActionRecord>& records() const { return records_; }
    bool empty() const { return records_.empty(); }

    const std::set<std::string>& done_by(const std::string& node) const;
    const std::set<std::string>& object_of(const std::string& node) const;

    /// All node labels seen as actor or object, lexicographically sorted.
    std::vector<std::string> node_labels() const;

private:
    std::vector<ActionRecord> records_;
    std::map<std::string, std::set<std::string>> done_by_;
    std::map<std::string, std::set<std::string>> object_of_;
};

/// TSV: action_id<TAB>actor<TAB>object[<TAB>timestamp], '#' lines skipped.
ActionLog load_action_log(const std::filesystem::path& path);

/// Temporal train/test split. With timestamps: records at or below
/// min + fraction*(max-min) go to the first log. Without: distinct action
/// ids in first-appearance order, the first ceil(fraction*count) ids go to
/// the first log (an action's records never straddle the split).
std::pair<ActionLog, ActionLog> split_log(const ActionLog& log, double fraction);

enum class ProbMeasure { BT, JI, LP };

ProbMeasure parse_measure(const std::string& name);

/// Activation probabilities over an explicit topology (pairs of labels):
///   BT: |done_by(u) n done_by(v)| / |done_by(u)|
///   JI: |done_by(u) n object_of(v)| / |done_by(u) u object_of(v)|
///   LP: |done_by(u) n object_of(v)| / |object_of(v)|
/// Degenerate denominators give p = 0. Node ids are assigned over the
/// lexicographically sorted label set, so the result is independent of
/// record order.
DirectedGraph build_probabilities(const ActionLog& log, ProbMeasure measure,
                                  const std::vector<std::pair<std::string, std::string>>& topology);

/// As above with the default topology: an edge (u,v) exists wherever the
/// measure's numerator set is nonempty.
DirectedGraph build_probabilities(const ActionLog& log, ProbMeasure measure);

/// Mean edge probability, sum(p)/|E|.
double mean_edge_probability(const DirectedGraph& g);

}  // namespace monstor
