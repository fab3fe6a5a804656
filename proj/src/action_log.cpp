#include "monstor/action_log.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

namespace monstor {

ActionLog::ActionLog(std::vector<ActionRecord> records) : records_(std::move(records)) {
    std::set<std::pair<std::string, std::string>> seen;
    for (const ActionRecord& r : records_) {
        if (!seen.insert({r.action_id, r.actor}).second)
            throw std::invalid_argument("duplicate (action, actor) pair: " + r.action_id +
                                        ", " + r.actor);
        done_by_[r.actor].insert(r.action_id);
        object_of_[r.object].insert(r.action_id);
    }
}

const std::set<std::string>& ActionLog::done_by(const std::string& node) const {
    static const std::set<std::string> kEmpty;
    auto it = done_by_.find(node);
    return it == done_by_.end() ? kEmpty : it->second;
}

const std::set<std::string>& ActionLog::object_of(const std::string& node) const {
    static const std::set<std::string> kEmpty;
    auto it = object_of_.find(node);
    return it == object_of_.end() ? kEmpty : it->second;
}

std::vector<std::string> ActionLog::node_labels() const {
    std::set<std::string> labels;
    for (const ActionRecord& r : records_) {
        labels.insert(r.actor);
        labels.insert(r.object);
    }
    return {labels.begin(), labels.end()};
}

ActionLog load_action_log(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open action log: " + path.string());
    std::vector<ActionRecord> records;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        size_t start = line.find_first_not_of(" \t\r");
        if (start == std::string::npos || line[start] == '#') continue;
        std::istringstream ls(line);
        ActionRecord r;
        if (!(ls >> r.action_id >> r.actor >> r.object))
            throw std::runtime_error(path.string() + ":" + std::to_string(line_no) +
                                     ": malformed line (expected action_id actor object [timestamp])");
        std::string ts;
        if (ls >> ts) {
            try {
                size_t pos = 0;
                r.timestamp = std::stod(ts, &pos);
                if (pos != ts.size()) throw std::invalid_argument(ts);
            } catch (const std::exception&) {
                throw std::runtime_error(path.string() + ":" + std::to_string(line_no) +
                                         ": malformed timestamp '" + ts + "'");
            }
            r.has_timestamp = true;
        }
        records.push_back(std::move(r));
    }
    return ActionLog(std::move(records));
}

std::pair<ActionLog, ActionLog> split_log(const ActionLog& log, double fraction) {
    if (!(fraction >= 0.0 && fraction <= 1.0))
        throw std::invalid_argument("split fraction must be in [0,1]");
    const auto& records = log.records();
    bool all_timestamped =
        !records.empty() &&
        std::all_of(records.begin(), records.end(),
                    [](const ActionRecord& r) { return r.has_timestamp; });

    std::vector<ActionRecord> first, second;
    if (all_timestamped) {
        double lo = records.front().timestamp, hi = records.front().timestamp;
        for (const ActionRecord& r : records) {
            lo = std::min(lo, r.timestamp);
            hi = std::max(hi, r.timestamp);
        }
        double threshold = lo + fraction * (hi - lo);
        for (const ActionRecord& r : records)
            (r.timestamp <= threshold ? first : second).push_back(r);
    } else {
        // No timestamps: the log is assumed chronological; split over the
        // distinct action ids in first-appearance order.
        std::vector<std::string> order;
        std::unordered_set<std::string> known;
        for (const ActionRecord& r : records)
            if (known.insert(r.action_id).second) order.push_back(r.action_id);
        size_t cut = static_cast<size_t>(std::ceil(fraction * static_cast<double>(order.size())));
        std::unordered_set<std::string> in_first(order.begin(), order.begin() + cut);
        for (const ActionRecord& r : records)
            (in_first.count(r.action_id) ? first : second).push_back(r);
    }
    return {ActionLog(std::move(first)), ActionLog(std::move(second))};
}

ProbMeasure parse_measure(const std::string& name) {
    if (name == "bt") return ProbMeasure::BT;
    if (name == "ji") return ProbMeasure::JI;
    if (name == "lp") return ProbMeasure::LP;
    throw std::invalid_argument("unknown probability measure '" + name + "' (want bt|ji|lp)");
}

namespace {

size_t intersection_size(const std::set<std::string>& a, const std::set<std::string>& b) {
    size_t count = 0;
    auto ia = a.begin();
    auto ib = b.begin();
    while (ia != a.end() && ib != b.end()) {
        if (*ia < *ib)
            ++ia;
        else if (*ib < *ia)
            ++ib;
        else {
            ++count;
            ++ia;
            ++ib;
        }
    }
    return count;
}

double edge_probability(const ActionLog& log, ProbMeasure measure, const std::string& u,
                        const std::string& v) {
    switch (measure) {
        case ProbMeasure::BT: {
            const auto& num = log.done_by(u);
            if (num.empty()) return 0.0;
            return static_cast<double>(intersection_size(num, log.done_by(v))) /
                   static_cast<double>(num.size());
        }
        case ProbMeasure::JI: {
            const auto& du = log.done_by(u);
            const auto& ov = log.object_of(v);
            size_t inter = intersection_size(du, ov);
            size_t uni = du.size() + ov.size() - inter;
            if (uni == 0) return 0.0;
            return static_cast<double>(inter) / static_cast<double>(uni);
        }
        case ProbMeasure::LP: {
            const auto& ov = log.object_of(v);
            if (ov.empty()) return 0.0;
            return static_cast<double>(intersection_size(log.done_by(u), ov)) /
                   static_cast<double>(ov.size());
        }
    }
    throw std::logic_error("unreachable");
}

std::vector<std::pair<std::string, std::string>> default_topology(const ActionLog& log,
                                                                  ProbMeasure measure) {
    // Candidate edges with a nonempty numerator set. For BT those are actor
    // pairs sharing an action; for JI/LP, (actor, object) pairs of one action.
    std::map<std::string, std::set<std::string>> by_action_actors;
    std::map<std::string, std::string> by_action_object;
    for (const ActionRecord& r : log.records()) {
        by_action_actors[r.action_id].insert(r.actor);
        by_action_object[r.action_id] = r.object;
    }
    std::set<std::pair<std::string, std::string>> pairs;
    if (measure == ProbMeasure::BT) {
        for (const auto& [action, actors] : by_action_actors)
            for (const auto& u : actors)
                for (const auto& v : actors)
                    if (u != v) pairs.insert({u, v});
    } else {
        for (const auto& [action, actors] : by_action_actors) {
            const std::string& object = by_action_object[action];
            for (const auto& u : actors)
                if (u != object) pairs.insert({u, object});
        }
    }
    return {pairs.begin(), pairs.end()};
}

}  // namespace

DirectedGraph build_probabilities(const ActionLog& log, ProbMeasure measure,
                                  const std::vector<std::pair<std::string, std::string>>& topology) {
    std::set<std::string> label_set;
    for (const std::string& l : log.node_labels()) label_set.insert(l);
    for (const auto& [u, v] : topology) {
        label_set.insert(u);
        label_set.insert(v);
    }
    std::vector<std::string> labels(label_set.begin(), label_set.end());
    std::unordered_map<std::string, int> ids;
    for (size_t i = 0; i < labels.size(); ++i) ids[labels[i]] = static_cast<int>(i);

    std::vector<Edge> edges;
    edges.reserve(topology.size());
    for (const auto& [u, v] : topology) {
        if (u == v) throw std::invalid_argument("topology contains self-loop on '" + u + "'");
        edges.push_back({ids[u], ids[v], edge_probability(log, measure, u, v)});
    }
    const int node_count = static_cast<int>(labels.size());
    return DirectedGraph(node_count, std::move(edges), std::move(labels));
}

DirectedGraph build_probabilities(const ActionLog& log, ProbMeasure measure) {
    return build_probabilities(log, measure, default_topology(log, measure));
}

double mean_edge_probability(const DirectedGraph& g) {
    if (g.edge_count() == 0) return 0.0;
    double sum = 0.0;
    for (const Edge& e : g.edges()) sum += e.prob;
    return sum / static_cast<double>(g.edge_count());
}

}  // namespace monstor
