#include "epnrec/epn.hpp"

#include <algorithm>
#include <deque>
#include <set>

#include "epnrec/errors.hpp"

namespace epnrec::epn {

const char* to_string(ComponentClass c) {
    switch (c) {
        case ComponentClass::substation: return "substation";
        case ComponentClass::transmission_tower: return "transmission_tower";
        case ComponentClass::line_segment: return "line_segment";
        case ComponentClass::distribution_node: return "distribution_node";
    }
    return "?";
}

ComponentClass component_class_from_string(const std::string& s) {
    if (s == "substation") return ComponentClass::substation;
    if (s == "transmission_tower") return ComponentClass::transmission_tower;
    if (s == "line_segment") return ComponentClass::line_segment;
    if (s == "distribution_node") return ComponentClass::distribution_node;
    throw ConfigError("unknown component class: " + s);
}

int PowerNetwork::node_index(const std::string& id) const {
    for (std::size_t i = 0; i < node_ids.size(); ++i)
        if (node_ids[i] == id) return static_cast<int>(i);
    return -1;
}

const std::vector<std::vector<std::pair<int, int>>>& PowerNetwork::adjacency()
    const {
    return adj_;
}

void PowerNetwork::finalize() {
    std::sort(components.begin(), components.end(),
              [](const Component& a, const Component& b) { return a.id < b.id; });
    node_guard.assign(node_ids.size(), -1);
    edge_guard.assign(edges.size(), -1);
    for (std::size_t ci = 0; ci < components.size(); ++ci) {
        const auto& c = components[ci];
        auto& slot = c.guards_node ? node_guard.at(static_cast<std::size_t>(c.element))
                                   : edge_guard.at(static_cast<std::size_t>(c.element));
        if (slot != -1)
            throw ConfigError("component " + c.id +
                              " guards an element already guarded by " +
                              components[static_cast<std::size_t>(slot)].id);
        slot = static_cast<int>(ci);
    }
    adj_.assign(node_ids.size(), {});
    for (std::size_t e = 0; e < edges.size(); ++e) {
        const auto [a, b] = edges[e];
        adj_[static_cast<std::size_t>(a)].emplace_back(b, static_cast<int>(e));
        adj_[static_cast<std::size_t>(b)].emplace_back(a, static_cast<int>(e));
    }
}

void PowerNetwork::validate() const {
    if (node_ids.empty()) throw ModelError("network: no nodes");
    if (sources.empty()) throw ModelError("network: no source node");
    std::set<std::string> ids;
    for (const auto& n : node_ids)
        if (!ids.insert(n).second)
            throw ModelError("network: duplicate node id " + n);
    for (const auto& [a, b] : edges) {
        if (a < 0 || b < 0 || a >= static_cast<int>(node_ids.size()) ||
            b >= static_cast<int>(node_ids.size()) || a == b)
            throw ModelError("network: edge endpoint out of range");
    }
    for (int s : sources)
        if (s < 0 || s >= static_cast<int>(node_ids.size()))
            throw ModelError("network: source index out of range");
    std::set<std::string> cids;
    for (const auto& c : components) {
        if (!cids.insert(c.id).second)
            throw ModelError("network: duplicate component id " + c.id);
        const int limit = c.guards_node ? static_cast<int>(node_ids.size())
                                        : static_cast<int>(edges.size());
        if (c.element < 0 || c.element >= limit)
            throw ModelError("network: component " + c.id +
                             " guards a missing element");
    }
    if (adj_.size() != node_ids.size())
        throw ModelError("network: finalize() not called");
}

std::vector<char> energized_nodes(const PowerNetwork& net,
                                  const FunctionalState& fs) {
    const auto ok = [&](int guard) {
        return guard < 0 || fs.functional[static_cast<std::size_t>(guard)];
    };
    std::vector<char> reached(net.node_ids.size(), 0);
    std::deque<int> queue;
    for (int s : net.sources) {
        if (ok(net.node_guard[static_cast<std::size_t>(s)]) &&
            !reached[static_cast<std::size_t>(s)]) {
            reached[static_cast<std::size_t>(s)] = 1;
            queue.push_back(s);
        }
    }
    while (!queue.empty()) {
        const int u = queue.front();
        queue.pop_front();
        for (const auto& [v, e] : net.adjacency()[static_cast<std::size_t>(u)]) {
            if (reached[static_cast<std::size_t>(v)]) continue;
            if (!ok(net.edge_guard[static_cast<std::size_t>(e)])) continue;
            if (!ok(net.node_guard[static_cast<std::size_t>(v)])) continue;
            reached[static_cast<std::size_t>(v)] = 1;
            queue.push_back(v);
        }
    }
    return reached;
}

double households_served(const LoadBinding& binding,
                         const std::vector<char>& energized) {
    double total = 0.0;
    for (std::size_t c = 0; c < binding.cell_node.size(); ++c)
        if (energized[static_cast<std::size_t>(binding.cell_node[c])])
            total += static_cast<double>(binding.cell_pop[c]);
    return total;
}

std::vector<std::pair<int, double>> component_importance(
    const PowerNetwork& net, const LoadBinding& binding,
    const std::vector<int>& damaged, const FunctionalState& fs) {
    const double before = households_served(binding, energized_nodes(net, fs));
    FunctionalState trial = fs;
    std::vector<std::pair<int, double>> scores;
    scores.reserve(damaged.size());
    for (int comp : damaged) {
        trial.functional[static_cast<std::size_t>(comp)] = 1;
        const double after =
            households_served(binding, energized_nodes(net, trial));
        trial.functional[static_cast<std::size_t>(comp)] = 0;
        scores.emplace_back(comp, after - before);
    }
    std::stable_sort(scores.begin(), scores.end(),
                     [](const auto& a, const auto& b) {
                         if (a.second != b.second) return a.second > b.second;
                         return a.first < b.first;
                     });
    return scores;
}

}  // namespace epnrec::epn
