#ifndef EPNREC_EPN_HPP
#define EPNREC_EPN_HPP

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace epnrec::epn {

enum class ComponentClass : int {
    substation = 0,
    transmission_tower = 1,
    line_segment = 2,
    distribution_node = 3,
};

const char* to_string(ComponentClass c);
ComponentClass component_class_from_string(const std::string& s);

// A physical component guarding exactly one graph element. When the
// component is non-functional the guarded node or edge is removed from
// the connectivity graph.
struct Component {
    std::string id;
    ComponentClass cls = ComponentClass::line_segment;
    bool guards_node = false;
    int element = -1;  // node index or edge index
    double site_x = 0.0;
    double site_y = 0.0;
    bool damageable = true;
};

struct PowerNetwork {
    std::vector<std::string> node_ids;
    std::vector<std::pair<int, int>> edges;   // undirected
    std::vector<int> sources;                 // node indices
    std::vector<Component> components;        // sorted by id (canonical order)
    std::vector<int> node_guard;              // node -> component index or -1
    std::vector<int> edge_guard;              // edge -> component index or -1

    int node_index(const std::string& id) const;  // -1 if absent

    // adjacency: per node, list of (neighbor node, edge index)
    const std::vector<std::vector<std::pair<int, int>>>& adjacency() const;

    void validate() const;
    void finalize();  // builds guards + adjacency; called by the loader

  private:
    std::vector<std::vector<std::pair<int, int>>> adj_;
};

// Per-component functional flags. A component is functional when it is
// undamaged in the scenario or already repaired.
struct FunctionalState {
    std::vector<char> functional;

    static FunctionalState all_functional(std::size_t n_components) {
        return FunctionalState{std::vector<char>(n_components, 1)};
    }
};

// Reachability from the source nodes through functional elements only.
// Returns one flag per node. O(V + E).
std::vector<char> energized_nodes(const PowerNetwork& net,
                                  const FunctionalState& fs);

// Community load points resolved to node indices, with populations.
struct LoadBinding {
    std::vector<int> cell_node;          // per cell
    std::vector<std::int64_t> cell_pop;  // per cell
    std::vector<int> retailer_node;      // per retailer
};

// Sum of populations of cells whose load node is energized.
double households_served(const LoadBinding& binding,
                         const std::vector<char>& energized);

// Myopic one-step-unblock importance: score of a damaged component is
// the household population that becomes energized if it alone were
// repaired now. Descending score, ties by ascending component index.
std::vector<std::pair<int, double>> component_importance(
    const PowerNetwork& net, const LoadBinding& binding,
    const std::vector<int>& damaged, const FunctionalState& fs);

}  // namespace epnrec::epn

#endif
