#include "ringwalk/graph.hpp"

#include "ringwalk/errors.hpp"

namespace ringwalk {

std::string NodeGraph::node_name(std::size_t node) const {
    if (node == drop_node()) {
        return "PD";
    }
    if (node == thru_node()) {
        return "PT";
    }
    return "P" + std::to_string(node);
}

NodeGraph build_chain(const RingChainSpec& spec) {
    spec.validate();
    NodeGraph graph;
    graph.spec = spec;

    const std::size_t rings = spec.num_rings();
    const std::size_t drop = 2 * rings + 1;
    const std::size_t thru = 2 * rings + 2;

    // Input coupler: no half-ring factor, minus sign on the ring entry.
    graph.edges.push_back({0, 1, 1, true, -1, true});
    graph.edges.push_back({0, thru, 1, false, -1, false});

    for (std::size_t j = 1; j <= rings; ++j) {
        const std::size_t fwd = 2 * j - 1;  // heading toward coupler j+1
        const std::size_t ret = 2 * j;      // heading back toward coupler j
        const int ring = static_cast<int>(j - 1);

        const std::size_t ahead = (j < rings) ? 2 * j + 1 : drop;
        graph.edges.push_back({fwd, ahead, j + 1, true, ring, false});
        graph.edges.push_back({fwd, ret, j + 1, false, ring, false});

        const std::size_t behind = (j > 1) ? 2 * j - 2 : thru;
        graph.edges.push_back({ret, behind, j, true, ring, j > 1});
        graph.edges.push_back({ret, fwd, j, false, ring, false});
    }
    return graph;
}

} // namespace ringwalk
