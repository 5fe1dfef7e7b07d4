#pragma once

#include "ringwalk/ring_chain.hpp"

#include <string>
#include <vector>

namespace ringwalk {

/// One directed hop. `coupler` indexes the k_i list (1-based, as drawn);
/// `cross` selects k_i vs t_i; `ring` is the 0-based ring whose half-ring
/// loss/phase factor the hop pays, or -1 for the two input-coupler hops.
/// `negated` marks the entries that carry a minus sign in the quantum matrix.
struct GraphEdge {
    std::size_t from = 0;
    std::size_t to = 0;
    std::size_t coupler = 1;
    bool cross = false;
    int ring = -1;
    bool negated = false;
};

/// Node order is fixed: [P0, P1, ..., P_{2N}, PD, PT]. Ring j (1-based)
/// owns nodes P_{2j-1} (forward half, heading to coupler j+1) and P_{2j}
/// (return half, heading back to coupler j). PD and PT are absorbing.
struct NodeGraph {
    RingChainSpec spec;
    std::vector<GraphEdge> edges;

    std::size_t num_rings() const { return spec.num_rings(); }
    std::size_t node_count() const { return 2 * num_rings() + 3; }
    std::size_t input_node() const { return 0; }
    std::size_t drop_node() const { return 2 * num_rings() + 1; }
    std::size_t thru_node() const { return 2 * num_rings() + 2; }
    std::string node_name(std::size_t node) const;
};

/// Builds the walk graph for a validated spec. Rejects N = 0 and
/// mismatched parameter list lengths (via RingChainSpec::validate).
NodeGraph build_chain(const RingChainSpec& spec);

} // namespace ringwalk
