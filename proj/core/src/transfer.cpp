#include "ringwalk/transfer.hpp"

#include "ringwalk/quantum.hpp"

#include <cmath>

namespace ringwalk {

ClassicalMatrix classical_transfer_matrix(const NodeGraph& graph) {
    const auto n = static_cast<Eigen::Index>(graph.node_count());
    ClassicalMatrix matrix{Eigen::MatrixXd::Zero(n, n)};
    const RingChainSpec& spec = graph.spec;

    for (const GraphEdge& edge : graph.edges) {
        const double k = spec.couplings[edge.coupler - 1];
        double weight = edge.cross ? k : 1.0 - k;
        if (edge.ring >= 0) {
            weight *= std::sqrt(spec.loss_per_round[edge.ring]);
        }
        matrix.values(static_cast<Eigen::Index>(edge.to),
                      static_cast<Eigen::Index>(edge.from)) = weight;
    }
    matrix.values(static_cast<Eigen::Index>(graph.drop_node()),
                  static_cast<Eigen::Index>(graph.drop_node())) = 1.0;
    matrix.values(static_cast<Eigen::Index>(graph.thru_node()),
                  static_cast<Eigen::Index>(graph.thru_node())) = 1.0;
    return matrix;
}

QuantumMatrix quantum_transfer_matrix(const NodeGraph& graph) {
    const auto n = static_cast<Eigen::Index>(graph.node_count());
    QuantumMatrix matrix{Eigen::MatrixXcd::Zero(n, n)};
    const RingChainSpec& spec = graph.spec;

    for (const GraphEdge& edge : graph.edges) {
        const double k = spec.couplings[edge.coupler - 1];
        std::complex<double> amp = std::sqrt(edge.cross ? k : 1.0 - k);
        if (edge.ring >= 0) {
            amp *= RoundTripFactor::from_intensity_loss(
                       spec.loss_per_round[edge.ring], spec.phases[edge.ring])
                       .half();
        }
        if (edge.negated) {
            amp = -amp;
        }
        matrix.values(static_cast<Eigen::Index>(edge.to),
                      static_cast<Eigen::Index>(edge.from)) = amp;
    }
    matrix.values(static_cast<Eigen::Index>(graph.drop_node()),
                  static_cast<Eigen::Index>(graph.drop_node())) = 1.0;
    matrix.values(static_cast<Eigen::Index>(graph.thru_node()),
                  static_cast<Eigen::Index>(graph.thru_node())) = 1.0;
    return matrix;
}

} // namespace ringwalk
