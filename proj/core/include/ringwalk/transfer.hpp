#pragma once

#include "ringwalk/graph.hpp"

#include <Eigen/Dense>

namespace ringwalk {

/// Column-(sub)stochastic one-step transition matrix, T[to, from].
/// Lossless columns sum to exactly 1; each half-ring hop pays alpha^{1/2}.
struct ClassicalMatrix {
    Eigen::MatrixXd values;
};

/// Complex one-step transition-amplitude matrix, same sparsity pattern as
/// the classical matrix. Lossless source columns form an isometry.
struct QuantumMatrix {
    Eigen::MatrixXcd values;
};

ClassicalMatrix classical_transfer_matrix(const NodeGraph& graph);
QuantumMatrix quantum_transfer_matrix(const NodeGraph& graph);

} // namespace ringwalk
