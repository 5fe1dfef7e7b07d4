#pragma once

#include "ringwalk/transfer.hpp"

#include <cstddef>
#include <vector>

namespace ringwalk {

struct PortProbabilities {
    double drop = 0.0;
    double thru = 0.0;
};

/// States p^(m) = T^m p0 for m = 0..steps, by repeated matrix-vector
/// multiplication. p0 is the state at step 0; the first hop lands at step 1.
std::vector<Eigen::VectorXd> evolve(const ClassicalMatrix& matrix,
                                    const Eigen::VectorXd& p0,
                                    std::size_t steps);

struct SteadyStateOptions {
    double tol = 1e-12;
    std::size_t max_steps = 1'000'000;
};

/// Iterates until the non-absorbed mass drops below tol and returns the
/// final state. Throws ConvergenceError if the mass stops contracting
/// (walker sealed inside a ring) or the step cap is hit.
Eigen::VectorXd steady_state(const ClassicalMatrix& matrix,
                             const Eigen::VectorXd& p0,
                             const SteadyStateOptions& options = {});

/// Single-ring steady-state ports:
///   p_D = k1 k2 alpha^{1/2} / (1 - alpha t1 t2)
///   p_T = (t1 + t2 alpha - 2 t1 t2 alpha) / (1 - t1 t2 alpha)
/// The 0/0 case (k1 = k2 = 0, alpha = 1) resolves to (0, 1): the walker
/// hops straight to Thru and never enters the ring.
PortProbabilities closed_form_single(double k1, double k2, double alpha);

/// Two-ring steady-state ports (uniform alpha). Degenerate denominators
/// (alpha = 1 with two decoupled couplers) resolve to (0, 1) likewise.
PortProbabilities closed_form_double(double k1, double k2, double k3,
                                     double alpha);

/// Cumulative absorbed probability after `steps` hops by explicit path
/// sums: truncated geometric series for one ring, exhaustive enumeration
/// of paths of length <= steps for two. Rejects N > 2.
PortProbabilities path_sum_oracle(const RingChainSpec& spec, std::size_t steps);

} // namespace ringwalk
