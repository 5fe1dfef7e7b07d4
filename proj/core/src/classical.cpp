#include "ringwalk/classical.hpp"

#include "ringwalk/errors.hpp"

#include <cmath>
#include <string>

namespace ringwalk {

namespace {

void require_dimension(Eigen::Index rows, Eigen::Index size) {
    if (rows != size) {
        throw ValidationError("state dimension " + std::to_string(size) +
                              " does not match matrix dimension " +
                              std::to_string(rows));
    }
}

// Truncated geometric sum 1 + q + ... + q^m.
double geometric_partial(double q, std::size_t m) {
    double sum = 0.0;
    double term = 1.0;
    for (std::size_t i = 0; i <= m; ++i) {
        sum += term;
        term *= q;
    }
    return sum;
}

PortProbabilities path_sum_single(double k1, double k2, double alpha,
                                  std::size_t steps) {
    const double t1 = 1.0 - k1;
    const double t2 = 1.0 - k2;
    const double loop = t1 * t2 * alpha;  // one full ring round trip

    PortProbabilities result;
    if (steps >= 1) {
        result.thru = t1;
    }
    if (steps >= 2) {
        result.drop = k1 * k2 * std::sqrt(alpha) * geometric_partial(loop, (steps - 2) / 2);
    }
    if (steps >= 3) {
        result.thru += k1 * k1 * t2 * alpha * geometric_partial(loop, (steps - 3) / 2);
    }
    return result;
}

// Exhaustive sum over every walk of length <= steps on the 7-node two-ring
// graph. Transitions are written out from the graph picture, independent of
// the transfer-matrix construction this oracle cross-checks.
struct TwoRingPaths {
    double k1, k2, k3, t1, t2, t3;
    double h1, h2;  // per-half-ring factors alpha_1^{1/2}, alpha_2^{1/2}
    std::size_t max_len;
    double drop = 0.0;
    double thru = 0.0;

    // nodes: 0 = P0, 1..4 = half rings, 5 = PD, 6 = PT
    void walk(int node, double prob, std::size_t len) {
        if (prob == 0.0 || len >= max_len) {
            return;
        }
        switch (node) {
        case 0:
            absorb(6, prob * t1, len + 1);
            walk(1, prob * k1, len + 1);
            break;
        case 1:
            walk(2, prob * t2 * h1, len + 1);
            walk(3, prob * k2 * h1, len + 1);
            break;
        case 2:
            walk(1, prob * t1 * h1, len + 1);
            absorb(6, prob * k1 * h1, len + 1);
            break;
        case 3:
            walk(4, prob * t3 * h2, len + 1);
            absorb(5, prob * k3 * h2, len + 1);
            break;
        case 4:
            walk(2, prob * k2 * h2, len + 1);
            walk(3, prob * t2 * h2, len + 1);
            break;
        default:
            break;
        }
    }

    void absorb(int port, double prob, std::size_t len) {
        if (len > max_len) {
            return;
        }
        (port == 5 ? drop : thru) += prob;
    }
};

PortProbabilities path_sum_double(const RingChainSpec& spec, std::size_t steps) {
    TwoRingPaths paths{
        spec.couplings[0], spec.couplings[1], spec.couplings[2],
        1.0 - spec.couplings[0], 1.0 - spec.couplings[1], 1.0 - spec.couplings[2],
        std::sqrt(spec.loss_per_round[0]), std::sqrt(spec.loss_per_round[1]),
        steps};
    if (steps >= 1) {
        paths.walk(0, 1.0, 0);
    }
    return {paths.drop, paths.thru};
}

} // namespace

std::vector<Eigen::VectorXd> evolve(const ClassicalMatrix& matrix,
                                    const Eigen::VectorXd& p0,
                                    std::size_t steps) {
    require_dimension(matrix.values.rows(), p0.size());
    std::vector<Eigen::VectorXd> states;
    states.reserve(steps + 1);
    states.push_back(p0);
    for (std::size_t n = 0; n < steps; ++n) {
        states.push_back(matrix.values * states.back());
    }
    return states;
}

Eigen::VectorXd steady_state(const ClassicalMatrix& matrix,
                             const Eigen::VectorXd& p0,
                             const SteadyStateOptions& options) {
    require_dimension(matrix.values.rows(), p0.size());
    if (options.tol <= 0.0) {
        throw ValidationError("steady_state: tolerance must be positive");
    }
    const Eigen::Index transient = matrix.values.rows() - 2;

    Eigen::VectorXd state = p0;
    double checkpoint_mass = state.head(transient).sum();
    constexpr std::size_t kCheckInterval = 1024;

    for (std::size_t n = 0; n < options.max_steps; ++n) {
        const double mass = state.head(transient).sum();
        if (mass < options.tol) {
            return state;
        }
        if (n > 0 && n % kCheckInterval == 0) {
            if (mass >= checkpoint_mass) {
                throw ConvergenceError(
                    "steady_state: transient mass is not contracting "
                    "(walker cannot reach an output port)");
            }
            checkpoint_mass = mass;
        }
        state = matrix.values * state;
    }
    throw ConvergenceError("steady_state: step cap reached before tolerance");
}

PortProbabilities closed_form_single(double k1, double k2, double alpha) {
    const double t1 = 1.0 - k1;
    const double t2 = 1.0 - k2;
    const double den = 1.0 - alpha * t1 * t2;
    if (den == 0.0) {
        // k1 = k2 = 0 and alpha = 1: the walker hops straight to Thru.
        return {0.0, 1.0};
    }
    return {k1 * k2 * std::sqrt(alpha) / den,
            (t1 + t2 * alpha - 2.0 * t1 * t2 * alpha) / den};
}

PortProbabilities closed_form_double(double k1, double k2, double k3,
                                     double alpha) {
    const double t1 = 1.0 - k1;
    const double t2 = 1.0 - k2;
    const double t3 = 1.0 - k3;
    const double a2 = alpha * alpha;
    const double den = 1.0 - t1 * t2 * alpha - t2 * t3 * alpha - t1 * t3 * a2 +
                       2.0 * t1 * t2 * t3 * a2;
    if (den == 0.0) {
        // Lossless with two decoupled couplers: Drop is unreachable.
        return {0.0, 1.0};
    }
    const double drop = k1 * k2 * k3 * alpha / den;
    const double thru =
        (t1 + t2 * alpha - 2.0 * t1 * t2 * alpha -
         (t1 * t2 - (1.0 - 2.0 * t1) * (1.0 - 2.0 * t2) * alpha) * t3 * alpha) /
        den;
    return {drop, thru};
}

PortProbabilities path_sum_oracle(const RingChainSpec& spec, std::size_t steps) {
    spec.validate();
    switch (spec.num_rings()) {
    case 1:
        return path_sum_single(spec.couplings[0], spec.couplings[1],
                               spec.loss_per_round[0], steps);
    case 2:
        return path_sum_double(spec, steps);
    default:
        throw ValidationError("path_sum_oracle: only N in {1, 2} is supported");
    }
}

} // namespace ringwalk
