#include "ringwalk/quantum.hpp"

#include "ringwalk/errors.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace ringwalk {

namespace {

using cplx = std::complex<double>;

void require_dimension(Eigen::Index rows, Eigen::Index size) {
    if (rows != size) {
        throw ValidationError("state dimension " + std::to_string(size) +
                              " does not match matrix dimension " +
                              std::to_string(rows));
    }
}

cplx geometric_partial(cplx q, std::size_t m) {
    cplx sum = 0.0;
    cplx term = 1.0;
    for (std::size_t i = 0; i <= m; ++i) {
        sum += term;
        term *= q;
    }
    return sum;
}

} // namespace

RoundTripFactor RoundTripFactor::from_intensity_loss(double alpha, double theta) {
    if (!(alpha > 0.0 && alpha <= 1.0)) {
        throw ValidationError("round-trip factor: loss must lie in (0, 1]");
    }
    return {std::sqrt(alpha), theta};
}

cplx RoundTripFactor::value() const {
    return std::polar(amplitude, phase);
}

cplx RoundTripFactor::half() const {
    return std::polar(std::sqrt(amplitude), 0.5 * phase);
}

std::vector<Eigen::VectorXcd> evolve_amplitudes(const QuantumMatrix& matrix,
                                                const Eigen::VectorXcd& a0,
                                                std::size_t steps) {
    require_dimension(matrix.values.rows(), a0.size());
    std::vector<Eigen::VectorXcd> states;
    states.reserve(steps + 1);
    states.push_back(a0);
    for (std::size_t n = 0; n < steps; ++n) {
        states.push_back(matrix.values * states.back());
    }
    return states;
}

AmplitudeResult steady_amplitudes_single(double k1, double k2,
                                         const RoundTripFactor& gamma) {
    const double t1 = 1.0 - k1;
    const double t2 = 1.0 - k2;
    const cplx g = gamma.value();
    const cplx den = 1.0 - std::sqrt(t1 * t2) * g;
    if (den == 0.0) {
        // k1 = k2 = 0 at resonance, lossless: straight pass to Thru.
        return {0.0, 1.0};
    }
    const cplx drop = -std::sqrt(k1 * k2) * gamma.half() / den;
    const cplx thru = (std::sqrt(t1) - std::sqrt(t2) * g) / den;
    return {drop, thru};
}

AmplitudeResult steady_amplitudes_double(double k1, double k2, double k3,
                                         const RoundTripFactor& gamma1,
                                         const RoundTripFactor& gamma2) {
    if (k1 == 0.0) {
        // Input coupler fully reflective: nothing enters the rings.
        return {0.0, 1.0};
    }
    if (k2 == 0.0) {
        // Ring B unreachable; ring A acts as an all-pass on the Thru arm.
        const AmplitudeResult ring_a = steady_amplitudes_single(k1, 0.0, gamma1);
        return {0.0, ring_a.thru};
    }
    const double t1 = 1.0 - k1;
    const double t2 = 1.0 - k2;
    const double t3 = 1.0 - k3;
    const cplx g1 = gamma1.value();
    const cplx g2 = gamma2.value();
    const cplx den = 1.0 - std::sqrt(t2 * t3) * g2 - std::sqrt(t1 * t2) * g1 +
                     std::sqrt(t1 * t3) * g1 * g2;
    const cplx drop =
        -std::sqrt(k1 * k2 * k3) * gamma1.half() * gamma2.half() / den;
    const cplx thru = (std::sqrt(t1) - std::sqrt(t2) * g1 -
                       std::sqrt(t1 * t2 * t3) * g2 + std::sqrt(t3) * g1 * g2) /
                      den;
    return {drop, thru};
}

AmplitudeResult path_sum_amplitude_oracle(const RingChainSpec& spec,
                                          std::size_t steps) {
    spec.validate();
    if (spec.num_rings() != 1) {
        throw ValidationError(
            "path_sum_amplitude_oracle: only N = 1 is supported");
    }
    const double k1 = spec.couplings[0];
    const double k2 = spec.couplings[1];
    const double t1 = 1.0 - k1;
    const double t2 = 1.0 - k2;
    const RoundTripFactor gamma =
        RoundTripFactor::from_intensity_loss(spec.loss_per_round[0], spec.phases[0]);
    const cplx loop = std::sqrt(t1 * t2) * gamma.value();

    AmplitudeResult result;
    if (steps >= 1) {
        result.thru = std::sqrt(t1);
    }
    if (steps >= 2) {
        result.drop = -std::sqrt(k1 * k2) * gamma.half() *
                      geometric_partial(loop, (steps - 2) / 2);
    }
    if (steps >= 3) {
        result.thru -= k1 * std::sqrt(t2) * gamma.value() *
                       geometric_partial(loop, (steps - 3) / 2);
    }
    return result;
}

namespace detail {

AmplitudeResult substituted_single_ring(double k1, double k2,
                                        const RoundTripFactor& gamma) {
    // Classical closed forms in their path-sum shape,
    //   p_D = (k1)(k2) alpha^{1/2} / (1 - t1 t2 alpha)
    //   p_T = t1 + (k1)(k1) t2 alpha / (1 - t1 t2 alpha)
    // evaluated after k_i -> k_i^{1/2} e^{i phi}, t_i -> t_i^{1/2},
    // alpha -> gamma. Unitarity fixes phi = pi on the ring-entry crossing
    // of coupler 1 and phi = 0 on every other crossing, so the k1^2 of the
    // Thru path splits into one entry and one exit factor.
    const cplx k1_enter = std::polar(std::sqrt(k1), std::numbers::pi);
    const cplx k1_exit = std::sqrt(k1);
    const cplx k2_amp = std::sqrt(k2);
    const cplx t1_amp = std::sqrt(1.0 - k1);
    const cplx t2_amp = std::sqrt(1.0 - k2);
    const cplx g = gamma.value();
    const cplx den = 1.0 - t1_amp * t2_amp * g;
    if (den == 0.0) {
        return {0.0, 1.0};
    }
    const cplx drop = k1_enter * k2_amp * gamma.half() / den;
    const cplx thru = t1_amp + k1_enter * k1_exit * t2_amp * g / den;
    return {drop, thru};
}

} // namespace detail

} // namespace ringwalk
