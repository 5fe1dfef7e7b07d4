#pragma once

#include "ringwalk/transfer.hpp"

#include <complex>
#include <cstddef>
#include <vector>

namespace ringwalk {

/// Complex factor gamma acquired per full ring round trip. Its magnitude is
/// the round-trip *amplitude* transmission, i.e. the square root of the
/// RingChainSpec loss alpha (which is amplitude-squared), so that one
/// half-ring costs the same intensity alpha^{1/2} in both walk regimes.
/// The phase is kept unreduced; half() halves it, so a half-ring carries
/// e^{i theta/2} regardless of how many multiples of 2*pi theta holds.
struct RoundTripFactor {
    double amplitude = 1.0;  // |gamma| in (0, 1]
    double phase = 0.0;      // theta, radians, raw

    static RoundTripFactor from_intensity_loss(double alpha, double theta);
    static RoundTripFactor lossless(double theta) { return {1.0, theta}; }

    std::complex<double> value() const;  // gamma = |gamma| e^{i theta}
    std::complex<double> half() const;   // gamma^{1/2} = |gamma|^{1/2} e^{i theta/2}
    bool lossless_factor() const { return amplitude == 1.0; }
};

/// Cumulative absorbed amplitudes; probabilities are their squared moduli.
struct AmplitudeResult {
    std::complex<double> drop{0.0, 0.0};
    std::complex<double> thru{0.0, 0.0};

    double drop_probability() const { return std::norm(drop); }
    double thru_probability() const { return std::norm(thru); }
};

/// Amplitude states a^(m) = T^m a0 for m = 0..steps. The PD/PT entries
/// accumulate coherently, so |a_D(m)|^2 is the cumulative Drop probability.
std::vector<Eigen::VectorXcd> evolve_amplitudes(const QuantumMatrix& matrix,
                                                const Eigen::VectorXcd& a0,
                                                std::size_t steps);

/// Single-ring steady-state amplitudes:
///   a_D = -(k1 k2 gamma)^{1/2} / (1 - (t1 t2)^{1/2} gamma)
///   a_T = (t1^{1/2} - t2^{1/2} gamma) / (1 - (t1 t2)^{1/2} gamma)
/// The 0/0 point (k1 = k2 = 0, gamma = 1) resolves to (0, 1).
AmplitudeResult steady_amplitudes_single(double k1, double k2,
                                         const RoundTripFactor& gamma);

/// Two-ring steady-state amplitudes with per-ring factors:
///   a_D = -(k1 k2 k3 g1 g2)^{1/2} / D
///   a_T = (t1^{1/2} - t2^{1/2} g1 - (t1 t2 t3)^{1/2} g2 + t3^{1/2} g1 g2) / D
///   D   = 1 - (t2 t3)^{1/2} g2 - (t1 t2)^{1/2} g1 + (t1 t3)^{1/2} g1 g2
/// Degenerate denominators (k1 = 0, or k2 = 0 with a resonant decoupled
/// remainder) resolve to the absorbing-chain limits.
AmplitudeResult steady_amplitudes_double(double k1, double k2, double k3,
                                         const RoundTripFactor& gamma1,
                                         const RoundTripFactor& gamma2);

/// Cumulative amplitudes after `steps` hops from the truncated geometric
/// amplitude series with ratio (t1 t2)^{1/2} gamma. Single ring only.
AmplitudeResult path_sum_amplitude_oracle(const RingChainSpec& spec,
                                          std::size_t steps);

namespace detail {

/// Single-ring classical closed forms with the amplitude substitutions
/// applied (k_i -> k_i^{1/2} e^{i phi_i} with phi_1 = pi, t_i -> t_i^{1/2},
/// alpha -> gamma). Used in tests to check it reproduces
/// steady_amplitudes_single; not part of the public surface.
AmplitudeResult substituted_single_ring(double k1, double k2,
                                        const RoundTripFactor& gamma);

} // namespace detail

} // namespace ringwalk
