#pragma once

#include <cstddef>
#include <optional>
#include <vector>

namespace ringwalk {

/// Vacuum speed of light, m/s (SI definition, exact).
inline constexpr double kSpeedOfLight = 299792458.0;

/// Round-trip phase of a photon in a ring of radius `radius_m`:
/// theta = 2*pi*n_eff*(2*pi*r)/lambda. Returned raw (not reduced mod 2*pi).
double phase_from_geometry(double radius_m, double n_eff, double wavelength_m);

/// Round-trip intensity transmission from absorption and bending-loss
/// coefficients: alpha = exp(-(alpha_t*(L + L_c) + alpha_b*L)), with L the
/// ring circumference and L_c the coupler length (racetrack designs).
double loss_from_geometry(double absorption_per_m, double bend_loss_per_m,
                          double ring_length_m, double coupler_length_m);

/// Time for light to traverse one half-ring: dt = pi*r*n_eff/c. One walk
/// step corresponds to this interval.
double half_ring_time(double radius_m, double n_eff);

/// Principal value of a phase in [0, 2*pi).
double reduce_phase(double theta);

/// Physical description of the rings; phases and losses derive from it.
struct RingGeometry {
    std::vector<double> radius_m;    // per ring
    double n_eff = 1.0;              // effective index (wavelength-independent)
    double wavelength_m = 0.0;
    double coupler_length_m = 0.0;   // L_c, > 0 for racetrack rings
    double absorption_per_m = 0.0;   // alpha_t
    double bend_loss_per_m = 0.0;    // alpha_b

    double ring_phase(std::size_t ring) const;
    double ring_loss(std::size_t ring) const;
    void validate(std::size_t rings) const;
};

/// N series-coupled rings: N+1 coupling probabilities k_i (k_i + t_i = 1),
/// and per-ring round-trip loss alpha_j (amplitude-squared transmission) and
/// phase theta_j. Either give (loss, phases) directly or provide geometry;
/// if both are given they must agree to 1e-12.
struct RingChainSpec {
    std::vector<double> couplings;       // k_1 .. k_{N+1}
    std::vector<double> loss_per_round;  // alpha_j in (0, 1]
    std::vector<double> phases;          // theta_j, radians, stored unreduced
    std::optional<RingGeometry> geometry;

    static RingChainSpec parametric(std::vector<double> couplings,
                                    std::vector<double> loss_per_round,
                                    std::vector<double> phases);

    /// Single-alpha / single-theta sugar over the per-ring lists.
    static RingChainSpec uniform(std::vector<double> couplings,
                                 double loss_per_round, double phase);

    static RingChainSpec from_geometry(std::vector<double> couplings,
                                       RingGeometry geometry);

    std::size_t num_rings() const {
        return couplings.empty() ? 0 : couplings.size() - 1;
    }

    /// Throws ValidationError on any violated invariant.
    void validate() const;
};

} // namespace ringwalk
