#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace ringwalk {

/// Directional-coupler geometry plus the two supermode effective indices
/// (computed externally; mode solving is out of scope here).
struct CouplerSpec {
    double wavelength_m = 0.0;            // lambda
    double n_eff1 = 0.0;                  // symmetric supermode index
    double n_eff2 = 0.0;                  // antisymmetric supermode index
    double gap_m = 0.0;                   // d
    double straight_length_m = 0.0;       // L_s
    double min_coupling_distance_m = 0.0; // d_c
    double ridge_half_width_m = 0.0;      // r_w
    double bend_radius_m = 0.0;           // r_b

    void validate() const;  // throws ValidationError with a diagnostic
};

/// Beat length L_b = lambda / (2 (n_eff1 - n_eff2)). Requires n_eff1 > n_eff2.
double beat_length(double wavelength_m, double n_eff1, double n_eff2);

/// Effective coupler length, straight segment plus the curved approach:
/// L_e = L_s + 2 r_b acos(1 - (d_c - (d - 2 r_w)) / (2 r_b + 2 r_w)).
double effective_length(const CouplerSpec& spec);

/// kappa^2 = sin^2(pi/2 * L_e / L_b), in [0, 1]; feeds RingChainSpec
/// couplings directly.
double coupling_coefficient(double effective_length_m, double beat_length_m);

/// Tabulated transmission per 90 degrees vs bend radius, ingested from
/// simulation or measurement data.
struct BendLossTable {
    std::vector<std::pair<double, double>> samples;  // radius_m -> transmission
    std::string tag;

    void validate() const;  // radii strictly increasing, transmissions in [0,1]
};

/// Parses CSV rows "radius_m,transmission". Lines starting with '#' and a
/// single header line are skipped.
BendLossTable load_bend_loss_csv(std::istream& in, std::string tag = {});
BendLossTable load_bend_loss_file(const std::string& path, std::string tag = {});

/// Smallest radius whose (linearly interpolated) transmission reaches
/// min_transmission; empty when no tabulated segment gets there.
std::optional<double> min_radius_for_loss(const BendLossTable& table,
                                          double min_transmission);

} // namespace ringwalk
