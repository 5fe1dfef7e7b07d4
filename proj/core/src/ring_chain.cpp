#include "ringwalk/ring_chain.hpp"

#include "ringwalk/errors.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace ringwalk {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kGeometryMatchTol = 1e-12;

void require(bool ok, const std::string& message) {
    if (!ok) {
        throw ValidationError(message);
    }
}

} // namespace

double phase_from_geometry(double radius_m, double n_eff, double wavelength_m) {
    require(radius_m > 0.0, "phase_from_geometry: radius must be positive");
    require(n_eff > 0.0, "phase_from_geometry: n_eff must be positive");
    require(wavelength_m > 0.0, "phase_from_geometry: wavelength must be positive");
    const double circumference = kTwoPi * radius_m;
    return kTwoPi * n_eff * circumference / wavelength_m;
}

double loss_from_geometry(double absorption_per_m, double bend_loss_per_m,
                          double ring_length_m, double coupler_length_m) {
    require(absorption_per_m >= 0.0, "loss_from_geometry: absorption must be >= 0");
    require(bend_loss_per_m >= 0.0, "loss_from_geometry: bend loss must be >= 0");
    require(ring_length_m > 0.0, "loss_from_geometry: ring length must be positive");
    require(coupler_length_m >= 0.0, "loss_from_geometry: coupler length must be >= 0");
    return std::exp(-(absorption_per_m * (ring_length_m + coupler_length_m) +
                      bend_loss_per_m * ring_length_m));
}

double half_ring_time(double radius_m, double n_eff) {
    require(radius_m > 0.0, "half_ring_time: radius must be positive");
    require(n_eff > 0.0, "half_ring_time: n_eff must be positive");
    return std::numbers::pi * radius_m * n_eff / kSpeedOfLight;
}

double reduce_phase(double theta) {
    double reduced = std::fmod(theta, kTwoPi);
    if (reduced < 0.0) {
        reduced += kTwoPi;
    }
    return reduced;
}

double RingGeometry::ring_phase(std::size_t ring) const {
    return phase_from_geometry(radius_m.at(ring), n_eff, wavelength_m);
}

double RingGeometry::ring_loss(std::size_t ring) const {
    const double circumference = kTwoPi * radius_m.at(ring);
    return loss_from_geometry(absorption_per_m, bend_loss_per_m, circumference,
                              coupler_length_m);
}

void RingGeometry::validate(std::size_t rings) const {
    require(radius_m.size() == rings,
            "geometry: need one radius per ring (" + std::to_string(rings) + ")");
    for (double r : radius_m) {
        require(r > 0.0, "geometry: radii must be positive");
    }
    require(n_eff > 0.0, "geometry: n_eff must be positive");
    require(wavelength_m > 0.0, "geometry: wavelength must be positive");
    require(coupler_length_m >= 0.0, "geometry: coupler length must be >= 0");
    require(absorption_per_m >= 0.0, "geometry: absorption must be >= 0");
    require(bend_loss_per_m >= 0.0, "geometry: bend loss must be >= 0");
}

RingChainSpec RingChainSpec::parametric(std::vector<double> couplings,
                                        std::vector<double> loss_per_round,
                                        std::vector<double> phases) {
    RingChainSpec spec;
    spec.couplings = std::move(couplings);
    spec.loss_per_round = std::move(loss_per_round);
    spec.phases = std::move(phases);
    spec.validate();
    return spec;
}

RingChainSpec RingChainSpec::uniform(std::vector<double> couplings,
                                     double loss_per_round, double phase) {
    RingChainSpec spec;
    spec.couplings = std::move(couplings);
    const std::size_t rings = spec.num_rings();
    spec.loss_per_round.assign(rings, loss_per_round);
    spec.phases.assign(rings, phase);
    spec.validate();
    return spec;
}

RingChainSpec RingChainSpec::from_geometry(std::vector<double> couplings,
                                           RingGeometry geometry) {
    RingChainSpec spec;
    spec.couplings = std::move(couplings);
    const std::size_t rings = spec.num_rings();
    geometry.validate(rings);
    spec.loss_per_round.reserve(rings);
    spec.phases.reserve(rings);
    for (std::size_t j = 0; j < rings; ++j) {
        spec.loss_per_round.push_back(geometry.ring_loss(j));
        spec.phases.push_back(geometry.ring_phase(j));
    }
    spec.geometry = std::move(geometry);
    spec.validate();
    return spec;
}

void RingChainSpec::validate() const {
    const std::size_t rings = num_rings();
    require(rings >= 1, "ring chain: need at least one ring (N >= 1)");
    require(couplings.size() == rings + 1,
            "ring chain: need N+1 couplings for N rings");
    for (double k : couplings) {
        require(k >= 0.0 && k <= 1.0, "ring chain: couplings must lie in [0, 1]");
    }
    require(loss_per_round.size() == rings,
            "ring chain: need one loss value per ring");
    for (double a : loss_per_round) {
        require(a > 0.0 && a <= 1.0, "ring chain: losses must lie in (0, 1]");
    }
    require(phases.size() == rings, "ring chain: need one phase per ring");
    if (geometry) {
        geometry->validate(rings);
        for (std::size_t j = 0; j < rings; ++j) {
            require(std::abs(geometry->ring_phase(j) - phases[j]) <= kGeometryMatchTol,
                    "ring chain: phase " + std::to_string(j + 1) +
                        " disagrees with geometry");
            require(std::abs(geometry->ring_loss(j) - loss_per_round[j]) <=
                        kGeometryMatchTol,
                    "ring chain: loss " + std::to_string(j + 1) +
                        " disagrees with geometry");
        }
    }
}

} // namespace ringwalk
