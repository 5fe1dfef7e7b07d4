#include "ringwalk/coupler.hpp"

#include "ringwalk/errors.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>

namespace ringwalk {

namespace {

void require(bool ok, const std::string& message) {
    if (!ok) {
        throw ValidationError(message);
    }
}

} // namespace

void CouplerSpec::validate() const {
    require(wavelength_m > 0.0, "coupler: wavelength must be positive");
    require(n_eff1 > n_eff2,
            "coupler: n_eff1 must exceed n_eff2 (symmetric above antisymmetric)");
    require(straight_length_m >= 0.0, "coupler: straight length must be >= 0");
    require(bend_radius_m > 0.0, "coupler: bend radius must be positive");
    require(ridge_half_width_m >= 0.0, "coupler: ridge half-width must be >= 0");
    require(gap_m >= 2.0 * ridge_half_width_m,
            "coupler: gap smaller than the ridge width (overlapping ridges)");
    const double rise = min_coupling_distance_m - (gap_m - 2.0 * ridge_half_width_m);
    const double span = 2.0 * bend_radius_m + 2.0 * ridge_half_width_m;
    const double arg = 1.0 - rise / span;
    require(arg >= -1.0 && arg <= 1.0,
            "coupler: curved-section arccos argument " + std::to_string(arg) +
                " outside [-1, 1]; check d, d_c, r_w, r_b");
}

double beat_length(double wavelength_m, double n_eff1, double n_eff2) {
    require(wavelength_m > 0.0, "beat_length: wavelength must be positive");
    require(n_eff1 > n_eff2, "beat_length: requires n_eff1 > n_eff2");
    return 0.5 * wavelength_m / (n_eff1 - n_eff2);
}

double effective_length(const CouplerSpec& spec) {
    spec.validate();
    const double rise =
        spec.min_coupling_distance_m - (spec.gap_m - 2.0 * spec.ridge_half_width_m);
    const double span = 2.0 * spec.bend_radius_m + 2.0 * spec.ridge_half_width_m;
    return spec.straight_length_m +
           2.0 * spec.bend_radius_m * std::acos(1.0 - rise / span);
}

double coupling_coefficient(double effective_length_m, double beat_length_m) {
    require(beat_length_m > 0.0, "coupling_coefficient: beat length must be positive");
    require(effective_length_m >= 0.0,
            "coupling_coefficient: effective length must be >= 0");
    const double s =
        std::sin(0.5 * std::numbers::pi * effective_length_m / beat_length_m);
    return s * s;
}

void BendLossTable::validate() const {
    require(!samples.empty(), "bend-loss table: no samples");
    double previous = -1.0;
    for (const auto& [radius, transmission] : samples) {
        require(radius > previous, "bend-loss table: radii must strictly increase");
        require(transmission >= 0.0 && transmission <= 1.0,
                "bend-loss table: transmissions must lie in [0, 1]");
        previous = radius;
    }
}

BendLossTable load_bend_loss_csv(std::istream& in, std::string tag) {
    BendLossTable table;
    table.tag = std::move(tag);
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line.front() == '#') {
            continue;
        }
        std::istringstream row(line);
        std::string radius_text;
        std::string transmission_text;
        if (!std::getline(row, radius_text, ',') ||
            !std::getline(row, transmission_text)) {
            throw ValidationError("bend-loss table: malformed row '" + line + "'");
        }
        try {
            table.samples.emplace_back(std::stod(radius_text),
                                       std::stod(transmission_text));
        } catch (const std::exception&) {
            if (table.samples.empty()) {
                continue;  // header line
            }
            throw ValidationError("bend-loss table: non-numeric row '" + line + "'");
        }
    }
    table.validate();
    return table;
}

BendLossTable load_bend_loss_file(const std::string& path, std::string tag) {
    std::ifstream in(path);
    if (!in) {
        throw ValidationError("bend-loss table: cannot open '" + path + "'");
    }
    return load_bend_loss_csv(in, std::move(tag));
}

std::optional<double> min_radius_for_loss(const BendLossTable& table,
                                          double min_transmission) {
    table.validate();
    require(min_transmission >= 0.0 && min_transmission <= 1.0,
            "min_radius_for_loss: threshold must lie in [0, 1]");
    for (std::size_t i = 0; i < table.samples.size(); ++i) {
        const auto& [radius, transmission] = table.samples[i];
        if (transmission >= min_transmission) {
            if (i == 0) {
                return radius;
            }
            // First upward crossing: interpolate inside the segment.
            const auto& [r0, y0] = table.samples[i - 1];
            const double fraction = (min_transmission - y0) / (transmission - y0);
            return r0 + fraction * (radius - r0);
        }
    }
    return std::nullopt;
}

} // namespace ringwalk
