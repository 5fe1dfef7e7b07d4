#include "ringwalk/config.hpp"

#include "ringwalk/errors.hpp"

#include <json.hpp>

#include <fstream>
#include <sstream>

namespace ringwalk {

namespace {

using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

void check_keys(const json& object, std::initializer_list<const char*> allowed,
                const char* context) {
    for (const auto& [key, value] : object.items()) {
        bool known = false;
        for (const char* name : allowed) {
            if (key == name) {
                known = true;
                break;
            }
        }
        if (!known) {
            throw ConfigError(std::string("config: unknown key '") + key +
                              "' in " + context);
        }
    }
}

double get_number(const json& object, const char* key) {
    const auto it = object.find(key);
    if (it == object.end() || !it->is_number()) {
        throw ConfigError(std::string("config: '") + key +
                          "' must be present and numeric");
    }
    return it->get<double>();
}

double get_number_or(const json& object, const char* key, double fallback) {
    const auto it = object.find(key);
    if (it == object.end()) {
        return fallback;
    }
    if (!it->is_number()) {
        throw ConfigError(std::string("config: '") + key + "' must be numeric");
    }
    return it->get<double>();
}

// Accepts a scalar (broadcast over rings) or a per-ring list.
std::vector<double> number_list(const json& value, std::size_t count,
                                const char* key) {
    std::vector<double> out;
    if (value.is_number()) {
        out.assign(count, value.get<double>());
        return out;
    }
    if (!value.is_array()) {
        throw ConfigError(std::string("config: '") + key +
                          "' must be a number or an array of numbers");
    }
    for (const json& item : value) {
        if (!item.is_number()) {
            throw ConfigError(std::string("config: '") + key +
                              "' has a non-numeric entry");
        }
        out.push_back(item.get<double>());
    }
    return out;
}

RingChainSpec parse_ring_chain(const json& section) {
    check_keys(section, {"couplings", "loss_per_round", "phases", "geometry"},
               "ring_chain");
    const auto couplings_it = section.find("couplings");
    if (couplings_it == section.end()) {
        throw ConfigError("config: ring_chain.couplings is required");
    }
    std::vector<double> couplings =
        number_list(*couplings_it, 0, "couplings");
    if (couplings.size() < 2) {
        throw ConfigError("config: need at least two couplings (one ring)");
    }
    const std::size_t rings = couplings.size() - 1;

    RingChainSpec spec;
    spec.couplings = std::move(couplings);

    if (const auto geo_it = section.find("geometry"); geo_it != section.end()) {
        const json& geo = *geo_it;
        check_keys(geo,
                   {"radius_m", "n_eff", "wavelength_m", "coupler_length_m",
                    "absorption_per_m", "bend_loss_per_m"},
                   "ring_chain.geometry");
        RingGeometry geometry;
        const auto radius_it = geo.find("radius_m");
        if (radius_it == geo.end()) {
            throw ConfigError("config: geometry.radius_m is required");
        }
        geometry.radius_m = number_list(*radius_it, rings, "radius_m");
        geometry.n_eff = get_number(geo, "n_eff");
        geometry.wavelength_m = get_number(geo, "wavelength_m");
        geometry.coupler_length_m = get_number_or(geo, "coupler_length_m", 0.0);
        geometry.absorption_per_m = get_number_or(geo, "absorption_per_m", 0.0);
        geometry.bend_loss_per_m = get_number_or(geo, "bend_loss_per_m", 0.0);
        geometry.validate(rings);

        spec.geometry = geometry;
        if (const auto it = section.find("loss_per_round"); it != section.end()) {
            spec.loss_per_round = number_list(*it, rings, "loss_per_round");
        } else {
            for (std::size_t j = 0; j < rings; ++j) {
                spec.loss_per_round.push_back(geometry.ring_loss(j));
            }
        }
        if (const auto it = section.find("phases"); it != section.end()) {
            spec.phases = number_list(*it, rings, "phases");
        } else {
            for (std::size_t j = 0; j < rings; ++j) {
                spec.phases.push_back(geometry.ring_phase(j));
            }
        }
    } else {
        if (const auto it = section.find("loss_per_round"); it != section.end()) {
            spec.loss_per_round = number_list(*it, rings, "loss_per_round");
        } else {
            spec.loss_per_round.assign(rings, 1.0);
        }
        const auto phases_it = section.find("phases");
        if (phases_it == section.end()) {
            throw ConfigError(
                "config: ring_chain.phases is required without geometry");
        }
        spec.phases = number_list(*phases_it, rings, "phases");
    }
    spec.validate();
    return spec;
}

CouplerSpec parse_coupler(const json& section) {
    check_keys(section,
               {"wavelength_m", "n_eff1", "n_eff2", "gap_m", "straight_length_m",
                "min_coupling_distance_m", "ridge_half_width_m", "bend_radius_m"},
               "coupler");
    CouplerSpec spec;
    spec.wavelength_m = get_number(section, "wavelength_m");
    spec.n_eff1 = get_number(section, "n_eff1");
    spec.n_eff2 = get_number(section, "n_eff2");
    spec.gap_m = get_number(section, "gap_m");
    spec.straight_length_m = get_number(section, "straight_length_m");
    spec.min_coupling_distance_m = get_number(section, "min_coupling_distance_m");
    spec.ridge_half_width_m = get_number(section, "ridge_half_width_m");
    spec.bend_radius_m = get_number(section, "bend_radius_m");
    spec.validate();
    return spec;
}

AxisConfig parse_axis(const json& section, const char* context) {
    check_keys(section, {"name", "min", "max", "count"}, context);
    AxisConfig axis;
    const auto name_it = section.find("name");
    if (name_it == section.end() || !name_it->is_string()) {
        throw ConfigError(std::string("config: ") + context +
                          ".name must be a string");
    }
    axis.name = name_it->get<std::string>();
    axis.lo = get_number(section, "min");
    axis.hi = get_number(section, "max");
    const double count = get_number(section, "count");
    if (count < 1.0 || count != static_cast<double>(static_cast<std::size_t>(count))) {
        throw ConfigError(std::string("config: ") + context +
                          ".count must be a positive integer");
    }
    axis.count = static_cast<std::size_t>(count);
    return axis;
}

std::size_t positive_integer(const json& object, const char* key,
                             std::size_t fallback) {
    const double value =
        get_number_or(object, key, static_cast<double>(fallback));
    if (value < 1.0 ||
        value != static_cast<double>(static_cast<std::size_t>(value))) {
        throw ValidationError(std::string("config: '") + key +
                              "' must be a positive integer");
    }
    return static_cast<std::size_t>(value);
}

} // namespace

RunConfig parse_run_config(const std::string& json_text) {
    json document;
    try {
        document = json::parse(json_text);
    } catch (const json::parse_error& error) {
        throw ConfigError(std::string("config: ") + error.what());
    }
    if (!document.is_object()) {
        throw ConfigError("config: top level must be an object");
    }
    check_keys(document, {"ring_chain", "coupler", "output", "run", "sweep"},
               "the top level");

    RunConfig config;
    try {
        const bool has_chain = document.contains("ring_chain");
        const bool has_coupler = document.contains("coupler");
        if (has_chain == has_coupler) {
            throw ConfigError(
                "config: exactly one of ring_chain / coupler is required");
        }
        if (has_chain) {
            config.ring_chain = parse_ring_chain(document.at("ring_chain"));
        } else {
            config.coupler = parse_coupler(document.at("coupler"));
        }

        if (document.contains("sweep")) {
            const json& sweep = document.at("sweep");
            check_keys(sweep, {"axis1", "axis2", "links"}, "sweep");
            if (sweep.contains("axis1")) {
                config.axis1 = parse_axis(sweep.at("axis1"), "sweep.axis1");
            }
            if (sweep.contains("axis2")) {
                config.axis2 = parse_axis(sweep.at("axis2"), "sweep.axis2");
            }
            if (sweep.contains("links")) {
                for (const json& entry : sweep.at("links")) {
                    check_keys(entry, {"target", "source", "complement"},
                               "sweep.links[]");
                    CouplingLink link;
                    const double target = get_number(entry, "target");
                    const double source = get_number(entry, "source");
                    if (target < 1.0 || source < 1.0) {
                        throw ConfigError(
                            "config: link target/source must be 1-based indices");
                    }
                    link.target = static_cast<std::size_t>(target);
                    link.source = static_cast<std::size_t>(source);
                    if (entry.contains("complement")) {
                        if (!entry.at("complement").is_boolean()) {
                            throw ConfigError(
                                "config: links[].complement must be a boolean");
                        }
                        link.complement = entry.at("complement").get<bool>();
                    }
                    config.links.push_back(link);
                }
            }
        }

        if (document.contains("run")) {
            const json& run = document.at("run");
            check_keys(run,
                       {"tol", "n_max", "samples", "p_g", "threads", "regime",
                        "metric"},
                       "run");
            config.run.tol = get_number_or(run, "tol", config.run.tol);
            config.run.n_max = positive_integer(run, "n_max", config.run.n_max);
            config.run.samples =
                positive_integer(run, "samples", config.run.samples);
            config.run.p_g = get_number_or(run, "p_g", config.run.p_g);
            if (run.contains("threads")) {
                config.run.threads =
                    static_cast<unsigned>(positive_integer(run, "threads", 1));
            }
            if (run.contains("regime")) {
                config.run.regime =
                    regime_from_name(run.at("regime").get<std::string>());
            }
            if (run.contains("metric")) {
                config.run.metric =
                    metric_from_name(run.at("metric").get<std::string>());
            }
            if (config.run.tol <= 0.0) {
                throw ValidationError("config: run.tol must be positive");
            }
            if (!(config.run.p_g > 0.0 && config.run.p_g < 1.0)) {
                throw ValidationError("config: run.p_g must lie in (0, 1)");
            }
        }

        if (document.contains("output")) {
            const json& output = document.at("output");
            check_keys(output, {"path", "format", "gnuplot"}, "output");
            if (output.contains("path")) {
                config.output.path = output.at("path").get<std::string>();
            }
            if (output.contains("format")) {
                const std::string format = output.at("format").get<std::string>();
                if (format == "csv") {
                    config.output.format = OutputFormat::csv;
                } else if (format == "json") {
                    config.output.format = OutputFormat::json;
                } else {
                    throw ConfigError("config: output.format must be csv or json");
                }
            }
            if (output.contains("gnuplot")) {
                config.output.gnuplot = output.at("gnuplot").get<bool>();
            }
        }
    } catch (const json::exception& error) {
        throw ConfigError(std::string("config: ") + error.what());
    }
    return config;
}

RunConfig load_run_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("config: cannot open '" + path + "'");
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_run_config(buffer.str());
}

std::string serialize_run_config(const RunConfig& config) {
    ordered_json document;
    if (config.ring_chain) {
        const RingChainSpec& spec = *config.ring_chain;
        ordered_json section;
        section["couplings"] = spec.couplings;
        section["loss_per_round"] = spec.loss_per_round;
        section["phases"] = spec.phases;
        if (spec.geometry) {
            const RingGeometry& geometry = *spec.geometry;
            section["geometry"] = {{"radius_m", geometry.radius_m},
                                   {"n_eff", geometry.n_eff},
                                   {"wavelength_m", geometry.wavelength_m},
                                   {"coupler_length_m", geometry.coupler_length_m},
                                   {"absorption_per_m", geometry.absorption_per_m},
                                   {"bend_loss_per_m", geometry.bend_loss_per_m}};
        }
        document["ring_chain"] = std::move(section);
    }
    if (config.coupler) {
        const CouplerSpec& spec = *config.coupler;
        document["coupler"] = {
            {"wavelength_m", spec.wavelength_m},
            {"n_eff1", spec.n_eff1},
            {"n_eff2", spec.n_eff2},
            {"gap_m", spec.gap_m},
            {"straight_length_m", spec.straight_length_m},
            {"min_coupling_distance_m", spec.min_coupling_distance_m},
            {"ridge_half_width_m", spec.ridge_half_width_m},
            {"bend_radius_m", spec.bend_radius_m}};
    }
    if (config.axis1 || config.axis2 || !config.links.empty()) {
        ordered_json sweep;
        const auto axis_json = [](const AxisConfig& axis) {
            return ordered_json{{"name", axis.name},
                                {"min", axis.lo},
                                {"max", axis.hi},
                                {"count", axis.count}};
        };
        if (config.axis1) {
            sweep["axis1"] = axis_json(*config.axis1);
        }
        if (config.axis2) {
            sweep["axis2"] = axis_json(*config.axis2);
        }
        if (!config.links.empty()) {
            ordered_json links = ordered_json::array();
            for (const CouplingLink& link : config.links) {
                links.push_back({{"target", link.target},
                                 {"source", link.source},
                                 {"complement", link.complement}});
            }
            sweep["links"] = std::move(links);
        }
        document["sweep"] = std::move(sweep);
    }
    document["run"] = {{"tol", config.run.tol},
                       {"n_max", config.run.n_max},
                       {"samples", config.run.samples},
                       {"p_g", config.run.p_g},
                       {"threads", config.run.threads},
                       {"regime", regime_name(config.run.regime)},
                       {"metric", metric_name(config.run.metric)}};
    document["output"] = {
        {"path", config.output.path},
        {"format", config.output.format == OutputFormat::csv ? "csv" : "json"},
        {"gnuplot", config.output.gnuplot}};
    return document.dump();
}

} // namespace ringwalk
