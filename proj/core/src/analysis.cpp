#include "ringwalk/analysis.hpp"

#include "ringwalk/errors.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <mutex>
#include <numbers>
#include <set>
#include <thread>

namespace ringwalk {

namespace {

constexpr std::size_t kMinAxisSamples = 2;
constexpr std::size_t kMaxAxisSamples = 2001;

bool parse_coupler_index(std::string_view token, std::size_t* index) {
    if (token.size() < 2 || token[0] != 'k') {
        return false;
    }
    std::size_t value = 0;
    for (char c : token.substr(1)) {
        if (c < '0' || c > '9') {
            return false;
        }
        value = value * 10 + static_cast<std::size_t>(c - '0');
    }
    if (value == 0) {
        return false;
    }
    *index = value;
    return true;
}

// "k1=k2=..." -> 1-based coupler indices; empty if not a coupling axis.
std::vector<std::size_t> parse_coupling_tie(std::string_view name) {
    std::vector<std::size_t> indices;
    std::size_t start = 0;
    while (start <= name.size()) {
        const std::size_t end = std::min(name.find('=', start), name.size());
        std::size_t index = 0;
        if (!parse_coupler_index(name.substr(start, end - start), &index)) {
            return {};
        }
        indices.push_back(index);
        if (end == name.size()) {
            break;
        }
        start = end + 1;
    }
    return indices;
}

struct SteadyPorts {
    double classical_drop = 0.0;
    double classical_thru = 0.0;
    double quantum_drop = 0.0;
    double quantum_thru = 0.0;
};

PortProbabilities classical_ports(const RingChainSpec& spec, double tol,
                                  std::size_t max_steps) {
    const std::size_t rings = spec.num_rings();
    if (rings == 1) {
        return closed_form_single(spec.couplings[0], spec.couplings[1],
                                  spec.loss_per_round[0]);
    }
    if (rings == 2 && spec.loss_per_round[0] == spec.loss_per_round[1]) {
        return closed_form_double(spec.couplings[0], spec.couplings[1],
                                  spec.couplings[2], spec.loss_per_round[0]);
    }
    const NodeGraph graph = build_chain(spec);
    const ClassicalMatrix matrix = classical_transfer_matrix(graph);
    Eigen::VectorXd p0 = Eigen::VectorXd::Zero(
        static_cast<Eigen::Index>(graph.node_count()));
    p0(0) = 1.0;
    const Eigen::VectorXd final_state =
        steady_state(matrix, p0, {tol, max_steps});
    return {final_state(static_cast<Eigen::Index>(graph.drop_node())),
            final_state(static_cast<Eigen::Index>(graph.thru_node()))};
}

AmplitudeResult quantum_ports(const RingChainSpec& spec, double tol,
                              std::size_t max_steps) {
    const std::size_t rings = spec.num_rings();
    if (rings == 1) {
        return steady_amplitudes_single(
            spec.couplings[0], spec.couplings[1],
            RoundTripFactor::from_intensity_loss(spec.loss_per_round[0],
                                                 spec.phases[0]));
    }
    if (rings == 2) {
        return steady_amplitudes_double(
            spec.couplings[0], spec.couplings[1], spec.couplings[2],
            RoundTripFactor::from_intensity_loss(spec.loss_per_round[0],
                                                 spec.phases[0]),
            RoundTripFactor::from_intensity_loss(spec.loss_per_round[1],
                                                 spec.phases[1]));
    }
    const NodeGraph graph = build_chain(spec);
    const QuantumMatrix matrix = quantum_transfer_matrix(graph);
    const auto nodes = static_cast<Eigen::Index>(graph.node_count());
    Eigen::VectorXcd state = Eigen::VectorXcd::Zero(nodes);
    state(0) = 1.0;
    for (std::size_t n = 0; n < max_steps; ++n) {
        if (state.head(nodes - 2).squaredNorm() < tol) {
            return {state(static_cast<Eigen::Index>(graph.drop_node())),
                    state(static_cast<Eigen::Index>(graph.thru_node()))};
        }
        state = matrix.values * state;
    }
    throw ConvergenceError("quantum steady state: step cap reached");
}

double evaluate_metric(const RingChainSpec& spec, Metric metric, double tol,
                       std::size_t max_steps) {
    switch (metric) {
    case Metric::classical_drop:
        return classical_ports(spec, tol, max_steps).drop;
    case Metric::classical_thru:
        return classical_ports(spec, tol, max_steps).thru;
    case Metric::quantum_drop:
        return quantum_ports(spec, tol, max_steps).drop_probability();
    case Metric::quantum_thru:
        return quantum_ports(spec, tol, max_steps).thru_probability();
    case Metric::drop_difference:
        return quantum_ports(spec, tol, max_steps).drop_probability() -
               classical_ports(spec, tol, max_steps).drop;
    }
    throw ValidationError("unknown metric");
}

RingChainSpec apply_links(RingChainSpec spec,
                          const std::vector<CouplingLink>& links) {
    for (const CouplingLink& link : links) {
        if (link.target == 0 || link.target > spec.couplings.size() ||
            link.source == 0 || link.source > spec.couplings.size()) {
            throw ValidationError("coupling link index out of range");
        }
        const double source = spec.couplings[link.source - 1];
        spec.couplings[link.target - 1] =
            link.complement ? 1.0 - source : source;
    }
    return spec;
}

// Names an axis touches, for the fixed-parameter record.
std::set<std::string> swept_names(const Axis& axis) {
    std::set<std::string> names;
    const auto ties = parse_coupling_tie(axis.name);
    if (!ties.empty()) {
        for (std::size_t index : ties) {
            names.insert("k" + std::to_string(index));
        }
        return names;
    }
    if (axis.name == "theta" || axis.name == "alpha") {
        names.insert(axis.name);
    } else if (axis.name == "lambda") {
        names.insert("lambda");
        names.insert("theta");
    } else if (axis.name == "r") {
        names.insert("r");
        names.insert("theta");
        names.insert("alpha");
    }
    return names;
}

std::vector<std::pair<std::string, double>> fixed_record(
    const RingChainSpec& spec, const std::set<std::string>& swept,
    const std::vector<CouplingLink>& links) {
    std::set<std::string> hidden = swept;
    for (const CouplingLink& link : links) {
        hidden.insert("k" + std::to_string(link.target));
    }
    std::vector<std::pair<std::string, double>> fixed;
    for (std::size_t i = 0; i < spec.couplings.size(); ++i) {
        const std::string name = "k" + std::to_string(i + 1);
        if (!hidden.contains(name)) {
            fixed.emplace_back(name, spec.couplings[i]);
        }
    }
    for (std::size_t j = 0; j < spec.num_rings(); ++j) {
        if (!hidden.contains("alpha")) {
            fixed.emplace_back("alpha" + std::to_string(j + 1),
                               spec.loss_per_round[j]);
        }
        if (!hidden.contains("theta")) {
            fixed.emplace_back("theta" + std::to_string(j + 1), spec.phases[j]);
        }
    }
    if (spec.geometry) {
        if (!hidden.contains("lambda")) {
            fixed.emplace_back("lambda", spec.geometry->wavelength_m);
        }
        if (!hidden.contains("r")) {
            for (std::size_t j = 0; j < spec.geometry->radius_m.size(); ++j) {
                fixed.emplace_back("r" + std::to_string(j + 1),
                                   spec.geometry->radius_m[j]);
            }
        }
        fixed.emplace_back("n_eff", spec.geometry->n_eff);
    }
    return fixed;
}

void check_axis_samples(const Axis& axis) {
    if (axis.samples.size() < kMinAxisSamples ||
        axis.samples.size() > kMaxAxisSamples) {
        throw ValidationError("axis '" + axis.name + "' needs between 2 and " +
                              std::to_string(kMaxAxisSamples) + " samples");
    }
}

} // namespace

Metric metric_from_name(std::string_view name) {
    if (name == "pcd") return Metric::classical_drop;
    if (name == "pct") return Metric::classical_thru;
    if (name == "pqd") return Metric::quantum_drop;
    if (name == "pqt") return Metric::quantum_thru;
    if (name == "pqd-pcd" || name == "diff") return Metric::drop_difference;
    throw ValidationError("unknown metric '" + std::string(name) +
                          "' (expected pcd, pct, pqd, pqt or pqd-pcd)");
}

std::string metric_name(Metric metric) {
    switch (metric) {
    case Metric::classical_drop: return "pcd";
    case Metric::classical_thru: return "pct";
    case Metric::quantum_drop: return "pqd";
    case Metric::quantum_thru: return "pqt";
    case Metric::drop_difference: return "pqd-pcd";
    }
    return "?";
}

Regime regime_from_name(std::string_view name) {
    if (name == "classical") return Regime::classical;
    if (name == "quantum") return Regime::quantum;
    throw ValidationError("unknown regime '" + std::string(name) + "'");
}

std::string regime_name(Regime regime) {
    return regime == Regime::classical ? "classical" : "quantum";
}

Axis Axis::linspace(std::string name, double lo, double hi, std::size_t count) {
    if (count == 0) {
        throw ValidationError("axis '" + name + "': sample count must be >= 1");
    }
    Axis axis{std::move(name), {}};
    axis.samples.reserve(count);
    if (count == 1) {
        axis.samples.push_back(lo);
        return axis;
    }
    for (std::size_t i = 0; i < count; ++i) {
        axis.samples.push_back(lo + (hi - lo) * static_cast<double>(i) /
                                        static_cast<double>(count - 1));
    }
    return axis;
}

RingChainSpec with_axis_value(const RingChainSpec& spec, std::string_view axis,
                              double value) {
    RingChainSpec out = spec;
    const auto ties = parse_coupling_tie(axis);
    if (!ties.empty()) {
        for (std::size_t index : ties) {
            if (index > out.couplings.size()) {
                throw ValidationError("axis 'k" + std::to_string(index) +
                                      "': no such coupler");
            }
            out.couplings[index - 1] = value;
        }
        return out;
    }
    if (axis == "theta") {
        out.phases.assign(out.num_rings(), value);
        out.geometry.reset();
        return out;
    }
    if (axis == "alpha") {
        out.loss_per_round.assign(out.num_rings(), value);
        out.geometry.reset();
        return out;
    }
    if (axis == "lambda" || axis == "r") {
        if (!spec.geometry) {
            throw ValidationError("axis '" + std::string(axis) +
                                  "' requires a geometric spec");
        }
        RingGeometry geometry = *spec.geometry;
        if (axis == "lambda") {
            geometry.wavelength_m = value;
        } else {
            geometry.radius_m.assign(geometry.radius_m.size(), value);
        }
        return RingChainSpec::from_geometry(out.couplings, std::move(geometry));
    }
    throw ValidationError("unknown sweep axis '" + std::string(axis) + "'");
}

double steady_metric(const RingChainSpec& spec, Metric metric, double tol,
                     std::size_t max_steps) {
    spec.validate();
    return evaluate_metric(spec, metric, tol, max_steps);
}

SweepGrid sweep2d(const RingChainSpec& spec_template, const Axis& axis1,
                  const Axis& axis2, Metric metric,
                  const SweepOptions& options) {
    spec_template.validate();
    check_axis_samples(axis1);
    check_axis_samples(axis2);

    const auto rows = static_cast<Eigen::Index>(axis1.samples.size());
    const auto cols = static_cast<Eigen::Index>(axis2.samples.size());

    SweepGrid grid;
    grid.axis1 = axis1;
    grid.axis2 = axis2;
    grid.metric = metric_name(metric);
    grid.values.resize(rows, cols);

    std::set<std::string> swept = swept_names(axis1);
    swept.merge(swept_names(axis2));
    grid.fixed = fixed_record(spec_template, swept, options.links);

    const auto fill_rows = [&](Eigen::Index row_begin, Eigen::Index row_end) {
        for (Eigen::Index r = row_begin; r < row_end; ++r) {
            const RingChainSpec row_spec = with_axis_value(
                spec_template, axis1.name, axis1.samples[static_cast<std::size_t>(r)]);
            for (Eigen::Index c = 0; c < cols; ++c) {
                RingChainSpec cell_spec = with_axis_value(
                    row_spec, axis2.name, axis2.samples[static_cast<std::size_t>(c)]);
                cell_spec = apply_links(std::move(cell_spec), options.links);
                cell_spec.validate();
                const double value =
                    evaluate_metric(cell_spec, metric, options.tol, options.max_steps);
                if (!std::isfinite(value)) {
                    throw ConvergenceError("sweep cell is not finite");
                }
                grid.values(r, c) = value;
            }
        }
    };

    const unsigned thread_count = std::max(1u, options.threads);
    if (thread_count == 1 || rows < 2) {
        fill_rows(0, rows);
        return grid;
    }

    const auto workers = static_cast<Eigen::Index>(
        std::min<unsigned>(thread_count, static_cast<unsigned>(rows)));
    std::vector<std::thread> pool;
    std::exception_ptr first_error;
    std::mutex error_mutex;
    for (Eigen::Index w = 0; w < workers; ++w) {
        const Eigen::Index begin = rows * w / workers;
        const Eigen::Index end = rows * (w + 1) / workers;
        pool.emplace_back([&, begin, end] {
            try {
                fill_rows(begin, end);
            } catch (...) {
                const std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error) {
                    first_error = std::current_exception();
                }
            }
        });
    }
    for (std::thread& worker : pool) {
        worker.join();
    }
    if (first_error) {
        std::rethrow_exception(first_error);
    }
    return grid;
}

double phase_average(double k1, double k2, double alpha, std::size_t samples) {
    if (samples < 2) {
        throw ValidationError("phase_average: need at least 2 samples");
    }
    if (!(alpha > 0.0 && alpha <= 1.0)) {
        throw ValidationError("phase_average: loss must lie in (0, 1]");
    }
    // Uniform grid over one period; for a periodic integrand the plain mean
    // is the trapezoid rule and converges superalgebraically.
    double sum = 0.0;
    for (std::size_t j = 0; j < samples; ++j) {
        const double theta = 2.0 * std::numbers::pi * static_cast<double>(j) /
                             static_cast<double>(samples);
        sum += steady_amplitudes_single(
                   k1, k2, RoundTripFactor::from_intensity_loss(alpha, theta))
                   .drop_probability();
    }
    return sum / static_cast<double>(samples);
}

HittingResult hitting_time(const RingChainSpec& spec, Regime regime,
                           double p_g, std::size_t n_max) {
    spec.validate();
    if (!(p_g > 0.0 && p_g < 1.0)) {
        throw ValidationError("hitting_time: threshold must lie in (0, 1)");
    }
    if (n_max < 1) {
        throw ValidationError("hitting_time: n_max must be >= 1");
    }

    HittingResult result;
    result.threshold = p_g;
    const Metric drop_metric = regime == Regime::classical
                                   ? Metric::classical_drop
                                   : Metric::quantum_drop;
    result.steady_drop = evaluate_metric(spec, drop_metric, 1e-12, 1'000'000);
    if (result.steady_drop < p_g) {
        return result;  // unreachable; no need to iterate
    }

    const NodeGraph graph = build_chain(spec);
    const auto nodes = static_cast<Eigen::Index>(graph.node_count());
    const auto drop = static_cast<Eigen::Index>(graph.drop_node());

    if (regime == Regime::classical) {
        const ClassicalMatrix matrix = classical_transfer_matrix(graph);
        Eigen::VectorXd state = Eigen::VectorXd::Zero(nodes);
        state(0) = 1.0;
        for (std::size_t n = 1; n <= n_max; ++n) {
            state = matrix.values * state;
            if (state(drop) >= p_g) {
                result.steps = n;
                return result;
            }
        }
    } else {
        const QuantumMatrix matrix = quantum_transfer_matrix(graph);
        Eigen::VectorXcd state = Eigen::VectorXcd::Zero(nodes);
        state(0) = 1.0;
        for (std::size_t n = 1; n <= n_max; ++n) {
            state = matrix.values * state;
            if (std::norm(state(drop)) >= p_g) {
                result.steps = n;
                return result;
            }
        }
    }
    return result;
}

SweepGrid time_grid(const RingChainSpec& spec_template, const Axis& axis,
                    std::size_t n_max, Regime regime) {
    spec_template.validate();
    if (n_max > 100'000) {
        throw ValidationError("time_grid: n_max must be <= 100000");
    }
    if (axis.name != "theta" && parse_coupling_tie(axis.name).empty()) {
        throw ValidationError("time_grid: axis must be theta or a coupling");
    }
    if (axis.samples.empty()) {
        throw ValidationError("time_grid: axis has no samples");
    }

    SweepGrid grid;
    grid.axis1.name = "n";
    grid.axis1.samples.resize(n_max + 1);
    for (std::size_t n = 0; n <= n_max; ++n) {
        grid.axis1.samples[n] = static_cast<double>(n);
    }
    grid.axis2 = axis;
    grid.metric = regime == Regime::classical ? "pcd(n)" : "pqd(n)";
    grid.values.resize(static_cast<Eigen::Index>(n_max + 1),
                       static_cast<Eigen::Index>(axis.samples.size()));
    grid.fixed = fixed_record(spec_template, swept_names(axis), {});

    for (std::size_t c = 0; c < axis.samples.size(); ++c) {
        const RingChainSpec spec =
            with_axis_value(spec_template, axis.name, axis.samples[c]);
        spec.validate();
        const NodeGraph graph = build_chain(spec);
        const auto nodes = static_cast<Eigen::Index>(graph.node_count());
        const auto drop = static_cast<Eigen::Index>(graph.drop_node());
        const auto col = static_cast<Eigen::Index>(c);

        if (regime == Regime::classical) {
            const ClassicalMatrix matrix = classical_transfer_matrix(graph);
            Eigen::VectorXd state = Eigen::VectorXd::Zero(nodes);
            state(0) = 1.0;
            grid.values(0, col) = state(drop);
            for (std::size_t n = 1; n <= n_max; ++n) {
                state = matrix.values * state;
                grid.values(static_cast<Eigen::Index>(n), col) = state(drop);
            }
        } else {
            const QuantumMatrix matrix = quantum_transfer_matrix(graph);
            Eigen::VectorXcd state = Eigen::VectorXcd::Zero(nodes);
            state(0) = 1.0;
            grid.values(0, col) = std::norm(state(drop));
            for (std::size_t n = 1; n <= n_max; ++n) {
                state = matrix.values * state;
                grid.values(static_cast<Eigen::Index>(n), col) =
                    std::norm(state(drop));
            }
        }
    }
    return grid;
}

} // namespace ringwalk
