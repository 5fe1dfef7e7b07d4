// ringwalk: classical and quantum random walks on series-coupled ring
// resonators. Subcommands cover steady states, time evolution, parameter
// sweeps, phase averaging, goal-hitting times and directional-coupler
// design tables. See README.md for the configuration schema.

#include "ringwalk/analysis.hpp"
#include "ringwalk/config.hpp"
#include "ringwalk/coupler.hpp"
#include "ringwalk/errors.hpp"
#include "ringwalk/io.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

namespace {

using namespace ringwalk;

struct CommandOptions {
    std::string config_path;
    std::optional<std::string> out;
    std::optional<std::string> format;
    std::optional<unsigned> threads;
    std::optional<double> pg;
    std::optional<double> tol;
    std::optional<std::size_t> nmax;
    std::optional<std::size_t> samples;
    std::optional<std::string> regime;
    std::optional<std::string> metric;
    std::optional<std::string> dump_matrix;
    std::optional<std::string> bend_table;
    std::optional<double> min_transmission;
    bool gnuplot = false;
};

void add_common_options(CLI::App* cmd, CommandOptions& opts) {
    cmd->add_option("--config", opts.config_path, "JSON run configuration")
        ->required();
    cmd->add_option("--out", opts.out, "output file (default: stdout)");
    cmd->add_option("--format", opts.format, "output format: csv or json");
    cmd->add_option("--threads", opts.threads, "worker threads for sweeps");
    cmd->add_option("--tol", opts.tol, "iteration tolerance");
    cmd->add_option("--nmax", opts.nmax, "step cap");
    cmd->add_option("--regime", opts.regime, "classical or quantum");
}

RunConfig resolve_config(const CommandOptions& opts) {
    RunConfig config = load_run_config(opts.config_path);
    if (opts.out) {
        config.output.path = *opts.out;
    }
    if (opts.format) {
        if (*opts.format == "csv") {
            config.output.format = OutputFormat::csv;
        } else if (*opts.format == "json") {
            config.output.format = OutputFormat::json;
        } else {
            throw ConfigError("--format must be csv or json");
        }
    }
    if (opts.gnuplot) {
        config.output.gnuplot = true;
    }
    if (opts.tol) {
        if (*opts.tol <= 0.0) {
            throw ValidationError("--tol must be positive");
        }
        config.run.tol = *opts.tol;
    }
    if (opts.nmax) {
        if (*opts.nmax < 1) {
            throw ValidationError("--nmax must be >= 1");
        }
        config.run.n_max = *opts.nmax;
    }
    if (opts.samples) {
        config.run.samples = *opts.samples;
    }
    if (opts.pg) {
        if (!(*opts.pg > 0.0 && *opts.pg < 1.0)) {
            throw ValidationError("--pg must lie in (0, 1)");
        }
        config.run.p_g = *opts.pg;
    }
    if (opts.regime) {
        config.run.regime = regime_from_name(*opts.regime);
    }
    if (opts.metric) {
        config.run.metric = metric_from_name(*opts.metric);
    }
    if (opts.threads) {
        config.run.threads = *opts.threads;
    } else if (config.run.threads == 0) {
        if (const char* env = std::getenv("RINGWALK_THREADS")) {
            config.run.threads = static_cast<unsigned>(std::strtoul(env, nullptr, 10));
        }
    }
    if (config.run.threads == 0) {
        config.run.threads = 1;
    }
    return config;
}

const RingChainSpec& ring_chain_or_throw(const RunConfig& config) {
    if (!config.ring_chain) {
        throw ConfigError("this subcommand needs a ring_chain section");
    }
    return *config.ring_chain;
}

void write_output(const RunConfig& config, const std::string& text) {
    if (config.output.path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(config.output.path, std::ios::binary);
    if (!out) {
        throw ValidationError("cannot open output file '" + config.output.path +
                              "'");
    }
    out << text;
}

std::string render_table(const RunConfig& config, const OutputTable& table) {
    const std::string echo = serialize_run_config(config);
    if (config.output.format == OutputFormat::json) {
        return table_to_json(table, echo) + "\n";
    }
    std::ostringstream out;
    write_table_csv(out, table, echo);
    return out.str();
}

std::string render_grid(const RunConfig& config, const SweepGrid& grid) {
    const std::string echo = serialize_run_config(config);
    if (config.output.format == OutputFormat::json) {
        return grid_to_json(grid, echo) + "\n";
    }
    std::ostringstream out;
    if (config.output.gnuplot) {
        write_grid_gnuplot(out, grid, echo);
    } else {
        write_grid_csv(out, grid, echo);
    }
    return out.str();
}

void dump_matrix_if_requested(const CommandOptions& opts,
                              const RunConfig& config, const NodeGraph& graph) {
    if (!opts.dump_matrix) {
        return;
    }
    std::ofstream out(*opts.dump_matrix, std::ios::binary);
    if (!out) {
        throw ValidationError("cannot open matrix dump file '" +
                              *opts.dump_matrix + "'");
    }
    const std::string echo = serialize_run_config(config);
    if (config.run.regime == Regime::classical) {
        write_matrix_csv(out, classical_transfer_matrix(graph), graph, echo);
    } else {
        write_matrix_csv(out, quantum_transfer_matrix(graph), graph, echo);
    }
}

// Iterated absorption, the cross-check column against the closed forms.
PortProbabilities iterate_ports(const RingChainSpec& spec, Regime regime,
                                double tol) {
    const NodeGraph graph = build_chain(spec);
    const auto nodes = static_cast<Eigen::Index>(graph.node_count());
    const auto drop = static_cast<Eigen::Index>(graph.drop_node());
    const auto thru = static_cast<Eigen::Index>(graph.thru_node());
    constexpr std::size_t kCap = 1'000'000;

    if (regime == Regime::classical) {
        Eigen::VectorXd p0 = Eigen::VectorXd::Zero(nodes);
        p0(0) = 1.0;
        const Eigen::VectorXd state =
            steady_state(classical_transfer_matrix(graph), p0, {tol, kCap});
        return {state(drop), state(thru)};
    }
    const QuantumMatrix matrix = quantum_transfer_matrix(graph);
    Eigen::VectorXcd state = Eigen::VectorXcd::Zero(nodes);
    state(0) = 1.0;
    for (std::size_t n = 0; n < kCap; ++n) {
        if (state.head(nodes - 2).squaredNorm() < tol) {
            return {std::norm(state(drop)), std::norm(state(thru))};
        }
        state = matrix.values * state;
    }
    throw ConvergenceError("steady: amplitude iteration hit the step cap");
}

int cmd_steady(const CommandOptions& opts) {
    const RunConfig config = resolve_config(opts);
    const RingChainSpec& spec = ring_chain_or_throw(config);
    const Regime regime = config.run.regime;

    const Metric drop_metric = regime == Regime::classical
                                   ? Metric::classical_drop
                                   : Metric::quantum_drop;
    const Metric thru_metric = regime == Regime::classical
                                   ? Metric::classical_thru
                                   : Metric::quantum_thru;
    const PortProbabilities iterated =
        iterate_ports(spec, regime, config.run.tol);

    OutputTable table;
    table.columns = {"port", "closed_form", "iterated", "abs_diff"};
    const bool closed_forms = spec.num_rings() <= 2;
    const auto add_row = [&](const char* port, Metric metric, double iterated_value) {
        std::vector<TableCell> row{std::string(port)};
        if (closed_forms) {
            const double closed = steady_metric(spec, metric, config.run.tol);
            row.emplace_back(closed);
            row.emplace_back(iterated_value);
            row.emplace_back(std::abs(closed - iterated_value));
        } else {
            row.emplace_back(std::monostate{});
            row.emplace_back(iterated_value);
            row.emplace_back(std::monostate{});
        }
        table.rows.push_back(std::move(row));
    };
    add_row("drop", drop_metric, iterated.drop);
    add_row("thru", thru_metric, iterated.thru);

    dump_matrix_if_requested(opts, config, build_chain(spec));
    write_output(config, render_table(config, table));
    return 0;
}

int cmd_evolve(const CommandOptions& opts) {
    const RunConfig config = resolve_config(opts);
    const RingChainSpec& spec = ring_chain_or_throw(config);
    const NodeGraph graph = build_chain(spec);
    const auto nodes = static_cast<Eigen::Index>(graph.node_count());
    const std::string echo = serialize_run_config(config);

    dump_matrix_if_requested(opts, config, graph);

    std::ostringstream out;
    if (config.run.regime == Regime::classical) {
        Eigen::VectorXd p0 = Eigen::VectorXd::Zero(nodes);
        p0(0) = 1.0;
        const auto states =
            evolve(classical_transfer_matrix(graph), p0, config.run.n_max);
        if (config.output.format == OutputFormat::json) {
            out << trajectory_to_json(states, graph, echo) << '\n';
        } else {
            write_trajectory_csv(out, states, graph, echo);
        }
    } else {
        Eigen::VectorXcd a0 = Eigen::VectorXcd::Zero(nodes);
        a0(0) = 1.0;
        const auto states =
            evolve_amplitudes(quantum_transfer_matrix(graph), a0, config.run.n_max);
        if (config.output.format == OutputFormat::json) {
            out << trajectory_to_json(states, graph, echo) << '\n';
        } else {
            write_trajectory_csv(out, states, graph, echo);
        }
    }
    write_output(config, out.str());
    return 0;
}

int cmd_sweep(const CommandOptions& opts) {
    const RunConfig config = resolve_config(opts);
    const RingChainSpec& spec = ring_chain_or_throw(config);
    if (!config.axis1 || !config.axis2) {
        throw ConfigError("sweep needs sweep.axis1 and sweep.axis2");
    }
    SweepOptions sweep_options;
    sweep_options.threads = config.run.threads;
    sweep_options.tol = config.run.tol;
    sweep_options.links = config.links;
    const SweepGrid grid =
        sweep2d(spec, config.axis1->to_axis(), config.axis2->to_axis(),
                config.run.metric, sweep_options);
    write_output(config, render_grid(config, grid));
    return 0;
}

int cmd_timegrid(const CommandOptions& opts) {
    const RunConfig config = resolve_config(opts);
    const RingChainSpec& spec = ring_chain_or_throw(config);
    if (!config.axis1) {
        throw ConfigError("timegrid needs sweep.axis1");
    }
    const SweepGrid grid = time_grid(spec, config.axis1->to_axis(),
                                     config.run.n_max, config.run.regime);
    write_output(config, render_grid(config, grid));
    return 0;
}

int cmd_hit(const CommandOptions& opts) {
    const RunConfig config = resolve_config(opts);
    const RingChainSpec& spec = ring_chain_or_throw(config);

    const bool with_seconds = spec.geometry.has_value();
    OutputTable table;
    table.columns = {"axis_value", "steps", "steady_drop"};
    if (with_seconds) {
        table.columns.push_back("seconds");
    }

    const auto add_row = [&](double axis_value, const RingChainSpec& row_spec) {
        const HittingResult hit =
            hitting_time(row_spec, config.run.regime, config.run.p_g,
                         config.run.n_max);
        std::vector<TableCell> row{axis_value};
        if (hit.steps) {
            row.emplace_back(static_cast<std::int64_t>(*hit.steps));
        } else {
            row.emplace_back(std::string("unreachable"));
        }
        row.emplace_back(hit.steady_drop);
        if (with_seconds) {
            if (hit.steps && row_spec.geometry) {
                const double dt = half_ring_time(row_spec.geometry->radius_m[0],
                                                 row_spec.geometry->n_eff);
                row.emplace_back(static_cast<double>(*hit.steps) * dt);
            } else {
                row.emplace_back(std::monostate{});
            }
        }
        table.rows.push_back(std::move(row));
    };

    if (config.axis1) {
        const Axis axis = config.axis1->to_axis();
        for (double sample : axis.samples) {
            add_row(sample, with_axis_value(spec, axis.name, sample));
        }
        table.columns[0] = config.axis1->name;
    } else {
        add_row(0.0, spec);
    }
    write_output(config, render_table(config, table));
    return 0;
}

int cmd_phase_avg(const CommandOptions& opts) {
    const RunConfig config = resolve_config(opts);
    const RingChainSpec& spec = ring_chain_or_throw(config);
    if (spec.num_rings() != 1) {
        throw ValidationError("phase-avg expects a single-ring spec");
    }
    const double k1 = spec.couplings[0];
    const double k2 = spec.couplings[1];
    const double alpha = spec.loss_per_round[0];
    const double average = phase_average(k1, k2, alpha, config.run.samples);
    const double classical = closed_form_single(k1, k2, alpha).drop;

    OutputTable table;
    table.columns = {"k1", "k2", "alpha", "samples", "average_pqd",
                     "classical_pcd", "abs_diff"};
    table.rows.push_back({k1, k2, alpha,
                          static_cast<std::int64_t>(config.run.samples), average,
                          classical, std::abs(average - classical)});
    write_output(config, render_table(config, table));
    return 0;
}

int cmd_coupler(const CommandOptions& opts) {
    const RunConfig config = resolve_config(opts);
    if (!config.coupler) {
        throw ConfigError("coupler subcommand needs a coupler section");
    }
    const CouplerSpec& base = *config.coupler;

    if (opts.bend_table) {
        if (!opts.min_transmission) {
            throw ConfigError("--bend-table needs --min-transmission");
        }
        const BendLossTable table = load_bend_loss_file(*opts.bend_table);
        const auto radius = min_radius_for_loss(table, *opts.min_transmission);
        OutputTable out;
        out.columns = {"min_transmission", "radius_m"};
        std::vector<TableCell> row{*opts.min_transmission};
        if (radius) {
            row.emplace_back(*radius);
        } else {
            row.emplace_back(std::string("unreachable"));
        }
        out.rows.push_back(std::move(row));
        write_output(config, render_table(config, out));
        return 0;
    }

    const auto apply_axis = [](CouplerSpec spec, const std::string& name,
                               double value) {
        if (name == "Ls") {
            spec.straight_length_m = value;
        } else if (name == "d") {
            spec.gap_m = value;
        } else {
            throw ValidationError("coupler axis must be Ls or d");
        }
        return spec;
    };

    if (config.axis1 && config.axis2) {
        const Axis a1 = config.axis1->to_axis();
        const Axis a2 = config.axis2->to_axis();
        SweepGrid grid;
        grid.axis1 = a1;
        grid.axis2 = a2;
        grid.metric = "kappa2";
        grid.values.resize(static_cast<Eigen::Index>(a1.samples.size()),
                           static_cast<Eigen::Index>(a2.samples.size()));
        const double lb = beat_length(base.wavelength_m, base.n_eff1, base.n_eff2);
        for (std::size_t r = 0; r < a1.samples.size(); ++r) {
            const CouplerSpec row_spec = apply_axis(base, a1.name, a1.samples[r]);
            for (std::size_t c = 0; c < a2.samples.size(); ++c) {
                const CouplerSpec cell = apply_axis(row_spec, a2.name, a2.samples[c]);
                grid.values(static_cast<Eigen::Index>(r),
                            static_cast<Eigen::Index>(c)) =
                    coupling_coefficient(effective_length(cell), lb);
            }
        }
        write_output(config, render_grid(config, grid));
        return 0;
    }

    OutputTable table;
    table.columns = {"Ls_m", "d_m", "beat_length_m", "effective_length_m",
                     "kappa2"};
    const double lb = beat_length(base.wavelength_m, base.n_eff1, base.n_eff2);
    const auto add_row = [&](const CouplerSpec& spec) {
        const double le = effective_length(spec);
        table.rows.push_back({spec.straight_length_m, spec.gap_m, lb, le,
                              coupling_coefficient(le, lb)});
    };
    if (config.axis1) {
        const Axis axis = config.axis1->to_axis();
        for (double sample : axis.samples) {
            add_row(apply_axis(base, axis.name, sample));
        }
    } else {
        add_row(base);
    }
    write_output(config, render_table(config, table));
    return 0;
}

void emit_error(const char* code, const std::string& message) {
    // Keep stderr machine-readable; message goes through JSON escaping.
    std::string escaped;
    for (char c : message) {
        switch (c) {
        case '"': escaped += "\\\""; break;
        case '\\': escaped += "\\\\"; break;
        case '\n': escaped += "\\n"; break;
        case '\t': escaped += "\\t"; break;
        default:
            if (static_cast<unsigned char>(c) < 0x20) {
                char buffer[8];
                std::snprintf(buffer, sizeof(buffer), "\\u%04x", c);
                escaped += buffer;
            } else {
                escaped += c;
            }
        }
    }
    std::cerr << "{\"error\":{\"code\":\"" << code << "\",\"message\":\""
              << escaped << "\"}}\n";
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"random walks on series-coupled photonic ring resonators"};
    app.require_subcommand(1);

    CommandOptions opts;

    CLI::App* steady = app.add_subcommand(
        "steady", "steady-state ports, closed form vs iterated");
    add_common_options(steady, opts);
    steady->add_option("--dump-matrix", opts.dump_matrix,
                       "write the one-step matrix as CSV");

    CLI::App* evolve_cmd =
        app.add_subcommand("evolve", "node-by-node trajectory for n steps");
    add_common_options(evolve_cmd, opts);
    evolve_cmd->add_option("--dump-matrix", opts.dump_matrix,
                           "write the one-step matrix as CSV");

    CLI::App* sweep = app.add_subcommand(
        "sweep", "steady-state metric over a 2-D parameter grid");
    add_common_options(sweep, opts);
    sweep->add_option("--metric", opts.metric,
                      "pcd, pct, pqd, pqt or pqd-pcd");
    sweep->add_flag("--gnuplot", opts.gnuplot, "bare matrix block output");

    CLI::App* timegrid = app.add_subcommand(
        "timegrid", "cumulative Drop probability over steps x parameter");
    add_common_options(timegrid, opts);

    CLI::App* hit = app.add_subcommand(
        "hit", "goal-hitting time, optionally over sweep.axis1");
    add_common_options(hit, opts);
    hit->add_option("--pg", opts.pg, "goal threshold probability");

    CLI::App* phase_avg = app.add_subcommand(
        "phase-avg", "quantum Drop probability averaged over theta");
    add_common_options(phase_avg, opts);
    phase_avg->add_option("--samples", opts.samples, "theta samples");

    CLI::App* coupler =
        app.add_subcommand("coupler", "directional-coupler design tables");
    add_common_options(coupler, opts);
    coupler->add_option("--bend-table", opts.bend_table,
                        "bend-loss CSV (radius_m,transmission)");
    coupler->add_option("--min-transmission", opts.min_transmission,
                        "threshold for the minimum-radius lookup");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& help) {
        return app.exit(help);
    } catch (const CLI::ParseError& error) {
        emit_error("cli_parse", error.what());
        return 2;
    }

    try {
        if (app.got_subcommand(steady)) return cmd_steady(opts);
        if (app.got_subcommand(evolve_cmd)) return cmd_evolve(opts);
        if (app.got_subcommand(sweep)) return cmd_sweep(opts);
        if (app.got_subcommand(timegrid)) return cmd_timegrid(opts);
        if (app.got_subcommand(hit)) return cmd_hit(opts);
        if (app.got_subcommand(phase_avg)) return cmd_phase_avg(opts);
        if (app.got_subcommand(coupler)) return cmd_coupler(opts);
    } catch (const ConfigError& error) {
        emit_error("config_parse", error.what());
        return 2;
    } catch (const ValidationError& error) {
        emit_error("validation", error.what());
        return 3;
    } catch (const ConvergenceError& error) {
        emit_error("non_convergence", error.what());
        return 4;
    } catch (const std::exception& error) {
        emit_error("internal", error.what());
        return 1;
    }
    return 0;
}
