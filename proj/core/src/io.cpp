#include "ringwalk/io.hpp"

#include "ringwalk/errors.hpp"

#include <json.hpp>

#include <charconv>
#include <ostream>

namespace ringwalk {

namespace {

using ordered_json = nlohmann::ordered_json;

void write_config_comment(std::ostream& out, std::string_view config_json) {
    if (!config_json.empty()) {
        out << "# config: " << config_json << '\n';
    }
}

ordered_json parse_config_echo(std::string_view config_json) {
    if (config_json.empty()) {
        return ordered_json::object();
    }
    return ordered_json::parse(config_json);
}

ordered_json axis_to_json(const Axis& axis) {
    return ordered_json{{"name", axis.name}, {"samples", axis.samples}};
}

ordered_json fixed_to_json(const SweepGrid& grid) {
    ordered_json fixed = ordered_json::object();
    for (const auto& [name, value] : grid.fixed) {
        fixed[name] = value;
    }
    return fixed;
}

struct CellFormatter {
    std::string operator()(std::monostate) const { return {}; }
    std::string operator()(std::int64_t value) const {
        return std::to_string(value);
    }
    std::string operator()(double value) const { return format_double(value); }
    std::string operator()(const std::string& value) const { return value; }
};

ordered_json cell_to_json(const TableCell& cell) {
    if (std::holds_alternative<std::monostate>(cell)) {
        return nullptr;
    }
    if (const auto* integer = std::get_if<std::int64_t>(&cell)) {
        return *integer;
    }
    if (const auto* number = std::get_if<double>(&cell)) {
        return *number;
    }
    return std::get<std::string>(cell);
}

} // namespace

std::string format_double(double value) {
    char buffer[32];
    const auto [end, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value);
    if (ec != std::errc{}) {
        throw std::runtime_error("format_double: conversion failed");
    }
    return std::string(buffer, end);
}

void write_table_csv(std::ostream& out, const OutputTable& table,
                     std::string_view config_json) {
    write_config_comment(out, config_json);
    for (std::size_t i = 0; i < table.columns.size(); ++i) {
        out << (i ? "," : "") << table.columns[i];
    }
    out << '\n';
    for (const auto& row : table.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            out << (i ? "," : "") << std::visit(CellFormatter{}, row[i]);
        }
        out << '\n';
    }
}

std::string table_to_json(const OutputTable& table,
                          std::string_view config_json) {
    ordered_json document;
    document["config"] = parse_config_echo(config_json);
    document["columns"] = table.columns;
    ordered_json rows = ordered_json::array();
    for (const auto& row : table.rows) {
        ordered_json cells = ordered_json::array();
        for (const TableCell& cell : row) {
            cells.push_back(cell_to_json(cell));
        }
        rows.push_back(std::move(cells));
    }
    document["rows"] = std::move(rows);
    return document.dump();
}

void write_matrix_csv(std::ostream& out, const ClassicalMatrix& matrix,
                      const NodeGraph& graph, std::string_view config_json) {
    write_config_comment(out, config_json);
    out << "to\\from";
    for (std::size_t c = 0; c < graph.node_count(); ++c) {
        out << ',' << graph.node_name(c);
    }
    out << '\n';
    for (Eigen::Index r = 0; r < matrix.values.rows(); ++r) {
        out << graph.node_name(static_cast<std::size_t>(r));
        for (Eigen::Index c = 0; c < matrix.values.cols(); ++c) {
            out << ',' << format_double(matrix.values(r, c));
        }
        out << '\n';
    }
}

void write_matrix_csv(std::ostream& out, const QuantumMatrix& matrix,
                      const NodeGraph& graph, std::string_view config_json) {
    write_config_comment(out, config_json);
    out << "to\\from";
    for (std::size_t c = 0; c < graph.node_count(); ++c) {
        out << ',' << graph.node_name(c) << "_re," << graph.node_name(c) << "_im";
    }
    out << '\n';
    for (Eigen::Index r = 0; r < matrix.values.rows(); ++r) {
        out << graph.node_name(static_cast<std::size_t>(r));
        for (Eigen::Index c = 0; c < matrix.values.cols(); ++c) {
            out << ',' << format_double(matrix.values(r, c).real()) << ','
                << format_double(matrix.values(r, c).imag());
        }
        out << '\n';
    }
}

void write_trajectory_csv(std::ostream& out,
                          const std::vector<Eigen::VectorXd>& states,
                          const NodeGraph& graph,
                          std::string_view config_json) {
    write_config_comment(out, config_json);
    out << 'n';
    for (std::size_t c = 0; c < graph.node_count(); ++c) {
        out << ',' << graph.node_name(c);
    }
    out << '\n';
    for (std::size_t n = 0; n < states.size(); ++n) {
        out << n;
        for (Eigen::Index i = 0; i < states[n].size(); ++i) {
            out << ',' << format_double(states[n](i));
        }
        out << '\n';
    }
}

void write_trajectory_csv(std::ostream& out,
                          const std::vector<Eigen::VectorXcd>& states,
                          const NodeGraph& graph,
                          std::string_view config_json) {
    write_config_comment(out, config_json);
    out << 'n';
    for (std::size_t c = 0; c < graph.node_count(); ++c) {
        const std::string name = graph.node_name(c);
        out << ',' << name << "_re," << name << "_im," << name << "_abs2";
    }
    out << '\n';
    for (std::size_t n = 0; n < states.size(); ++n) {
        out << n;
        for (Eigen::Index i = 0; i < states[n].size(); ++i) {
            const std::complex<double> a = states[n](i);
            out << ',' << format_double(a.real()) << ',' << format_double(a.imag())
                << ',' << format_double(std::norm(a));
        }
        out << '\n';
    }
}

std::string trajectory_to_json(const std::vector<Eigen::VectorXd>& states,
                               const NodeGraph& graph,
                               std::string_view config_json) {
    ordered_json document;
    document["config"] = parse_config_echo(config_json);
    ordered_json nodes = ordered_json::array();
    for (std::size_t c = 0; c < graph.node_count(); ++c) {
        nodes.push_back(graph.node_name(c));
    }
    document["nodes"] = std::move(nodes);
    ordered_json steps = ordered_json::array();
    for (const Eigen::VectorXd& state : states) {
        ordered_json values = ordered_json::array();
        for (Eigen::Index i = 0; i < state.size(); ++i) {
            values.push_back(state(i));
        }
        steps.push_back(std::move(values));
    }
    document["steps"] = std::move(steps);
    return document.dump();
}

std::string trajectory_to_json(const std::vector<Eigen::VectorXcd>& states,
                               const NodeGraph& graph,
                               std::string_view config_json) {
    ordered_json document;
    document["config"] = parse_config_echo(config_json);
    ordered_json nodes = ordered_json::array();
    for (std::size_t c = 0; c < graph.node_count(); ++c) {
        nodes.push_back(graph.node_name(c));
    }
    document["nodes"] = std::move(nodes);
    ordered_json steps = ordered_json::array();
    for (const Eigen::VectorXcd& state : states) {
        ordered_json values = ordered_json::array();
        ordered_json abs2 = ordered_json::array();
        for (Eigen::Index i = 0; i < state.size(); ++i) {
            values.push_back({state(i).real(), state(i).imag()});
            abs2.push_back(std::norm(state(i)));
        }
        steps.push_back({{"values", std::move(values)}, {"abs2", std::move(abs2)}});
    }
    document["steps"] = std::move(steps);
    return document.dump();
}

void write_grid_csv(std::ostream& out, const SweepGrid& grid,
                    std::string_view config_json) {
    write_config_comment(out, config_json);
    out << "# metric: " << grid.metric << '\n';
    out << "# axis1: " << grid.axis1.name << '\n';
    out << "# axis2: " << grid.axis2.name << '\n';
    for (const auto& [name, value] : grid.fixed) {
        out << "# fixed " << name << ": " << format_double(value) << '\n';
    }
    out << grid.axis1.name << '\\' << grid.axis2.name;
    for (double sample : grid.axis2.samples) {
        out << ',' << format_double(sample);
    }
    out << '\n';
    for (Eigen::Index r = 0; r < grid.values.rows(); ++r) {
        out << format_double(grid.axis1.samples[static_cast<std::size_t>(r)]);
        for (Eigen::Index c = 0; c < grid.values.cols(); ++c) {
            out << ',' << format_double(grid.values(r, c));
        }
        out << '\n';
    }
}

void write_grid_gnuplot(std::ostream& out, const SweepGrid& grid,
                        std::string_view config_json) {
    write_config_comment(out, config_json);
    out << "# metric: " << grid.metric << "; rows: " << grid.axis1.name
        << "; cols: " << grid.axis2.name << '\n';
    for (Eigen::Index r = 0; r < grid.values.rows(); ++r) {
        for (Eigen::Index c = 0; c < grid.values.cols(); ++c) {
            out << (c ? " " : "") << format_double(grid.values(r, c));
        }
        out << '\n';
    }
}

std::string grid_to_json(const SweepGrid& grid, std::string_view config_json) {
    ordered_json document;
    document["config"] = parse_config_echo(config_json);
    document["metric"] = grid.metric;
    document["axis1"] = axis_to_json(grid.axis1);
    document["axis2"] = axis_to_json(grid.axis2);
    document["fixed"] = fixed_to_json(grid);
    ordered_json rows = ordered_json::array();
    for (Eigen::Index r = 0; r < grid.values.rows(); ++r) {
        ordered_json row = ordered_json::array();
        for (Eigen::Index c = 0; c < grid.values.cols(); ++c) {
            row.push_back(grid.values(r, c));
        }
        rows.push_back(std::move(row));
    }
    document["values"] = std::move(rows);
    return document.dump();
}

} // namespace ringwalk
