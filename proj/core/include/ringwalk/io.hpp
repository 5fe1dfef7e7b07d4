#pragma once

#include "ringwalk/analysis.hpp"

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace ringwalk {

/// Shortest representation that parses back to the same double
/// (std::to_chars); fixed formatting keeps output files byte-reproducible.
std::string format_double(double value);

using TableCell = std::variant<std::monostate, std::int64_t, double, std::string>;

struct OutputTable {
    std::vector<std::string> columns;
    std::vector<std::vector<TableCell>> rows;
};

/// All CSV writers start with "# config: <json>"; all JSON payloads carry
/// the same document under a "config" key.
void write_table_csv(std::ostream& out, const OutputTable& table,
                     std::string_view config_json);
std::string table_to_json(const OutputTable& table,
                          std::string_view config_json);

/// One-step matrix dump, T[to, from]; complex entries as re,im cell pairs.
void write_matrix_csv(std::ostream& out, const ClassicalMatrix& matrix,
                      const NodeGraph& graph, std::string_view config_json);
void write_matrix_csv(std::ostream& out, const QuantumMatrix& matrix,
                      const NodeGraph& graph, std::string_view config_json);

/// Time series over nodes; quantum states emit re,im and |.|^2 columns.
void write_trajectory_csv(std::ostream& out,
                          const std::vector<Eigen::VectorXd>& states,
                          const NodeGraph& graph,
                          std::string_view config_json);
void write_trajectory_csv(std::ostream& out,
                          const std::vector<Eigen::VectorXcd>& states,
                          const NodeGraph& graph,
                          std::string_view config_json);
std::string trajectory_to_json(const std::vector<Eigen::VectorXd>& states,
                               const NodeGraph& graph,
                               std::string_view config_json);
std::string trajectory_to_json(const std::vector<Eigen::VectorXcd>& states,
                               const NodeGraph& graph,
                               std::string_view config_json);

void write_grid_csv(std::ostream& out, const SweepGrid& grid,
                    std::string_view config_json);
/// Bare matrix block (gnuplot `splot ... matrix` compatible).
void write_grid_gnuplot(std::ostream& out, const SweepGrid& grid,
                        std::string_view config_json);
std::string grid_to_json(const SweepGrid& grid, std::string_view config_json);

} // namespace ringwalk
