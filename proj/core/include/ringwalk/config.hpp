#pragma once

#include "ringwalk/analysis.hpp"
#include "ringwalk/coupler.hpp"

#include <optional>
#include <string>

namespace ringwalk {

struct AxisConfig {
    std::string name;
    double lo = 0.0;
    double hi = 0.0;
    std::size_t count = 0;

    Axis to_axis() const { return Axis::linspace(name, lo, hi, count); }
};

enum class OutputFormat { csv, json };

struct OutputConfig {
    std::string path;  // empty: stdout
    OutputFormat format = OutputFormat::csv;
    bool gnuplot = false;  // matrix-style grid output instead of CSV table
};

struct RunOptions {
    double tol = 1e-12;
    std::size_t n_max = 10'000;
    std::size_t samples = 10'000;
    double p_g = 2.0 / 3.0;
    unsigned threads = 0;  // 0: unset; the CLI falls back to RINGWALK_THREADS, then 1
    Regime regime = Regime::classical;
    Metric metric = Metric::classical_drop;
};

/// One fully resolved run: exactly one of ring_chain / coupler is present.
struct RunConfig {
    std::optional<RingChainSpec> ring_chain;
    std::optional<CouplerSpec> coupler;
    std::optional<AxisConfig> axis1;
    std::optional<AxisConfig> axis2;
    std::vector<CouplingLink> links;
    OutputConfig output;
    RunOptions run;
};

/// Parses the JSON run-configuration document. Structural problems
/// (malformed JSON, wrong types, missing/duplicate spec section) throw
/// ConfigError; out-of-range physical parameters throw ValidationError.
RunConfig parse_run_config(const std::string& json_text);
RunConfig load_run_config(const std::string& path);

/// Single-line JSON echo of a resolved config, with a stable key order;
/// embedded in every output file.
std::string serialize_run_config(const RunConfig& config);

} // namespace ringwalk
