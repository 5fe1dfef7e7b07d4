#pragma once

#include "ringwalk/classical.hpp"
#include "ringwalk/quantum.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace ringwalk {

enum class Regime { classical, quantum };

enum class Metric {
    classical_drop,   // p_C^D
    classical_thru,   // p_C^T
    quantum_drop,     // p_Q^D
    quantum_thru,     // p_Q^T
    drop_difference,  // p_Q^D - p_C^D
};

Metric metric_from_name(std::string_view name);  // pcd, pct, pqd, pqt, pqd-pcd
std::string metric_name(Metric metric);

Regime regime_from_name(std::string_view name);  // classical, quantum
std::string regime_name(Regime regime);

/// A named sweep axis. Recognized names: "k<i>" (1-based coupler), tie
/// groups "k1=k2=...", "theta" (all rings), "alpha" (all rings), "lambda"
/// and "r" (require geometry; phases/losses are re-derived per value).
struct Axis {
    std::string name;
    std::vector<double> samples;

    static Axis linspace(std::string name, double lo, double hi,
                         std::size_t count);
};

/// Optional coupling constraint applied after each axis assignment:
/// k[target] := k[source] or 1 - k[source] (both 1-based).
struct CouplingLink {
    std::size_t target = 0;
    std::size_t source = 0;
    bool complement = false;
};

struct SweepOptions {
    unsigned threads = 1;
    double tol = 1e-12;
    std::size_t max_steps = 1'000'000;
    std::vector<CouplingLink> links;
};

/// axis1 indexes rows of `values`, axis2 columns. `fixed` records the
/// template parameters the sweep held constant, in a stable order.
struct SweepGrid {
    Axis axis1;
    Axis axis2;
    std::string metric;
    Eigen::MatrixXd values;
    std::vector<std::pair<std::string, double>> fixed;
};

/// Returns a copy of the spec with one named parameter replaced. Throws
/// ValidationError for unknown axis names or out-of-range targets.
RingChainSpec with_axis_value(const RingChainSpec& spec, std::string_view axis,
                              double value);

/// Steady-state metric value for a resolved spec: closed forms for
/// N <= 2 (Markov iteration for N > 2 or heterogeneous classical loss).
double steady_metric(const RingChainSpec& spec, Metric metric,
                     double tol = 1e-12, std::size_t max_steps = 1'000'000);

/// Steady-state metric over a 2-D parameter grid. Cells are independent
/// and may be evaluated on several threads; assembly order is fixed, so
/// identical inputs give bit-identical grids.
SweepGrid sweep2d(const RingChainSpec& spec_template, const Axis& axis1,
                  const Axis& axis2, Metric metric,
                  const SweepOptions& options = {});

/// Uniform-grid average of the single-ring quantum Drop probability over
/// theta in [0, 2*pi). For alpha = 1 this recovers the classical
/// k1*k2/(1 - t1*t2); the grid sum converges superalgebraically.
double phase_average(double k1, double k2, double alpha, std::size_t samples);

struct HittingResult {
    double threshold = 0.0;
    std::optional<std::size_t> steps;  // empty: goal unreachable / not hit
    double steady_drop = 0.0;
};

/// Smallest n <= n_max with cumulative Drop probability >= p_g, starting
/// from the input port. Checks the steady-state value first and reports
/// unreachable without iterating when it falls short of p_g.
HittingResult hitting_time(const RingChainSpec& spec, Regime regime,
                           double p_g, std::size_t n_max);

/// Cumulative Drop probability per step (rows, n = 0..n_max) for each
/// sample of one swept parameter (columns). Axis must be "theta" or a
/// coupling tie ("k1", "k1=k2", ...).
SweepGrid time_grid(const RingChainSpec& spec_template, const Axis& axis,
                    std::size_t n_max, Regime regime);

} // namespace ringwalk
