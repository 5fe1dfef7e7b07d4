#include "ringwalk/classical.hpp"
#include "ringwalk/errors.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace ringwalk;

namespace {

RingChainSpec single(double k1, double k2, double alpha = 1.0) {
    return RingChainSpec::uniform({k1, k2}, alpha, 0.0);
}

RingChainSpec twin(double k1, double k2, double k3, double alpha = 1.0) {
    return RingChainSpec::uniform({k1, k2, k3}, alpha, 0.0);
}

Eigen::VectorXd start_at_input(const NodeGraph& graph) {
    Eigen::VectorXd p0 =
        Eigen::VectorXd::Zero(static_cast<Eigen::Index>(graph.node_count()));
    p0(0) = 1.0;
    return p0;
}

std::vector<Eigen::VectorXd> run(const RingChainSpec& spec, std::size_t steps) {
    const NodeGraph graph = build_chain(spec);
    return evolve(classical_transfer_matrix(graph), start_at_input(graph), steps);
}

} // namespace

TEST_CASE("evolve: balanced single ring") {
    const auto states = run(single(0.5, 0.5), 10);
    const NodeGraph graph = build_chain(single(0.5, 0.5));
    const auto drop = static_cast<Eigen::Index>(graph.drop_node());
    const auto thru = static_cast<Eigen::Index>(graph.thru_node());

    CHECK(states[1](thru) == 0.5);   // p_T(1) = t1
    CHECK(states[2](drop) == 0.25);  // p_D(2) = k1 k2
    // Long-run Drop probability approaches k/(2-k) = 1/3.
    const auto late = run(single(0.5, 0.5), 200).back();
    CHECK(late(drop) == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
}

TEST_CASE("evolve: k1 = 0 absorbs immediately and stays put") {
    const auto states = run(single(0.0, 0.7), 6);
    const NodeGraph graph = build_chain(single(0.0, 0.7));
    const auto thru = static_cast<Eigen::Index>(graph.thru_node());
    CHECK(states[1](thru) == 1.0);
    for (std::size_t n = 1; n < states.size(); ++n) {
        CHECK((states[n] - states[1]).cwiseAbs().maxCoeff() == 0.0);
    }
}

TEST_CASE("evolve: fully transmissive two-ring chain drops with certainty") {
    const auto states = run(twin(1.0, 1.0, 1.0), 4);
    const NodeGraph graph = build_chain(twin(1.0, 1.0, 1.0));
    const auto drop = static_cast<Eigen::Index>(graph.drop_node());
    CHECK(states[2](drop) == 0.0);
    CHECK(states[3](drop) == 1.0);
    CHECK(states[4](drop) == 1.0);
}

TEST_CASE("evolve rejects dimension mismatch") {
    const NodeGraph graph = build_chain(single(0.5, 0.5));
    const ClassicalMatrix matrix = classical_transfer_matrix(graph);
    Eigen::VectorXd wrong = Eigen::VectorXd::Zero(4);
    CHECK_THROWS_AS(evolve(matrix, wrong, 3), ValidationError);
}

TEST_CASE("steady_state matches the paper's threshold points") {
    const NodeGraph graph = build_chain(single(0.8, 0.8));
    const Eigen::VectorXd final_state =
        steady_state(classical_transfer_matrix(graph), start_at_input(graph));
    CHECK(final_state(graph.drop_node()) ==
          doctest::Approx(2.0 / 3.0).epsilon(1e-10));

    const NodeGraph forced = build_chain(single(1.0, 1.0));
    const Eigen::VectorXd forced_state =
        steady_state(classical_transfer_matrix(forced), start_at_input(forced));
    CHECK(forced_state(forced.drop_node()) == doctest::Approx(1.0).epsilon(1e-12));

    const NodeGraph scenario = build_chain(twin(0.5, 1.0, 0.5));
    const Eigen::VectorXd scenario_state = steady_state(
        classical_transfer_matrix(scenario), start_at_input(scenario));
    CHECK(scenario_state(scenario.drop_node()) ==
          doctest::Approx(1.0 / 3.0).epsilon(1e-10));
}

TEST_CASE("steady_state flags a walker sealed inside a ring") {
    // Ring B has both couplers closed; a walker starting inside it can
    // never leave while alpha = 1.
    const NodeGraph graph = build_chain(twin(0.5, 0.0, 0.0));
    Eigen::VectorXd inside =
        Eigen::VectorXd::Zero(static_cast<Eigen::Index>(graph.node_count()));
    inside(3) = 1.0;
    CHECK_THROWS_AS(
        steady_state(classical_transfer_matrix(graph), inside, {1e-12, 100000}),
        ConvergenceError);
}

TEST_CASE("closed_form_single values") {
    CHECK(closed_form_single(1.0, 1.0, 1.0).drop == 1.0);
    CHECK(closed_form_single(1.0, 1.0, 1.0).thru == 0.0);
    CHECK(closed_form_single(0.5, 0.5, 1.0).drop == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
    CHECK(closed_form_single(0.5, 0.5, 1.0).thru == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
    CHECK(closed_form_single(0.8, 0.8, 1.0).drop == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
    // Degenerate denominator resolves by the absorbing argument.
    CHECK(closed_form_single(0.0, 0.0, 1.0).drop == 0.0);
    CHECK(closed_form_single(0.0, 0.0, 1.0).thru == 1.0);
}

TEST_CASE("closed_form_double values and degenerate corners") {
    CHECK(closed_form_double(1.0, 1.0, 1.0, 1.0).drop == 1.0);
    CHECK(closed_form_double(1.0, 1.0, 1.0, 1.0).thru == 0.0);
    CHECK(closed_form_double(0.5, 1.0, 0.5, 1.0).drop ==
          doctest::Approx(1.0 / 3.0).epsilon(1e-15));
    CHECK(closed_form_double(0.5, 1.0, 0.5, 1.0).thru ==
          doctest::Approx(2.0 / 3.0).epsilon(1e-15));

    for (const auto& [k1, k2, k3] :
         {std::array{0.0, 0.0, 0.7}, std::array{0.7, 0.0, 0.0},
          std::array{0.0, 0.7, 0.0}}) {
        const PortProbabilities ports = closed_form_double(k1, k2, k3, 1.0);
        CHECK(ports.drop == 0.0);
        CHECK(ports.thru == 1.0);
    }
}

TEST_CASE("closed forms agree with Markov iteration on a (k1, k2) grid") {
    for (const double alpha : {1.0, 0.9}) {
        for (int i = 0; i <= 20; ++i) {
            for (int j = 0; j <= 20; ++j) {
                const double k1 = i / 20.0;
                const double k2 = j / 20.0;
                const PortProbabilities closed = closed_form_single(k1, k2, alpha);
                const NodeGraph graph = build_chain(single(k1, k2, alpha));
                const Eigen::VectorXd state =
                    steady_state(classical_transfer_matrix(graph),
                                 start_at_input(graph), {1e-12, 1'000'000});
                CHECK(std::abs(closed.drop - state(graph.drop_node())) < 1e-10);
                CHECK(std::abs(closed.thru - state(graph.thru_node())) < 1e-10);
            }
        }
    }
}

TEST_CASE("two-ring closed form cross-checked against iteration") {
    const PortProbabilities closed = closed_form_double(0.5, 0.5, 0.5, 1.0);
    const NodeGraph graph = build_chain(twin(0.5, 0.5, 0.5));
    const Eigen::VectorXd state = steady_state(classical_transfer_matrix(graph),
                                               start_at_input(graph));
    CHECK(std::abs(closed.drop - state(graph.drop_node())) < 1e-10);
    CHECK(std::abs(closed.thru - state(graph.thru_node())) < 1e-10);
    CHECK(closed.drop + closed.thru == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("path-sum oracle: printed first steps") {
    CHECK(path_sum_oracle(single(0.3, 0.8), 1).thru == doctest::Approx(0.7).epsilon(1e-15));
    CHECK(path_sum_oracle(single(0.3, 0.8), 1).drop == 0.0);
    CHECK(path_sum_oracle(single(0.5, 0.5), 2).drop == doctest::Approx(0.25).epsilon(1e-15));
    CHECK_THROWS_AS(
        path_sum_oracle(RingChainSpec::uniform({0.5, 0.5, 0.5, 0.5}, 1.0, 0.0), 5),
        ValidationError);
}

TEST_CASE("path-sum oracle equals Markov cumulative absorption") {
    std::mt19937 rng(99);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::uniform_real_distribution<double> loss(0.6, 1.0);

    for (int rings = 1; rings <= 2; ++rings) {
        for (int draw = 0; draw < 50; ++draw) {
            std::vector<double> ks;
            for (int i = 0; i <= rings; ++i) {
                ks.push_back(unit(rng));
            }
            const RingChainSpec spec = RingChainSpec::uniform(ks, loss(rng), 0.0);
            const NodeGraph graph = build_chain(spec);
            const auto states =
                evolve(classical_transfer_matrix(graph), start_at_input(graph), 20);
            for (std::size_t n = 0; n <= 20; ++n) {
                const PortProbabilities oracle = path_sum_oracle(spec, n);
                CHECK(std::abs(oracle.drop - states[n](graph.drop_node())) < 1e-12);
                CHECK(std::abs(oracle.thru - states[n](graph.thru_node())) < 1e-12);
            }
        }
    }
}

TEST_CASE("path-sum oracle converges to the closed forms") {
    std::mt19937 rng(123);
    std::uniform_real_distribution<double> mid(0.2, 0.8);
    for (int draw = 0; draw < 10; ++draw) {
        const double k1 = mid(rng), k2 = mid(rng), alpha = 1.0;
        const PortProbabilities limit = closed_form_single(k1, k2, alpha);
        const PortProbabilities truncated = path_sum_oracle(single(k1, k2, alpha), 300);
        CHECK(std::abs(limit.drop - truncated.drop) < 1e-12);
        CHECK(std::abs(limit.thru - truncated.thru) < 1e-12);

        const double k3 = mid(rng);
        const PortProbabilities limit2 = closed_form_double(k1, k2, k3, alpha);
        const PortProbabilities truncated2 =
            path_sum_oracle(twin(k1, k2, k3, alpha), 400);
        CHECK(std::abs(limit2.drop - truncated2.drop) < 1e-10);
        CHECK(std::abs(limit2.thru - truncated2.thru) < 1e-10);
    }
}

TEST_CASE("mass conservation and monotone absorption") {
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int draw = 0; draw < 20; ++draw) {
        const double k1 = unit(rng), k2 = unit(rng);
        const auto lossless = run(single(k1, k2, 1.0), 60);
        for (const auto& state : lossless) {
            CHECK(std::abs(state.sum() - 1.0) < 1e-12);
            CHECK(state.minCoeff() >= -1e-15);
        }

        const double alpha = 0.5 + 0.5 * unit(rng);
        const auto lossy = run(single(k1, k2, alpha), 60);
        const NodeGraph graph = build_chain(single(k1, k2, alpha));
        const auto drop = static_cast<Eigen::Index>(graph.drop_node());
        const auto thru = static_cast<Eigen::Index>(graph.thru_node());
        for (std::size_t n = 1; n < lossy.size(); ++n) {
            CHECK(lossy[n].sum() <= lossy[n - 1].sum() + 1e-15);
            CHECK(lossy[n](drop) >= lossy[n - 1](drop));
            CHECK(lossy[n](thru) >= lossy[n - 1](thru));
        }
    }
}

TEST_CASE("Drop updates at even steps, Thru at odd steps") {
    const auto states = run(single(0.37, 0.62, 0.88), 31);
    const NodeGraph graph = build_chain(single(0.37, 0.62, 0.88));
    const auto drop = static_cast<Eigen::Index>(graph.drop_node());
    const auto thru = static_cast<Eigen::Index>(graph.thru_node());
    for (std::size_t n = 1; n < states.size(); ++n) {
        const double drop_gain = states[n](drop) - states[n - 1](drop);
        const double thru_gain = states[n](thru) - states[n - 1](thru);
        if (n % 2 == 0) {
            CHECK(drop_gain > 0.0);
            CHECK(thru_gain == 0.0);
        } else {
            CHECK(drop_gain == 0.0);
            CHECK(thru_gain >= 0.0);
            if (n > 1) {
                CHECK(thru_gain > 0.0);
            }
        }
    }
}
