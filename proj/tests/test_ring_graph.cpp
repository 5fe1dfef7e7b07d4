#include "ringwalk/errors.hpp"
#include "ringwalk/quantum.hpp"
#include "ringwalk/transfer.hpp"

#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <random>

using namespace ringwalk;
using std::numbers::pi;

namespace {

RingChainSpec single(double k1, double k2, double alpha = 1.0, double theta = 0.0) {
    return RingChainSpec::uniform({k1, k2}, alpha, theta);
}

} // namespace

TEST_CASE("phase from geometry") {
    // One wavelength per circumference: lambda = 2*pi*r, n_eff = 1.
    const double r = 3.7e-6;
    CHECK(phase_from_geometry(r, 1.0, 2.0 * pi * r) == doctest::Approx(2.0 * pi).epsilon(1e-14));

    // Direct evaluation, frozen independently of the implementation.
    const double expected = 2.0 * pi * 1.5 * (2.0 * pi * 20e-6) / 635e-9;
    CHECK(phase_from_geometry(20e-6, 1.5, 635e-9) == doctest::Approx(expected).epsilon(1e-15));
    CHECK(phase_from_geometry(20e-6, 1.5, 635e-9) == doctest::Approx(1865.1220915444458).epsilon(1e-12));

    // Inverse proportionality in lambda.
    const double theta1 = phase_from_geometry(10e-6, 2.0, 500e-9);
    const double theta2 = phase_from_geometry(10e-6, 2.0, 1000e-9);
    CHECK(theta1 == doctest::Approx(2.0 * theta2).epsilon(1e-14));

    CHECK_THROWS_AS(phase_from_geometry(0.0, 1.0, 1.0), ValidationError);
    CHECK_THROWS_AS(phase_from_geometry(1.0, -1.0, 1.0), ValidationError);
    CHECK_THROWS_AS(phase_from_geometry(1.0, 1.0, 0.0), ValidationError);
}

TEST_CASE("loss from geometry") {
    CHECK(loss_from_geometry(0.0, 0.0, 1.0, 0.0) == 1.0);

    const double L = 2.5e-4;
    const double Lc = 0.5e-4;
    CHECK(loss_from_geometry(1.0 / (L + Lc), 0.0, L, Lc) ==
          doctest::Approx(std::exp(-1.0)).epsilon(1e-14));

    // alpha_t = 0.01/um, alpha_b = 0.001/um, L = 125.66 um, L_c = 0.
    const double expected = std::exp(-(1e4 * 125.66e-6 + 1e3 * 125.66e-6));
    CHECK(loss_from_geometry(1e4, 1e3, 125.66e-6, 0.0) ==
          doctest::Approx(expected).epsilon(1e-15));
    CHECK(loss_from_geometry(1e4, 1e3, 125.66e-6, 0.0) ==
          doctest::Approx(0.2510106275274209).epsilon(1e-12));

    CHECK_THROWS_AS(loss_from_geometry(-1.0, 0.0, 1.0, 0.0), ValidationError);
    CHECK_THROWS_AS(loss_from_geometry(0.0, 0.0, 0.0, 0.0), ValidationError);
    CHECK_THROWS_AS(loss_from_geometry(0.0, 0.0, 1.0, -1.0), ValidationError);
}

TEST_CASE("half-ring time") {
    CHECK(half_ring_time(kSpeedOfLight / pi, 1.0) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(half_ring_time(20e-6, 1.5) ==
          doctest::Approx(pi * 20e-6 * 1.5 / 299792458.0).epsilon(1e-15));
    CHECK(half_ring_time(20e-6, 1.5) ==
          doctest::Approx(3.143767532927523e-13).epsilon(1e-12));
    CHECK(half_ring_time(2.0, 1.25) == doctest::Approx(2.0 * half_ring_time(1.0, 1.25)).epsilon(1e-15));
    CHECK_THROWS_AS(half_ring_time(0.0, 1.0), ValidationError);
}

TEST_CASE("phase reduction keeps the raw value separate") {
    const double raw = phase_from_geometry(20e-6, 1.5, 635e-9);
    CHECK(raw > 2.0 * pi);  // geometry-derived phases are far beyond one turn
    const double reduced = reduce_phase(raw);
    CHECK(reduced >= 0.0);
    CHECK(reduced < 2.0 * pi);
    CHECK(reduce_phase(-pi / 2) == doctest::Approx(1.5 * pi).epsilon(1e-14));
    CHECK(reduce_phase(2.0 * pi) == doctest::Approx(0.0).epsilon(1e-14));
}

TEST_CASE("spec validation") {
    CHECK_THROWS_AS(RingChainSpec::uniform({0.5}, 1.0, 0.0), ValidationError);
    CHECK_THROWS_AS(RingChainSpec::uniform({1.2, 0.5}, 1.0, 0.0), ValidationError);
    CHECK_THROWS_AS(RingChainSpec::uniform({-0.1, 0.5}, 1.0, 0.0), ValidationError);
    CHECK_THROWS_AS(RingChainSpec::uniform({0.5, 0.5}, 0.0, 0.0), ValidationError);
    CHECK_THROWS_AS(RingChainSpec::uniform({0.5, 0.5}, 1.1, 0.0), ValidationError);
    CHECK_THROWS_AS(RingChainSpec::parametric({0.5, 0.5}, {1.0, 1.0}, {0.0}),
                    ValidationError);
    CHECK_THROWS_AS(RingChainSpec::parametric({0.5, 0.5}, {1.0}, {0.0, 0.0}),
                    ValidationError);
    CHECK_NOTHROW(RingChainSpec::uniform({0.0, 1.0}, 1.0, -3.0));
}

TEST_CASE("explicit parameters must agree with geometry") {
    RingGeometry geometry;
    geometry.radius_m = {20e-6};
    geometry.n_eff = 1.5;
    geometry.wavelength_m = 635e-9;

    RingChainSpec spec = RingChainSpec::from_geometry({0.5, 0.5}, geometry);
    CHECK(spec.phases[0] == doctest::Approx(1865.1220915444458).epsilon(1e-12));
    CHECK(spec.loss_per_round[0] == 1.0);

    // Attaching the same geometry to matching explicit values is accepted.
    RingChainSpec both = spec;
    CHECK_NOTHROW(both.validate());

    // A perturbed phase is rejected.
    both.phases[0] += 1e-6;
    CHECK_THROWS_AS(both.validate(), ValidationError);
}

TEST_CASE("build_chain shapes and node names") {
    const NodeGraph one = build_chain(single(0.5, 0.5));
    CHECK(one.node_count() == 5);
    CHECK(one.node_name(0) == "P0");
    CHECK(one.node_name(1) == "P1");
    CHECK(one.node_name(2) == "P2");
    CHECK(one.node_name(one.drop_node()) == "PD");
    CHECK(one.node_name(one.thru_node()) == "PT");

    const NodeGraph two = build_chain(RingChainSpec::uniform({0.5, 0.5, 0.5}, 1.0, 0.0));
    CHECK(two.node_count() == 7);
    CHECK(two.drop_node() == 5);
    CHECK(two.thru_node() == 6);

    // Absorbing nodes have no outgoing edges.
    for (const GraphEdge& edge : two.edges) {
        CHECK(edge.from != two.drop_node());
        CHECK(edge.from != two.thru_node());
    }
    CHECK(two.edges.size() == 2 + 4 * two.num_rings());
}

TEST_CASE("k1 = 0 sends the walker straight to Thru") {
    const NodeGraph graph = build_chain(single(0.0, 0.0));
    const ClassicalMatrix matrix = classical_transfer_matrix(graph);
    Eigen::VectorXd p0 = Eigen::VectorXd::Zero(5);
    p0(0) = 1.0;
    const Eigen::VectorXd p1 = matrix.values * p0;
    CHECK(p1(graph.thru_node()) == 1.0);
}

TEST_CASE("classical single-ring matrix matches the printed 5x5") {
    const double alpha = 0.83;
    const NodeGraph graph = build_chain(single(0.5, 0.5, alpha));
    const Eigen::MatrixXd& T = classical_transfer_matrix(graph).values;
    const double h = std::sqrt(alpha);

    Eigen::MatrixXd expected(5, 5);
    // rows/cols: P0 P1 P2 PD PT
    expected << 0.0, 0.0, 0.0, 0.0, 0.0,
                0.5, 0.0, 0.5 * h, 0.0, 0.0,
                0.0, 0.5 * h, 0.0, 0.0, 0.0,
                0.0, 0.5 * h, 0.0, 1.0, 0.0,
                0.5, 0.0, 0.5 * h, 0.0, 1.0;
    CHECK((T - expected).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("classical two-ring matrix matches the printed 7x7") {
    const double k1 = 0.3, k2 = 0.6, k3 = 0.9, alpha = 0.91;
    const double t1 = 1 - k1, t2 = 1 - k2, t3 = 1 - k3;
    const double h = std::sqrt(alpha);
    const NodeGraph graph =
        build_chain(RingChainSpec::uniform({k1, k2, k3}, alpha, 0.0));
    const Eigen::MatrixXd& T = classical_transfer_matrix(graph).values;

    Eigen::MatrixXd expected = Eigen::MatrixXd::Zero(7, 7);
    expected(1, 0) = k1;
    expected(6, 0) = t1;
    expected(2, 1) = t2 * h;
    expected(3, 1) = k2 * h;
    expected(1, 2) = t1 * h;
    expected(6, 2) = k1 * h;
    expected(4, 3) = t3 * h;
    expected(5, 3) = k3 * h;
    expected(2, 4) = k2 * h;
    expected(3, 4) = t2 * h;
    expected(5, 5) = 1.0;
    expected(6, 6) = 1.0;
    CHECK((T - expected).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("classical columns are stochastic, substochastic with loss") {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int rings = 1; rings <= 4; ++rings) {
        std::vector<double> ks;
        for (int i = 0; i <= rings; ++i) {
            ks.push_back(unit(rng));
        }
        const NodeGraph lossless_graph =
            build_chain(RingChainSpec::uniform(ks, 1.0, 0.3));
        const Eigen::MatrixXd lossless =
            classical_transfer_matrix(lossless_graph).values;
        for (Eigen::Index c = 0; c < lossless.cols(); ++c) {
            CHECK(lossless.col(c).sum() == doctest::Approx(1.0).epsilon(1e-15));
        }

        const double alpha = 0.5 + 0.5 * unit(rng);
        const Eigen::MatrixXd lossy =
            classical_transfer_matrix(
                build_chain(RingChainSpec::uniform(ks, alpha, 0.0)))
                .values;
        for (Eigen::Index c = 0; c < lossy.cols(); ++c) {
            CHECK(lossy.col(c).sum() <= 1.0 + 1e-15);
            CHECK(lossy.col(c).minCoeff() >= 0.0);
        }
    }
}

TEST_CASE("quantum single-ring matrix: input column and ring entries") {
    const NodeGraph graph = build_chain(single(0.5, 0.5));
    const Eigen::MatrixXcd& T = quantum_transfer_matrix(graph).values;
    const double s = std::sqrt(0.5);

    CHECK(T(1, 0).real() == doctest::Approx(-s).epsilon(1e-15));
    CHECK(T(1, 0).imag() == 0.0);
    CHECK(T(4, 0).real() == doctest::Approx(s).epsilon(1e-15));
    CHECK(T(2, 0) == std::complex<double>(0.0, 0.0));
    CHECK(T(3, 0) == std::complex<double>(0.0, 0.0));
    CHECK(T(0, 0) == std::complex<double>(0.0, 0.0));

    CHECK(T(2, 1).real() == doctest::Approx(s).epsilon(1e-15));
    CHECK(T(3, 1).real() == doctest::Approx(s).epsilon(1e-15));
    CHECK(T(1, 2).real() == doctest::Approx(s).epsilon(1e-15));
    CHECK(T(4, 2).real() == doctest::Approx(s).epsilon(1e-15));
    CHECK(T(3, 3) == std::complex<double>(1.0, 0.0));
    CHECK(T(4, 4) == std::complex<double>(1.0, 0.0));
}

TEST_CASE("quantum two-ring matrix: inter-ring minus sign and phases") {
    const double k1 = 0.5, k2 = 0.5, k3 = 0.5;
    const NodeGraph graph =
        build_chain(RingChainSpec::uniform({k1, k2, k3}, 1.0, 0.0));
    const Eigen::MatrixXcd& T = quantum_transfer_matrix(graph).values;

    // gamma_2 = 1: the backward inter-ring hop is -(k2 gamma2)^{1/2}.
    CHECK(T(2, 4).real() == doctest::Approx(-std::sqrt(0.5)).epsilon(1e-15));
    CHECK(T(2, 4).imag() == 0.0);
    CHECK(T(1, 0).real() == doctest::Approx(-std::sqrt(0.5)).epsilon(1e-15));
    CHECK(T(6, 0).real() == doctest::Approx(std::sqrt(0.5)).epsilon(1e-15));

    // Heterogeneous rings: every hop out of ring j carries alpha_j^{1/4} e^{i theta_j/2}.
    const RingChainSpec spec =
        RingChainSpec::parametric({0.4, 0.3, 0.2}, {0.9, 0.7}, {0.5, 1.3});
    const Eigen::MatrixXcd& Th =
        quantum_transfer_matrix(build_chain(spec)).values;
    const std::complex<double> h1 = std::polar(std::pow(0.9, 0.25), 0.25);
    const std::complex<double> h2 = std::polar(std::pow(0.7, 0.25), 0.65);
    CHECK(std::abs(Th(2, 1) - std::sqrt(0.7) * h1) < 1e-15);   // (t2 g1)^{1/2}
    CHECK(std::abs(Th(3, 1) - std::sqrt(0.3) * h1) < 1e-15);   // (k2 g1)^{1/2}
    CHECK(std::abs(Th(4, 3) - std::sqrt(0.8) * h2) < 1e-15);   // (t3 g2)^{1/2}
    CHECK(std::abs(Th(5, 3) - std::sqrt(0.2) * h2) < 1e-15);   // (k3 g2)^{1/2}
    CHECK(std::abs(Th(2, 4) + std::sqrt(0.3) * h2) < 1e-15);   // -(k2 g2)^{1/2}
    CHECK(std::abs(Th(1, 0) + std::sqrt(0.4)) < 1e-15);        // -k1^{1/2}, no gamma
    CHECK(std::abs(Th(6, 0) - std::sqrt(0.6)) < 1e-15);        // t1^{1/2}, no gamma
}

TEST_CASE("lossless quantum columns form an isometry") {
    std::mt19937 rng(21);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::uniform_real_distribution<double> angle(0.0, 2.0 * pi);

    for (int rings = 1; rings <= 4; ++rings) {
        std::vector<double> ks;
        for (int i = 0; i <= rings; ++i) {
            ks.push_back(unit(rng));
        }
        std::vector<double> thetas;
        std::vector<double> losses;
        for (int j = 0; j < rings; ++j) {
            thetas.push_back(angle(rng));
            losses.push_back(1.0);
        }
        const NodeGraph graph =
            build_chain(RingChainSpec::parametric(ks, losses, thetas));
        const Eigen::MatrixXcd& T = quantum_transfer_matrix(graph).values;

        const Eigen::Index transient = static_cast<Eigen::Index>(graph.node_count()) - 2;
        const Eigen::MatrixXcd sources = T.leftCols(transient);
        const Eigen::MatrixXcd gram = sources.adjoint() * sources;
        CHECK((gram - Eigen::MatrixXcd::Identity(transient, transient))
                  .cwiseAbs()
                  .maxCoeff() < 1e-12);

        // Norm preservation on 100 random states supported off the ports.
        std::normal_distribution<double> gauss(0.0, 1.0);
        for (int trial = 0; trial < 100; ++trial) {
            Eigen::VectorXcd a = Eigen::VectorXcd::Zero(
                static_cast<Eigen::Index>(graph.node_count()));
            for (Eigen::Index i = 0; i < transient; ++i) {
                a(i) = std::complex<double>(gauss(rng), gauss(rng));
            }
            a /= a.norm();
            CHECK(std::abs((T * a).norm() - 1.0) < 1e-12);
        }
    }
}

TEST_CASE("quantum and classical matrices share their sparsity pattern") {
    std::mt19937 rng(5);
    std::uniform_real_distribution<double> coupling(0.05, 0.95);
    std::uniform_real_distribution<double> angle(0.0, 2.0 * pi);
    for (int rings = 1; rings <= 3; ++rings) {
        std::vector<double> ks;
        for (int i = 0; i <= rings; ++i) {
            ks.push_back(coupling(rng));
        }
        const RingChainSpec spec = RingChainSpec::uniform(ks, 0.95, angle(rng));
        const NodeGraph graph = build_chain(spec);
        const Eigen::MatrixXd C = classical_transfer_matrix(graph).values;
        const Eigen::MatrixXcd Q = quantum_transfer_matrix(graph).values;
        for (Eigen::Index r = 0; r < C.rows(); ++r) {
            for (Eigen::Index c = 0; c < C.cols(); ++c) {
                CHECK((C(r, c) != 0.0) == (std::abs(Q(r, c)) != 0.0));
            }
        }
    }
}

TEST_CASE("geometry-built and parameter-built specs give identical matrices") {
    RingGeometry geometry;
    geometry.radius_m = {20e-6, 22e-6};
    geometry.n_eff = 1.5;
    geometry.wavelength_m = 635e-9;
    geometry.absorption_per_m = 40.0;
    geometry.bend_loss_per_m = 3.0;

    const RingChainSpec geometric =
        RingChainSpec::from_geometry({0.4, 0.5, 0.6}, geometry);
    const RingChainSpec parametric = RingChainSpec::parametric(
        geometric.couplings, geometric.loss_per_round, geometric.phases);

    const Eigen::MatrixXcd Qg =
        quantum_transfer_matrix(build_chain(geometric)).values;
    const Eigen::MatrixXcd Qp =
        quantum_transfer_matrix(build_chain(parametric)).values;
    CHECK((Qg - Qp).cwiseAbs().maxCoeff() < 1e-12);

    const Eigen::MatrixXd Cg =
        classical_transfer_matrix(build_chain(geometric)).values;
    const Eigen::MatrixXd Cp =
        classical_transfer_matrix(build_chain(parametric)).values;
    CHECK((Cg - Cp).cwiseAbs().maxCoeff() < 1e-12);
}
