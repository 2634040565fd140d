#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>
#include <vector>

#include "mixlab/fem_core.hpp"
#include "oracles/quadrature_oracle.hpp"

using namespace mixlab;

namespace {

ErrorKind kind_of(auto&& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.kind();
    }
    FAIL("expected mixlab::Error");
    return ErrorKind::Request;
}

// Independent weighted norm: plain loop, no peak scaling.
double naive_lp(const std::vector<double>& f, const std::vector<double>& w, double p) {
    if (std::isinf(p)) {
        double m = 0.0;
        for (std::size_t i = 0; i < f.size(); ++i)
            if (w[i] > 0.0) m = std::max(m, std::abs(f[i]));
        return m;
    }
    double s = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) s += w[i] * std::pow(std::abs(f[i]), p);
    return std::pow(s, 1.0 / p);
}

} // namespace

TEST_CASE("mesh construction") {
    const Mesh1D m1 = build_mesh(0.0, 1.0, 1);
    CHECK(m1.h() == 0.5);
    CHECK(m1.node_position(0) == 0.5);

    const Mesh1D m3 = build_mesh(0.0, 1.0, 3);
    CHECK(m3.h() == 0.25);
    CHECK(m3.node_position(0) == 0.25);
    CHECK(m3.node_position(1) == 0.5);
    CHECK(m3.node_position(2) == 0.75);

    const Mesh1D m7 = build_mesh(-2.0, 2.0, 7);
    CHECK(m7.h() == 0.5);
    CHECK(m7.node_position(3) == 0.0);

    CHECK(build_mesh(0.1, 0.7, 5) == build_mesh(0.1, 0.7, 5));
    CHECK(build_mesh(0.1, 0.7, 5).h() == (0.7 - 0.1) / 6.0);
}

TEST_CASE("mesh errors") {
    CHECK(kind_of([] { build_mesh(1.0, 0.0, 3); }) == ErrorKind::InvalidDomain);
    CHECK(kind_of([] { build_mesh(1.0, 1.0, 3); }) == ErrorKind::InvalidDomain);
    CHECK(kind_of([] { build_mesh(0.0, INFINITY, 3); }) == ErrorKind::InvalidDomain);
    CHECK(kind_of([] { build_mesh(0.0, 1.0, 0); }) == ErrorKind::InvalidSize);
}

TEST_CASE("discrete function is the zero-extended hat expansion") {
    const Mesh1D mesh(0.0, 1.0, 3);
    const DiscreteFunction u(mesh, Eigen::Vector3d(1.0, -2.0, 4.0));
    CHECK(u(0.25) == doctest::Approx(1.0));
    CHECK(u(0.375) == doctest::Approx(-0.5));
    CHECK(u(0.125) == doctest::Approx(0.5));
    CHECK(u(0.875) == doctest::Approx(2.0));
    CHECK(u(-1.0) == 0.0);
    CHECK(u(0.0) == 0.0);
    CHECK(u(1.0) == 0.0);
    CHECK(u(3.0) == 0.0);
    CHECK(kind_of([&] { DiscreteFunction(mesh, Eigen::VectorXd::Zero(2)); }) == ErrorKind::Dimension);
}

TEST_CASE("mass matrix closed form") {
    const OperatorMatrix m1 = assemble_mass(Mesh1D(0.0, 1.0, 1));
    CHECK(m1.kind == OperatorKind::Mass);
    CHECK_FALSE(m1.s.has_value());
    CHECK(m1.data(0, 0) == doctest::Approx(1.0 / 3.0).epsilon(1e-15));

    const Eigen::MatrixXd m3 = assemble_mass(Mesh1D(0.0, 1.0, 3)).data;
    for (int i = 0; i < 3; ++i) CHECK(m3(i, i) == doctest::Approx(1.0 / 6.0).epsilon(1e-15));
    CHECK(m3(0, 1) == doctest::Approx(1.0 / 24.0).epsilon(1e-15));
    CHECK(m3(1, 2) == doctest::Approx(1.0 / 24.0).epsilon(1e-15));
    CHECK(m3(0, 2) == 0.0);

    const Mesh1D mesh(-1.0, 2.0, 19);
    const Eigen::MatrixXd m = assemble_mass(mesh).data;
    CHECK(m == m.transpose());
    for (Eigen::Index i = 1; i + 1 < m.rows(); ++i) CHECK(m.row(i).sum() == doctest::Approx(mesh.h()).epsilon(1e-14));
    CHECK((m - oracle::mass_matrix(mesh)).cwiseAbs().maxCoeff() <= 1e-15);
    CHECK(Eigen::LLT<Eigen::MatrixXd>(m).info() == Eigen::Success);
}

TEST_CASE("local stiffness closed form") {
    const Eigen::MatrixXd k1 = assemble_local_stiffness(Mesh1D(0.0, 1.0, 1)).data;
    CHECK(k1(0, 0) == doctest::Approx(4.0));

    const Eigen::MatrixXd k2 = assemble_local_stiffness(Mesh1D(0.0, 1.0, 2)).data;
    CHECK(k2(0, 0) == doctest::Approx(6.0).epsilon(1e-14));
    CHECK(k2(1, 1) == doctest::Approx(6.0).epsilon(1e-14));
    CHECK(k2(0, 1) == doctest::Approx(-3.0).epsilon(1e-14));
    CHECK(k2(1, 0) == doctest::Approx(-3.0).epsilon(1e-14));

    const Mesh1D mesh(0.0, 3.0, 25);
    const Eigen::MatrixXd k = assemble_local_stiffness(mesh).data;
    CHECK(k == k.transpose());
    for (Eigen::Index i = 1; i + 1 < k.rows(); ++i) CHECK(std::abs(k.row(i).sum()) <= 1e-12 * 4.0 / mesh.h());
    CHECK((k - oracle::stiffness_matrix(mesh)).cwiseAbs().maxCoeff() <= 1e-12 * k.cwiseAbs().maxCoeff());
    CHECK(Eigen::LLT<Eigen::MatrixXd>(k).info() == Eigen::Success);
}

TEST_CASE("mass and stiffness are tridiagonal") {
    const Mesh1D mesh(0.0, 1.0, 9);
    for (const Eigen::MatrixXd& m : {assemble_mass(mesh).data, assemble_local_stiffness(mesh).data}) {
        for (Eigen::Index i = 0; i < m.rows(); ++i)
            for (Eigen::Index j = 0; j < m.cols(); ++j)
                if (std::abs(i - j) > 1) CHECK(m(i, j) == 0.0);
    }
}

TEST_CASE("operator kind names round trip") {
    for (OperatorKind k : {OperatorKind::Mass, OperatorKind::LocalStiffness, OperatorKind::FractionalStiffness}) {
        CHECK(operator_kind_from_string(to_string(k)) == k);
    }
    CHECK_FALSE(operator_kind_from_string("Gram").has_value());
}

TEST_CASE("gagliardo seminorm") {
    const Mesh1D mesh(0.0, 1.0, 4);
    const OperatorMatrix frac = assemble_fractional_stiffness(mesh, 0.3);

    CHECK(gagliardo_seminorm(DiscreteFunction(mesh, Eigen::VectorXd::Zero(4)), frac) == 0.0);
    CHECK(gagliardo_seminorm(DiscreteFunction(mesh, Eigen::VectorXd::Unit(4, 0)), frac) ==
          doctest::Approx(std::sqrt(frac.data(0, 0))).epsilon(1e-15));

    std::mt19937_64 rng(11);
    std::normal_distribution<double> normal;
    for (int trial = 0; trial < 3; ++trial) {
        Eigen::VectorXd u(4);
        for (int i = 0; i < 4; ++i) u[i] = normal(rng);
        const double got = gagliardo_seminorm(DiscreteFunction(mesh, u), frac);
        const double want = std::sqrt(oracle::gagliardo_form(mesh, u, u, 0.3));
        CHECK(std::abs(got - want) <= 1e-5 * want);
    }

    const OperatorMatrix mass = assemble_mass(mesh);
    CHECK(kind_of([&] { gagliardo_seminorm(DiscreteFunction(mesh, Eigen::VectorXd::Zero(4)), mass); }) ==
          ErrorKind::Request);
    const Mesh1D other(0.0, 2.0, 4);
    CHECK(kind_of([&] { gagliardo_seminorm(DiscreteFunction(other, Eigen::VectorXd::Zero(4)), frac); }) ==
          ErrorKind::Dimension);
}

TEST_CASE("lp norm examples") {
    const std::vector<double> ones(4, 1.0);
    const std::vector<double> quarter(4, 0.25);
    for (double p : {1.0, 1.5, 2.0, 7.0, kInfinity}) CHECK(lp_norm(ones, quarter, p) == doctest::Approx(1.0));

    const std::vector<double> f34{3.0, 4.0};
    const std::vector<double> w11{1.0, 1.0};
    CHECK(lp_norm(f34, w11, 2.0) == doctest::Approx(5.0));
    CHECK(lp_norm(f34, w11, kInfinity) == 4.0);

    const std::vector<double> f123{1.0, 2.0, 3.0};
    const std::vector<double> w111{1.0, 1.0, 1.0};
    CHECK(lp_norm(f123, w111, 1.0) == doctest::Approx(6.0));

    // Large p does not overflow.
    const std::vector<double> big{1e200, 2e200};
    CHECK(lp_norm(big, w11, 50.0) == doctest::Approx(std::pow(1.0 + std::pow(2.0, 50.0), 1.0 / 50.0) * 1e200));
}

TEST_CASE("lp norm errors") {
    const std::vector<double> f{1.0, 2.0};
    const std::vector<double> w{1.0, 1.0};
    const std::vector<double> neg{1.0, -1.0};
    const std::vector<double> shorter{1.0};
    CHECK(kind_of([&] { lp_norm(f, w, 0.5); }) == ErrorKind::ParameterDomain);
    CHECK(kind_of([&] { lp_norm(f, neg, 2.0); }) == ErrorKind::InvalidMeasure);
    CHECK(kind_of([&] { lp_norm(f, shorter, 2.0); }) == ErrorKind::Dimension);
}

TEST_CASE("cell weights are uniform h") {
    const Mesh1D mesh(0.0, 2.0, 7);
    const Eigen::VectorXd w = cell_weights(mesh);
    CHECK(w.size() == 7);
    CHECK(w.minCoeff() == mesh.h());
    CHECK(w.maxCoeff() == mesh.h());
}

TEST_CASE("lebesgue interpolation equality cases") {
    const std::vector<double> ones(8, 1.0);
    const std::vector<double> w(8, 0.125);
    for (auto [p, q, r] : {std::tuple{1.0, 4.0, 2.0}, std::tuple{1.0, kInfinity, 3.0}, std::tuple{2.0, 2.0, 2.0}}) {
        const LebesgueReport rep = check_lebesgue_interpolation(ones, w, p, q, r);
        CHECK(std::abs(rep.lhs - rep.rhs) <= 1e-12);
        CHECK(rep.holds);
    }

    // Indicator of weight m = 3/8 on a unit-measure domain.
    const std::vector<double> ind{1, 1, 1, 0, 0, 0, 0, 0};
    for (auto [p, q, r] : {std::tuple{1.0, 4.0, 2.0}, std::tuple{1.5, kInfinity, 2.5}, std::tuple{2.0, 9.0, 3.0}}) {
        const LebesgueReport rep = check_lebesgue_interpolation(ind, w, p, q, r);
        CHECK(std::abs(rep.lhs - rep.rhs) <= 1e-12);
        CHECK(rep.lhs == doctest::Approx(std::pow(3.0 / 8.0, 1.0 / r)));
    }
}

TEST_CASE("lebesgue interpolation strict case and exponent") {
    const std::vector<double> f{1.0, 10.0};
    const std::vector<double> w{0.5, 0.5};
    const LebesgueReport rep = check_lebesgue_interpolation(f, w, 1.0, 4.0, 2.0);
    // 1/2 = (1-s)/4 + s  ->  s = 1/3.
    CHECK(rep.s == doctest::Approx(1.0 / 3.0));
    CHECK(rep.lhs == doctest::Approx(std::sqrt(0.5 + 50.0)));
    const double rhs = std::pow(std::pow(0.5 + 5000.0, 0.25), 2.0 / 3.0) * std::pow(5.5, 1.0 / 3.0);
    CHECK(rep.rhs == doctest::Approx(rhs));
    CHECK(rep.lhs < rep.rhs);
    CHECK(rep.holds);
}

TEST_CASE("lebesgue interpolation ordering errors") {
    const std::vector<double> f{1.0, 2.0};
    const std::vector<double> w{1.0, 1.0};
    CHECK(kind_of([&] { check_lebesgue_interpolation(f, w, 1.0, 4.0, 5.0); }) == ErrorKind::Ordering);
    CHECK(kind_of([&] { check_lebesgue_interpolation(f, w, 2.0, 4.0, 1.5); }) == ErrorKind::Ordering);
    CHECK(kind_of([&] { check_lebesgue_interpolation(f, w, 4.0, 2.0, 3.0); }) == ErrorKind::Ordering);
    CHECK(kind_of([&] { check_lebesgue_interpolation(f, w, 0.5, 2.0, 1.0); }) == ErrorKind::ParameterDomain);
}

TEST_CASE("lebesgue interpolation property sweep") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::uniform_int_distribution<int> len(1, 30);
    for (int trial = 0; trial < 1000; ++trial) {
        const int m = len(rng);
        std::vector<double> f(m), w(m);
        for (int i = 0; i < m; ++i) {
            f[i] = std::pow(10.0, 4.0 * unit(rng) - 2.0) * (unit(rng) < 0.1 ? 0.0 : 1.0);
            w[i] = unit(rng) + 1e-3;
        }
        double e[3] = {1.0 + 9.0 * unit(rng), 1.0 + 9.0 * unit(rng), unit(rng) < 0.2 ? kInfinity : 1.0 + 9.0 * unit(rng)};
        std::sort(e, e + 3);
        const LebesgueReport rep = check_lebesgue_interpolation(f, w, e[0], e[2], e[1]);
        CHECK(rep.holds);
        // Both sides recomputed from scratch.
        const double lhs = naive_lp(f, w, e[1]);
        const double rhs = std::pow(naive_lp(f, w, e[2]), 1.0 - rep.s) * std::pow(naive_lp(f, w, e[0]), rep.s);
        CHECK(rep.lhs == doctest::Approx(lhs).epsilon(1e-10));
        CHECK(rep.rhs == doctest::Approx(rhs).epsilon(1e-10));
        CHECK(lhs <= rhs * (1.0 + 1e-10));
    }
}
