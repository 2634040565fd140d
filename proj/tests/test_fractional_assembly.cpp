#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "mixlab/fem_core.hpp"
#include "mixlab/quadrature.hpp"
#include "oracles/quadrature_oracle.hpp"

using namespace mixlab;

namespace {

double max_relative(const Eigen::MatrixXd& got, const Eigen::MatrixXd& want) {
    double worst = 0.0;
    for (Eigen::Index i = 0; i < got.rows(); ++i)
        for (Eigen::Index j = 0; j < got.cols(); ++j)
            worst = std::max(worst, std::abs(got(i, j) - want(i, j)) / std::abs(want(i, j)));
    return worst;
}

} // namespace

TEST_CASE("gauss-legendre integrates polynomials of degree 2n-1 exactly") {
    for (std::size_t n : {1u, 2u, 5u, 16u, 24u}) {
        const GaussRule rule = gauss_legendre(n);
        double wsum = 0.0;
        for (double w : rule.weights) wsum += w;
        CHECK(wsum == doctest::Approx(2.0).epsilon(1e-14));
        const int deg = static_cast<int>(2 * n - 1);
        const double got = integrate(rule, 0.0, 1.0, [&](double x) { return std::pow(x, deg); });
        CHECK(got == doctest::Approx(1.0 / (deg + 1)).epsilon(1e-13));
    }
}

TEST_CASE("hat autocorrelation is the centered cubic B-spline") {
    CHECK(detail::hat_autocorrelation(0.0) == doctest::Approx(2.0 / 3.0));
    CHECK(detail::hat_autocorrelation(1.0) == doctest::Approx(1.0 / 6.0));
    CHECK(detail::hat_autocorrelation(-1.0) == doctest::Approx(1.0 / 6.0));
    CHECK(detail::hat_autocorrelation(2.0) == 0.0);
    CHECK(detail::hat_autocorrelation(3.5) == 0.0);
    // Direct integral of hat(z + t) hat(z) at t = 0.4.
    const GaussRule rule = gauss_legendre(8);
    auto hat = [](double z) { return std::max(0.0, 1.0 - std::abs(z)); };
    const double t = 0.4;
    double direct = 0.0;
    for (auto [lo, hi] : {std::pair{-1.4, -1.0}, std::pair{-1.0, -0.4}, std::pair{-0.4, 0.0}, std::pair{0.0, 0.6},
                          std::pair{0.6, 1.0}}) {
        direct += integrate(rule, lo, hi, [&](double z) { return hat(z + t) * hat(z); });
    }
    CHECK(detail::hat_autocorrelation(t) == doctest::Approx(direct).epsilon(1e-14));
}

TEST_CASE("unit-width diagonal at s = 1/2 equals 8 ln 2") {
    double err = -1.0;
    const double a0 = detail::reference_fractional_entry(0, 0.5, &err);
    CHECK(a0 == doctest::Approx(8.0 * std::log(2.0)).epsilon(1e-13));
    CHECK(err >= 0.0);
    CHECK(err <= 1e-10 * a0);
}

TEST_CASE("fractional stiffness matches the brute-force oracle") {
    for (std::size_t n : {2u, 4u, 8u}) {
        const Mesh1D mesh(0.0, 1.0, n);
        for (double s : {0.25, 0.5, 0.75}) {
            const Eigen::MatrixXd a = assemble_fractional_stiffness(mesh, s).data;
            const Eigen::MatrixXd o = oracle::fractional_matrix(mesh, s);
            INFO("n = " << n << ", s = " << s);
            CHECK(max_relative(a, o) <= 1e-6);
        }
    }
}

TEST_CASE("oracle agreement at the ends of the s range") {
    const Mesh1D mesh(-1.0, 0.5, 3);
    for (double s : {0.1, 0.9}) {
        INFO("s = " << s);
        CHECK(max_relative(assemble_fractional_stiffness(mesh, s).data, oracle::fractional_matrix(mesh, s)) <= 1e-6);
    }
}

TEST_CASE("fractional stiffness structure") {
    for (std::size_t n : {1u, 5u, 16u, 64u}) {
        const Mesh1D mesh(0.0, 1.0, n);
        for (double s : {0.1, 0.25, 0.5, 0.75, 0.9}) {
            const OperatorMatrix op = assemble_fractional_stiffness(mesh, s);
            const Eigen::MatrixXd& a = op.data;
            CHECK(op.kind == OperatorKind::FractionalStiffness);
            REQUIRE(op.s.has_value());
            CHECK(*op.s == s);
            CHECK(a == a.transpose());
            for (Eigen::Index i = 0; i < a.rows(); ++i)
                for (Eigen::Index j = 0; j < a.cols(); ++j) CHECK(a(i, j) == a(0, std::abs(i - j)));
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(a, Eigen::EigenvaluesOnly);
            const double norm = eig.eigenvalues().cwiseAbs().maxCoeff();
            CHECK(eig.eigenvalues()[0] >= -1e-10 * norm);
            CHECK(eig.eigenvalues()[0] > 0.0);
        }
    }
}

TEST_CASE("fractional stiffness off-diagonal signs") {
    // Distinct hats interact with a negative weight away from the diagonal.
    const Eigen::MatrixXd a = assemble_fractional_stiffness(Mesh1D(0.0, 1.0, 10), 0.4).data;
    CHECK(a(0, 0) > 0.0);
    for (Eigen::Index j = 2; j < 10; ++j) CHECK(a(0, j) < 0.0);
    for (Eigen::Index j = 3; j < 10; ++j) CHECK(std::abs(a(0, j)) < std::abs(a(0, j - 1)));
}

TEST_CASE("scaling law c^{1-2s}") {
    for (double c : {2.0, 0.3, 5.0}) {
        for (double s : {0.2, 0.5, 0.8}) {
            const Eigen::MatrixXd a1 = assemble_fractional_stiffness(Mesh1D(0.0, 1.0, 6), s).data;
            const Eigen::MatrixXd ac = assemble_fractional_stiffness(Mesh1D(0.0, c, 6), s).data;
            const double expected = std::pow(c, 1.0 - 2.0 * s);
            for (Eigen::Index i = 0; i < 6; ++i)
                for (Eigen::Index j = 0; j < 6; ++j)
                    CHECK(std::abs(ac(i, j) / a1(i, j) - expected) <= 1e-10 * expected);
        }
    }
}

TEST_CASE("translation invariance") {
    const Eigen::MatrixXd a = assemble_fractional_stiffness(Mesh1D(0.0, 1.0, 7), 0.35).data;
    const Eigen::MatrixXd b = assemble_fractional_stiffness(Mesh1D(-3.0, -2.0, 7), 0.35).data;
    CHECK(max_relative(a, b) <= 1e-12);
}

TEST_CASE("assembly is deterministic") {
    const Mesh1D mesh(0.0, 1.0, 33);
    CHECK(assemble_fractional_stiffness(mesh, 0.61).data == assemble_fractional_stiffness(mesh, 0.61).data);
}

TEST_CASE("s outside (0,1) is a parameter-domain error") {
    const Mesh1D mesh(0.0, 1.0, 3);
    for (double s : {0.0, 1.0, -0.5, 1.5, std::nan("")}) {
        bool raised = false;
        try {
            assemble_fractional_stiffness(mesh, s);
        } catch (const Error& e) {
            raised = e.kind() == ErrorKind::ParameterDomain;
        }
        CHECK(raised);
    }
}

TEST_CASE("quadratic form equals the double integral of the piecewise-linear function") {
    const Mesh1D mesh(0.0, 2.0, 5);
    const double s = 0.45;
    const Eigen::MatrixXd a = assemble_fractional_stiffness(mesh, s).data;
    Eigen::VectorXd u(5);
    u << 0.3, -1.0, 2.0, 0.5, -0.25;
    Eigen::VectorXd v(5);
    v << 1.0, 1.0, -0.5, 0.0, 2.0;
    const double want = oracle::gagliardo_form(mesh, u, v, s);
    CHECK(std::abs(u.dot(a * v) - want) <= 1e-7 * std::abs(want));
}
