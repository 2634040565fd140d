#include "mixlab/fem_core.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace mixlab {

Mesh1D::Mesh1D(double a, double b, std::size_t n) : a_(a), b_(b), n_(n), h_(0.0) {
    if (!std::isfinite(a) || !std::isfinite(b) || !(a < b)) {
        std::ostringstream msg;
        msg << "invalid domain (" << a << ", " << b << "): need finite a < b";
        throw Error(ErrorKind::InvalidDomain, msg.str());
    }
    if (n == 0) {
        throw Error(ErrorKind::InvalidSize, "mesh needs at least one interior node");
    }
    h_ = (b - a) / static_cast<double>(n + 1);
}

Mesh1D build_mesh(double a, double b, std::size_t n) { return Mesh1D(a, b, n); }

DiscreteFunction::DiscreteFunction(Mesh1D m, Eigen::VectorXd c) : mesh(m), coeffs(std::move(c)) {
    if (static_cast<std::size_t>(coeffs.size()) != mesh.n()) {
        throw Error(ErrorKind::Dimension, "coefficient vector length does not match mesh size");
    }
}

double DiscreteFunction::operator()(double x) const {
    const double t = (x - mesh.a()) / mesh.h();
    if (!(t > 0.0) || !(t < static_cast<double>(mesh.n() + 1))) return 0.0;
    const auto left = static_cast<std::size_t>(std::floor(t));  // node index 0..n
    const double frac = t - static_cast<double>(left);
    auto nodal = [&](std::size_t node) {
        return (node == 0 || node == mesh.n() + 1) ? 0.0 : coeffs[static_cast<Eigen::Index>(node - 1)];
    };
    return (1.0 - frac) * nodal(left) + frac * nodal(left + 1);
}

const char* to_string(OperatorKind kind) noexcept {
    switch (kind) {
    case OperatorKind::Mass: return "Mass";
    case OperatorKind::LocalStiffness: return "LocalStiffness";
    case OperatorKind::FractionalStiffness: return "FractionalStiffness";
    }
    return "Unknown";
}

std::optional<OperatorKind> operator_kind_from_string(const std::string& name) {
    if (name == "Mass") return OperatorKind::Mass;
    if (name == "LocalStiffness") return OperatorKind::LocalStiffness;
    if (name == "FractionalStiffness") return OperatorKind::FractionalStiffness;
    return std::nullopt;
}

namespace {

Eigen::MatrixXd tridiagonal(std::size_t n, double diag, double off) {
    const auto size = static_cast<Eigen::Index>(n);
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(size, size);
    for (Eigen::Index i = 0; i < size; ++i) {
        m(i, i) = diag;
        if (i + 1 < size) {
            m(i, i + 1) = off;
            m(i + 1, i) = off;
        }
    }
    return m;
}

} // namespace

OperatorMatrix assemble_mass(const Mesh1D& mesh) {
    const double h = mesh.h();
    return {OperatorKind::Mass, std::nullopt, tridiagonal(mesh.n(), 2.0 * h / 3.0, h / 6.0), mesh};
}

OperatorMatrix assemble_local_stiffness(const Mesh1D& mesh) {
    const double h = mesh.h();
    return {OperatorKind::LocalStiffness, std::nullopt, tridiagonal(mesh.n(), 2.0 / h, -1.0 / h), mesh};
}

double gagliardo_seminorm(const DiscreteFunction& u, const OperatorMatrix& a_frac) {
    if (a_frac.kind != OperatorKind::FractionalStiffness) {
        throw Error(ErrorKind::Request, "gagliardo_seminorm needs a fractional stiffness matrix");
    }
    if (!(u.mesh == a_frac.mesh)) {
        throw Error(ErrorKind::Dimension, "function and matrix live on different meshes");
    }
    const double q = u.coeffs.dot(a_frac.data * u.coeffs);
    return std::sqrt(std::max(0.0, q));
}

double lp_norm(std::span<const double> samples, std::span<const double> weights, double p) {
    if (samples.size() != weights.size()) {
        throw Error(ErrorKind::Dimension, "samples and weights differ in length");
    }
    if (std::isnan(p) || p < 1.0) {
        throw Error(ErrorKind::ParameterDomain, "Lebesgue exponent must lie in [1, inf]");
    }
    double peak = 0.0;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        if (!(weights[i] >= 0.0)) {
            throw Error(ErrorKind::InvalidMeasure, "negative or NaN quadrature weight");
        }
        if (weights[i] > 0.0) peak = std::max(peak, std::abs(samples[i]));
    }
    if (std::isinf(p) || peak == 0.0) return peak;
    // Scale by the peak so large p does not overflow.
    double sum = 0.0;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        if (weights[i] > 0.0) sum += weights[i] * std::pow(std::abs(samples[i]) / peak, p);
    }
    return peak * std::pow(sum, 1.0 / p);
}

Eigen::VectorXd cell_weights(const Mesh1D& mesh) {
    return Eigen::VectorXd::Constant(static_cast<Eigen::Index>(mesh.n()), mesh.h());
}

LebesgueReport check_lebesgue_interpolation(std::span<const double> samples,
                                            std::span<const double> weights,
                                            double p, double q, double r) {
    if (std::isnan(p) || std::isnan(q) || std::isnan(r) || p < 1.0) {
        throw Error(ErrorKind::ParameterDomain, "exponents must lie in [1, inf]");
    }
    if (!(p <= q)) throw Error(ErrorKind::Ordering, "need p <= q");
    if (!(p <= r && r <= q)) throw Error(ErrorKind::Ordering, "need p <= r <= q");

    const double inv_p = 1.0 / p;
    const double inv_q = std::isinf(q) ? 0.0 : 1.0 / q;
    const double inv_r = std::isinf(r) ? 0.0 : 1.0 / r;
    // p == q forces r == p; every s works, take s = 1.
    const double s = (inv_p == inv_q) ? 1.0 : (inv_r - inv_q) / (inv_p - inv_q);

    LebesgueReport report{};
    report.s = s;
    report.lhs = lp_norm(samples, weights, r);
    const double norm_q = lp_norm(samples, weights, q);
    const double norm_p = lp_norm(samples, weights, p);
    report.rhs = std::pow(norm_q, 1.0 - s) * std::pow(norm_p, s);
    report.holds = report.lhs <= report.rhs * (1.0 + 1e-12);
    return report;
}

} // namespace mixlab
