// Fractional stiffness assembly on a uniform mesh.
//
// For two hats u, v the Gagliardo form reduces, with t = x - y, to
//   I(u, v) = \int_R |t|^{-1-2s} (2 R(0) - R(t) - R(-t)) dt,
// where R(t) = \int u(y + t) v(y) dy. For unit hats whose centers are d cells
// apart R(t) = Lambda(t + d), Lambda being the hat autocorrelation (a cubic
// B-spline supported on [-2, 2]). The t-integrand is therefore a cubic times
// t^{-1-2s} on each unit interval [m, m + 1]:
//   * on [0, 1] the cubic is -Lambda''(d) t^2 - J(d) t^3 / 6 (J = jump of
//     Lambda''' at d), integrated in closed form;
//   * on [m, m + 1], m >= 1, the integrand is smooth and Gauss-Legendre is
//     used, with a second rule as error estimate;
//   * beyond d + 2 the cubic is the constant 2 Lambda(d) and the tail to
//     infinity is exact.
// No truncation of R^2 is involved.

#include "mixlab/fem_core.hpp"
#include "mixlab/quadrature.hpp"

#include <cmath>
#include <sstream>
#include <vector>

namespace mixlab {

GaussRule gauss_legendre(std::size_t n) {
    GaussRule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    const double pi = std::acos(-1.0);
    for (std::size_t i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(pi * (static_cast<double>(i) + 0.75) / (static_cast<double>(n) + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0;
            double p1 = x;
            for (std::size_t k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / static_cast<double>(k);
                p0 = p1;
                p1 = p2;
            }
            dp = static_cast<double>(n) * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        rule.nodes[i] = -x;
        rule.nodes[n - 1 - i] = x;
        rule.weights[i] = w;
        rule.weights[n - 1 - i] = w;
    }
    return rule;
}

namespace detail {

double hat_autocorrelation(double t) noexcept {
    const double a = std::abs(t);
    if (a <= 1.0) return 2.0 / 3.0 - a * a + 0.5 * a * a * a;
    if (a < 2.0) {
        const double r = 2.0 - a;
        return r * r * r / 6.0;
    }
    return 0.0;
}

namespace {

// Second derivative of the autocorrelation at an integer point.
double autocorrelation_second(std::size_t d) noexcept {
    if (d == 0) return -2.0;
    if (d == 1) return 1.0;
    return 0.0;
}

// Lambda'''(d+) - Lambda'''(d-) at an integer point d >= 0.
double autocorrelation_third_jump(std::size_t d) noexcept {
    switch (d) {
    case 0: return 6.0;   // 3 - (-3)
    case 1: return -4.0;  // -1 - 3
    case 2: return 1.0;   // 0 - (-1)
    default: return 0.0;
    }
}

const GaussRule& primary_rule() {
    static const GaussRule rule = gauss_legendre(24);
    return rule;
}

const GaussRule& check_rule() {
    static const GaussRule rule = gauss_legendre(16);
    return rule;
}

} // namespace

double reference_fractional_entry(std::size_t offset, double s, double* error_estimate) {
    const double d = static_cast<double>(offset);
    const double two_s = 2.0 * s;

    // \int_0^1 t^{-1-2s} (c2 t^2 + c3 t^3) dt
    const double c2 = -autocorrelation_second(offset);
    const double c3 = -autocorrelation_third_jump(offset) / 6.0;
    double integral = c2 / (2.0 - two_s) + c3 / (3.0 - two_s);

    auto integrand = [&](double t) {
        const double g = 2.0 * hat_autocorrelation(d) - hat_autocorrelation(t + d) - hat_autocorrelation(t - d);
        return g * std::pow(t, -1.0 - two_s);
    };

    const std::size_t first = offset >= 3 ? offset - 2 : 1;
    const std::size_t last = offset + 1;  // pieces [m, m + 1], m = first..last
    double estimate = 0.0;
    for (std::size_t m = first; m <= last; ++m) {
        const double lo = static_cast<double>(m);
        const double fine = integrate(primary_rule(), lo, lo + 1.0, integrand);
        const double coarse = integrate(check_rule(), lo, lo + 1.0, integrand);
        integral += fine;
        estimate += std::abs(fine - coarse);
    }

    // Constant 2 Lambda(d) beyond t = d + 2.
    const double lambda_d = hat_autocorrelation(d);
    if (lambda_d != 0.0) {
        integral += 2.0 * lambda_d * std::pow(d + 2.0, -two_s) / two_s;
    }

    if (error_estimate != nullptr) *error_estimate = 2.0 * estimate;
    return 2.0 * integral;  // even integrand: \int_R = 2 \int_0^inf
}

} // namespace detail

OperatorMatrix assemble_fractional_stiffness(const Mesh1D& mesh, double s) {
    if (std::isnan(s) || !(s > 0.0 && s < 1.0)) {
        std::ostringstream msg;
        msg << "fractional order s = " << s << " outside (0, 1)";
        throw Error(ErrorKind::ParameterDomain, msg.str());
    }
    constexpr double kTargetRelativeAccuracy = 1e-8;

    const std::size_t n = mesh.n();
    const double scale = std::pow(mesh.h(), 1.0 - 2.0 * s);
    std::vector<double> by_offset(n);
    for (std::size_t d = 0; d < n; ++d) {
        double estimate = 0.0;
        const double value = detail::reference_fractional_entry(d, s, &estimate);
        const double relative = estimate / std::abs(value);
        if (!(relative <= kTargetRelativeAccuracy)) {
            std::ostringstream msg;
            msg << "fractional entry at offset " << d << " reached relative accuracy " << relative
                << " (target " << kTargetRelativeAccuracy << ")";
            throw Error(ErrorKind::AssemblyAccuracy, msg.str(), relative);
        }
        by_offset[d] = scale * value;
    }

    const auto size = static_cast<Eigen::Index>(n);
    Eigen::MatrixXd data(size, size);
    for (Eigen::Index i = 0; i < size; ++i) {
        for (Eigen::Index j = 0; j < size; ++j) {
            data(i, j) = by_offset[static_cast<std::size_t>(std::abs(i - j))];
        }
    }
    return {OperatorKind::FractionalStiffness, s, std::move(data), mesh};
}

} // namespace mixlab
