#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "mixlab/error.hpp"

namespace mixlab {

/// Pair of SPD Gram matrices on a common coordinate space, with the
/// simultaneous diagonalization G_Y v = mu G_X v cached at construction.
/// Basis columns satisfy V^T G_X V = I and V^T G_Y V = diag(mu).
class HilbertCouple {
public:
    HilbertCouple(Eigen::MatrixXd gram_x, Eigen::MatrixXd gram_y);

    Eigen::Index dim() const noexcept { return gram_x_.rows(); }
    const Eigen::MatrixXd& gram_x() const noexcept { return gram_x_; }
    const Eigen::MatrixXd& gram_y() const noexcept { return gram_y_; }
    const Eigen::VectorXd& mu() const noexcept { return mu_; }
    const Eigen::MatrixXd& basis() const noexcept { return basis_; }

    /// Coordinates of f in the cached basis, c = V^T G_X f.
    Eigen::VectorXd coordinates(const Eigen::VectorXd& f) const;

    double norm_x(const Eigen::VectorXd& f) const;
    double norm_y(const Eigen::VectorXd& f) const;
    /// ||f||_{X+Y} = K(1, f).
    double sum_norm(const Eigen::VectorXd& f) const;
    /// ||f||_{X cap Y} = max(||f||_X, ||f||_Y).
    double intersection_norm(const Eigen::VectorXd& f) const;

    /// The couple (Y, X), re-diagonalized from the Grams.
    HilbertCouple swapped() const;

    /// ||G_Y V - G_X V diag(mu)|| / ||G_Y||.
    double reconstruction_residual() const;

private:
    Eigen::MatrixXd gram_x_;
    Eigen::MatrixXd gram_y_;
    Eigen::VectorXd mu_;
    Eigen::MatrixXd basis_;
};

HilbertCouple couple_from_grams(const Eigen::MatrixXd& gram_x, const Eigen::MatrixXd& gram_y);

/// Peetre K(x, f) = inf_{f = g + h} ||g||_X + x ||h||_Y.
double k_functional(const HilbertCouple& couple, const Eigen::VectorXd& f, double x);

/// Quadratic companion (inf ||g||_X^2 + x^2 ||h||_Y^2)^{1/2}, closed form.
double k2_functional(const HilbertCouple& couple, const Eigen::VectorXd& f, double x);

struct KFunctionalCurve {
    std::vector<double> xs;
    std::vector<double> values;
    Eigen::VectorXd f_ref;
};

KFunctionalCurve k_curve(const HilbertCouple& couple, const Eigen::VectorXd& f, std::vector<double> xs);

/// `count` points spaced geometrically over [lo, hi].
std::vector<double> geometric_grid(double lo, double hi, std::size_t count);

struct SymmetryReport {
    double x;
    double lhs;  // K(x, f, Y, X)
    double rhs;  // x K(1/x, f, X, Y)
    double discrepancy;  // |lhs - rhs| / ||f||_{X+Y}
    bool holds;
    double tolerance;
};

SymmetryReport symmetry_check(const HilbertCouple& couple, const Eigen::VectorXd& f, double x);

enum class KVariant { K, K2 };

const char* to_string(KVariant v) noexcept;

/// ||f||_{(X,Y)_{s,p}} = (\int_0^inf K(x,f)^p x^{-sp-1} dx)^{1/p}, and
/// sup_x K(x,f)/x^s for p = infinity.
double interpolation_norm(const HilbertCouple& couple, const Eigen::VectorXd& f, double s, double p, KVariant variant);

/// (pi / (2 sin(pi s)) sum mu_i^s c_i^2)^{1/2}.
double spectral_s_norm(const HilbertCouple& couple, const Eigen::VectorXd& f, double s);

/// sup_{f != 0} ||T f||_codomain / ||f||_domain for T: domain -> codomain.
double operator_norm(const Eigen::MatrixXd& op, const Eigen::MatrixXd& domain_gram, const Eigen::MatrixXd& codomain_gram);

struct SamplingOptions {
    std::uint64_t seed = 0;
    std::size_t directions = 10000;
    std::size_t ascent_steps = 400;
};

struct OperatorInterpolationReport {
    double lhs;
    double rhs;
    double norm_x;  // ||T||_{X0 -> X1}
    double norm_y;  // ||T||_{Y0 -> Y1}
    bool holds;
    double tolerance;
    std::string method;  // "quadratic" or "sampled"
};

/// Relative slack allowed for the sampled (non-quadratic) case: twice the
/// interpolation-norm quadrature accuracy target.
inline constexpr double kSampledOperatorSlack = 2e-6;

OperatorInterpolationReport check_operator_interpolation(const Eigen::MatrixXd& op, const HilbertCouple& couple0,
                                                         const HilbertCouple& couple1, double s, double p,
                                                         KVariant variant, const SamplingOptions& sampling = {});

struct InterpolationInequalityReport {
    double norm;    // ||f||_{(X,Y)_{s,p}}
    double norm_x;
    double norm_y;
    double ratio;   // norm / (||f||_X^{1-s} ||f||_Y^s)
    double bound;   // constant depending only on (s, p, variant)
    bool holds;
};

/// Explicit constant c(s, p) with ||f||_{s,p} <= c ||f||_X^{1-s} ||f||_Y^s.
double interpolation_constant(double s, double p, KVariant variant);

InterpolationInequalityReport check_interpolation_inequality(const HilbertCouple& couple, const Eigen::VectorXd& f,
                                                             double s, double p, KVariant variant);

struct InclusionReport {
    double norm_s1;
    double norm_s2;
    double weight_s1;  // sum mu^{s1} c^2
    double weight_s2;  // sum mu^{s2} c^2
    double constant;   // sqrt(sin(pi s2) / sin(pi s1))
    bool holds;
};

InclusionReport check_inclusion_monotonicity(const HilbertCouple& couple, const Eigen::VectorXd& f, double s1,
                                             double s2, double p);

} // namespace mixlab
