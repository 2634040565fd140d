#pragma once

#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <string>

#include <Eigen/Dense>

#include "mixlab/error.hpp"

namespace mixlab {

/// Uniform partition of (a, b) with n interior nodes. Boundary nodes carry no
/// degree of freedom (homogeneous Dirichlet exterior condition).
class Mesh1D {
public:
    Mesh1D(double a, double b, std::size_t n);

    double a() const noexcept { return a_; }
    double b() const noexcept { return b_; }
    std::size_t n() const noexcept { return n_; }
    double h() const noexcept { return h_; }

    /// Position of degree of freedom `dof` (0-based), i.e. node dof+1.
    double node_position(std::size_t dof) const { return a_ + static_cast<double>(dof + 1) * h_; }

    bool operator==(const Mesh1D& other) const noexcept {
        return a_ == other.a_ && b_ == other.b_ && n_ == other.n_;
    }

private:
    double a_;
    double b_;
    std::size_t n_;
    double h_;
};

Mesh1D build_mesh(double a, double b, std::size_t n);

/// Hat-function expansion u = sum_i coeffs_i phi_i, extended by zero outside (a, b).
struct DiscreteFunction {
    Mesh1D mesh;
    Eigen::VectorXd coeffs;

    DiscreteFunction(Mesh1D m, Eigen::VectorXd c);

    /// Point evaluation of the zero-extended piecewise-linear function.
    double operator()(double x) const;
};

enum class OperatorKind { Mass, LocalStiffness, FractionalStiffness };

const char* to_string(OperatorKind kind) noexcept;
std::optional<OperatorKind> operator_kind_from_string(const std::string& name);

struct OperatorMatrix {
    OperatorKind kind;
    std::optional<double> s;  // set iff kind == FractionalStiffness
    Eigen::MatrixXd data;
    Mesh1D mesh;
};

OperatorMatrix assemble_mass(const Mesh1D& mesh);
OperatorMatrix assemble_local_stiffness(const Mesh1D& mesh);

/// Raw Gagliardo form a_ij = \iint_{R^2} (phi_i(x)-phi_i(y))(phi_j(x)-phi_j(y)) |x-y|^{-1-2s}
/// over zero-extended hats. No C(1,s) normalization.
OperatorMatrix assemble_fractional_stiffness(const Mesh1D& mesh, double s);

namespace detail {

/// Gagliardo form of two unit-width hats whose centers are `offset` cells
/// apart. Entries on a mesh of width h are h^{1-2s} times this value.
/// `error_estimate` receives the absolute quadrature error estimate.
double reference_fractional_entry(std::size_t offset, double s, double* error_estimate = nullptr);

/// Autocorrelation of the unit hat, \int phi(z + t) phi(z) dz (the centered
/// cubic B-spline).
double hat_autocorrelation(double t) noexcept;

} // namespace detail

double gagliardo_seminorm(const DiscreteFunction& u, const OperatorMatrix& a_frac);

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// Weighted discrete Lebesgue norm (sum w_i |f_i|^p)^{1/p}; max |f_i| over
/// positively weighted entries for p = infinity.
double lp_norm(std::span<const double> samples, std::span<const double> weights, double p);

/// Uniform nodal-cell weights (all equal to h) for a function on `mesh`.
Eigen::VectorXd cell_weights(const Mesh1D& mesh);

struct LebesgueReport {
    double s;
    double lhs;
    double rhs;
    bool holds;
};

/// ||f||_r <= ||f||_q^{1-s} ||f||_p^s with 1/r = (1-s)/q + s/p.
LebesgueReport check_lebesgue_interpolation(std::span<const double> samples,
                                            std::span<const double> weights,
                                            double p, double q, double r);

} // namespace mixlab
