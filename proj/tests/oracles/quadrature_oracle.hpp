#pragma once

// Test-only brute-force quadrature for Gagliardo forms of piecewise-linear
// functions. Works in the rotated coordinates (x, t = x - y) with a dyadic
// grading of t toward the diagonal and Gauss rules on every cell where both
// functions are polynomial. Does not use the library's assembly path.

#include <Eigen/Dense>

#include "mixlab/fem_core.hpp"

namespace mixlab::oracle {

double gagliardo_form(const Mesh1D& mesh, const Eigen::VectorXd& u, const Eigen::VectorXd& v, double s);

Eigen::MatrixXd fractional_matrix(const Mesh1D& mesh, double s);

/// Hat-product integrals by elementwise Gauss quadrature.
Eigen::MatrixXd mass_matrix(const Mesh1D& mesh);
Eigen::MatrixXd stiffness_matrix(const Mesh1D& mesh);

} // namespace mixlab::oracle
