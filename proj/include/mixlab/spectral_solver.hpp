#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "mixlab/fem_core.hpp"

namespace mixlab {

/// Discrete L_alpha = -Delta + alpha (-Delta)^s: the pencil (A_loc + alpha A_frac, M).
class MixedPencil {
public:
    MixedPencil(OperatorMatrix mass, OperatorMatrix local, OperatorMatrix fractional, double alpha);

    double alpha() const noexcept { return alpha_; }
    double s() const noexcept { return *fractional_.s; }
    const Mesh1D& mesh() const noexcept { return mass_.mesh; }
    std::size_t size() const noexcept { return mass_.mesh.n(); }

    const OperatorMatrix& mass() const noexcept { return mass_; }
    const OperatorMatrix& local_stiffness() const noexcept { return local_; }
    const OperatorMatrix& fractional_stiffness() const noexcept { return fractional_; }
    const Eigen::MatrixXd& a_alpha() const noexcept { return a_alpha_; }

    /// Same assemblies, different coupling.
    MixedPencil with_alpha(double alpha) const;

private:
    OperatorMatrix mass_;
    OperatorMatrix local_;
    OperatorMatrix fractional_;
    double alpha_;
    Eigen::MatrixXd a_alpha_;
};

MixedPencil assemble_pencil(const Mesh1D& mesh, double s, double alpha);

/// Smallest C_h with u^T A_frac u <= C_h u^T A_loc u on the discrete space.
double embedding_constant(const MixedPencil& pencil);

/// Minimal gamma >= 0 with A_alpha + gamma M - A_loc / 2 positive semidefinite.
double gamma_shift(const MixedPencil& pencil);

struct SpectrumResult {
    Eigen::VectorXd lambdas;      // ascending
    Eigen::MatrixXd vectors;      // M-orthonormal columns
    double gamma = 0.0;
    Eigen::VectorXd resolvent_mu; // eigenvalues 1 / (lambda + gamma) of the shifted resolvent
    Eigen::VectorXd residuals;    // ||A_alpha u - lambda M u||_2 with ||u||_M = 1
    std::vector<int> clusters;    // cluster id per eigenpair
};

SpectrumResult solve_spectrum(const MixedPencil& pencil, std::size_t k);

/// Eigenvalues of the explicitly inverted shifted operator (A_alpha + gamma M)^{-1} M,
/// sorted decreasingly. Dense cross-check, meant for small n.
Eigen::VectorXd explicit_resolvent_eigenvalues(const MixedPencil& pencil, double gamma);

/// Minimum eigenvalue of A_alpha + gamma M - A_loc / 2 and the scale it is compared against.
struct CoercivityCheck {
    double min_eigenvalue;
    double scale;
};
CoercivityCheck coercivity_margin(const MixedPencil& pencil, double gamma);

struct VariationalEntry {
    std::size_t k;             // 1-based
    double lambda;
    double min_sampled;        // smallest Rayleigh quotient over samples in P_k
    double attained;           // Rayleigh quotient of u_k
    double deflated_lambda;    // smallest eigenvalue of the pencil restricted to P_k
    bool holds;
};

struct VariationalReport {
    std::vector<VariationalEntry> entries;
    std::size_t samples_per_k;
    bool holds;
};

VariationalReport verify_variational_characterization(const SpectrumResult& result, const MixedPencil& pencil,
                                                      std::uint64_t seed, std::size_t samples = 1000);

struct SweepRow {
    double alpha;
    double gamma;
    Eigen::VectorXd lambdas;
    int sign_lambda_1;
};

struct SweepTable {
    std::vector<SweepRow> rows;
    bool monotone;  // every lambda_j column nondecreasing in alpha (for ascending alphas)
};

SweepTable sweep_alpha(const Mesh1D& mesh, double s, const std::vector<double>& alphas, std::size_t k);
SweepTable sweep_alpha(const MixedPencil& base, const std::vector<double>& alphas, std::size_t k);

struct ThresholdReport {
    double alpha_star;
    double reference;   // -1 / C_h
    double difference;  // |alpha_star - reference|
    double tolerance;   // 1e-8 / C_h
    int iterations;
    bool holds;
};

/// Bisection on the sign of lambda_1(alpha) over [lo, hi]; requires a sign change.
ThresholdReport locate_coercivity_threshold(const MixedPencil& base, double lo, double hi);

struct BrezisReport {
    double max_ratio;
    double sampled_max;
    double c_h_reference;
    double first_eigenvector_ratio;
    std::size_t trials;
};

/// u^T A_frac u / ((u^T M u)^{1-s} (u^T (M + A_loc) u)^s).
double brezis_ratio(const MixedPencil& pencil, const Eigen::VectorXd& u);

BrezisReport verify_brezis_inequality(const Mesh1D& mesh, double s, std::size_t trials, std::uint64_t seed);

} // namespace mixlab
