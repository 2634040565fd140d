#include "mixlab/spectral_solver.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>

namespace mixlab {

namespace {

// Eigenvalues (ascending) and B-orthonormal eigenvectors of A v = lambda B v, B SPD.
struct PencilEig {
    Eigen::VectorXd values;
    Eigen::MatrixXd vectors;
};

PencilEig solve_pencil(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b, bool want_vectors) {
    Eigen::LLT<Eigen::MatrixXd> llt(b);
    if (llt.info() != Eigen::Success) throw Error(ErrorKind::Factorization, "pencil right-hand matrix is not SPD");
    const auto lower = llt.matrixL();
    Eigen::MatrixXd reduced = lower.solve(a);
    reduced = lower.solve(reduced.transpose()).transpose();
    reduced = 0.5 * (reduced + reduced.transpose());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(reduced,
                                                        want_vectors ? Eigen::ComputeEigenvectors : Eigen::EigenvaluesOnly);
    if (eig.info() != Eigen::Success) throw Error(ErrorKind::Factorization, "symmetric eigensolver failed");
    PencilEig out;
    out.values = eig.eigenvalues();
    if (want_vectors) out.vectors = llt.matrixU().solve(eig.eigenvectors());
    return out;
}

double max_abs_row_sum(const Eigen::MatrixXd& m) { return m.cwiseAbs().rowwise().sum().maxCoeff(); }

void orient(Eigen::Ref<Eigen::VectorXd> v) {
    Eigen::Index idx = 0;
    double best = -1.0;
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        if (std::abs(v[i]) > best) {
            best = std::abs(v[i]);
            idx = i;
        }
    }
    if (v[idx] < 0.0) v = -v;
}

double rayleigh(const Eigen::MatrixXd& a, const Eigen::MatrixXd& m, const Eigen::VectorXd& u) {
    return u.dot(a * u) / u.dot(m * u);
}

double lowest_eigenvalue(const Eigen::MatrixXd& a, const Eigen::MatrixXd& m) {
    return solve_pencil(a, m, false).values[0];
}

} // namespace

MixedPencil::MixedPencil(OperatorMatrix mass, OperatorMatrix local, OperatorMatrix fractional, double alpha)
    : mass_(std::move(mass)), local_(std::move(local)), fractional_(std::move(fractional)), alpha_(alpha) {
    if (mass_.kind != OperatorKind::Mass || local_.kind != OperatorKind::LocalStiffness ||
        fractional_.kind != OperatorKind::FractionalStiffness || !fractional_.s) {
        throw Error(ErrorKind::Request, "pencil needs mass, local stiffness and fractional stiffness matrices");
    }
    if (!(mass_.mesh == local_.mesh) || !(mass_.mesh == fractional_.mesh)) {
        throw Error(ErrorKind::Dimension, "pencil matrices live on different meshes");
    }
    if (!std::isfinite(alpha)) throw Error(ErrorKind::ParameterDomain, "coupling alpha must be finite");
    a_alpha_ = local_.data + alpha_ * fractional_.data;
}

MixedPencil MixedPencil::with_alpha(double alpha) const { return MixedPencil(mass_, local_, fractional_, alpha); }

MixedPencil assemble_pencil(const Mesh1D& mesh, double s, double alpha) {
    return MixedPencil(assemble_mass(mesh), assemble_local_stiffness(mesh), assemble_fractional_stiffness(mesh, s),
                       alpha);
}

double embedding_constant(const MixedPencil& pencil) {
    return solve_pencil(pencil.fractional_stiffness().data, pencil.local_stiffness().data, false).values.maxCoeff();
}

double gamma_shift(const MixedPencil& pencil) {
    const Eigen::MatrixXd deficit = 0.5 * pencil.local_stiffness().data - pencil.a_alpha();
    const double top = solve_pencil(deficit, pencil.mass().data, false).values.maxCoeff();
    return std::max(0.0, top);
}

CoercivityCheck coercivity_margin(const MixedPencil& pencil, double gamma) {
    const Eigen::MatrixXd shifted =
        pencil.a_alpha() + gamma * pencil.mass().data - 0.5 * pencil.local_stiffness().data;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(shifted, Eigen::EigenvaluesOnly);
    CoercivityCheck c{};
    c.min_eigenvalue = eig.eigenvalues()[0];
    c.scale = max_abs_row_sum(pencil.local_stiffness().data) +
              std::abs(pencil.alpha()) * max_abs_row_sum(pencil.fractional_stiffness().data) +
              gamma * max_abs_row_sum(pencil.mass().data);
    return c;
}

SpectrumResult solve_spectrum(const MixedPencil& pencil, std::size_t k) {
    const std::size_t n = pencil.size();
    if (k == 0 || k > n) {
        std::ostringstream msg;
        msg << "requested " << k << " eigenpairs from a pencil of size " << n;
        throw Error(ErrorKind::Request, msg.str());
    }
    const Eigen::MatrixXd& mass = pencil.mass().data;
    double gamma = gamma_shift(pencil);

    // Cholesky of the coercive shifted matrix S = A_alpha + gamma M.
    Eigen::LLT<Eigen::MatrixXd> llt(pencil.a_alpha() + gamma * mass);
    if (llt.info() != Eigen::Success) {
        gamma *= 1.0 + 1e-8;
        llt.compute(pencil.a_alpha() + gamma * mass);
        if (llt.info() != Eigen::Success) {
            throw Error(ErrorKind::Factorization, "shifted operator is not positive definite after retry");
        }
    }
    // Resolvent in symmetric form: L^{-1} M L^{-T} z = mu z, u = L^{-T} z.
    const auto lower = llt.matrixL();
    Eigen::MatrixXd resolvent = lower.solve(mass);
    resolvent = lower.solve(resolvent.transpose()).transpose();
    resolvent = 0.5 * (resolvent + resolvent.transpose());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(resolvent);
    if (eig.info() != Eigen::Success) throw Error(ErrorKind::Factorization, "resolvent eigensolver failed");

    const auto size = static_cast<Eigen::Index>(n);
    const auto count = static_cast<Eigen::Index>(k);
    SpectrumResult out;
    out.gamma = gamma;
    out.lambdas.resize(count);
    out.resolvent_mu.resize(count);
    out.vectors.resize(size, count);
    out.residuals.resize(count);
    const Eigen::MatrixXd z = eig.eigenvectors().rightCols(count).rowwise().reverse();
    const Eigen::VectorXd mu = eig.eigenvalues().tail(count).reverse();
    const Eigen::MatrixXd u = llt.matrixU().solve(z);
    for (Eigen::Index j = 0; j < count; ++j) {
        out.resolvent_mu[j] = mu[j];
        out.lambdas[j] = 1.0 / mu[j] - gamma;
        Eigen::VectorXd v = u.col(j) / std::sqrt(mu[j]);
        orient(v);
        out.vectors.col(j) = v;
        out.residuals[j] = (pencil.a_alpha() * v - out.lambdas[j] * (mass * v)).norm();
    }
    int cluster = 0;
    out.clusters.assign(k, 0);
    for (std::size_t j = 1; j < k; ++j) {
        const double lam = out.lambdas[static_cast<Eigen::Index>(j)];
        if (lam - out.lambdas[static_cast<Eigen::Index>(j - 1)] > 1e-7 * (1.0 + std::abs(lam))) ++cluster;
        out.clusters[j] = cluster;
    }
    return out;
}

Eigen::VectorXd explicit_resolvent_eigenvalues(const MixedPencil& pencil, double gamma) {
    const Eigen::MatrixXd shifted = pencil.a_alpha() + gamma * pencil.mass().data;
    const Eigen::MatrixXd op = shifted.inverse() * pencil.mass().data;
    Eigen::EigenSolver<Eigen::MatrixXd> eig(op, false);
    if (eig.info() != Eigen::Success) throw Error(ErrorKind::Factorization, "resolvent eigensolver failed");
    Eigen::VectorXd values = eig.eigenvalues().real();
    std::sort(values.data(), values.data() + values.size(), std::greater<>());
    return values;
}

VariationalReport verify_variational_characterization(const SpectrumResult& result, const MixedPencil& pencil,
                                                      std::uint64_t seed, std::size_t samples) {
    const Eigen::MatrixXd& a = pencil.a_alpha();
    const Eigen::MatrixXd& m = pencil.mass().data;
    const Eigen::Index n = a.rows();
    const Eigen::Index count = result.lambdas.size();
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal;

    VariationalReport report;
    report.samples_per_k = samples;
    report.holds = true;
    const double scale = max_abs_row_sum(a);
    for (Eigen::Index k = 0; k < count; ++k) {
        // P_k: B_alpha-orthogonal complement of u_1..u_{k-1}. When lambda_j
        // vanishes B_alpha(., u_j) is identically zero; use the equivalent
        // L^2 constraint for that column instead.
        Eigen::MatrixXd constraints(n, k);
        for (Eigen::Index j = 0; j < k; ++j) {
            const Eigen::VectorXd uj = result.vectors.col(j);
            const Eigen::VectorXd bj = a * uj;
            constraints.col(j) = bj.norm() > 1e-12 * scale * uj.norm() ? bj : Eigen::VectorXd(m * uj);
        }
        Eigen::MatrixXd basis;
        if (k == 0) {
            basis = Eigen::MatrixXd::Identity(n, n);
        } else {
            Eigen::HouseholderQR<Eigen::MatrixXd> qr(constraints);
            const Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(n, n);
            basis = q.rightCols(n - k);
        }

        const Eigen::VectorXd uk = result.vectors.col(k);
        const double lam = result.lambdas[k];
        const double tol = 1e-8 * (1.0 + std::abs(lam));
        VariationalEntry e{};
        e.k = static_cast<std::size_t>(k + 1);
        e.lambda = lam;
        e.attained = rayleigh(a, m, uk);

        // Half the samples are global random directions in P_k, half are
        // perturbations of u_k of decreasing size.
        const Eigen::VectorXd uk_in = basis * (basis.transpose() * uk);
        e.min_sampled = std::numeric_limits<double>::infinity();
        Eigen::VectorXd g(basis.cols());
        for (std::size_t i = 0; i < samples; ++i) {
            for (Eigen::Index c = 0; c < g.size(); ++c) g[c] = normal(rng);
            Eigen::VectorXd v = basis * g;
            if (i % 2 == 1) {
                const double size = std::pow(10.0, -4.0 * static_cast<double>(i) / static_cast<double>(samples));
                v = uk_in + (size * uk_in.norm() / v.norm()) * v;
            }
            e.min_sampled = std::min(e.min_sampled, rayleigh(a, m, v));
        }

        const Eigen::MatrixXd ra = basis.transpose() * a * basis;
        const Eigen::MatrixXd rm = basis.transpose() * m * basis;
        e.deflated_lambda = solve_pencil(0.5 * (ra + ra.transpose()), 0.5 * (rm + rm.transpose()), false).values[0];

        e.holds = e.min_sampled >= lam - tol && std::abs(e.attained - lam) <= tol &&
                  std::abs(e.deflated_lambda - lam) <= tol;
        report.holds = report.holds && e.holds;
        report.entries.push_back(e);
    }
    return report;
}

SweepTable sweep_alpha(const MixedPencil& base, const std::vector<double>& alphas, std::size_t k) {
    if (alphas.empty()) throw Error(ErrorKind::Request, "alpha grid is empty");
    SweepTable table;
    for (double alpha : alphas) {
        if (!std::isfinite(alpha)) throw Error(ErrorKind::ParameterDomain, "alpha values must be finite");
        const MixedPencil p = base.with_alpha(alpha);
        const SpectrumResult r = solve_spectrum(p, k);
        SweepRow row{alpha, r.gamma, r.lambdas, 0};
        const double l1 = r.lambdas[0];
        row.sign_lambda_1 = l1 > 0.0 ? 1 : (l1 < 0.0 ? -1 : 0);
        table.rows.push_back(std::move(row));
    }
    std::vector<std::size_t> order(alphas.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return alphas[i] < alphas[j]; });
    table.monotone = true;
    for (std::size_t i = 1; i < order.size(); ++i) {
        const auto& lo = table.rows[order[i - 1]].lambdas;
        const auto& hi = table.rows[order[i]].lambdas;
        for (Eigen::Index j = 0; j < lo.size(); ++j) {
            if (hi[j] < lo[j] - 1e-9 * (1.0 + std::abs(lo[j]))) table.monotone = false;
        }
    }
    return table;
}

SweepTable sweep_alpha(const Mesh1D& mesh, double s, const std::vector<double>& alphas, std::size_t k) {
    return sweep_alpha(assemble_pencil(mesh, s, 0.0), alphas, k);
}

ThresholdReport locate_coercivity_threshold(const MixedPencil& base, double lo, double hi) {
    if (!(lo < hi) || !std::isfinite(lo) || !std::isfinite(hi)) {
        throw Error(ErrorKind::Request, "threshold bracket must satisfy lo < hi");
    }
    const Eigen::MatrixXd& m = base.mass().data;
    auto lambda_1 = [&](double alpha) {
        return lowest_eigenvalue(base.local_stiffness().data + alpha * base.fractional_stiffness().data, m);
    };
    const double f_lo = lambda_1(lo);
    const double f_hi = lambda_1(hi);
    if (!(f_lo < 0.0 && f_hi > 0.0)) {
        throw Error(ErrorKind::Request, "lambda_1 does not change sign from negative to positive across the bracket");
    }
    ThresholdReport r{};
    int iter = 0;
    while (hi - lo > 1e-12 * std::max(std::abs(lo), std::abs(hi)) && iter < 200) {
        const double mid = 0.5 * (lo + hi);
        (lambda_1(mid) > 0.0 ? hi : lo) = mid;
        ++iter;
    }
    const double c_h = embedding_constant(base);
    r.alpha_star = 0.5 * (lo + hi);
    r.reference = -1.0 / c_h;
    r.difference = std::abs(r.alpha_star - r.reference);
    r.tolerance = 1e-8 / c_h;
    r.iterations = iter;
    r.holds = r.difference <= r.tolerance;
    return r;
}

double brezis_ratio(const MixedPencil& pencil, const Eigen::VectorXd& u) {
    const double s = pencil.s();
    const double frac = u.dot(pencil.fractional_stiffness().data * u);
    const double l2 = u.dot(pencil.mass().data * u);
    const double h1 = l2 + u.dot(pencil.local_stiffness().data * u);
    return frac / (std::pow(l2, 1.0 - s) * std::pow(h1, s));
}

BrezisReport verify_brezis_inequality(const Mesh1D& mesh, double s, std::size_t trials, std::uint64_t seed) {
    if (trials == 0) throw Error(ErrorKind::Request, "need at least one trial");
    const MixedPencil pencil = assemble_pencil(mesh, s, 0.0);
    const Eigen::MatrixXd& m = pencil.mass().data;
    const Eigen::MatrixXd& af = pencil.fractional_stiffness().data;
    const Eigen::MatrixXd h1 = m + pencil.local_stiffness().data;

    BrezisReport report{};
    report.trials = trials;
    report.c_h_reference = embedding_constant(pencil);

    const Eigen::VectorXd first = solve_pencil(pencil.local_stiffness().data, m, true).vectors.col(0);
    report.first_eigenvector_ratio = brezis_ratio(pencil, first);

    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal;
    Eigen::VectorXd best = first;
    double best_ratio = report.first_eigenvector_ratio;
    Eigen::VectorXd u(static_cast<Eigen::Index>(mesh.n()));
    for (std::size_t t = 0; t < trials; ++t) {
        for (Eigen::Index i = 0; i < u.size(); ++i) u[i] = normal(rng);
        const double r = brezis_ratio(pencil, u);
        if (r > best_ratio) {
            best_ratio = r;
            best = u;
        }
    }
    report.sampled_max = best_ratio;

    // Ascent: by weighted AM-GM, (a)^{1-s} (b)^s = min_t (1-s) t a + s t^{-(1-s)/s} b,
    // so for the t that is optimal at the current u the top eigenvector of
    // (A_frac, (1-s) t M + s t^{-(1-s)/s} H) can only increase the ratio.
    for (int iter = 0; iter < 200; ++iter) {
        const double l2 = best.dot(m * best);
        const double hh = best.dot(h1 * best);
        const double t = std::pow(hh / l2, s);  // balances (1-s) t a against s t^{-(1-s)/s} b
        const Eigen::MatrixXd weight = (1.0 - s) * t * m + s * std::pow(t, -(1.0 - s) / s) * h1;
        const PencilEig top = solve_pencil(af, weight, true);
        const Eigen::VectorXd candidate = top.vectors.col(top.vectors.cols() - 1);
        const double r = brezis_ratio(pencil, candidate);
        if (!(r > best_ratio * (1.0 + 1e-14))) break;
        best_ratio = r;
        best = candidate;
    }
    report.max_ratio = best_ratio;
    return report;
}

} // namespace mixlab
