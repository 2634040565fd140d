#include "verify_suites.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "mixlab/interp_engine.hpp"
#include "mixlab/matrix_io.hpp"

namespace mixlab::cli {

using Json = nlohmann::ordered_json;

Json check_record(const std::string& op, Json inputs, double lhs, double rhs, double tolerance, bool holds) {
    Json j;
    j["op"] = op;
    j["inputs"] = std::move(inputs);
    j["lhs"] = lhs;
    j["rhs"] = rhs;
    j["ratio"] = rhs != 0.0 ? Json(lhs / rhs) : Json(nullptr);
    j["holds"] = holds;
    j["tolerance"] = tolerance;
    return j;
}

namespace {

double max_row_sum(const Eigen::MatrixXd& m) { return m.cwiseAbs().rowwise().sum().maxCoeff(); }

// Collects checks for one suite; the first failure is kept as counterexample.
class Suite {
public:
    explicit Suite(std::string name) : name_(std::move(name)) {}

    bool check(bool ok, const std::string& what, Json detail = Json::object()) {
        ++count_;
        if (!ok && counterexample_.is_null()) {
            counterexample_ = Json{{"check", what}, {"detail", std::move(detail)}};
        }
        return ok;
    }

    void metric(const std::string& key, Json value) { metrics_[key] = std::move(value); }

    Json result() const {
        Json j;
        j["name"] = name_;
        j["holds"] = counterexample_.is_null();
        j["checks"] = count_;
        j["metrics"] = metrics_;
        j["counterexample"] = counterexample_;
        return j;
    }

private:
    std::string name_;
    std::size_t count_ = 0;
    Json metrics_ = Json::object();
    Json counterexample_;
};

bool close_rel(double a, double b, double tol) { return std::abs(a - b) <= tol * std::max(std::abs(a), std::abs(b)); }

Eigen::VectorXd normal_vector(std::mt19937_64& rng, Eigen::Index n) {
    std::normal_distribution<double> normal;
    Eigen::VectorXd v(n);
    for (Eigen::Index i = 0; i < n; ++i) v[i] = normal(rng);
    return v;
}

Eigen::MatrixXd random_spd(std::mt19937_64& rng, Eigen::Index n) {
    std::normal_distribution<double> normal;
    Eigen::MatrixXd b(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) b(i, j) = normal(rng);
    std::uniform_real_distribution<double> expo(-1.5, 1.5);
    return std::pow(10.0, expo(rng)) * (b * b.transpose() / static_cast<double>(n) + 0.05 * Eigen::MatrixXd::Identity(n, n));
}

HilbertCouple random_couple(std::mt19937_64& rng, Eigen::Index n) {
    Eigen::MatrixXd gx = random_spd(rng, n);
    Eigen::MatrixXd gy = random_spd(rng, n);
    return HilbertCouple(std::move(gx), std::move(gy));
}

double log_uniform(std::mt19937_64& rng, double lo, double hi) {
    std::uniform_real_distribution<double> u(std::log(lo), std::log(hi));
    return std::exp(u(rng));
}

Json suite_mesh_and_local_forms() {
    Suite suite("mesh_and_local_forms");
    const Mesh1D m1 = build_mesh(0.0, 1.0, 1);
    suite.check(m1.h() == 0.5 && m1.node_position(0) == 0.5, "mesh (0,1,1)");
    const Mesh1D m3 = build_mesh(0.0, 1.0, 3);
    suite.check(m3.h() == 0.25 && m3.node_position(0) == 0.25 && m3.node_position(1) == 0.5 &&
                    m3.node_position(2) == 0.75,
                "mesh (0,1,3)");
    const Mesh1D m7 = build_mesh(-2.0, 2.0, 7);
    suite.check(m7.h() == 0.5 && m7.node_position(3) == 0.0, "mesh (-2,2,7)");
    for (auto [a, b, n] : {std::tuple{1.0, 0.0, std::size_t{3}}, std::tuple{0.0, 1.0, std::size_t{0}}}) {
        bool raised = false;
        try {
            build_mesh(a, b, n);
        } catch (const Error&) {
            raised = true;
        }
        suite.check(raised, "invalid mesh rejected", Json{{"a", a}, {"b", b}, {"n", n}});
    }

    const Eigen::MatrixXd mass1 = assemble_mass(m1).data;
    suite.check(std::abs(mass1(0, 0) - 1.0 / 3.0) <= 1e-15, "mass n=1", Json{{"value", mass1(0, 0)}});
    const Eigen::MatrixXd mass3 = assemble_mass(m3).data;
    suite.check(std::abs(mass3(1, 1) - 1.0 / 6.0) <= 1e-15 && std::abs(mass3(0, 1) - 1.0 / 24.0) <= 1e-15 &&
                    mass3(0, 2) == 0.0,
                "mass n=3");
    const Eigen::MatrixXd stiff1 = assemble_local_stiffness(m1).data;
    suite.check(std::abs(stiff1(0, 0) - 4.0) <= 1e-14, "stiffness n=1", Json{{"value", stiff1(0, 0)}});
    const Eigen::MatrixXd stiff2 = assemble_local_stiffness(build_mesh(0.0, 1.0, 2)).data;
    suite.check(std::abs(stiff2(0, 0) - 6.0) <= 1e-13 && std::abs(stiff2(0, 1) + 3.0) <= 1e-13, "stiffness n=2");

    const Mesh1D m = build_mesh(0.0, 1.0, 20);
    const Eigen::MatrixXd mass = assemble_mass(m).data;
    const Eigen::MatrixXd stiff = assemble_local_stiffness(m).data;
    for (Eigen::Index i = 1; i + 1 < mass.rows(); ++i) {
        suite.check(std::abs(mass.row(i).sum() - m.h()) <= 1e-14, "mass row sum = h", Json{{"row", i}});
        suite.check(std::abs(stiff.row(i).sum()) <= 1e-12 * max_row_sum(stiff), "stiffness row sum = 0",
                    Json{{"row", i}});
    }
    Eigen::LLT<Eigen::MatrixXd> lm(mass), ls(stiff);
    suite.check(lm.info() == Eigen::Success && ls.info() == Eigen::Success, "mass and stiffness positive definite");
    return suite.result();
}

Json suite_fractional_invariants() {
    Suite suite("fractional_invariants");
    double worst_psd = 0.0;
    for (std::size_t n : {8u, 32u, 64u}) {
        const Mesh1D mesh(0.0, 1.0, n);
        for (double s : {0.1, 0.25, 0.5, 0.75, 0.9}) {
            const Eigen::MatrixXd a = assemble_fractional_stiffness(mesh, s).data;
            const Eigen::MatrixXd again = assemble_fractional_stiffness(mesh, s).data;
            const Json in{{"n", n}, {"s", s}};
            suite.check(a == again, "bit-identical reassembly", in);
            suite.check(a == a.transpose(), "exact symmetry", in);
            bool toeplitz = true;
            for (Eigen::Index i = 0; i < a.rows(); ++i)
                for (Eigen::Index j = 0; j < a.cols(); ++j)
                    toeplitz = toeplitz && a(i, j) == a(0, std::abs(i - j));
            suite.check(toeplitz, "exact Toeplitz structure", in);
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(a, Eigen::EigenvaluesOnly);
            const double lo = eig.eigenvalues()[0];
            const double norm = eig.eigenvalues().cwiseAbs().maxCoeff();
            worst_psd = std::min(worst_psd, lo / norm);
            suite.check(lo >= -1e-10 * norm, "positive semidefinite", Json{{"n", n}, {"s", s}, {"min_eigenvalue", lo}});
        }
    }
    suite.metric("min_relative_eigenvalue", worst_psd);

    // Unit-width hat at s = 1/2 has self-energy 8 ln 2.
    const double a0 = detail::reference_fractional_entry(0, 0.5);
    suite.check(close_rel(a0, 8.0 * std::log(2.0), 1e-12), "unit diagonal at s = 1/2 equals 8 ln 2", Json{{"value", a0}});

    for (double s : {0.0, 1.0, -0.2, 1.5}) {
        bool raised = false;
        try {
            assemble_fractional_stiffness(Mesh1D(0.0, 1.0, 4), s);
        } catch (const Error& e) {
            raised = e.kind() == ErrorKind::ParameterDomain;
        }
        suite.check(raised, "s outside (0,1) rejected", Json{{"s", s}});
    }
    return suite.result();
}

Json suite_fractional_scaling() {
    Suite suite("fractional_scaling");
    double worst = 0.0;
    for (double s : {0.1, 0.25, 0.5, 0.75, 0.9}) {
        const Eigen::MatrixXd a1 = assemble_fractional_stiffness(Mesh1D(0.0, 1.0, 8), s).data;
        const Eigen::MatrixXd a2 = assemble_fractional_stiffness(Mesh1D(0.0, 2.0, 8), s).data;
        const double expected = std::pow(2.0, 1.0 - 2.0 * s);
        for (Eigen::Index i = 0; i < a1.rows(); ++i) {
            for (Eigen::Index j = 0; j < a1.cols(); ++j) {
                const double rel = std::abs(a2(i, j) / a1(i, j) - expected) / expected;
                worst = std::max(worst, rel);
                suite.check(rel <= 1e-10, "entry ratio 2^{1-2s}", Json{{"s", s}, {"i", i}, {"j", j}, {"relative", rel}});
            }
        }
    }
    suite.metric("max_relative_deviation", worst);

    const Mesh1D mesh(0.0, 1.0, 6);
    const OperatorMatrix frac = assemble_fractional_stiffness(mesh, 0.3);
    const DiscreteFunction zero(mesh, Eigen::VectorXd::Zero(6));
    suite.check(gagliardo_seminorm(zero, frac) == 0.0, "seminorm of zero");
    const DiscreteFunction hat(mesh, Eigen::VectorXd::Unit(6, 0));
    suite.check(close_rel(gagliardo_seminorm(hat, frac), std::sqrt(frac.data(0, 0)), 1e-15), "seminorm of one hat");
    return suite.result();
}

Json suite_lebesgue(std::mt19937_64& rng) {
    Suite suite("lebesgue_interpolation");
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::uniform_int_distribution<int> length(1, 20);
    for (int trial = 0; trial < 1000; ++trial) {
        const int m = length(rng);
        std::vector<double> f(m), w(m);
        for (int i = 0; i < m; ++i) {
            f[i] = unit(rng) < 0.2 ? 0.0 : 10.0 * unit(rng);
            w[i] = 0.05 + unit(rng);
        }
        std::vector<double> e{1.0 + 5.0 * unit(rng), 1.0 + 5.0 * unit(rng), 1.0 + 5.0 * unit(rng)};
        if (unit(rng) < 0.25) e[0] = kInfinity;
        std::sort(e.begin(), e.end());
        const LebesgueReport r = check_lebesgue_interpolation(f, w, e[0], e[2], e[1]);
        suite.check(r.holds, "||f||_r <= ||f||_q^{1-s} ||f||_p^s",
                    Json{{"trial", trial}, {"lhs", r.lhs}, {"rhs", r.rhs}, {"s", r.s}});
    }

    const std::vector<double> ones(5, 1.0);
    const std::vector<double> unit_weights(5, 0.2);
    const LebesgueReport c = check_lebesgue_interpolation(ones, unit_weights, 1.0, 4.0, 2.0);
    suite.check(std::abs(c.lhs - c.rhs) <= 1e-12, "constant on unit measure is an equality case",
                Json{{"lhs", c.lhs}, {"rhs", c.rhs}});
    const std::vector<double> indicator{1.0, 1.0, 0.0, 0.0, 0.0};
    for (auto [p, q, r] : {std::tuple{1.0, 4.0, 2.0}, std::tuple{1.5, kInfinity, 3.0}, std::tuple{2.0, 8.0, 5.0}}) {
        const LebesgueReport ind = check_lebesgue_interpolation(indicator, unit_weights, p, q, r);
        suite.check(std::abs(ind.lhs - ind.rhs) <= 1e-12, "indicator on unit measure is an equality case",
                    Json{{"p", p}, {"r", r}, {"lhs", ind.lhs}, {"rhs", ind.rhs}});
    }
    const std::vector<double> two{1.0, 10.0};
    const std::vector<double> half{0.5, 0.5};
    const LebesgueReport strict = check_lebesgue_interpolation(two, half, 1.0, 4.0, 2.0);
    suite.check(strict.holds && strict.lhs < strict.rhs, "strict case (1, 10)");
    return suite.result();
}

Json suite_k_functional(std::mt19937_64& rng) {
    Suite suite("k_functional");
    std::uniform_int_distribution<int> dims(1, 5);
    double worst_sym = 0.0;
    double worst_bracket = 0.0;
    for (int trial = 0; trial < 200; ++trial) {
        const HilbertCouple couple = random_couple(rng, dims(rng));
        const Eigen::VectorXd f = normal_vector(rng, couple.dim());
        const double x = log_uniform(rng, 1e-3, 1e3);
        const double k = k_functional(couple, f, x);
        const double k2 = k2_functional(couple, f, x);
        const double scale = couple.sum_norm(f);
        const Json in{{"trial", trial}, {"x", x}, {"K", k}, {"K2", k2}};
        worst_bracket = std::max({worst_bracket, (k2 - k) / scale, (k - std::sqrt(2.0) * k2) / scale});
        suite.check(k2 <= k + 1e-9 * scale && k <= std::sqrt(2.0) * k2 + 1e-9 * scale, "K2 <= K <= sqrt(2) K2", in);
        const SymmetryReport sym = symmetry_check(couple, f, x);
        worst_sym = std::max(worst_sym, sym.discrepancy);
        suite.check(sym.holds, "K(x,f,Y,X) = x K(1/x,f,X,Y)", Json{{"trial", trial}, {"discrepancy", sym.discrepancy}});
        const double c = -3.7;
        suite.check(close_rel(k_functional(couple, c * f, x), std::abs(c) * k, 1e-12), "homogeneity", in);
        suite.check(k_functional(couple, f, 1.0) == scale &&
                        scale <= std::min(couple.norm_x(f), couple.norm_y(f)) * (1.0 + 1e-12),
                    "K(1) = ||f||_{X+Y} <= min(||f||_X, ||f||_Y)", in);

        if (trial % 10 == 0) {
            const KFunctionalCurve curve = k_curve(couple, f, geometric_grid(1e-6, 1e6, 64));
            const double nx = couple.norm_x(f);
            const double ny = couple.norm_y(f);
            for (std::size_t j = 0; j < curve.xs.size(); ++j) {
                const double xj = curve.xs[j];
                suite.check(curve.values[j] <= std::min(nx, xj * ny) + 1e-10 * scale, "K <= min(||f||_X, x||f||_Y)",
                            Json{{"trial", trial}, {"x", xj}});
                if (j > 0) {
                    suite.check(curve.values[j] >= curve.values[j - 1] * (1.0 - 1e-12), "K nondecreasing",
                                Json{{"trial", trial}, {"x", xj}});
                    suite.check(curve.values[j] / xj <= curve.values[j - 1] / curve.xs[j - 1] * (1.0 + 1e-12),
                                "K/x nonincreasing", Json{{"trial", trial}, {"x", xj}});
                }
            }
        }
    }
    suite.metric("max_symmetry_discrepancy", worst_sym);
    suite.metric("max_bracket_excess", worst_bracket);

    // One mode: K(x, c) = |c| min(1, x sqrt(mu)).
    for (double mu : {0.25, 1.0, 9.0}) {
        const HilbertCouple one(Eigen::MatrixXd::Identity(1, 1), Eigen::MatrixXd::Constant(1, 1, mu));
        for (double x : {0.1, 0.5, 1.0, 2.0, 10.0}) {
            const Eigen::VectorXd c = Eigen::VectorXd::Constant(1, -2.0);
            const double expected = 2.0 * std::min(1.0, x * std::sqrt(mu));
            suite.check(std::abs(k_functional(one, c, x) - expected) <= 1e-12 * expected, "one-mode closed form",
                        Json{{"mu", mu}, {"x", x}});
        }
    }
    const HilbertCouple couple = random_couple(rng, 4);
    suite.check(k_functional(couple, Eigen::VectorXd::Zero(4), 0.3) == 0.0, "K of zero");
    bool raised = false;
    try {
        k_functional(couple, Eigen::VectorXd::Ones(4), 0.0);
    } catch (const Error& e) {
        raised = e.kind() == ErrorKind::ParameterDomain;
    }
    suite.check(raised, "x <= 0 rejected");
    return suite.result();
}

Json suite_interpolation_norms(std::mt19937_64& rng) {
    Suite suite("interpolation_norms");
    std::uniform_int_distribution<int> dims(1, 6);
    double worst_closed = 0.0;
    double worst_sym = 0.0;
    for (int trial = 0; trial < 30; ++trial) {
        const HilbertCouple couple = random_couple(rng, dims(rng));
        const HilbertCouple flipped = couple.swapped();
        const Eigen::VectorXd f = normal_vector(rng, couple.dim());
        for (double s : {0.25, 0.5, 0.75}) {
            const double k2 = interpolation_norm(couple, f, s, 2.0, KVariant::K2);
            const double ref = spectral_s_norm(couple, f, s);
            const double rel = std::abs(k2 - ref) / ref;
            worst_closed = std::max(worst_closed, rel);
            suite.check(rel <= 1e-5, "K2 (s,2)-norm closed form", Json{{"trial", trial}, {"s", s}, {"relative", rel}});
            for (double p : {1.0, 2.0, kInfinity}) {
                for (KVariant v : {KVariant::K, KVariant::K2}) {
                    const double a = interpolation_norm(couple, f, s, p, v);
                    const double b = interpolation_norm(flipped, f, 1.0 - s, p, v);
                    const double d = std::abs(a - b) / std::max(a, b);
                    worst_sym = std::max(worst_sym, d);
                    const Json in{{"trial", trial}, {"s", s}, {"p", std::isinf(p) ? Json("inf") : Json(p)},
                                  {"variant", to_string(v)}, {"relative", d}};
                    suite.check(d <= 1e-6, "(X,Y)_{s,p} = (Y,X)_{1-s,p}", in);
                    const InterpolationInequalityReport ir = check_interpolation_inequality(couple, f, s, p, v);
                    suite.check(ir.holds, "interpolation inequality", in);
                }
            }
        }
    }
    suite.metric("max_closed_form_relative", worst_closed);
    suite.metric("max_symmetry_relative", worst_sym);

    for (double s : {0.25, 0.5, 0.75}) {
        const HilbertCouple one(Eigen::MatrixXd::Identity(1, 1), Eigen::MatrixXd::Constant(1, 1, 4.0));
        const InterpolationInequalityReport ir =
            check_interpolation_inequality(one, Eigen::VectorXd::Ones(1), s, 2.0, KVariant::K2);
        const double expected = std::sqrt(std::numbers::pi / (2.0 * std::sin(std::numbers::pi * s)));
        suite.check(std::abs(ir.ratio - expected) <= 1e-5 * expected, "single mode attains the K2 constant",
                    Json{{"s", s}, {"ratio", ir.ratio}});
        suite.check(interpolation_norm(one, Eigen::VectorXd::Zero(1), s, 1.0, KVariant::K) == 0.0, "norm of zero");
    }
    return suite.result();
}

Json suite_operator_interpolation(std::mt19937_64& rng) {
    Suite suite("operator_interpolation");
    std::uniform_int_distribution<int> dims(1, 10);
    std::uniform_real_distribution<double> sdist(0.05, 0.95);
    double worst = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        const int n0 = dims(rng);
        const int n1 = dims(rng);
        const HilbertCouple c0 = random_couple(rng, n0);
        const HilbertCouple c1 = random_couple(rng, n1);
        Eigen::MatrixXd t(n1, n0);
        for (int j = 0; j < n0; ++j) t.col(j) = normal_vector(rng, n1);
        const double s = sdist(rng);
        const OperatorInterpolationReport r = check_operator_interpolation(t, c0, c1, s, 2.0, KVariant::K2);
        worst = std::max(worst, r.lhs / r.rhs);
        suite.check(r.holds, "||T||_s <= ||T||_X^{1-s} ||T||_Y^s", Json{{"trial", trial}, {"lhs", r.lhs}, {"rhs", r.rhs}});
    }
    suite.metric("max_lhs_over_rhs", worst);

    const HilbertCouple c = random_couple(rng, 4);
    const Eigen::MatrixXd scalar = -2.5 * Eigen::MatrixXd::Identity(4, 4);
    const OperatorInterpolationReport tight = check_operator_interpolation(scalar, c, c, 0.4, 2.0, KVariant::K2);
    suite.check(std::abs(tight.lhs - 2.5) <= 1e-10 * 2.5 && std::abs(tight.rhs - 2.5) <= 1e-10 * 2.5,
                "scalar operator is tight", Json{{"lhs", tight.lhs}, {"rhs", tight.rhs}});

    SamplingOptions sampling;
    sampling.seed = rng();
    sampling.directions = 200;
    sampling.ascent_steps = 100;
    const HilbertCouple d0 = random_couple(rng, 3);
    const HilbertCouple d1 = random_couple(rng, 3);
    Eigen::MatrixXd t(3, 3);
    for (int j = 0; j < 3; ++j) t.col(j) = normal_vector(rng, 3);
    for (double p : {1.0, kInfinity}) {
        const OperatorInterpolationReport r = check_operator_interpolation(t, d0, d1, 0.5, p, KVariant::K, sampling);
        suite.check(r.holds, "sampled operator bound", Json{{"p", std::isinf(p) ? Json("inf") : Json(p)},
                                                            {"lhs", r.lhs}, {"rhs", r.rhs}});
    }
    return suite.result();
}

Json suite_inclusion(std::mt19937_64& rng) {
    Suite suite("inclusion_monotonicity");
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int trial = 0; trial < 1000; ++trial) {
        const int n = 1 + trial % 6;
        Eigen::VectorXd mu(n);
        for (int i = 0; i < n; ++i) mu[i] = std::pow(100.0, unit(rng));
        const Eigen::MatrixXd q = Eigen::HouseholderQR<Eigen::MatrixXd>(random_spd(rng, n)).householderQ();
        const HilbertCouple couple(Eigen::MatrixXd::Identity(n, n), q * mu.asDiagonal() * q.transpose());
        double s1 = 0.05 + 0.9 * unit(rng);
        double s2 = 0.05 + 0.9 * unit(rng);
        if (s1 == s2) continue;
        if (s1 > s2) std::swap(s1, s2);
        const InclusionReport r = check_inclusion_monotonicity(couple, normal_vector(rng, n), s1, s2, 2.0);
        suite.check(r.holds, "s1-norm dominated by s2-norm", Json{{"trial", trial}, {"s1", s1}, {"s2", s2}});
    }
    bool raised = false;
    try {
        const HilbertCouple bad(Eigen::MatrixXd::Identity(2, 2), Eigen::Vector2d(0.5, 2.0).asDiagonal());
        check_inclusion_monotonicity(bad, Eigen::VectorXd::Ones(2), 0.2, 0.8, 2.0);
    } catch (const Error& e) {
        raised = e.kind() == ErrorKind::Normalization;
    }
    suite.check(raised, "unnormalized couple rejected");
    return suite.result();
}

Json suite_spectral_contract(std::uint64_t seed) {
    Suite suite("spectral_contract");
    const MixedPencil base = assemble_pencil(Mesh1D(0.0, 1.0, 63), 0.5, 0.0);
    const double c_h = embedding_constant(base);
    suite.metric("c_h", c_h);
    Json lambda_1 = Json::object();
    for (double alpha : {-50.0, -1.1 / c_h, -0.5 / c_h, 0.0, 1.0, 10.0}) {
        const MixedPencil p = base.with_alpha(alpha);
        const SpectrumResult r = solve_spectrum(p, 5);
        bool holds = true;
        const Json checks = spectrum_checks(p, r, seed, holds);
        suite.check(holds, "spectrum contract", Json{{"alpha", alpha}, {"checks", checks}});
        lambda_1[io::format_real(alpha)] = r.lambdas[0];
    }
    suite.metric("lambda_1", lambda_1);

    // Resolvent route at small n.
    const MixedPencil small = assemble_pencil(Mesh1D(0.0, 1.0, 16), 0.5, 0.0);
    const double c_small = embedding_constant(small);
    for (double alpha : {-3.0 / c_small, -0.5 / c_small, 0.0, 4.0}) {
        const MixedPencil p = small.with_alpha(alpha);
        const SpectrumResult r = solve_spectrum(p, 16);
        bool holds = true;
        const Json checks = spectrum_checks(p, r, seed, holds);
        suite.check(holds && checks.contains("resolvent"), "small-n contract with resolvent",
                    Json{{"alpha", alpha}, {"checks", checks}});
    }

    // alpha = 0 reduces to the Dirichlet Laplacian pencil.
    const SpectrumResult r0 = solve_spectrum(base, 5);
    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> lap(base.local_stiffness().data, base.mass().data,
                                                                   Eigen::EigenvaluesOnly);
    for (Eigen::Index j = 0; j < 5; ++j) {
        suite.check(close_rel(r0.lambdas[j], lap.eigenvalues()[j], 1e-10), "alpha = 0 reduction", Json{{"k", j + 1}});
    }
    const SpectrumResult one = solve_spectrum(assemble_pencil(Mesh1D(0.0, 1.0, 1), 0.5, 0.0), 1);
    suite.check(close_rel(one.lambdas[0], 12.0, 1e-14), "1x1 pencil", Json{{"lambda", one.lambdas[0]}});

    std::vector<double> alphas;
    for (int i = 0; i <= 12; ++i) alphas.push_back((-2.0 + 0.25 * i) / c_h);
    const SweepTable table = sweep_alpha(base, alphas, 3);
    suite.check(table.monotone, "lambda_j nondecreasing in alpha");
    for (const auto& row : table.rows) {
        const double gap = row.alpha + 1.0 / c_h;
        if (std::abs(gap) > 1e-7) {
            suite.check(row.sign_lambda_1 == (gap > 0.0 ? 1 : -1), "sign(lambda_1) = sign(alpha + 1/C_h)",
                        Json{{"alpha", row.alpha}, {"lambda_1", row.lambdas[0]}});
        }
    }
    bool raised = false;
    try {
        solve_spectrum(base, 64);
    } catch (const Error& e) {
        raised = e.kind() == ErrorKind::Request;
    }
    suite.check(raised, "k > n rejected");
    return suite.result();
}

Json suite_gamma_shift() {
    Suite suite("gamma_shift");
    const MixedPencil base = assemble_pencil(Mesh1D(0.0, 1.0, 63), 0.5, 0.0);
    const double c_h = embedding_constant(base);
    for (double alpha : {-50.0, -5.0, -1.0 / c_h, -0.5 / c_h, -1e-3}) {
        const MixedPencil p = base.with_alpha(alpha);
        const double gamma = gamma_shift(p);
        const CoercivityCheck c = coercivity_margin(p, gamma);
        suite.check(c.min_eigenvalue >= -1e-10 * c.scale, "A_alpha + gamma M - A_loc/2 PSD",
                    Json{{"alpha", alpha}, {"gamma", gamma}, {"min_eigenvalue", c.min_eigenvalue}, {"scale", c.scale}});
        if (gamma > 0.0) {
            const CoercivityCheck below = coercivity_margin(p, gamma * (1.0 - 1e-6));
            suite.check(below.min_eigenvalue < 0.0, "gamma is minimal", Json{{"alpha", alpha}, {"gamma", gamma}});
        }
    }
    for (double alpha : {0.0, 1.0, 10.0}) {
        const double gamma = gamma_shift(base.with_alpha(alpha));
        suite.check(gamma == 0.0, "gamma = 0 for alpha >= 0", Json{{"alpha", alpha}, {"gamma", gamma}});
    }
    return suite.result();
}

Json suite_coercivity_threshold() {
    Suite suite("coercivity_threshold");
    Json found = Json::object();
    for (double s : {0.3, 0.5, 0.7}) {
        const MixedPencil base = assemble_pencil(Mesh1D(0.0, 1.0, 63), s, 0.0);
        const double c_h = embedding_constant(base);
        const ThresholdReport r = locate_coercivity_threshold(base, -10.0 / c_h, -0.1 / c_h);
        found[io::format_real(s)] = Json{{"alpha_star", r.alpha_star}, {"reference", r.reference}, {"difference", r.difference}};
        suite.check(r.holds, "|alpha* + 1/C_h| <= 1e-8 / C_h",
                    Json{{"s", s}, {"alpha_star", r.alpha_star}, {"reference", r.reference}, {"tolerance", r.tolerance}});
    }
    suite.metric("thresholds", found);
    return suite.result();
}

Json suite_brezis(std::uint64_t seed) {
    Suite suite("brezis_inequality");
    std::vector<double> maxima;
    Json per_n = Json::object();
    for (std::size_t n : {15u, 31u, 63u}) {
        const BrezisReport r = verify_brezis_inequality(Mesh1D(0.0, 1.0, n), 0.5, 200, seed);
        maxima.push_back(r.max_ratio);
        per_n[std::to_string(n)] = Json{{"max_ratio", r.max_ratio}, {"sampled_max", r.sampled_max},
                                        {"first_eigenvector_ratio", r.first_eigenvector_ratio}, {"c_h", r.c_h_reference}};
        suite.check(std::isfinite(r.max_ratio) && r.max_ratio > 0.0, "ratio finite", Json{{"n", n}});
        suite.check(r.first_eigenvector_ratio <= r.max_ratio, "first eigenvector within the sampled set", Json{{"n", n}});
    }
    const auto [lo, hi] = std::minmax_element(maxima.begin(), maxima.end());
    const double variation = (*hi - *lo) / *lo;
    suite.metric("per_n", per_n);
    suite.metric("variation", variation);
    suite.check(variation < 0.2, "max ratio varies < 20% across refinement", Json{{"variation", variation}});

    // Per-mode Hölder: sum mu^s c^2 <= ||u||_X^{2(1-s)} ||u||_Y^{2s}, equality on a single mode.
    const Mesh1D mesh(0.0, 1.0, 31);
    const Eigen::MatrixXd m = assemble_mass(mesh).data;
    const HilbertCouple couple(m, m + assemble_local_stiffness(mesh).data);
    const double s = 0.5;
    const double pref = std::numbers::pi / (2.0 * std::sin(std::numbers::pi * s));
    std::mt19937_64 rng(seed);
    for (int trial = 0; trial < 50; ++trial) {
        const Eigen::VectorXd u = trial == 0 ? Eigen::VectorXd(couple.basis().col(3)) : normal_vector(rng, 31);
        const double weight = std::pow(spectral_s_norm(couple, u, s), 2) / pref;
        const double holder = std::pow(couple.norm_x(u), 2.0 * (1.0 - s)) * std::pow(couple.norm_y(u), 2.0 * s);
        suite.check(weight <= holder * (1.0 + 1e-12), "per-mode Hölder bound", Json{{"trial", trial}});
        if (trial == 0) suite.check(close_rel(weight, holder, 1e-10), "single mode attains the Hölder bound");
    }
    return suite.result();
}

Json suite_matrix_file(const VerifyOptions& opts) {
    Suite suite("matrix_file");
    const std::string path = opts.check_matrix->string();
    try {
        std::istringstream in(io::read_file(*opts.check_matrix));
        const io::MatrixBlock block = io::read_matrix(in);
        const auto kind = operator_kind_from_string(block.kind);
        if (!suite.check(kind.has_value(), "known operator kind", Json{{"path", path}, {"kind", block.kind}})) {
            return suite.result();
        }
        if (!suite.check(block.data.rows() == block.data.cols() && block.data.rows() > 0, "square matrix",
                         Json{{"path", path}})) {
            return suite.result();
        }
        const Mesh1D mesh(opts.check_a, opts.check_b, static_cast<std::size_t>(block.data.rows()));
        OperatorMatrix fresh = *kind == OperatorKind::Mass ? assemble_mass(mesh)
                               : *kind == OperatorKind::LocalStiffness
                                   ? assemble_local_stiffness(mesh)
                                   : assemble_fractional_stiffness(mesh, block.s.value_or(-1.0));
        const double scale = fresh.data.cwiseAbs().maxCoeff();
        for (Eigen::Index i = 0; i < block.data.rows(); ++i) {
            for (Eigen::Index j = 0; j < block.data.cols(); ++j) {
                const double got = block.data(i, j);
                const double want = fresh.data(i, j);
                if (!suite.check(std::abs(got - want) <= 1e-12 * scale, "entry matches fresh assembly",
                                 Json{{"path", path}, {"i", i}, {"j", j}, {"value", got}, {"expected", want}})) {
                    return suite.result();
                }
            }
        }
    } catch (const Error& e) {
        suite.check(false, "matrix file readable", Json{{"path", path}, {"error", to_string(e.kind())}, {"message", e.what()}});
    }
    return suite.result();
}

} // namespace

Json spectrum_checks(const MixedPencil& pencil, const SpectrumResult& r, std::uint64_t seed, bool& holds) {
    Json checks;
    const Eigen::Index k = r.lambdas.size();
    const Json none = Json::object();
    auto add = [&](const char* name, Json rec) {
        holds = holds && rec["holds"].get<bool>();
        checks[name] = std::move(rec);
    };

    bool ascending = true;
    for (Eigen::Index j = 1; j < k; ++j) ascending = ascending && r.lambdas[j] >= r.lambdas[j - 1];
    add("ascending", check_record("ascending", none, r.lambdas[0], r.lambdas[k - 1], 0.0, ascending));
    add("lower_bound", check_record("lambda_1 > -gamma", none, r.lambdas[0], -r.gamma, 0.0, r.lambdas[0] > -r.gamma));

    const Eigen::MatrixXd gram = r.vectors.transpose() * pencil.mass().data * r.vectors;
    const double orth = (gram - Eigen::MatrixXd::Identity(k, k)).cwiseAbs().maxCoeff();
    add("m_orthonormality", check_record("max |V^T M V - I|", none, orth, 1e-8, 1e-8, orth <= 1e-8));

    const Eigen::MatrixXd b = r.vectors.transpose() * pencil.a_alpha() * r.vectors;
    const double diag = b.diagonal().cwiseAbs().maxCoeff();
    double off = 0.0;
    for (Eigen::Index i = 0; i < k; ++i)
        for (Eigen::Index j = 0; j < k; ++j)
            if (i != j) off = std::max(off, std::abs(b(i, j)));
    add("b_orthogonality", check_record("max offdiag V^T A_alpha V", none, off, 1e-6 * diag, 1e-6, off <= 1e-6 * diag));

    const double mass_norm = max_row_sum(pencil.mass().data);
    double worst = 0.0;
    for (Eigen::Index j = 0; j < k; ++j) {
        worst = std::max(worst, r.residuals[j] / ((1.0 + std::abs(r.lambdas[j])) * mass_norm));
    }
    add("residuals", check_record("max residual / ((1+|lambda|) ||M||)", none, worst, 1e-8, 1e-8, worst <= 1e-8));

    const VariationalReport var = verify_variational_characterization(r, pencil, seed);
    Json entries = Json::array();
    for (const auto& e : var.entries) {
        Json rec = check_record("variational", Json{{"k", e.k}}, e.min_sampled, e.lambda, 1e-8, e.holds);
        rec["attained"] = e.attained;
        rec["deflated_lambda"] = e.deflated_lambda;
        entries.push_back(std::move(rec));
    }
    holds = holds && var.holds;
    checks["variational"] = Json{{"samples_per_k", var.samples_per_k}, {"holds", var.holds}, {"entries", entries}};

    if (pencil.size() <= 32) {
        const Eigen::VectorXd mu = explicit_resolvent_eigenvalues(pencil, r.gamma);
        double dev = 0.0;
        for (Eigen::Index j = 0; j < k; ++j) {
            dev = std::max(dev, std::abs(r.lambdas[j] - (1.0 / mu[j] - r.gamma)) / (1.0 + std::abs(r.lambdas[j])));
        }
        add("resolvent",
            check_record("max |lambda - (1/mu - gamma)| / (1+|lambda|)", none, dev, 1e-9, 1e-9, dev <= 1e-9));
    }
    return checks;
}

Json run_verify_suites(const VerifyOptions& options) {
    // Each randomized suite draws from its own stream so suites stay
    // independent of one another's sample counts.
    auto stream = [&](std::uint64_t id) { return std::mt19937_64(options.seed * 0x9E3779B97F4A7C15ULL + id); };
    auto rng_leb = stream(1);
    auto rng_k = stream(2);
    auto rng_norm = stream(3);
    auto rng_op = stream(4);
    auto rng_inc = stream(5);

    Json suites = Json::array();
    suites.push_back(suite_mesh_and_local_forms());
    suites.push_back(suite_fractional_invariants());
    suites.push_back(suite_fractional_scaling());
    suites.push_back(suite_lebesgue(rng_leb));
    suites.push_back(suite_k_functional(rng_k));
    suites.push_back(suite_interpolation_norms(rng_norm));
    suites.push_back(suite_operator_interpolation(rng_op));
    suites.push_back(suite_inclusion(rng_inc));
    suites.push_back(suite_spectral_contract(options.seed));
    suites.push_back(suite_gamma_shift());
    suites.push_back(suite_coercivity_threshold());
    suites.push_back(suite_brezis(options.seed));
    if (options.check_matrix) suites.push_back(suite_matrix_file(options));

    Json summary;
    summary["op"] = "verify";
    Json inputs;
    inputs["seed"] = options.seed;
    if (options.check_matrix) {
        inputs["check_matrix"] = options.check_matrix->string();
        inputs["domain"] = std::vector<double>{options.check_a, options.check_b};
    }
    summary["inputs"] = inputs;
    bool holds = true;
    Json first = nullptr;
    for (const auto& s : suites) {
        if (!s["holds"].get<bool>()) {
            if (holds) first = Json{{"suite", s["name"]}, {"counterexample", s["counterexample"]}};
            holds = false;
        }
    }
    summary["holds"] = holds;
    summary["first_counterexample"] = first;
    summary["suites"] = suites;
    return summary;
}

} // namespace mixlab::cli
