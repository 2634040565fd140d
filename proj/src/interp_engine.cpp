#include "mixlab/interp_engine.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>

#include "mixlab/quadrature.hpp"

namespace mixlab {

namespace {

void require_square_symmetric(const Eigen::MatrixXd& g, const char* name) {
    if (g.rows() != g.cols() || g.rows() == 0) {
        throw Error(ErrorKind::Dimension, std::string(name) + " must be a non-empty square matrix");
    }
    const double scale = g.cwiseAbs().maxCoeff();
    if (!std::isfinite(scale) || (g - g.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
        throw Error(ErrorKind::InvalidCouple, std::string(name) + " is not symmetric");
    }
}

Eigen::LLT<Eigen::MatrixXd> factor_spd(const Eigen::MatrixXd& g, const char* name) {
    Eigen::LLT<Eigen::MatrixXd> llt(g);
    if (llt.info() != Eigen::Success) {
        throw Error(ErrorKind::InvalidCouple, std::string(name) + " is not positive definite (Cholesky failed)");
    }
    return llt;
}

void require_s(double s) {
    if (std::isnan(s) || !(s > 0.0 && s < 1.0)) {
        std::ostringstream msg;
        msg << "interpolation parameter s = " << s << " outside (0, 1)";
        throw Error(ErrorKind::ParameterDomain, msg.str());
    }
}

void require_p(double p) {
    if (std::isnan(p) || p < 1.0) {
        throw Error(ErrorKind::ParameterDomain, "exponent p must lie in [1, inf]");
    }
}

void require_x(double x) {
    if (std::isnan(x) || !(x > 0.0)) {
        throw Error(ErrorKind::ParameterDomain, "K-functional argument x must be positive");
    }
}

void require_dim(const HilbertCouple& couple, const Eigen::VectorXd& f) {
    if (f.size() != couple.dim()) throw Error(ErrorKind::Dimension, "element dimension does not match couple");
}

// Per-mode data of one element: the K-functional only sees (mu_i, c_i^2).
struct ModeProfile {
    std::vector<double> mu;
    std::vector<double> c2;
    double sum_x = 0.0;      // sum c^2
    double sum_y = 0.0;      // sum mu c^2
    double sum_yy = 0.0;     // sum mu^2 c^2
    double sum_inv = 0.0;    // sum c^2 / mu
    double mu_min = 0.0;
    double mu_max = 0.0;

    ModeProfile(const HilbertCouple& couple, const Eigen::VectorXd& f) {
        const Eigen::VectorXd c = couple.coordinates(f);
        mu_min = std::numeric_limits<double>::infinity();
        for (Eigen::Index i = 0; i < c.size(); ++i) {
            const double w = c[i] * c[i];
            if (w == 0.0) continue;
            const double m = couple.mu()[i];
            mu.push_back(m);
            c2.push_back(w);
            sum_x += w;
            sum_y += m * w;
            sum_yy += m * m * w;
            sum_inv += w / m;
            mu_min = std::min(mu_min, m);
            mu_max = std::max(mu_max, m);
        }
    }

    bool zero() const { return mu.empty(); }
    double norm_x() const { return std::sqrt(sum_x); }
    double norm_y() const { return std::sqrt(sum_y); }
    // Below knee_low the optimal split is g = 0, above knee_high it is h = 0.
    double knee_low() const { return std::sqrt(sum_y / sum_yy); }
    double knee_high() const { return std::sqrt(sum_inv / sum_x); }

    // ||g(w)||_X + x ||f - g(w)||_Y for the weighted least-squares split at w = e^t.
    double split_cost(double t, double x) const {
        const double w = std::exp(t);
        double a2 = 0.0;
        double b2 = 0.0;
        for (std::size_t i = 0; i < mu.size(); ++i) {
            const double wm = w * mu[i];
            const double keep = wm / (1.0 + wm);
            const double rest = 1.0 / (1.0 + wm);
            a2 += c2[i] * keep * keep;
            b2 += mu[i] * c2[i] * rest * rest;
        }
        return std::sqrt(a2) + x * std::sqrt(b2);
    }

    double k(double x) const {
        if (zero()) return 0.0;
        const double nx = norm_x();
        const double ny = norm_y();
        if (x <= knee_low()) return x * ny;
        if (x >= knee_high()) return nx;

        // Coarse scan of log w, then golden section around the best sample.
        const double t_lo = -std::log(mu_max) - 30.0;
        const double t_hi = -std::log(mu_min) + 30.0;
        constexpr int kScan = 120;
        const double step = (t_hi - t_lo) / kScan;
        int best = 0;
        double best_value = std::numeric_limits<double>::infinity();
        for (int i = 0; i <= kScan; ++i) {
            const double v = split_cost(t_lo + step * i, x);
            if (v < best_value) {
                best_value = v;
                best = i;
            }
        }
        double lo = t_lo + step * std::max(best - 1, 0);
        double hi = t_lo + step * std::min(best + 1, kScan);
        constexpr double kInvPhi = 0.6180339887498949;
        double c = hi - kInvPhi * (hi - lo);
        double d = lo + kInvPhi * (hi - lo);
        double fc = split_cost(c, x);
        double fd = split_cost(d, x);
        for (int iter = 0; iter < 64; ++iter) {
            if (fc < fd) {
                hi = d;
                d = c;
                fd = fc;
                c = hi - kInvPhi * (hi - lo);
                fc = split_cost(c, x);
            } else {
                lo = c;
                c = d;
                fc = fd;
                d = lo + kInvPhi * (hi - lo);
                fd = split_cost(d, x);
            }
        }
        return std::min({best_value, fc, fd, x * ny, nx});
    }

    double k2(double x) const {
        double sum = 0.0;
        const double x2 = x * x;
        for (std::size_t i = 0; i < mu.size(); ++i) {
            const double m = x2 * mu[i];
            sum += c2[i] * m / (1.0 + m);
        }
        return std::sqrt(sum);
    }

    double eval(KVariant variant, double x) const { return variant == KVariant::K ? k(x) : k2(x); }

    double spectral_weight(double s) const {
        double sum = 0.0;
        for (std::size_t i = 0; i < mu.size(); ++i) sum += std::pow(mu[i], s) * c2[i];
        return sum;
    }
};

// Maximize g over [lo, hi] by a scan followed by golden section at the best sample.
template <typename G>
double maximize_on(double lo, double hi, int scan, G&& g) {
    if (!(hi > lo)) return g(lo);
    const double step = (hi - lo) / scan;
    int best = 0;
    double best_value = -std::numeric_limits<double>::infinity();
    for (int i = 0; i <= scan; ++i) {
        const double v = g(lo + step * i);
        if (v > best_value) {
            best_value = v;
            best = i;
        }
    }
    double a = lo + step * std::max(best - 1, 0);
    double b = lo + step * std::min(best + 1, scan);
    constexpr double kInvPhi = 0.6180339887498949;
    double c = b - kInvPhi * (b - a);
    double d = a + kInvPhi * (b - a);
    double gc = g(c);
    double gd = g(d);
    for (int iter = 0; iter < 64; ++iter) {
        if (gc > gd) {
            b = d;
            d = c;
            gd = gc;
            c = b - kInvPhi * (b - a);
            gc = g(c);
        } else {
            a = c;
            c = d;
            gc = gd;
            d = a + kInvPhi * (b - a);
            gd = g(d);
        }
    }
    return std::max({best_value, gc, gd});
}

// K2 variant: trapezoid in log x on a geometric grid plus analytic tails,
// widening the grid until both tail bounds are below 1e-10 of the body.
double k2_norm_power(const ModeProfile& prof, double s, double p) {
    constexpr std::size_t kBasePoints = 512;
    constexpr double kTailFraction = 1e-10;
    constexpr std::size_t kMaxPoints = 1u << 20;

    const double u_lo0 = std::log(1e-6 / std::sqrt(prof.mu_max));
    const double u_hi0 = std::log(1e6 / std::sqrt(prof.mu_min));
    const double du = (u_hi0 - u_lo0) / static_cast<double>(kBasePoints - 1);
    const double nx = prof.norm_x();
    const double ny = prof.norm_y();

    auto integrand = [&](double u) { return std::pow(prof.k2(std::exp(u)), p) * std::exp(-s * p * u); };
    auto low_tail = [&](double u) { return std::pow(ny, p) * std::exp(p * (1.0 - s) * u) / (p * (1.0 - s)); };
    auto high_tail = [&](double u) { return std::pow(nx, p) * std::exp(-s * p * u) / (s * p); };

    std::size_t left = 0;   // extra points below u_lo0
    std::size_t right = 0;  // extra points above u_hi0
    double body = 0.0;
    for (std::size_t i = 0; i < kBasePoints; ++i) {
        const double w = (i == 0 || i + 1 == kBasePoints) ? 0.5 : 1.0;
        body += w * integrand(u_lo0 + du * static_cast<double>(i));
    }
    body *= du;
    for (;;) {
        const double u_lo = u_lo0 - du * static_cast<double>(left);
        const double u_hi = u_hi0 + du * static_cast<double>(right);
        const double lt = low_tail(u_lo);
        const double ht = high_tail(u_hi);
        const bool low_ok = lt <= kTailFraction * body;
        const bool high_ok = ht <= kTailFraction * body;
        if (low_ok && high_ok) return body + lt + ht;
        if (kBasePoints + left + right >= kMaxPoints) {
            const double achieved = std::max(lt, ht) / body;
            std::ostringstream msg;
            msg << "interpolation-norm tail bound " << achieved << " exceeds " << kTailFraction;
            throw Error(ErrorKind::Truncation, msg.str(), achieved);
        }
        // Extend by blocks of 64 cells; the trapezoid body grows accordingly.
        for (int block = 0; block < 64; ++block) {
            if (!low_ok) {
                const double a = u_lo0 - du * static_cast<double>(left);
                const double b = a - du;
                body += 0.5 * du * (integrand(a) + integrand(b));
                ++left;
            }
            if (!high_ok) {
                const double a = u_hi0 + du * static_cast<double>(right);
                const double b = a + du;
                body += 0.5 * du * (integrand(a) + integrand(b));
                ++right;
            }
        }
    }
}

// K variant: K(x) = x ||f||_Y below the lower knee and ||f||_X above the
// upper knee, both integrated exactly; composite Gauss in log x in between.
double k_norm_power(const ModeProfile& prof, double s, double p) {
    static const GaussRule rule = gauss_legendre(16);
    constexpr double kPanelWidth = 0.25;
    double x0 = prof.knee_low();
    double x1 = prof.knee_high();
    if (!(x1 > x0)) x0 = x1 = std::sqrt(x0 * x1);
    const double nx = prof.norm_x();
    const double ny = prof.norm_y();
    double total = std::pow(ny, p) * std::pow(x0, p * (1.0 - s)) / (p * (1.0 - s)) +
                   std::pow(nx, p) * std::pow(x1, -s * p) / (s * p);
    const double u0 = std::log(x0);
    const double u1 = std::log(x1);
    if (u1 > u0) {
        const auto panels = static_cast<std::size_t>(std::ceil((u1 - u0) / kPanelWidth));
        const double width = (u1 - u0) / static_cast<double>(panels);
        for (std::size_t i = 0; i < panels; ++i) {
            const double a = u0 + width * static_cast<double>(i);
            total += integrate(rule, a, a + width,
                               [&](double u) { return std::pow(prof.k(std::exp(u)), p) * std::exp(-s * p * u); });
        }
    }
    return total;
}

double sup_norm(const ModeProfile& prof, double s, KVariant variant) {
    auto log_ratio = [&](double u) { return std::log(prof.eval(variant, std::exp(u))) - s * u; };
    double u_lo;
    double u_hi;
    if (variant == KVariant::K) {
        u_lo = std::log(prof.knee_low());
        u_hi = std::log(prof.knee_high());
        if (!(u_hi > u_lo)) u_hi = u_lo = 0.5 * (u_lo + u_hi);
    } else {
        u_lo = std::log(1e-6 / std::sqrt(prof.mu_max));
        u_hi = std::log(1e6 / std::sqrt(prof.mu_min));
    }
    return std::exp(maximize_on(u_lo, u_hi, variant == KVariant::K ? 128 : 512, log_ratio));
}

Eigen::MatrixXd spectral_gram(const HilbertCouple& couple, double s) {
    const Eigen::MatrixXd gv = couple.gram_x() * couple.basis();
    const Eigen::VectorXd weights = couple.mu().array().pow(s).matrix();
    Eigen::MatrixXd g = gv * weights.asDiagonal() * gv.transpose();
    return 0.5 * (g + g.transpose());
}

} // namespace

HilbertCouple::HilbertCouple(Eigen::MatrixXd gram_x, Eigen::MatrixXd gram_y)
    : gram_x_(std::move(gram_x)), gram_y_(std::move(gram_y)) {
    require_square_symmetric(gram_x_, "G_X");
    require_square_symmetric(gram_y_, "G_Y");
    if (gram_x_.rows() != gram_y_.rows()) throw Error(ErrorKind::Dimension, "Gram matrices differ in dimension");
    const auto llt_x = factor_spd(gram_x_, "G_X");
    factor_spd(gram_y_, "G_Y");

    // L^{-1} G_Y L^{-T} z = mu z,  v = L^{-T} z.
    const auto lower = llt_x.matrixL();
    Eigen::MatrixXd reduced = lower.solve(gram_y_);
    reduced = lower.solve(reduced.transpose()).transpose();
    reduced = 0.5 * (reduced + reduced.transpose());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(reduced);
    if (eig.info() != Eigen::Success) throw Error(ErrorKind::InvalidCouple, "simultaneous diagonalization failed");
    mu_ = eig.eigenvalues();
    basis_ = llt_x.matrixU().solve(eig.eigenvectors());
    if (!(mu_.minCoeff() > 0.0)) throw Error(ErrorKind::InvalidCouple, "non-positive generalized eigenvalue");
}

HilbertCouple couple_from_grams(const Eigen::MatrixXd& gram_x, const Eigen::MatrixXd& gram_y) {
    return HilbertCouple(gram_x, gram_y);
}

Eigen::VectorXd HilbertCouple::coordinates(const Eigen::VectorXd& f) const {
    if (f.size() != dim()) throw Error(ErrorKind::Dimension, "element dimension does not match couple");
    return basis_.transpose() * (gram_x_ * f);
}

double HilbertCouple::norm_x(const Eigen::VectorXd& f) const {
    if (f.size() != dim()) throw Error(ErrorKind::Dimension, "element dimension does not match couple");
    return std::sqrt(std::max(0.0, f.dot(gram_x_ * f)));
}

double HilbertCouple::norm_y(const Eigen::VectorXd& f) const {
    if (f.size() != dim()) throw Error(ErrorKind::Dimension, "element dimension does not match couple");
    return std::sqrt(std::max(0.0, f.dot(gram_y_ * f)));
}

double HilbertCouple::sum_norm(const Eigen::VectorXd& f) const { return k_functional(*this, f, 1.0); }

double HilbertCouple::intersection_norm(const Eigen::VectorXd& f) const { return std::max(norm_x(f), norm_y(f)); }

HilbertCouple HilbertCouple::swapped() const { return HilbertCouple(gram_y_, gram_x_); }

double HilbertCouple::reconstruction_residual() const {
    const Eigen::MatrixXd r = gram_y_ * basis_ - gram_x_ * basis_ * mu_.asDiagonal();
    return r.norm() / gram_y_.norm();
}

double k_functional(const HilbertCouple& couple, const Eigen::VectorXd& f, double x) {
    require_x(x);
    require_dim(couple, f);
    return ModeProfile(couple, f).k(x);
}

double k2_functional(const HilbertCouple& couple, const Eigen::VectorXd& f, double x) {
    require_x(x);
    require_dim(couple, f);
    return ModeProfile(couple, f).k2(x);
}

std::vector<double> geometric_grid(double lo, double hi, std::size_t count) {
    if (!(lo > 0.0) || !(hi >= lo) || count == 0) {
        throw Error(ErrorKind::ParameterDomain, "geometric grid needs 0 < lo <= hi and count >= 1");
    }
    std::vector<double> xs(count);
    if (count == 1) {
        xs[0] = lo;
        return xs;
    }
    const double ratio = std::log(hi / lo) / static_cast<double>(count - 1);
    for (std::size_t i = 0; i < count; ++i) xs[i] = lo * std::exp(ratio * static_cast<double>(i));
    xs.back() = hi;
    return xs;
}

KFunctionalCurve k_curve(const HilbertCouple& couple, const Eigen::VectorXd& f, std::vector<double> xs) {
    require_dim(couple, f);
    const ModeProfile prof(couple, f);
    KFunctionalCurve curve;
    curve.values.reserve(xs.size());
    for (double x : xs) {
        require_x(x);
        curve.values.push_back(prof.k(x));
    }
    curve.xs = std::move(xs);
    curve.f_ref = f;
    return curve;
}

SymmetryReport symmetry_check(const HilbertCouple& couple, const Eigen::VectorXd& f, double x) {
    require_x(x);
    const HilbertCouple flipped = couple.swapped();
    SymmetryReport r{};
    r.x = x;
    r.lhs = k_functional(flipped, f, x);
    r.rhs = x * k_functional(couple, f, 1.0 / x);
    const double scale = couple.sum_norm(f);
    r.discrepancy = scale > 0.0 ? std::abs(r.lhs - r.rhs) / scale : std::abs(r.lhs - r.rhs);
    r.tolerance = 1e-9;
    r.holds = r.discrepancy <= r.tolerance;
    return r;
}

const char* to_string(KVariant v) noexcept { return v == KVariant::K ? "K" : "K2"; }

double interpolation_norm(const HilbertCouple& couple, const Eigen::VectorXd& f, double s, double p,
                          KVariant variant) {
    require_s(s);
    require_p(p);
    require_dim(couple, f);
    const ModeProfile prof(couple, f);
    if (prof.zero()) return 0.0;
    if (std::isinf(p)) return sup_norm(prof, s, variant);
    const double power = variant == KVariant::K ? k_norm_power(prof, s, p) : k2_norm_power(prof, s, p);
    return std::pow(power, 1.0 / p);
}

double spectral_s_norm(const HilbertCouple& couple, const Eigen::VectorXd& f, double s) {
    require_s(s);
    require_dim(couple, f);
    const ModeProfile prof(couple, f);
    return std::sqrt(std::numbers::pi / (2.0 * std::sin(std::numbers::pi * s)) * prof.spectral_weight(s));
}

double operator_norm(const Eigen::MatrixXd& op, const Eigen::MatrixXd& domain_gram,
                     const Eigen::MatrixXd& codomain_gram) {
    if (domain_gram.rows() != domain_gram.cols() || codomain_gram.rows() != codomain_gram.cols() ||
        op.cols() != domain_gram.rows() || op.rows() != codomain_gram.rows()) {
        throw Error(ErrorKind::Dimension, "operator and Gram dimensions are incompatible");
    }
    const auto llt = factor_spd(domain_gram, "domain Gram");
    const Eigen::MatrixXd pulled = op.transpose() * codomain_gram * op;
    const auto lower = llt.matrixL();
    Eigen::MatrixXd reduced = lower.solve(pulled);
    reduced = lower.solve(reduced.transpose()).transpose();
    reduced = 0.5 * (reduced + reduced.transpose());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(reduced, Eigen::EigenvaluesOnly);
    return std::sqrt(std::max(0.0, eig.eigenvalues().maxCoeff()));
}

OperatorInterpolationReport check_operator_interpolation(const Eigen::MatrixXd& op, const HilbertCouple& couple0,
                                                         const HilbertCouple& couple1, double s, double p,
                                                         KVariant variant, const SamplingOptions& sampling) {
    require_s(s);
    require_p(p);
    if (op.cols() != couple0.dim() || op.rows() != couple1.dim()) {
        throw Error(ErrorKind::Dimension, "operator does not map couple0's space to couple1's space");
    }
    OperatorInterpolationReport r{};
    r.norm_x = operator_norm(op, couple0.gram_x(), couple1.gram_x());
    r.norm_y = operator_norm(op, couple0.gram_y(), couple1.gram_y());
    r.rhs = std::pow(r.norm_x, 1.0 - s) * std::pow(r.norm_y, s);

    if (variant == KVariant::K2 && p == 2.0) {
        // The (s, 2) K2-norm is the quadratic form of spectral_gram up to a
        // common prefactor, which cancels in the ratio.
        r.method = "quadratic";
        r.lhs = operator_norm(op, spectral_gram(couple0, s), spectral_gram(couple1, s));
        r.tolerance = 1e-8;
    } else {
        r.method = "sampled";
        r.tolerance = kSampledOperatorSlack;
        std::mt19937_64 rng(sampling.seed);
        std::normal_distribution<double> normal;
        auto draw = [&] {
            Eigen::VectorXd v(couple0.dim());
            for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = normal(rng);
            return v;
        };
        auto ratio = [&](const Eigen::VectorXd& f) {
            const double denom = interpolation_norm(couple0, f, s, p, variant);
            return denom > 0.0 ? interpolation_norm(couple1, op * f, s, p, variant) / denom : 0.0;
        };
        Eigen::VectorXd best_f = draw();
        double best = ratio(best_f);
        for (std::size_t i = 1; i < sampling.directions; ++i) {
            Eigen::VectorXd f = draw();
            const double v = ratio(f);
            if (v > best) {
                best = v;
                best_f = std::move(f);
            }
        }
        // Random local ascent from the best direction.
        double step = 0.5;
        for (std::size_t i = 0; i < sampling.ascent_steps && step > 1e-8; ++i) {
            Eigen::VectorXd dir = draw();
            dir *= step * best_f.norm() / dir.norm();
            Eigen::VectorXd candidate = best_f + dir;
            const double v = ratio(candidate);
            if (v > best) {
                best = v;
                best_f = std::move(candidate);
            } else {
                step *= 0.95;
            }
        }
        r.lhs = best;
    }
    r.holds = r.lhs <= r.rhs * (1.0 + r.tolerance);
    return r;
}

double interpolation_constant(double s, double p, KVariant variant) {
    require_s(s);
    require_p(p);
    if (variant == KVariant::K2 && p == 2.0) return std::sqrt(std::numbers::pi / (2.0 * std::sin(std::numbers::pi * s)));
    if (std::isinf(p)) return 1.0;
    // From K <= min(||f||_X, x ||f||_Y), valid for both variants since K2 <= K.
    return std::pow(1.0 / (p * s * (1.0 - s)), 1.0 / p);
}

InterpolationInequalityReport check_interpolation_inequality(const HilbertCouple& couple, const Eigen::VectorXd& f,
                                                             double s, double p, KVariant variant) {
    require_s(s);
    require_p(p);
    require_dim(couple, f);
    InterpolationInequalityReport r{};
    r.norm_x = couple.norm_x(f);
    r.norm_y = couple.norm_y(f);
    if (r.norm_x == 0.0) throw Error(ErrorKind::UndefinedRatio, "interpolation ratio undefined for f = 0");
    r.norm = interpolation_norm(couple, f, s, p, variant);
    r.ratio = r.norm / (std::pow(r.norm_x, 1.0 - s) * std::pow(r.norm_y, s));
    r.bound = interpolation_constant(s, p, variant);
    r.holds = r.ratio <= r.bound * (1.0 + 1e-9);
    return r;
}

InclusionReport check_inclusion_monotonicity(const HilbertCouple& couple, const Eigen::VectorXd& f, double s1,
                                             double s2, double p) {
    require_s(s1);
    require_s(s2);
    require_p(p);
    require_dim(couple, f);
    if (!(s1 < s2)) throw Error(ErrorKind::Ordering, "inclusion check needs s1 < s2");
    const double mu_min = couple.mu().minCoeff();
    if (mu_min < 1.0 - 1e-12) {
        std::ostringstream msg;
        msg << "couple is not normalized for Y in X (min mu = " << mu_min << " < 1); rescale G_Y by at least "
            << 1.0 / mu_min;
        throw Error(ErrorKind::Normalization, msg.str());
    }
    const ModeProfile prof(couple, f);
    InclusionReport r{};
    r.norm_s1 = interpolation_norm(couple, f, s1, p, KVariant::K2);
    r.norm_s2 = interpolation_norm(couple, f, s2, p, KVariant::K2);
    r.weight_s1 = prof.spectral_weight(s1);
    r.weight_s2 = prof.spectral_weight(s2);
    r.constant = std::sqrt(std::sin(std::numbers::pi * s2) / std::sin(std::numbers::pi * s1));
    const double closed_s1 = spectral_s_norm(couple, f, s1);
    const double closed_s2 = spectral_s_norm(couple, f, s2);
    r.holds = r.weight_s1 <= r.weight_s2 * (1.0 + 1e-12) && closed_s1 <= r.constant * closed_s2 * (1.0 + 1e-12);
    return r;
}

} // namespace mixlab
