#include "mixlab/cli.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <ostream>
#include <random>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "mixlab/fem_core.hpp"
#include "mixlab/interp_engine.hpp"
#include "mixlab/matrix_io.hpp"
#include "mixlab/spectral_solver.hpp"
#include "verify_suites.hpp"

namespace mixlab::cli {

namespace {

using Json = nlohmann::ordered_json;
namespace fs = std::filesystem;

struct RunConfig {
    std::vector<double> domain{0.0, 1.0};
    std::size_t n = 31;
    std::vector<double> s{0.5};
    double alpha = 0.0;
    std::vector<double> alpha_range;
    std::size_t k = 3;
    std::vector<std::string> p{"2"};
    std::uint64_t seed = 0;
    std::string out = ".";
    std::string format = "csv";

    bool vectors = false;
    std::string couple = "l2-h1";
    std::string f = "random";
    std::vector<double> xs;
    std::string check_matrix;
};

double parse_p(const std::string& token) {
    if (token == "inf" || token == "infinity" || token == "Inf") return kInfinity;
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(token, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used != token.size() || used == 0) throw Error(ErrorKind::ParameterDomain, "p must be a number or 'inf', got '" + token + "'");
    if (!(v >= 1.0)) throw Error(ErrorKind::ParameterDomain, "p must lie in [1, inf], got " + token);
    return v;
}

Json p_json(double p) { return std::isinf(p) ? Json("inf") : Json(p); }

void require_single_s(const RunConfig& cfg) {
    if (cfg.s.size() != 1) throw Error(ErrorKind::Request, "this command takes exactly one --s value");
}

void validate_s(const RunConfig& cfg) {
    for (double s : cfg.s) {
        if (!(s > 0.0 && s < 1.0)) {
            throw Error(ErrorKind::ParameterDomain, "s must lie strictly inside (0, 1), got " + io::format_real(s));
        }
    }
}

Mesh1D make_mesh(const RunConfig& cfg) { return Mesh1D(cfg.domain.at(0), cfg.domain.at(1), cfg.n); }

void validate_k(const RunConfig& cfg) {
    if (cfg.k == 0 || cfg.k > cfg.n) {
        throw Error(ErrorKind::Request, "k must satisfy 1 <= k <= n, got k = " + std::to_string(cfg.k) +
                                            ", n = " + std::to_string(cfg.n));
    }
}

std::vector<double> alpha_grid(const RunConfig& cfg) {
    if (cfg.alpha_range.empty()) {
        if (!std::isfinite(cfg.alpha)) throw Error(ErrorKind::ParameterDomain, "alpha must be finite");
        return {cfg.alpha};
    }
    const double lo = cfg.alpha_range[0];
    const double hi = cfg.alpha_range[1];
    const double count = cfg.alpha_range[2];
    if (!std::isfinite(lo) || !std::isfinite(hi)) throw Error(ErrorKind::ParameterDomain, "alpha range must be finite");
    if (count < 0.0 || count != std::floor(count)) {
        throw Error(ErrorKind::Request, "alpha range count must be a nonnegative integer");
    }
    if (count == 0.0) throw Error(ErrorKind::Request, "alpha grid is empty");
    const auto m = static_cast<std::size_t>(count);
    std::vector<double> grid(m);
    for (std::size_t i = 0; i < m; ++i) {
        grid[i] = m == 1 ? lo : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(m - 1);
    }
    return grid;
}

Json inputs_json(const RunConfig& cfg) {
    Json j;
    j["domain"] = cfg.domain;
    j["n"] = cfg.n;
    j["s"] = cfg.s.size() == 1 ? Json(cfg.s[0]) : Json(cfg.s);
    j["seed"] = cfg.seed;
    return j;
}

fs::path prepare_out(const RunConfig& cfg) {
    const fs::path dir(cfg.out);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw Error(ErrorKind::Io, "cannot create output directory '" + dir.string() + "': " + ec.message());
    return dir;
}

void emit(std::ostream& out, const fs::path& path, const std::string& contents) {
    io::write_file(path, contents);
    out << "wrote " << path.string() << '\n';
}

// Writes a numeric table as <stem>.csv or <stem>.json depending on --format.
void emit_table(std::ostream& out, const RunConfig& cfg, const fs::path& dir, const std::string& stem,
                const std::vector<std::string>& header, const std::vector<std::vector<double>>& rows,
                const std::vector<bool>& integral = {}) {
    auto is_int = [&](std::size_t c) { return c < integral.size() && integral[c]; };
    if (cfg.format == "json") {
        Json table = Json::array();
        for (const auto& row : rows) {
            Json obj;
            for (std::size_t c = 0; c < header.size(); ++c) {
                if (is_int(c)) obj[header[c]] = static_cast<long long>(row[c]);
                else obj[header[c]] = row[c];
            }
            table.push_back(obj);
        }
        emit(out, dir / (stem + ".json"), table.dump(2) + "\n");
        return;
    }
    std::ostringstream csv;
    for (std::size_t c = 0; c < header.size(); ++c) csv << (c ? "," : "") << header[c];
    csv << '\n';
    for (const auto& row : rows) {
        for (std::size_t c = 0; c < row.size(); ++c) {
            csv << (c ? "," : "");
            if (is_int(c)) csv << static_cast<long long>(row[c]);
            else csv << io::format_real(row[c]);
        }
        csv << '\n';
    }
    emit(out, dir / (stem + ".csv"), csv.str());
}

std::string matrix_text(const OperatorMatrix& op) {
    std::ostringstream ss;
    io::write_matrix(ss, op);
    return ss.str();
}

int cmd_assemble(const RunConfig& cfg, std::ostream& out) {
    require_single_s(cfg);
    validate_s(cfg);
    const Mesh1D mesh = make_mesh(cfg);
    const fs::path dir = prepare_out(cfg);
    const OperatorMatrix mass = assemble_mass(mesh);
    const OperatorMatrix local = assemble_local_stiffness(mesh);
    const OperatorMatrix frac = assemble_fractional_stiffness(mesh, cfg.s[0]);
    emit(out, dir / "mass.txt", matrix_text(mass));
    emit(out, dir / "local_stiffness.txt", matrix_text(local));
    emit(out, dir / "fractional_stiffness.txt", matrix_text(frac));
    return kExitOk;
}

int cmd_spectrum(const RunConfig& cfg, std::ostream& out) {
    require_single_s(cfg);
    validate_s(cfg);
    const Mesh1D mesh = make_mesh(cfg);
    validate_k(cfg);
    if (!cfg.alpha_range.empty()) throw Error(ErrorKind::Request, "spectrum takes --alpha, not --alpha-range");
    if (!std::isfinite(cfg.alpha)) throw Error(ErrorKind::ParameterDomain, "alpha must be finite");
    const fs::path dir = prepare_out(cfg);

    const MixedPencil pencil = assemble_pencil(mesh, cfg.s[0], cfg.alpha);
    const SpectrumResult r = solve_spectrum(pencil, cfg.k);
    bool holds = true;
    Json checks = spectrum_checks(pencil, r, cfg.seed, holds);

    std::vector<std::vector<double>> rows;
    for (Eigen::Index j = 0; j < r.lambdas.size(); ++j) {
        rows.push_back({static_cast<double>(j + 1), r.lambdas[j], r.residuals[j],
                        static_cast<double>(r.clusters[static_cast<std::size_t>(j)])});
    }
    emit_table(out, cfg, dir, "spectrum", {"k", "lambda", "residual", "cluster"}, rows, {true, false, false, true});

    if (cfg.vectors) {
        for (Eigen::Index j = 0; j < r.vectors.cols(); ++j) {
            std::ostringstream ss;
            io::write_vector(ss, DiscreteFunction(mesh, r.vectors.col(j)));
            emit(out, dir / ("eigenvector_" + std::to_string(j + 1) + ".txt"), ss.str());
        }
    }

    Json report;
    report["op"] = "spectrum";
    Json inputs = inputs_json(cfg);
    inputs["alpha"] = cfg.alpha;
    inputs["k"] = cfg.k;
    report["inputs"] = inputs;
    report["gamma"] = r.gamma;
    report["lambdas"] = std::vector<double>(r.lambdas.data(), r.lambdas.data() + r.lambdas.size());
    report["clusters"] = r.clusters;
    report["checks"] = checks;
    report["holds"] = holds;
    emit(out, dir / "spectrum_report.json", report.dump(2) + "\n");
    out << "gamma " << io::format_real(r.gamma) << ", lambda_1 " << io::format_real(r.lambdas[0]) << '\n';
    return holds ? kExitOk : kExitVerificationFailure;
}

int cmd_sweep(const RunConfig& cfg, std::ostream& out) {
    require_single_s(cfg);
    validate_s(cfg);
    const Mesh1D mesh = make_mesh(cfg);
    validate_k(cfg);
    const std::vector<double> alphas = alpha_grid(cfg);
    const fs::path dir = prepare_out(cfg);

    const MixedPencil base = assemble_pencil(mesh, cfg.s[0], 0.0);
    const SweepTable table = sweep_alpha(base, alphas, cfg.k);
    const double c_h = embedding_constant(base);
    const double reference = -1.0 / c_h;

    std::vector<std::string> header{"alpha", "gamma"};
    for (std::size_t j = 1; j <= cfg.k; ++j) header.push_back("lambda_" + std::to_string(j));
    header.push_back("sign_lambda_1");
    std::vector<bool> integral(header.size(), false);
    integral.back() = true;
    std::vector<std::vector<double>> rows;
    for (const auto& row : table.rows) {
        std::vector<double> line{row.alpha, row.gamma};
        for (Eigen::Index j = 0; j < row.lambdas.size(); ++j) line.push_back(row.lambdas[j]);
        line.push_back(row.sign_lambda_1);
        rows.push_back(std::move(line));
    }
    emit_table(out, cfg, dir, "sweep", header, rows, integral);

    bool holds = table.monotone;
    Json report;
    report["op"] = "sweep";
    Json inputs = inputs_json(cfg);
    inputs["alphas"] = alphas;
    inputs["k"] = cfg.k;
    report["inputs"] = inputs;
    report["c_h"] = c_h;
    report["monotone"] = table.monotone;

    // Sign identity: sign(lambda_1) = sign(alpha + 1/C_h) away from the threshold.
    bool sign_ok = true;
    for (const auto& row : table.rows) {
        const double gap = row.alpha - reference;
        if (std::abs(gap) > 1e-7) sign_ok = sign_ok && row.sign_lambda_1 == (gap > 0.0 ? 1 : -1);
    }
    report["sign_identity"] = sign_ok;
    holds = holds && sign_ok;

    std::vector<std::size_t> order(alphas.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return alphas[a] < alphas[b]; });
    std::optional<ThresholdReport> threshold;
    for (std::size_t i = 1; i < order.size() && !threshold; ++i) {
        const auto& lo = table.rows[order[i - 1]];
        const auto& hi = table.rows[order[i]];
        if (lo.sign_lambda_1 < 0 && hi.sign_lambda_1 > 0) threshold = locate_coercivity_threshold(base, lo.alpha, hi.alpha);
    }
    report["reference"] = reference;
    if (threshold) {
        report["alpha_star"] = threshold->alpha_star;
        report["difference"] = threshold->difference;
        report["lhs"] = threshold->difference;
        report["rhs"] = threshold->tolerance;
        report["ratio"] = threshold->difference / threshold->tolerance;
        report["tolerance"] = threshold->tolerance;
        report["bisection_iterations"] = threshold->iterations;
        holds = holds && threshold->holds;
    } else {
        report["alpha_star"] = nullptr;
        report["difference"] = nullptr;
    }
    report["holds"] = holds;
    emit(out, dir / "sweep_report.json", report.dump(2) + "\n");
    if (threshold) out << "alpha* " << io::format_real(threshold->alpha_star) << ", -1/C_h " << io::format_real(reference) << '\n';
    return holds ? kExitOk : kExitVerificationFailure;
}

HilbertCouple load_couple(const RunConfig& cfg) {
    if (cfg.couple == "l2-h1") {
        const Mesh1D mesh = make_mesh(cfg);
        const Eigen::MatrixXd m = assemble_mass(mesh).data;
        return HilbertCouple(m, m + assemble_local_stiffness(mesh).data);
    }
    std::istringstream in(io::read_file(cfg.couple));
    io::GramPair pair = io::read_couple(in);
    return HilbertCouple(std::move(pair.gram_x), std::move(pair.gram_y));
}

Eigen::VectorXd load_f(const RunConfig& cfg, Eigen::Index dim) {
    if (cfg.f == "zeros") return Eigen::VectorXd::Zero(dim);
    if (cfg.f == "random") {
        std::mt19937_64 rng(cfg.seed);
        std::normal_distribution<double> normal;
        Eigen::VectorXd f(dim);
        for (Eigen::Index i = 0; i < dim; ++i) f[i] = normal(rng);
        return f;
    }
    std::istringstream in(io::read_file(cfg.f));
    const DiscreteFunction fn = io::read_vector(in);
    if (fn.coeffs.size() != dim) {
        throw Error(ErrorKind::Dimension, "f has " + std::to_string(fn.coeffs.size()) + " entries, couple dimension is " +
                                              std::to_string(dim));
    }
    return fn.coeffs;
}

int cmd_kfunc(const RunConfig& cfg, std::ostream& out) {
    validate_s(cfg);
    std::vector<double> ps;
    for (const auto& token : cfg.p) ps.push_back(parse_p(token));
    std::vector<double> xs = cfg.xs.empty() ? geometric_grid(1e-3, 1e3, 61) : cfg.xs;
    for (double x : xs) {
        if (!(x > 0.0) || !std::isfinite(x)) throw Error(ErrorKind::ParameterDomain, "x values must be positive and finite");
    }
    if (cfg.couple == "l2-h1") make_mesh(cfg);
    const HilbertCouple couple = load_couple(cfg);
    const Eigen::VectorXd f = load_f(cfg, couple.dim());
    const fs::path dir = prepare_out(cfg);

    const double nx = couple.norm_x(f);
    const double ny = couple.norm_y(f);
    const double sum = couple.sum_norm(f);
    std::vector<std::vector<double>> rows;
    double bracket_violation = 0.0;
    double bound_violation = 0.0;
    for (double x : xs) {
        const double k = k_functional(couple, f, x);
        const double k2 = k2_functional(couple, f, x);
        const double bound = std::min(nx, x * ny);
        rows.push_back({x, k, k2, bound});
        bracket_violation = std::max({bracket_violation, k2 - k, k - std::sqrt(2.0) * k2});
        bound_violation = std::max(bound_violation, k - bound);
    }
    emit_table(out, cfg, dir, "kcurve", {"x", "K", "K2", "bound"}, rows);

    bool holds = true;
    auto tally = [&](const Json& rec) { holds = holds && rec["holds"].get<bool>(); };
    Json report;
    report["op"] = "kfunc";
    Json inputs = inputs_json(cfg);
    inputs["couple"] = cfg.couple;
    inputs["f"] = cfg.f;
    Json pj = Json::array();
    for (double p : ps) pj.push_back(p_json(p));
    inputs["p"] = pj;
    report["inputs"] = inputs;
    report["norm_x"] = nx;
    report["norm_y"] = ny;
    report["sum_norm"] = sum;

    const double scale = 1.0 + sum;
    Json bracket = check_record("K2 <= K <= sqrt(2) K2", Json::object(), bracket_violation, 0.0, 1e-9 * scale,
                                bracket_violation <= 1e-9 * scale);
    Json upper = check_record("K <= min(||f||_X, x ||f||_Y)", Json::object(), bound_violation, 0.0, 1e-10 * scale,
                              bound_violation <= 1e-10 * scale);
    tally(bracket);
    tally(upper);
    report["bracketing"] = bracket;
    report["upper_bound"] = upper;

    Json symmetry = Json::array();
    for (double x : xs) {
        const SymmetryReport sr = symmetry_check(couple, f, x);
        Json rec = check_record("K(x,f,Y,X) = x K(1/x,f,X,Y)", Json{{"x", x}}, sr.lhs, sr.rhs, sr.tolerance, sr.holds);
        rec["discrepancy"] = sr.discrepancy;
        tally(rec);
        symmetry.push_back(std::move(rec));
    }
    report["symmetry"] = symmetry;

    Json norms = Json::array();
    for (double s : cfg.s) {
        for (double p : ps) {
            Json entry;
            entry["s"] = s;
            entry["p"] = p_json(p);
            const double k2 = interpolation_norm(couple, f, s, p, KVariant::K2);
            entry["K2"] = k2;
            entry["K"] = interpolation_norm(couple, f, s, p, KVariant::K);
            if (p == 2.0) {
                const double ref = spectral_s_norm(couple, f, s);
                const double rel = ref > 0.0 ? std::abs(k2 - ref) / ref : std::abs(k2);
                Json rec = check_record("K2 (s,2)-norm = spectral_s_norm", Json{{"s", s}}, k2, ref, 1e-5, rel <= 1e-5);
                tally(rec);
                entry["closed_form"] = rec;
            }
            if (nx > 0.0) {
                Json ineq = Json::array();
                for (KVariant v : {KVariant::K, KVariant::K2}) {
                    const InterpolationInequalityReport ir = check_interpolation_inequality(couple, f, s, p, v);
                    Json rec = check_record("||f||_{s,p} <= c ||f||_X^{1-s} ||f||_Y^s",
                                            Json{{"variant", to_string(v)}}, ir.ratio, ir.bound, 1e-9, ir.holds);
                    tally(rec);
                    ineq.push_back(std::move(rec));
                }
                entry["inequality"] = ineq;
            }
            norms.push_back(std::move(entry));
        }
    }
    report["norms"] = norms;
    report["holds"] = holds;
    emit(out, dir / "kfunc_report.json", report.dump(2) + "\n");
    return holds ? kExitOk : kExitVerificationFailure;
}

int cmd_verify(const RunConfig& cfg, std::ostream& out) {
    VerifyOptions opts;
    opts.seed = cfg.seed;
    if (!cfg.check_matrix.empty()) {
        opts.check_matrix = cfg.check_matrix;
        opts.check_a = cfg.domain.at(0);
        opts.check_b = cfg.domain.at(1);
        if (!(opts.check_a < opts.check_b)) throw Error(ErrorKind::InvalidDomain, "domain needs a < b");
    }
    const fs::path dir = prepare_out(cfg);
    const Json summary = run_verify_suites(opts);
    for (const auto& suite : summary["suites"]) {
        out << (suite["holds"].get<bool>() ? "PASS " : "FAIL ") << suite["name"].get<std::string>() << '\n';
    }
    emit(out, dir / "verify_report.json", summary.dump(2) + "\n");
    return summary["holds"].get<bool>() ? kExitOk : kExitVerificationFailure;
}

void add_shared_options(CLI::App& app, RunConfig& cfg) {
    app.add_option("--domain", cfg.domain, "Interval endpoints A B")->expected(2);
    app.add_option("--n", cfg.n, "Number of interior nodes");
    app.add_option("--s", cfg.s, "Fractional order(s) in (0,1)")->expected(1, -1);
    auto* alpha = app.add_option("--alpha", cfg.alpha, "Coupling alpha");
    app.add_option("--alpha-range", cfg.alpha_range, "Linear alpha grid LO HI COUNT")->expected(3)->excludes(alpha);
    app.add_option("--k", cfg.k, "Number of eigenpairs");
    app.add_option("--p", cfg.p, "Lebesgue exponent(s) in [1, inf]")->expected(1, -1);
    app.add_option("--seed", cfg.seed, "Seed for randomized checks");
    app.add_option("--out", cfg.out, "Output directory");
    app.add_option("--format", cfg.format, "Table format")->check(CLI::IsMember({"csv", "json"}));
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    RunConfig cfg;
    CLI::App app{"Mixed local-nonlocal operator lab", "mixlab"};
    app.set_config("--config", "", "Flat key = value file; flags override it");
    app.allow_config_extras(CLI::config_extras_mode::error);
    add_shared_options(app, cfg);
    app.require_subcommand(1);

    auto* assemble = app.add_subcommand("assemble", "Write mass, local and fractional stiffness matrices");
    auto* spectrum = app.add_subcommand("spectrum", "Eigenpairs of the mixed pencil with contract checks");
    spectrum->add_flag("--vectors", cfg.vectors, "Also write eigenvectors, one file per k");
    auto* sweep = app.add_subcommand("sweep", "Spectrum over an alpha grid and the coercivity threshold");
    auto* kfunc = app.add_subcommand("kfunc", "K-functional curve and interpolation norms");
    kfunc->add_option("--couple", cfg.couple, "'l2-h1' or a couple file");
    kfunc->add_option("--f", cfg.f, "'random', 'zeros' or a vector file");
    kfunc->add_option("--x", cfg.xs, "Evaluation points for the K-curve")->expected(1, -1);
    auto* verify = app.add_subcommand("verify", "Run every invariant suite");
    verify->add_option("--check-matrix", cfg.check_matrix, "Matrix file compared against a fresh assembly on --domain");
    for (auto* sub : {assemble, spectrum, sweep, kfunc, verify}) sub->fallthrough();

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::FileError& e) {
        err << "error (io): " << e.what() << '\n';
        return kExitParameterError;
    } catch (const CLI::ParseError& e) {
        err << "usage error: " << e.what() << '\n' << app.help();
        return kExitUsageError;
    }

    try {
        if (assemble->parsed()) return cmd_assemble(cfg, out);
        if (spectrum->parsed()) return cmd_spectrum(cfg, out);
        if (sweep->parsed()) return cmd_sweep(cfg, out);
        if (kfunc->parsed()) return cmd_kfunc(cfg, out);
        return cmd_verify(cfg, out);
    } catch (const Error& e) {
        err << "error (" << to_string(e.kind()) << "): " << e.what();
        if (e.achieved()) err << " [achieved " << io::format_real(*e.achieved()) << "]";
        err << '\n';
        return kExitParameterError;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitParameterError;
    }
}

} // namespace mixlab::cli
