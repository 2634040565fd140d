#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>

#include "json.hpp"

#include "mixlab/fem_core.hpp"
#include "mixlab/spectral_solver.hpp"

namespace mixlab::cli {

struct VerifyOptions {
    std::uint64_t seed = 0;
    /// Matrix file checked against a fresh assembly on `check_domain`.
    std::optional<std::filesystem::path> check_matrix;
    double check_a = 0.0;
    double check_b = 1.0;
};

/// Runs every suite; the summary carries one entry per suite and "holds".
nlohmann::ordered_json run_verify_suites(const VerifyOptions& options);

/// Uniform check record {op, inputs, lhs, rhs, ratio, holds, tolerance}.
nlohmann::ordered_json check_record(const std::string& op, nlohmann::ordered_json inputs, double lhs, double rhs,
                                    double tolerance, bool holds);

/// Spectrum contract checks: ordering, lower bound, orthogonality, residuals,
/// variational characterization and (n <= 32) resolvent consistency.
/// Clears `holds` on any failure.
nlohmann::ordered_json spectrum_checks(const MixedPencil& pencil, const SpectrumResult& r, std::uint64_t seed,
                                       bool& holds);

} // namespace mixlab::cli
