#pragma once

#include <optional>
#include <stdexcept>
#include <string>

namespace mixlab {

enum class ErrorKind {
    InvalidDomain,
    InvalidSize,
    ParameterDomain,
    AssemblyAccuracy,
    Dimension,
    InvalidMeasure,
    Ordering,
    InvalidCouple,
    UndefinedRatio,
    Normalization,
    Truncation,
    Request,
    Factorization,
    Io,
    Format,
};

const char* to_string(ErrorKind kind) noexcept;

/// Single exception type for the library. The kind drives CLI exit codes;
/// `achieved()` carries the accuracy actually reached for the
/// accuracy/truncation kinds.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what,
          std::optional<double> achieved = std::nullopt)
        : std::runtime_error(what), kind_(kind), achieved_(achieved) {}

    ErrorKind kind() const noexcept { return kind_; }
    std::optional<double> achieved() const noexcept { return achieved_; }

private:
    ErrorKind kind_;
    std::optional<double> achieved_;
};

inline const char* to_string(ErrorKind kind) noexcept {
    switch (kind) {
    case ErrorKind::InvalidDomain: return "invalid-domain";
    case ErrorKind::InvalidSize: return "invalid-size";
    case ErrorKind::ParameterDomain: return "parameter-domain";
    case ErrorKind::AssemblyAccuracy: return "assembly-accuracy";
    case ErrorKind::Dimension: return "dimension";
    case ErrorKind::InvalidMeasure: return "invalid-measure";
    case ErrorKind::Ordering: return "ordering";
    case ErrorKind::InvalidCouple: return "invalid-couple";
    case ErrorKind::UndefinedRatio: return "undefined-ratio";
    case ErrorKind::Normalization: return "normalization";
    case ErrorKind::Truncation: return "truncation";
    case ErrorKind::Request: return "request";
    case ErrorKind::Factorization: return "factorization";
    case ErrorKind::Io: return "io";
    case ErrorKind::Format: return "format";
    }
    return "unknown";
}

} // namespace mixlab
