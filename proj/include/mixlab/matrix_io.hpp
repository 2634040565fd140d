#pragma once

// Text exchange formats.
//
// Matrix block:
//   # <rows> <cols> <kind> <s-or-NA>
//   <row 0 values, whitespace separated, 17 significant digits>
//   ...
// Function vector:
//   # <n> <a> <b>
//   <one value per line>
// Couple: "# GRAM X" followed by a matrix block, then "# GRAM Y" and a block.

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>

#include <Eigen/Dense>

#include "mixlab/fem_core.hpp"

namespace mixlab::io {

/// Shortest-stable decimal form with 17 significant digits.
std::string format_real(double value);

struct MatrixBlock {
    Eigen::MatrixXd data;
    std::string kind;
    std::optional<double> s;
};

void write_matrix(std::ostream& out, const Eigen::MatrixXd& data, const std::string& kind, std::optional<double> s);
void write_matrix(std::ostream& out, const OperatorMatrix& op);
MatrixBlock read_matrix(std::istream& in);

void write_vector(std::ostream& out, const DiscreteFunction& f);
DiscreteFunction read_vector(std::istream& in);

struct GramPair {
    Eigen::MatrixXd gram_x;
    Eigen::MatrixXd gram_y;
};

void write_couple(std::ostream& out, const Eigen::MatrixXd& gram_x, const Eigen::MatrixXd& gram_y);
GramPair read_couple(std::istream& in);

/// Writes `contents` to `path` through a sibling temporary and a rename, so
/// readers never observe a partial file. Errors carry the path.
void write_file(const std::filesystem::path& path, const std::string& contents);
std::string read_file(const std::filesystem::path& path);

} // namespace mixlab::io
