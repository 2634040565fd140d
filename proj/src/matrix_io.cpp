#include "mixlab/matrix_io.hpp"

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <vector>

namespace mixlab::io {

std::string format_real(double value) {
    char buffer[64];
    std::snprintf(buffer, sizeof buffer, "%.17g", value);
    return buffer;
}

namespace {

[[noreturn]] void format_error(const std::string& what) { throw Error(ErrorKind::Format, what); }

double parse_real(const std::string& token) {
    if (token == "inf" || token == "+inf") return kInfinity;
    char* end = nullptr;
    errno = 0;
    const double v = std::strtod(token.c_str(), &end);
    if (end == token.c_str() || *end != '\0' || errno == ERANGE) format_error("not a number: '" + token + "'");
    return v;
}

std::size_t parse_count(const std::string& token) {
    char* end = nullptr;
    const long long v = std::strtoll(token.c_str(), &end, 10);
    if (end == token.c_str() || *end != '\0' || v < 0) format_error("not a count: '" + token + "'");
    return static_cast<std::size_t>(v);
}

// Next non-empty line; false on end of stream.
bool next_line(std::istream& in, std::string& line) {
    while (std::getline(in, line)) {
        if (line.find_first_not_of(" \t\r") != std::string::npos) return true;
    }
    return false;
}

std::vector<std::string> split(const std::string& line) {
    std::istringstream ss(line);
    std::vector<std::string> tokens;
    std::string tok;
    while (ss >> tok) tokens.push_back(tok);
    return tokens;
}

} // namespace

void write_matrix(std::ostream& out, const Eigen::MatrixXd& data, const std::string& kind, std::optional<double> s) {
    out << "# " << data.rows() << ' ' << data.cols() << ' ' << kind << ' ' << (s ? format_real(*s) : "NA") << '\n';
    for (Eigen::Index i = 0; i < data.rows(); ++i) {
        for (Eigen::Index j = 0; j < data.cols(); ++j) {
            if (j > 0) out << ' ';
            out << format_real(data(i, j));
        }
        out << '\n';
    }
}

void write_matrix(std::ostream& out, const OperatorMatrix& op) { write_matrix(out, op.data, to_string(op.kind), op.s); }

MatrixBlock read_matrix(std::istream& in) {
    std::string line;
    if (!next_line(in, line)) format_error("missing matrix header");
    const auto header = split(line);
    if (header.size() != 5 || header[0] != "#") format_error("malformed matrix header: '" + line + "'");
    MatrixBlock block;
    const std::size_t rows = parse_count(header[1]);
    const std::size_t cols = parse_count(header[2]);
    block.kind = header[3];
    if (header[4] != "NA") block.s = parse_real(header[4]);
    block.data.resize(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    for (std::size_t i = 0; i < rows; ++i) {
        if (!next_line(in, line)) format_error("matrix truncated at row " + std::to_string(i));
        const auto values = split(line);
        if (values.size() != cols) {
            format_error("row " + std::to_string(i) + " has " + std::to_string(values.size()) + " values, expected " +
                         std::to_string(cols));
        }
        for (std::size_t j = 0; j < cols; ++j) {
            block.data(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = parse_real(values[j]);
        }
    }
    return block;
}

void write_vector(std::ostream& out, const DiscreteFunction& f) {
    out << "# " << f.mesh.n() << ' ' << format_real(f.mesh.a()) << ' ' << format_real(f.mesh.b()) << '\n';
    for (Eigen::Index i = 0; i < f.coeffs.size(); ++i) out << format_real(f.coeffs[i]) << '\n';
}

DiscreteFunction read_vector(std::istream& in) {
    std::string line;
    if (!next_line(in, line)) format_error("missing vector header");
    const auto header = split(line);
    if (header.size() != 4 || header[0] != "#") format_error("malformed vector header: '" + line + "'");
    const std::size_t n = parse_count(header[1]);
    const Mesh1D mesh(parse_real(header[2]), parse_real(header[3]), n);
    Eigen::VectorXd coeffs(static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i) {
        if (!next_line(in, line)) format_error("vector truncated at entry " + std::to_string(i));
        const auto values = split(line);
        if (values.size() != 1) format_error("expected one value per line");
        coeffs[static_cast<Eigen::Index>(i)] = parse_real(values[0]);
    }
    return DiscreteFunction(mesh, std::move(coeffs));
}

void write_couple(std::ostream& out, const Eigen::MatrixXd& gram_x, const Eigen::MatrixXd& gram_y) {
    out << "# GRAM X\n";
    write_matrix(out, gram_x, "Gram", std::nullopt);
    out << "# GRAM Y\n";
    write_matrix(out, gram_y, "Gram", std::nullopt);
}

GramPair read_couple(std::istream& in) {
    auto expect_tag = [&](const char* tag) {
        std::string line;
        if (!next_line(in, line)) format_error(std::string("missing couple tag '") + tag + "'");
        const auto tokens = split(line);
        std::ostringstream joined;
        for (std::size_t i = 0; i < tokens.size(); ++i) joined << (i ? " " : "") << tokens[i];
        if (joined.str() != tag) format_error("expected '" + std::string(tag) + "', got '" + line + "'");
    };
    GramPair pair;
    expect_tag("# GRAM X");
    pair.gram_x = read_matrix(in).data;
    expect_tag("# GRAM Y");
    pair.gram_y = read_matrix(in).data;
    return pair;
}

void write_file(const std::filesystem::path& path, const std::string& contents) {
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error(ErrorKind::Io, "cannot open '" + tmp.string() + "' for writing: " + std::strerror(errno));
        out << contents;
        out.flush();
        if (!out) throw Error(ErrorKind::Io, "write failed for '" + tmp.string() + "'");
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) throw Error(ErrorKind::Io, "cannot move output into '" + path.string() + "': " + ec.message());
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::Io, "cannot open '" + path.string() + "' for reading");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace mixlab::io
