#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <filesystem>
#include <random>
#include <sstream>

#include "mixlab/matrix_io.hpp"

using namespace mixlab;

namespace {

ErrorKind kind_of(auto&& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.kind();
    }
    FAIL("expected mixlab::Error");
    return ErrorKind::Request;
}

io::MatrixBlock parse(const std::string& text) {
    std::istringstream in(text);
    return io::read_matrix(in);
}

} // namespace

TEST_CASE("format_real round trips every double") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(-1e3, 1e3);
    for (int i = 0; i < 1000; ++i) {
        const double v = u(rng) * std::pow(10.0, static_cast<int>(rng() % 40) - 20);
        CHECK(std::stod(io::format_real(v)) == v);
    }
    CHECK(io::format_real(0.1) == "0.10000000000000001");
    CHECK(io::format_real(1.0) == "1");
}

TEST_CASE("matrix round trip is bit exact") {
    const OperatorMatrix op = assemble_fractional_stiffness(Mesh1D(0.0, 1.0, 5), 0.3);
    std::ostringstream out;
    io::write_matrix(out, op);
    const std::string text = out.str();
    CHECK(text.rfind("# 5 5 FractionalStiffness 0.29999999999999999\n", 0) == 0);
    const io::MatrixBlock back = parse(text);
    CHECK(back.kind == "FractionalStiffness");
    REQUIRE(back.s.has_value());
    CHECK(*back.s == 0.3);
    CHECK(back.data == op.data);

    std::ostringstream again;
    io::write_matrix(again, back.data, back.kind, back.s);
    CHECK(again.str() == text);
}

TEST_CASE("matrix without s writes NA") {
    const OperatorMatrix op = assemble_mass(Mesh1D(0.0, 1.0, 2));
    std::ostringstream out;
    io::write_matrix(out, op);
    CHECK(out.str().rfind("# 2 2 Mass NA\n", 0) == 0);
    CHECK_FALSE(parse(out.str()).s.has_value());
}

TEST_CASE("malformed matrices are format errors") {
    CHECK(kind_of([] { parse(""); }) == ErrorKind::Format);
    CHECK(kind_of([] { parse("2 2 Mass NA\n1 0\n0 1\n"); }) == ErrorKind::Format);
    CHECK(kind_of([] { parse("# 2 2 Mass\n1 0\n0 1\n"); }) == ErrorKind::Format);
    CHECK(kind_of([] { parse("# 2 two Mass NA\n1 0\n0 1\n"); }) == ErrorKind::Format);
    CHECK(kind_of([] { parse("# 2 2 Mass NA\n1 0\n"); }) == ErrorKind::Format);
    CHECK(kind_of([] { parse("# 2 2 Mass NA\n1 0 3\n0 1\n"); }) == ErrorKind::Format);
    CHECK(kind_of([] { parse("# 2 2 Mass NA\n1 x\n0 1\n"); }) == ErrorKind::Format);
    CHECK(kind_of([] { parse("# 2 2 Mass NA\n1 1e999\n0 1\n"); }) == ErrorKind::Format);
}

TEST_CASE("blank lines are tolerated") {
    const io::MatrixBlock b = parse("\n# 1 2 Gram NA\n\n  3 4  \n");
    CHECK(b.data(0, 0) == 3.0);
    CHECK(b.data(0, 1) == 4.0);
}

TEST_CASE("vector round trip") {
    const Mesh1D mesh(-0.5, 1.25, 4);
    const DiscreteFunction f(mesh, Eigen::Vector4d(1.0 / 3.0, -2.0, 1e-300, 7.5));
    std::ostringstream out;
    io::write_vector(out, f);
    CHECK(out.str().rfind("# 4 -0.5 1.25\n", 0) == 0);
    std::istringstream in(out.str());
    const DiscreteFunction back = io::read_vector(in);
    CHECK(back.mesh == mesh);
    CHECK(back.coeffs == f.coeffs);

    std::istringstream bad("# 3 0 1\n1\n2\n");
    CHECK(kind_of([&] { io::read_vector(bad); }) == ErrorKind::Format);
    std::istringstream reversed("# 2 1 0\n1\n2\n");
    CHECK(kind_of([&] { io::read_vector(reversed); }) == ErrorKind::InvalidDomain);
}

TEST_CASE("couple round trip") {
    Eigen::MatrixXd gx(2, 2), gy(2, 2);
    gx << 2.0, 0.5, 0.5, 1.0;
    gy << 3.0, -1.0, -1.0, 4.0;
    std::ostringstream out;
    io::write_couple(out, gx, gy);
    std::istringstream in(out.str());
    const io::GramPair pair = io::read_couple(in);
    CHECK(pair.gram_x == gx);
    CHECK(pair.gram_y == gy);

    std::istringstream missing("# 2 2 Gram NA\n1 0\n0 1\n");
    CHECK(kind_of([&] { io::read_couple(missing); }) == ErrorKind::Format);
}

TEST_CASE("file writes are atomic and errors carry the path") {
    const auto dir = std::filesystem::temp_directory_path() / "mixlab_io_test";
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    const auto path = dir / "m.txt";
    io::write_file(path, "hello\n");
    CHECK(io::read_file(path) == "hello\n");
    io::write_file(path, "replaced\n");
    CHECK(io::read_file(path) == "replaced\n");
    CHECK_FALSE(std::filesystem::exists(dir / "m.txt.tmp"));

    const auto bad = dir / "no_such_dir" / "x.txt";
    try {
        io::write_file(bad, "x");
        FAIL("expected an io error");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::Io);
        CHECK(std::string(e.what()).find("no_such_dir") != std::string::npos);
    }
    CHECK(kind_of([&] { io::read_file(dir / "absent.txt"); }) == ErrorKind::Io);
    std::filesystem::remove_all(dir);
}
