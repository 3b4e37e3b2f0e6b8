#include <doctest.h>

#include <random>
#include <sstream>

#include "kreiss/error.hpp"
#include "kreiss/matrix_market.hpp"
#include "oracles.hpp"

using namespace kreiss;

namespace {

CMatrix parse(const std::string& s) {
    std::istringstream in(s);
    return read_matrix_market(in, "t.mtx");
}

std::string parse_error(const std::string& s) {
    try {
        parse(s);
    } catch (const Error& e) {
        return std::string(to_string(e.kind())) + " " + e.what();
    }
    return "";
}

} // namespace

TEST_CASE("array and coordinate formats") {
    const CMatrix a = parse("%%MatrixMarket matrix array real general\n% comment\n2 2\n1\n2\n3\n4\n");
    CHECK(a(1, 0) == Complex(2.0));
    CHECK(a(0, 1) == Complex(3.0));
    const CMatrix c = parse("%%MatrixMarket matrix coordinate complex general\n2 2 2\n1 2 0 1\n2 2 -1.5 0\n");
    CHECK(c(0, 1) == Complex(0.0, 1.0));
    CHECK(c(1, 1) == Complex(-1.5));
    CHECK(c(0, 0) == Complex(0.0));
    const CMatrix z = parse("%%MatrixMarket matrix coordinate integer general\n3 3 0\n");
    CHECK(z.dense().norm() == 0.0);
}

TEST_CASE("symmetry variants") {
    const CMatrix s = parse("%%MatrixMarket matrix coordinate real symmetric\n2 2 2\n1 1 1\n2 1 5\n");
    CHECK(s(0, 1) == Complex(5.0));
    const CMatrix h = parse("%%MatrixMarket matrix array complex hermitian\n2 2\n1 0\n2 3\n4 0\n");
    CHECK(h(1, 0) == Complex(2.0, 3.0));
    CHECK(h(0, 1) == Complex(2.0, -3.0));
    const CMatrix k = parse("%%MatrixMarket matrix coordinate real skew-symmetric\n2 2 1\n2 1 7\n");
    CHECK(k(0, 1) == Complex(-7.0));
}

TEST_CASE("diagnostics name line and column") {
    const std::string e1 = parse_error("%%MatrixMarket matrix array real general\n2 2\n1\nx\n3\n4\n");
    CHECK(e1.find("parse") == 0);
    CHECK(e1.find("t.mtx:4:1") != std::string::npos);
    const std::string e2 = parse_error("%%MatrixMarket matrix coordinate real general\n2 2 1\n1 3 1.0\n");
    CHECK(e2.find("t.mtx:3:3") != std::string::npos);
    CHECK(parse_error("%%MatrixMarket matrix array real general\n2 3\n").find("invalid-matrix") == 0);
    CHECK(parse_error("garbage\n").find("parse") == 0);
    CHECK(parse_error("%%MatrixMarket matrix array pattern general\n1 1\n").find(":1:") != std::string::npos);
    CHECK(parse_error("%%MatrixMarket matrix array real general\n2 2\n1\n2\n3\n").find("end of data") !=
          std::string::npos);
    try {
        read_matrix_market_file("/nonexistent/file.mtx");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::io);
    }
}

TEST_CASE("write then read reproduces entries") {
    std::mt19937_64 rng(12);
    const CMatrix m(oracle::gaussian(rng, 5));
    std::ostringstream os;
    write_matrix_market(os, m);
    const CMatrix back = parse(os.str());
    CHECK(back.dense() == m.dense());
}

TEST_CASE("symbol table") {
    std::istringstream in("% table\n% xi: 0.5 1\n%%MatrixMarket matrix array real general\n1 1\n2\n"
                          "% xi: -1 3\n%%MatrixMarket matrix array real general\n1 1\n4\n");
    const SymbolTable t = read_symbol_table(in, "tab");
    REQUIRE(t.matrices.size() == 2);
    CHECK(t.xi[0] == std::vector<double>{0.5, 1.0});
    CHECK(t.xi[1] == std::vector<double>{-1.0, 3.0});
    CHECK(t.matrices[1](0, 0) == Complex(4.0));
    std::istringstream missing("%%MatrixMarket matrix array real general\n1 1\n2\n");
    CHECK_THROWS_AS(read_symbol_table(missing, "tab"), Error);
}
