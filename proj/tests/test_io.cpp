#include "support.hpp"

#include "folpsi/error.hpp"
#include "folpsi/io.hpp"

#include <doctest.h>

#include <filesystem>
#include <sstream>

using namespace folpsi;
using namespace folpsi::testing;

TEST_SUITE("io") {

TEST_CASE("functions round trip bit-exactly") {
    PeriodicGrid g(2, 4, {-kPi, 0.1});
    GridFunction f = GridFunction::sample(g, [](const std::vector<double>& x) {
        return cplx(std::sin(x[0]) / 3.0, std::exp(x[1]) * 1e-300);
    });
    std::stringstream s;
    write_function(s, f);
    GridFunction back = read_function(s);
    CHECK(back.grid == f.grid);
    CHECK(back.values == f.values);
}

TEST_CASE("operators round trip through files") {
    PeriodicGrid g(1, 8);
    GridOperator op(g, spectral_derivative_matrix(g, 0));
    auto path = std::filesystem::temp_directory_path() / "folpsi_io_test.txt";
    save(path.string(), op);
    GridOperator back = load_operator(path.string());
    std::filesystem::remove(path);
    CHECK(back.matrix == op.matrix);
    CHECK(back.grid == op.grid);
}

TEST_CASE("malformed input reports the line") {
    std::stringstream bad("folpsi-array v1\nkind function\ngrid 1 4 0x0p+0\nshape 4 1\n0x1p+0 0x0p+0\nnope\n");
    try {
        read_function(bad);
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.field() == "array");
        CHECK(e.column() == 6);
    }
    std::stringstream wrong_kind("folpsi-array v1\nkind operator\n");
    CHECK_THROWS_AS(read_function(wrong_kind), ParseError);
    std::stringstream empty("");
    CHECK_THROWS_AS(read_operator(empty), ParseError);
    CHECK_THROWS_AS(load_function("/nonexistent/folpsi.txt"), Error);
}

}  // TEST_SUITE
