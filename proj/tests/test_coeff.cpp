#include "support.hpp"

#include "folpsi/error.hpp"
#include "folpsi/linalg.hpp"

#include <doctest.h>

using namespace folpsi;
using namespace folpsi::testing;

TEST_SUITE("coeff") {

TEST_CASE("parsed trig polynomials evaluate like their closed forms") {
    Coeff c = coeff("2 + sin(x1)*cos(2*x1) - 3/4*x1^2");
    for (double x : {-1.3, 0.0, 0.7, 2.9}) {
        std::vector<double> p{x};
        double expect = 2 + std::sin(x) * std::cos(2 * x) - 0.75 * x * x;
        CHECK(std::abs(c.eval(p) - cplx(expect)) < 1e-13);
    }
}

TEST_CASE("decimals are read exactly") {
    Coeff a = coeff("0.25*x1");
    Coeff b = coeff("x1/4");
    CHECK(a == b);
}

TEST_CASE("imaginary unit and conjugation") {
    Coeff c = coeff("I*sin(x1)");
    CHECK_FALSE(c.is_real());
    CHECK(c.conj() == coeff("-I*sin(x1)"));
    CHECK(coeff("cos(x1)^2 + sin(x1)^2") == coeff("1"));
}

TEST_CASE("derivatives are exact") {
    CHECK(coeff("sin(x1)").derivative(0) == coeff("cos(x1)"));
    CHECK(coeff("x1^3").derivative(0) == coeff("3*x1^2"));
    Coeff two = coeff("x1*cos(x2)", 2);
    CHECK(two.derivative(1) == coeff("-x1*sin(x2)", 2));
}

TEST_CASE("printing pairs exponentials into sin and cos") {
    CHECK(coeff("2 + cos(x1)").str({"x"}) == "2 + cos(x)");
    CHECK(coeff("0").str() == "0");
    CHECK(coeff("-sin(x1)").str({"x"}) == "-sin(x)");
}

TEST_CASE("parse errors carry field and column") {
    try {
        parse_coeff("1 + * x", {"x"}, "gen[0]");
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.field() == "gen[0]");
        CHECK(e.column() == 5);
    }
    CHECK_THROWS_AS(parse_coeff("sin(x*x)", {"x"}), ParseError);
    CHECK_THROWS_AS(parse_coeff("x^-1", {"x"}), ParseError);
    CHECK_THROWS_AS(parse_coeff("w + 1", {"x"}), ParseError);
    CHECK_THROWS_AS(parse_coeff("x/(1+x)", {"x"}), ParseError);
}

TEST_CASE("dimension mismatch is an input error") {
    CHECK_THROWS_AS(coeff("x1") + coeff("x1", 2), InputError);
    std::vector<double> p{0.0, 1.0};
    CHECK_THROWS_AS(coeff("x1").eval(p), InputError);
}

TEST_CASE("exact rank over the Gaussian rationals") {
    linalg::Matrix<GaussRational> m{{1, 2, 3}, {2, 4, 6}, {0, GaussRational::I(), 1}};
    CHECK(linalg::rank(m, 3) == 2);
}

}  // TEST_SUITE
