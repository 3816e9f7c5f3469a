#include "support.hpp"

#include "folpsi/error.hpp"
#include "folpsi/quantize.hpp"

#include <doctest.h>

#include <random>

using namespace folpsi;
using namespace folpsi::testing;

namespace {
GridFunction random_function(const PeriodicGrid& g, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    GridFunction f(g);
    for (Eigen::Index i = 0; i < f.values.size(); ++i) f.values[i] = cplx(U(rng), U(rng));
    return f;
}
}  // namespace

TEST_SUITE("quantize") {

TEST_CASE("transforms invert each other, with and without an origin shift") {
    std::mt19937_64 rng(1);
    for (auto g : {PeriodicGrid(1, 16), PeriodicGrid(2, 8, {-kPi, 0.5})}) {
        GridFunction f = random_function(g, rng);
        CHECK(max_norm(inverse_dft(g, forward_dft(g, f.values)) - f.values) < 1e-13);
    }
}

TEST_CASE("grids reject odd or tiny sizes") {
    CHECK_THROWS_AS(PeriodicGrid(1, 15), InputError);
    CHECK_THROWS_AS(PeriodicGrid(1, 2), InputError);
    CHECK_THROWS_AS(PeriodicGrid(2, 8, {0.0}), InputError);
    PeriodicGrid g(1, 16);
    std::vector<int> k{8};
    CHECK_THROWS_AS(plane_wave(g, k), AliasingError);
}

TEST_CASE("unit symbol is the identity") {
    PeriodicGrid g(1, 16);
    PolyhomSymbol one = PolyhomSymbol::constant(1, GaussRational(1));
    std::mt19937_64 rng(2);
    GridFunction f = random_function(g, rng);
    CHECK(max_norm(apply_symbol(one, f).values - f.values) < 1e-14);
    CHECK((quantize_dense(one, g).matrix - CMatrix::Identity(16, 16)).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("i xi differentiates") {
    PeriodicGrid g(1, 16);
    PolyhomSymbol d = sym(1, {{"I", "xi1"}});
    std::vector<int> k{3};
    GridFunction e = plane_wave(g, k);
    CHECK(max_norm(apply_symbol(d, e).values - cplx(0, 3) * e.values) < 1e-13);

    GridFunction s = GridFunction::sample(g, [](const std::vector<double>& x) { return cplx(std::sin(x[0])); });
    GridFunction c = GridFunction::sample(g, [](const std::vector<double>& x) { return cplx(std::cos(x[0])); });
    CHECK(max_norm(apply_symbol(d, s).values - c.values) < 1e-12);

    GridOperator D = quantize_dense(sym(1, {{"I", "xi1"}}, CutoffKind::None), g);
    CHECK((D.matrix - spectral_derivative_matrix(g, 0)).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("fast and dense quantizations agree") {
    std::mt19937_64 rng(3);
    std::vector<PolyhomSymbol> suite{
        sym(1, {{"2 + sin(x1)", "xi1^2"}, {"I*cos(x1)", "xi1"}}),
        sym(1, {{"1", "|xi|^-1"}}),
        sym(2, {{"1 + cos(x1 - x2)", "xi1*xi2"}, {"1", "1"}}),
        sym(2, {{"sin(x2)", "|xi|^-2"}}, CutoffKind::None),
    };
    for (const auto& a : suite) {
        PeriodicGrid g(a.x_dim(), a.x_dim() == 1 ? 16 : 8);
        GridOperator A = quantize_dense(a, g);
        for (int trial = 0; trial < 20; ++trial) {
            GridFunction f = random_function(g, rng);
            CHECK(max_norm(A(f).values - apply_symbol(a, f).values) < 1e-10);
        }
    }
}

TEST_CASE("dense cap") {
    QuantizeOptions opts;
    opts.dense_cap = 100;
    CHECK_THROWS_AS(quantize_dense(sym(2, {{"1", "1"}}), PeriodicGrid(2, 16), opts), CapExceededError);
}

TEST_CASE("plane waves are eigenvectors of Fourier multipliers") {
    PeriodicGrid g(1, 32);
    PolyhomSymbol a = sym(1, {{"1", "xi1^2"}, {"3", "|xi|^1"}});
    for (int k : {1, 2, 5, 11}) {
        std::vector<int> xi{k};
        std::vector<double> x{0.0}, xd{double(k)};
        GridFunction e = plane_wave(g, xi);
        CHECK(max_norm(apply_symbol(a, e).values - a.eval(x, xd) * e.values) < 1e-11);
    }
}

TEST_CASE("symbol recovery") {
    PeriodicGrid g(1, 256);
    std::vector<double> x{kPi / 2};
    std::vector<int> dir{1}, taus{8, 16, 32, 64};
    CHECK(std::abs(recover_principal_symbol(quantize_dense(sym(1, {{"I", "xi1"}}), g), 1, x, dir, taus).value -
                   cplx(0, 1)) < 0.1);
    CHECK(std::abs(recover_principal_symbol(GridOperator::identity(g), 0, x, dir, taus).value - cplx(1)) < 1e-10);

    GridOperator P = quantize_dense(sym(1, {{"I*(2 + sin(x1))", "xi1"}, {"1", "1"}}, CutoffKind::None), g);
    RecoveryResult r = recover_principal_symbol(P, 1, x, dir, taus);
    REQUIRE(r.sequence.size() == 4);
    for (std::size_t i = 1; i < r.sequence.size(); ++i)
        CHECK(std::abs(r.sequence[i] - cplx(0, 3)) < std::abs(r.sequence[i - 1] - cplx(0, 3)));
    CHECK(std::abs(r.value - cplx(0, 3)) < 0.3);

    std::vector<double> off{0.1};
    CHECK_THROWS_AS(recover_principal_symbol(P, 1, off, dir, taus), InputError);
}

TEST_CASE("order estimates") {
    PeriodicGrid g(1, 128);
    auto band = axis_frequencies(1, {4, 8, 16, 32});
    CHECK(std::abs(estimate_order(quantize_dense(sym(1, {{"1", "xi1^2"}}), g), band) - 2.0) < 0.1);
    CHECK(std::abs(estimate_order(GridOperator::identity(g), band)) < 1e-12);
    GridOperator inv = quantize_dense(Multiplier::bracket(coeff("1"), {0}, -2), g);
    CHECK(std::abs(estimate_order(inv, band) + 2.0) < 0.1);
    GridOperator zero(g, CMatrix::Zero(128, 128));
    CHECK(estimate_order(zero, band) == kOrderMinusInfinity);
}

TEST_CASE("x-independent symbols have the declared order on the mid band") {
    PeriodicGrid g(1, 128);
    std::vector<int> ks;
    for (int k = 4; k <= 32; ++k) ks.push_back(k);
    auto band = axis_frequencies(1, ks);
    for (const auto& a : {sym(1, {{"1", "xi1^2"}}), sym(1, {{"1", "|xi|^-1"}}), sym(1, {{"1", "|xi|^3"}})})
        CHECK(std::abs(estimate_order(quantize_dense(a, g), band) - a.order()) < 0.15);
}

TEST_CASE("adjoint") {
    PeriodicGrid g(1, 16);
    GridOperator I = GridOperator::identity(g);
    CHECK((adjoint(I).matrix - I.matrix).cwiseAbs().maxCoeff() == 0.0);

    QuantizeOptions zero;
    zero.nyquist = NyquistPolicy::Zero;
    GridOperator D = quantize_dense(sym(1, {{"I", "xi1"}}, CutoffKind::None), g, zero);
    GridOperator iD = cplx(0, 1) * D;
    CHECK((adjoint(iD).matrix - iD.matrix).cwiseAbs().maxCoeff() < 1e-12);

    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    CMatrix m(16, 16);
    for (Eigen::Index i = 0; i < 16; ++i)
        for (Eigen::Index j = 0; j < 16; ++j) m(i, j) = cplx(U(rng), U(rng));
    GridOperator A(g, m);
    GridFunction f = random_function(g, rng), h = random_function(g, rng);
    CHECK(std::abs(inner(A(f), h) - inner(f, adjoint(A)(h))) < 1e-12);
}

TEST_CASE("general multipliers") {
    PeriodicGrid g(1, 32);
    Multiplier m = Multiplier::radial(1, -2, "(1+|xi|^2)^-1", [](double n2) { return cplx(1.0 / (1.0 + n2)); });
    std::vector<int> k{5};
    GridFunction e = plane_wave(g, k);
    CHECK(max_norm(apply_multiplier(m, e).values - e.values / 26.0) < 1e-14);
    Multiplier b = Multiplier::bracket(coeff("2 + cos(x1)"), {1}, -1);
    CHECK(b.order == 0);
    std::mt19937_64 rng(5);
    GridFunction f = random_function(g, rng);
    CHECK(max_norm(quantize_dense(b, g)(f).values - apply_multiplier(b, f).values) < 1e-12);
}

}  // TEST_SUITE
