#include "support.hpp"

#include "folpsi/calculus.hpp"
#include "folpsi/error.hpp"

#include <doctest.h>

#include <random>

using namespace folpsi;
using namespace folpsi::testing;

namespace {

double max_abs(const CMatrix& m) { return m.cwiseAbs().maxCoeff(); }

CMatrix random_matrix(Eigen::Index n, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    CMatrix m(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) m(i, j) = cplx(U(rng), U(rng));
    return m;
}

PdoElement dense(const PeriodicGrid& g, CMatrix m) {
    return {PolyhomSymbol::constant(g.dim(), GaussRational(1)), GridOperator(g, std::move(m)), 0};
}

PdoElement shifted_divergence(const std::string& a, const PeriodicGrid& g) {
    return add(divergence_form(coeff(a), g), identity_element(g));
}

IterationOptions band(int lo, int hi) {
    IterationOptions o;
    for (int k = lo; k <= hi; ++k) o.band.push_back(k);
    return o;
}

}  // namespace

TEST_SUITE("calculus") {

TEST_CASE("vector field operators") {
    PeriodicGrid g(1, 32);
    GridFunction s = GridFunction::sample(g, [](const std::vector<double>& x) { return cplx(std::sin(x[0])); });
    PdoElement D = vector_field_op(PolyVectorField::coordinate(1, 0), g);
    GridFunction c = GridFunction::sample(g, [](const std::vector<double>& x) { return cplx(std::cos(x[0])); });
    CHECK(max_norm(D.op(s).values - c.values) < 1e-12);

    std::vector<std::string> n{"x1"};
    PdoElement X = vector_field_op(field({"sin(x1)"}, n), g);
    GridFunction sc = GridFunction::sample(g, [](const std::vector<double>& x) {
        return cplx(std::sin(x[0]) * std::cos(x[0]));
    });
    CHECK(max_norm(X.op(s).values - sc.values) < 1e-10);
    std::vector<double> x{kPi / 2}, xi{1.0};
    CHECK(std::abs(X.symbol.eval(x, xi) - cplx(0, 1)) < 1e-14);
}

TEST_CASE("composition") {
    PeriodicGrid g(1, 32);
    PdoElement D = vector_field_op(PolyVectorField::coordinate(1, 0), g);
    PdoElement I = identity_element(g);
    CHECK(max_abs(compose(I, D).op.matrix - D.op.matrix) == 0.0);
    PdoElement DD = compose(D, D);
    CHECK(DD.order == 2);
    CHECK(max_abs(DD.op.matrix - D.op.matrix * D.op.matrix) == 0.0);
    std::vector<double> x{0.0}, xi{3.0};
    CHECK(std::abs(DD.symbol.eval(x, xi) + 9.0) < 1e-12);
}

TEST_CASE("principal symbol of a composition") {
    PeriodicGrid g(1, 256);
    PdoElement P = quantized_element(sym(1, {{"I*(2 + cos(x1))", "xi1"}}), g);
    PdoElement Q = quantized_element(sym(1, {{"I", "xi1"}}), g);
    PdoElement PQ = compose(P, Q);
    std::vector<double> x{0.0};
    std::vector<int> dir{1}, taus{8, 16, 32};
    cplx rec = recover_principal_symbol(PQ.op, PQ.order, x, dir, taus).value;
    CHECK(std::abs(rec + 3.0) < 0.3);
}

TEST_CASE("composition is associative and adjoints reverse products") {
    PeriodicGrid g(1, 16);
    std::mt19937_64 rng(9);
    PdoElement A = dense(g, random_matrix(16, rng)), B = dense(g, random_matrix(16, rng)),
               C = dense(g, random_matrix(16, rng));
    CHECK(max_abs(compose(compose(A, B), C).op.matrix - compose(A, compose(B, C)).op.matrix) < 1e-10);
    CHECK(max_abs(adjoint_op(compose(A, B)).op.matrix - compose(adjoint_op(B), adjoint_op(A)).op.matrix) < 1e-12);
    PdoElement AA = adjoint_op(adjoint_op(A));
    CHECK(max_abs(AA.op.matrix - A.op.matrix) == 0.0);
}

TEST_CASE("adjoints of vector fields") {
    PeriodicGrid g(1, 32);
    PdoElement D = vector_field_op(PolyVectorField::coordinate(1, 0), g);
    QuantizeOptions zero;
    zero.nyquist = NyquistPolicy::Zero;
    GridOperator Dz(g, spectral_derivative_matrix(g, 0, true));
    CHECK(max_abs(adjoint(Dz).matrix + Dz.matrix) < 1e-12);

    std::vector<std::string> n{"x1"};
    PdoElement X = vector_field_op(field({"sin(x1)"}, n), g);
    // X* f = -(sin f)' = -sin f' - cos f
    GridFunction f = GridFunction::sample(g, [](const std::vector<double>& x) { return cplx(std::cos(2 * x[0])); });
    GridFunction expect = GridFunction::sample(g, [](const std::vector<double>& x) {
        return cplx(2 * std::sin(x[0]) * std::sin(2 * x[0]) - std::cos(x[0]) * std::cos(2 * x[0]));
    });
    CHECK(max_norm(adjoint_op(X).op(f).values - expect.values) < 1e-10);
    (void)D;
}

TEST_CASE("commutators drop one order") {
    PeriodicGrid g(1, 128);
    PdoElement P = quantized_element(sym(1, {{"2 + sin(x1)", "xi1^2"}}), g);
    PdoElement Q = quantized_element(sym(1, {{"I*(1 + cos(x1)/2)", "xi1"}}), g);
    PdoElement C = commutator(P, Q);
    CHECK(C.order == 2);
    std::vector<int> ks;
    for (int k = 4; k <= 16; ++k) ks.push_back(k);
    CHECK(estimate_order(C.op, axis_frequencies(1, ks)) <= 2.5);
}

TEST_CASE("laplacians") {
    PeriodicGrid g(1, 32);
    PdoElement L = laplacian(flat_module(1), g);
    for (int k : {0, 3, 9}) {
        std::vector<int> xi{k};
        GridFunction e = plane_wave(g, xi);
        CHECK(max_norm(L.op(e).values - double(k * k) * e.values) < 1e-10);
    }
    PeriodicGrid g2(2, 8);
    PdoElement L2 = laplacian(flat_module(2), g2);
    GridFunction one = GridFunction::sample(g2, [](const std::vector<double>&) { return cplx(1.0); });
    CHECK(max_norm(L2.op(one).values) < 1e-12);
    std::vector<double> x{0.0, 0.0}, eta{0.6, 0.8};
    CHECK(std::abs(L2.symbol.eval(x, eta) - cplx(1.0)) < 1e-12);

    PeriodicGrid g3(3, 8, {-kPi, -kPi, -kPi});
    PdoElement S = laplacian(so3_module(), g3, SpatialCutoff{});
    CHECK(hermitian_defect(S.op) < 1e-10);
    Eigen::SelfAdjointEigenSolver<CMatrix> es(S.op.matrix);
    CHECK(es.eigenvalues().minCoeff() > -1e-8);
}

TEST_CASE("laplacian domain requirements") {
    PeriodicGrid g3(3, 8, {-kPi, -kPi, -kPi});
    CHECK_THROWS_AS(laplacian(so3_module(), g3), ConfigError);
    CHECK_THROWS_AS(laplacian(so3_module(), PeriodicGrid(3, 8), SpatialCutoff{}), ConfigError);
    CHECK_THROWS_AS(laplacian(so3_module(), g3, SpatialCutoff{1.5, 3.5, {}}), ConfigError);
}

TEST_CASE("parametrix orders and the exact inverse") {
    PeriodicGrid g(1, 256);
    IterationResult r = parametrix(shifted_divergence("2 + cos(x1)", g), 2, band(4, 32));
    REQUIRE(r.trace.size() == 3);
    for (const auto& row : r.trace) {
        CHECK(row.left <= -(row.iteration + 1) + 0.7);
        CHECK(row.right <= -(row.iteration + 1) + 0.7);
    }
    for (std::size_t i = 1; i < r.trace.size(); ++i)
        CHECK(std::abs((r.trace[i - 1].left - r.trace[i].left) - 1.0) <= 0.3);

    PeriodicGrid h(1, 128);
    IterationResult c = parametrix(shifted_divergence("1", h), 3, band(4, 16));
    CHECK(c.trace.front().left <= -1.0);
    for (int k = 2; k <= 16; ++k) {
        std::vector<int> xi{k};
        GridFunction e = plane_wave(h, xi);
        double m = 1.0 / (1.0 + k * k);
        CHECK(std::abs(inner(e, c.Q.op(e)) - m) / m < 0.02);
    }
}

TEST_CASE("parametrix of the identity") {
    PeriodicGrid g(1, 32);
    IterationResult r = parametrix(identity_element(g), 1);
    CHECK(max_abs(r.Q.op.matrix - CMatrix::Identity(32, 32)) < 1e-14);
    for (const auto& row : r.trace) CHECK(row.left == kOrderMinusInfinity);
}

TEST_CASE("square roots") {
    PeriodicGrid g(1, 128);
    PdoElement P = add(laplacian(flat_module(1), g), identity_element(g));
    IterationResult r = sqrt_op(P, 3, band(4, 16));
    REQUIRE(r.trace.size() == 4);
    for (std::size_t i = 1; i < r.trace.size(); ++i) CHECK(r.trace[i].left < r.trace[i - 1].left);
    CHECK(hermitian_defect(r.Q.op) < 1e-8);
    for (int k = 1; k <= 16; ++k) {
        std::vector<int> xi{k};
        GridFunction e = plane_wave(g, xi);
        double m = std::sqrt(1.0 + k * k);
        CHECK(std::abs(inner(e, r.Q.op(e)) - m) / m < 0.03);
    }
    IterationResult id = sqrt_op(identity_element(g), 1);
    CHECK(max_abs(id.Q.op.matrix - CMatrix::Identity(128, 128)) < 1e-12);
}

TEST_CASE("square root iterates nearly commute") {
    PeriodicGrid g(1, 128);
    PdoElement P = shifted_divergence("2 + cos(x1)", g);
    IterationResult q0 = sqrt_op(P, 0, band(4, 16));
    IterationResult q2 = sqrt_op(P, 2, band(4, 16));
    PdoElement C = commutator(q0.Q, q2.Q);
    std::vector<int> ks;
    for (int k = 4; k <= 16; ++k) ks.push_back(k);
    CHECK(estimate_order(C.op, axis_frequencies(1, ks)) <= 1 + 1 - 1 + 0.5);
}

TEST_CASE("square root input checks") {
    PeriodicGrid g(1, 32);
    std::mt19937_64 rng(3);
    CHECK_THROWS_AS(sqrt_op(dense(g, random_matrix(32, rng)), 1), NotHermitianError);
    IterationOptions bad;
    bad.band = {4, 20};
    CHECK_THROWS_AS(parametrix(identity_element(g), 1, bad), InputError);
}

TEST_CASE("idempotent identity") {
    PeriodicGrid g(1, 64);
    PdoElement P = shifted_divergence("2 + cos(x1)", g);
    CHECK(idempotent_check(P, parametrix(P, 2, band(4, 8)).Q) < 1e-8);
    PdoElement I = identity_element(g);
    CHECK(idempotent_check(I, I) == 0.0);
    std::mt19937_64 rng(5);
    for (int t = 0; t < 3; ++t) {
        CMatrix p = random_matrix(64, rng) / 64.0, q = random_matrix(64, rng) / 64.0;
        CHECK(idempotent_check(dense(g, p), dense(g, q)) < 1e-10);
    }
}

}  // TEST_SUITE
