// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any failure.
#include "folpsi/bisubmersion.hpp"
#include "folpsi/calculus.hpp"
#include "folpsi/expr.hpp"
#include "folpsi/foliation.hpp"
#include "folpsi/quantize.hpp"
#include "folpsi/spectra.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

using namespace folpsi;

namespace {

constexpr double kPi = std::numbers::pi;

struct Outcome {
    bool pass = true;
    std::ostringstream detail;

    void require(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            detail << " [failed: " << what << "]";
        }
    }
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

FoliationModule so3() {
    std::vector<std::string> names{"x", "y", "z"};
    auto c = [&](const char* s) { return parse_coeff(s, names, "generator"); };
    std::vector<PolyVectorField> gens{
        PolyVectorField({c("0"), c("-z"), c("y")}),
        PolyVectorField({c("z"), c("0"), c("-x")}),
        PolyVectorField({c("-y"), c("x"), c("0")}),
    };
    return FoliationModule(Domain::box({-kPi, -kPi, -kPi}, {kPi, kPi, kPi}), gens, names);
}

PolyhomSymbol sym(int dim, std::vector<std::pair<std::string, std::string>> pieces,
                  CutoffKind cutoff = CutoffKind::Standard) {
    auto names = default_coordinate_names(dim);
    std::vector<SymbolPiece> out;
    for (auto& [coeff, xi] : pieces) out.push_back(parse_xi_expression(xi, parse_coeff(coeff, names, "coeff"), dim));
    return symbol_from_pieces(dim, dim, std::move(out), cutoff);
}

// 1. SO(3) fiber structure.
void criterion1(Outcome& o) {
    auto t0 = std::chrono::steady_clock::now();
    FoliationModule F = so3();
    std::vector<double> origin{0, 0, 0}, e1{1, 0, 0};
    int f0 = fiber_dimension(F, origin, 2), f1 = fiber_dimension(F, e1, 2);
    int l0 = leaf_tangent_dim(F, origin), l1 = leaf_tangent_dim(F, e1);
    CotangentFiber c0 = cotangent_fiber(F, origin, 2), c1 = cotangent_fiber(F, e1, 2);
    double t = seconds_since(t0);
    o.detail << "fiber " << f0 << "," << f1 << " leaf " << l0 << "," << l1 << " cotangent " << c0.basis.cols() << ","
             << c1.basis.cols() << " time " << t << "s";
    o.require(f0 == 3 && f1 == 2, "fiber dims 3,2");
    o.require(l0 == 0 && l1 == 2, "leaf dims 0,2");
    o.require(c0.basis.cols() == 3 && c1.basis.cols() == 2 && c0.fiber_dim == 3 && c1.fiber_dim == 2,
              "cotangent fiber dims");
    o.require(t < 5.0, "runtime < 5 s");
}

// 2. Oracle equivalence of the fast and dense quantizations.
void criterion2(Outcome& o) {
    auto t0 = std::chrono::steady_clock::now();
    std::vector<PolyhomSymbol> suite{
        sym(1, {{"1", "1"}}, CutoffKind::None),
        sym(1, {{"I*(2 + sin(x1))", "xi1"}}, CutoffKind::None),
        sym(1, {{"1 + cos(x1)^2", "xi1^2"}, {"3", "1"}}, CutoffKind::None),
        sym(1, {{"2 + cos(2*x1)", "|xi|^-1"}}),
        sym(1, {{"sin(x1)", "xi1^3"}, {"I", "xi1"}}),
        sym(1, {{"1", "|xi|^-2"}, {"cos(3*x1)", "|xi|^-3"}}),
        sym(2, {{"1 + sin(x1)*cos(x2)", "1"}}, CutoffKind::None),
        sym(2, {{"I*(2 + cos(x2))", "xi1"}, {"I", "xi2"}}, CutoffKind::None),
        sym(2, {{"1", "xi1^2"}, {"2 + sin(x1 + x2)", "xi2^2"}}, CutoffKind::None),
        sym(2, {{"1", "|xi|^-1"}}),
        sym(2, {{"cos(x1 - 2*x2)", "xi1*xi2"}, {"1", "|xi|^-2"}}),
        sym(2, {{"3 + sin(2*x2)", "|xi|^1"}}),
    };
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    double worst = 0.0;
    for (const auto& a : suite) {
        PeriodicGrid g(a.x_dim(), 16);
        GridFunction f(g);
        for (Eigen::Index i = 0; i < f.values.size(); ++i) f.values[i] = cplx(U(rng), U(rng));
        worst = std::max(worst, max_norm(apply_symbol(a, f).values - quantize_dense(a, g)(f).values));
    }
    double t = seconds_since(t0);
    o.detail << suite.size() << " symbols, max diff " << worst << " time " << t << "s";
    o.require(worst < 1e-10, "max diff < 1e-10");
    o.require(t < 10.0, "runtime < 10 s");
}

// 3. Principal symbol recovery for (2 + sin x) i xi at x = pi/2.
void criterion3(Outcome& o) {
    PeriodicGrid g(1, 256);
    std::vector<double> x{kPi / 2};
    std::vector<int> dir{1};
    auto errors = [&](const PolyhomSymbol& a) {
        GridOperator P = quantize_dense(a, g);
        std::vector<double> e;
        for (int tau : {8, 16, 32, 64}) {
            std::vector<int> one{tau};
            e.push_back(std::abs(recover_principal_symbol(P, 1, x, dir, one).value - cplx(0, 3)));
        }
        return e;
    };
    auto exact = errors(sym(1, {{"I*(2 + sin(x1))", "xi1"}}, CutoffKind::None));
    auto perturbed = errors(sym(1, {{"I*(2 + sin(x1))", "xi1"}, {"1", "1"}}, CutoffKind::None));
    bool decreasing = true, strict = true;
    for (std::size_t i = 1; i < exact.size(); ++i) {
        decreasing = decreasing && exact[i] <= std::max(exact[i - 1], 1e-12);
        strict = strict && perturbed[i] < perturbed[i - 1];
    }
    o.detail << "rel error at tau=64 " << exact.back() / 3 << " (perturbed " << perturbed.back() / 3 << ")";
    o.require(exact.back() <= 0.3 && perturbed.back() <= 0.3, "within 10% of 3i");
    o.require(decreasing && strict, "error decreasing in tau");
}

// 4. Principal symbol of a composition is the product of principal symbols.
void criterion4(Outcome& o) {
    PeriodicGrid g(1, 256);
    PolyhomSymbol a = sym(1, {{"I*(2 + sin(x1))", "xi1"}}, CutoffKind::None);
    PolyhomSymbol b = sym(1, {{"3 + cos(x1)", "xi1^2"}, {"1", "1"}});
    PdoElement PQ = compose(quantized_element(a, g), quantized_element(b, g));
    std::vector<int> taus{8, 16, 32};
    double worst = 0.0;
    const std::vector<std::pair<int, int>> samples{{20, 1}, {51, -1}, {102, 1}, {163, -1}, {224, 1}};
    for (auto [k, d] : samples) {
        std::vector<double> x = g.point(static_cast<std::size_t>(k));
        std::vector<int> dir{d};
        std::vector<double> xi{double(d)};
        cplx rec = recover_principal_symbol(PQ.op, PQ.order, x, dir, taus).value;
        cplx prod = a.leading().eval(x, xi) * b.leading().eval(x, xi);
        worst = std::max(worst, std::abs(rec - prod) / std::abs(prod));
    }
    o.detail << samples.size() << " samples, max rel error " << worst;
    o.require(worst < 0.1, "within 10%");
}

GridFunction axis_wave(const PeriodicGrid& g, int k) {
    std::vector<int> xi(g.dim(), 0);
    xi[0] = k;
    return plane_wave(g, xi);
}

double multiplier_error(const GridOperator& Q, const std::function<double(double)>& m, int lo, int hi) {
    double worst = 0.0;
    for (int k = lo; k <= hi; ++k) {
        GridFunction e = axis_wave(Q.grid, k);
        worst = std::max(worst, std::abs(inner(e, Q(e)) - m(k)) / m(k));
    }
    return worst;
}

// 5. Parametrix residual orders and the constant-coefficient inverse.
void criterion5(Outcome& o) {
    PeriodicGrid g(1, 256);
    auto names = default_coordinate_names(1);
    IterationOptions opts;
    for (int k = 4; k <= 32; ++k) opts.band.push_back(k);
    PdoElement P = add(divergence_form(parse_coeff("2 + cos(x1)", names, "a"), g), identity_element(g));
    IterationResult r = parametrix(P, 2, opts);
    bool orders = r.trace.size() == 3;
    o.detail << "orders";
    for (const auto& row : r.trace) {
        double bound = -(row.iteration + 1) + 0.7;
        orders = orders && row.left <= bound && row.right <= bound;
        o.detail << " " << row.left << "/" << row.right;
    }
    PdoElement P0 = add(divergence_form(parse_coeff("1", names, "a"), g), identity_element(g));
    IterationResult r0 = parametrix(P0, 2, opts);
    double err = multiplier_error(r0.Q.op, [](double k) { return 1.0 / (1.0 + k * k); }, 2, 16);
    o.detail << "; inverse oracle rel error " << err << " on 2..16";
    o.require(orders, "order bound -(N+1)+0.7");
    o.require(err < 0.02, "oracle within 2%");
}

// 6. Square root of 1 - d^2.
void criterion6(Outcome& o) {
    PeriodicGrid g(1, 128);
    IterationOptions opts;
    for (int k = 4; k <= 16; ++k) opts.band.push_back(k);
    PdoElement P = add(divergence_form(parse_coeff("1", default_coordinate_names(1), "a"), g), identity_element(g));
    IterationResult r = sqrt_op(P, 3, opts);
    bool decreasing = r.trace.size() == 4;
    o.detail << "orders";
    for (std::size_t i = 0; i < r.trace.size(); ++i) {
        o.detail << " " << r.trace[i].left;
        if (i > 0) decreasing = decreasing && r.trace[i].left < r.trace[i - 1].left;
    }
    double err = multiplier_error(r.Q.op, [](double k) { return std::sqrt(1.0 + k * k); }, 1, 16);
    double defect = hermitian_defect(r.Q.op);
    o.detail << "; oracle rel error " << err << " on 1..16; hermitian defect " << defect;
    o.require(err < 0.03, "oracle within 3%");
    o.require(decreasing, "order strictly decreasing");
    o.require(defect < 1e-8, "hermitian defect < 1e-8");
}

// 7. Foliation Laplacians.
void criterion7(Outcome& o) {
    auto t0 = std::chrono::steady_clock::now();
    FoliationModule F = so3();
    PeriodicGrid g(3, 12, {-kPi, -kPi, -kPi});
    PdoElement L = laplacian(F, g, SpatialCutoff{1.5, 3.0, {}});
    double defect = hermitian_defect(L.op);
    auto ev = spectrum(L.op);
    double t = seconds_since(t0);

    std::vector<std::string> names{"x", "y"};
    auto one = parse_coeff("1", names, "c");
    auto zero = parse_coeff("0", names, "c");
    FoliationModule flat(Domain::torus(2), {PolyVectorField({one, zero}), PolyVectorField({zero, one})}, names);
    PeriodicGrid g2(2, 16);
    auto ev2 = spectrum(laplacian(flat, g2).op);
    std::vector<double> exact;
    for (std::size_t i = 0; i < g2.size(); ++i) {
        auto k = g2.frequency(i);
        exact.push_back(double(k[0]) * k[0] + double(k[1]) * k[1]);
    }
    std::sort(exact.begin(), exact.end());
    double flat_err = 0.0;
    for (std::size_t i = 0; i < exact.size(); ++i) flat_err = std::max(flat_err, std::abs(exact[i] - ev2[i]));

    o.detail << "SO(3) G=12 rows " << g.size() << " defect " << defect << " min eig " << ev.front() << " time " << t
             << "s; flat spectrum error " << flat_err;
    o.require(defect < 1e-10, "symmetry defect < 1e-10");
    o.require(ev.front() >= -1e-8, "min eigenvalue >= -1e-8");
    o.require(flat_err < 1e-10, "flat spectrum to 1e-10");
    o.require(t < 120.0, "runtime < 2 min");
}

// 8. Boundedness, negative-order decay, and the flat-vanishing example.
void criterion8(Outcome& o) {
    auto names = default_coordinate_names(1);
    BoundednessReport b = boundedness_scan(Multiplier::bracket(parse_coeff("2 + sin(x1)", names, "c"), {1}, -1),
                                           {32, 64, 128});
    DecayReport d = negative_order_decay(Multiplier::bracket(parse_coeff("1", names, "c"), {0}, -2),
                                         PeriodicGrid(1, 128), {4, 8, 16, 32});
    FoliationModule F = so3();
    PolyhomSymbol flat = flat_vanishing_symbol(3);
    double on_fiber = 0.0;
    for (std::vector<double> x : {std::vector<double>{1, 0, 0}, {0, 1, 0}, {0.5, -0.5, 1}, {1.5, 0.25, -2}}) {
        CotangentFiber cf = cotangent_fiber(F, x, 2);
        for (int i = 0; i < cf.fiber_dim; ++i)
            for (int j = 0; j < cf.fiber_dim; ++j)
                for (double th : {0.0, 0.4, 1.1, 2.3}) {
                    Eigen::VectorXd eta = std::cos(th) * cf.basis.col(i) + std::sin(th) * cf.basis.col(j);
                    std::vector<double> e(eta.data(), eta.data() + eta.size());
                    on_fiber = std::max(on_fiber, std::abs(longitudinal_symbol(F, flat, x, e, 2)));
                }
    }
    PeriodicGrid g2(2, 64, {-kPi, -kPi});
    ExtensionReport ext = extension_report(flat_vanishing_symbol(2), g2, PacketProbe{{1.5, 0}, {0, 24}, 0, 0},
                                           PacketProbe{{1.5, 0}, {24, 0}, 0, 0}, PacketShape{0.25, 0.8, 1e-8});
    o.detail << "scan ratio " << b.max_ratio << ", decay slope " << d.slope << ", max |sigma| on F* " << on_fiber
             << ", order estimate " << ext.order_estimate << ", packet report " << (ext.pass ? "pass" : "fail");
    o.require(b.max_ratio <= 1.25, "scan ratio <= 1.25");
    o.require(d.slope >= -2.2 && d.slope <= -1.8, "slope -2 +- 0.2");
    o.require(on_fiber == 0.0, "exactly 0 on F*");
    o.require(ext.order_estimate > -0.5, "order estimate > -0.5");
}

// 9. T^2 = T for the block idempotent built from a pair (P, Q).
void criterion9(Outcome& o) {
    PeriodicGrid g(1, 128);
    IterationOptions opts;
    for (int k = 4; k <= 16; ++k) opts.band.push_back(k);
    PdoElement P = add(divergence_form(parse_coeff("2 + cos(x1)", default_coordinate_names(1), "a"), g),
                       identity_element(g));
    double par = idempotent_check(P, parametrix(P, 2, opts).Q);

    PeriodicGrid h(1, 64);
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    double worst = 0.0;
    for (int trial = 0; trial < 5; ++trial) {
        CMatrix p(64, 64), q(64, 64);
        for (Eigen::Index i = 0; i < 64; ++i)
            for (Eigen::Index j = 0; j < 64; ++j) {
                p(i, j) = cplx(U(rng), U(rng)) / 64.0;
                q(i, j) = cplx(U(rng), U(rng)) / 64.0;
            }
        PdoElement A{PolyhomSymbol::constant(1, GaussRational(1)), {h, p}, 0};
        PdoElement B{PolyhomSymbol::constant(1, GaussRational(1)), {h, q}, 0};
        worst = std::max(worst, idempotent_check(A, B));
    }
    o.detail << "parametrix defect " << par << ", random defect " << worst;
    o.require(par < 1e-8, "parametrix pair < 1e-8");
    o.require(worst < 1e-10, "random pairs < 1e-10");
}

// 10. Identity bi-submersion of the SO(3) action.
void criterion10(Outcome& o) {
    FoliationModule F = so3();
    IdentityBisubmersion B(F, 2.0);
    std::vector<std::pair<std::vector<double>, std::vector<double>>> samples{
        {{1, 0, 0}, {kPi / 2, 0, 0}}, {{1, 0, 0}, {0.3, 0.2, -0.1}}, {{0.5, 0.5, 0}, {0.1, -0.2, 0.3}},
        {{0.2, -0.4, 0.7}, {0.5, 0.5, -0.5}}};
    bool identity = true;
    double min_order = std::numeric_limits<double>::infinity(), drift = 0.0;
    for (const auto& [y, xi] : samples) {
        identity = identity && B.target(y, std::vector<double>{0, 0, 0}) == y;
        min_order = std::min(min_order, convergence_order(B, y, xi).order);
        auto t = B.target(y, xi);
        double r0 = std::hypot(y[0], y[1], y[2]), r1 = std::hypot(t[0], t[1], t[2]);
        drift = std::max(drift, std::abs(r1 - r0));
    }
    int gap0 = minimality_gap(B, std::vector<double>{0, 0, 0}), gap1 = minimality_gap(B, std::vector<double>{1, 0, 0});
    o.detail << "t(y,0)=y " << (identity ? "exact" : "inexact") << ", order " << min_order << ", radius drift " << drift
             << ", gaps " << gap0 << "," << gap1;
    o.require(identity, "t(y,0) = y exactly");
    o.require(min_order >= 3.5, "order >= 3.5");
    o.require(drift <= 1e-8, "radius drift <= 1e-8");
    o.require(gap0 == 0 && gap1 == 1, "minimality gaps 0,1");
}

}  // namespace

int main() {
    const std::vector<void (*)(Outcome&)> criteria{criterion1, criterion2, criterion3, criterion4, criterion5,
                                                  criterion6, criterion7, criterion8, criterion9, criterion10};
    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Outcome o;
        try {
            criteria[i](o);
        } catch (const std::exception& e) {
            o.pass = false;
            o.detail << " [exception: " << e.what() << "]";
        }
        failures += o.pass ? 0 : 1;
        std::printf("criterion %2zu: %s  %s\n", i + 1, o.pass ? "PASS" : "FAIL", o.detail.str().c_str());
        std::fflush(stdout);
    }
    return failures == 0 ? 0 : 1;
}
