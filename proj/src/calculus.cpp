#include "folpsi/calculus.hpp"

#include "folpsi/error.hpp"

#include <Eigen/Sparse>

#include <cmath>
#include <numbers>

namespace folpsi {

namespace {

void require_same_grid(const PdoElement& P, const PdoElement& Q, const char* what) {
    if (!(P.op.grid == Q.op.grid)) throw InputError(std::string(what) + ": operators live on different grids");
}

CMatrix sym(const CMatrix& A) { return 0.5 * (A + A.adjoint()); }

/// Degree-0 leading term without any xi dependence: a pure multiplication.
bool xi_free(const HomogeneousTerm& t) {
    if (t.degree() != 0) return false;
    for (const auto& p : t.pieces()) {
        if (p.angular || p.norm_pow != 0) return false;
        for (int e : p.xi_pow)
            if (e != 0) return false;
    }
    return true;
}

CVector multiplier_values(const PeriodicGrid& g, const HomogeneousTerm& t) {
    CVector v(static_cast<Eigen::Index>(g.size()));
    std::vector<double> zero(t.xi_dim(), 0.0);
    for (std::size_t i = 0; i < g.size(); ++i) v[static_cast<Eigen::Index>(i)] = t.eval(g.point(i), zero);
    return v;
}

SampleSet samples_for(const PeriodicGrid& g, const IterationOptions& opts) {
    SampleSet s;
    s.directions = unit_sphere_mesh(g.dim(), opts.sphere_resolution);
    if (!opts.sample_points.empty()) {
        s.points = opts.sample_points;
        return s;
    }
    const std::size_t target = 64;
    std::size_t stride = std::max<std::size_t>(1, g.size() / target);
    // An odd stride avoids sampling only one parity class of points.
    if (stride % 2 == 0) ++stride;
    for (std::size_t i = 0; i < g.size(); i += stride) s.points.push_back(g.point(i));
    return s;
}

std::vector<std::vector<int>> band_frequencies(const PeriodicGrid& g, const IterationOptions& opts) {
    std::vector<int> band = opts.band.empty() ? default_band(g) : opts.band;
    if (band.size() < 2) throw InputError("frequency band needs at least two entries");
    for (int k : band)
        if (k <= 0 || k >= g.nyquist())
            throw InputError("frequency band entry " + std::to_string(k) + " outside (0, " +
                             std::to_string(g.nyquist()) + ")");
    return axis_frequencies(g.dim(), band, 0);
}

double smooth_step_down(double r, double inner, double outer) {
    if (r <= inner) return 1.0;
    if (r >= outer) return 0.0;
    double t = (r - inner) / (outer - inner);
    auto psi = [](double s) { return s <= 0 ? 0.0 : std::exp(-1.0 / s); };
    return psi(1.0 - t) / (psi(1.0 - t) + psi(t));
}

}  // namespace

std::vector<int> default_band(const PeriodicGrid& grid) {
    int hi = std::max(5, grid.points_per_axis() / 8);
    std::vector<int> out;
    for (int k = 4; k <= hi; ++k) out.push_back(k);
    return out;
}

PdoElement identity_element(const PeriodicGrid& grid) {
    return {PolyhomSymbol::constant(grid.dim(), GaussRational(1)), GridOperator::identity(grid), 0};
}

PdoElement quantized_element(const PolyhomSymbol& a, const PeriodicGrid& grid, const QuantizeOptions& opts) {
    return {a.principal(), quantize_dense(a, grid, opts), a.order()};
}

namespace {

using SparseC = Eigen::SparseMatrix<cplx>;

/// sum_j diag(w X^j) D_j assembled from the one-dimensional derivative kernels.
SparseC vector_field_matrix(const PolyVectorField& X, const PeriodicGrid& grid, const WeightPtr& weight) {
    const int n = grid.dim();
    const int G = grid.points_per_axis();
    std::vector<Eigen::Triplet<cplx>> entries;
    PeriodicGrid line(1, G);
    CMatrix d1 = spectral_derivative_matrix(line, 0);
    for (std::size_t row = 0; row < grid.size(); ++row) {
        auto x = grid.point(row);
        double w = weight ? (*weight)(x) : 1.0;
        if (w == 0.0) continue;
        auto m = grid.multi_index(row);
        for (int j = 0; j < n; ++j) {
            if (X[j].is_zero()) continue;
            cplx c = w * X[j].eval(x);
            if (c == 0.0) continue;
            const int i = m[j];
            for (int l = 0; l < G; ++l) {
                auto ml = m;
                ml[j] = l;
                entries.emplace_back(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(grid.flat_index(ml)),
                                     c * d1(i, l));
            }
        }
    }
    const auto size = static_cast<Eigen::Index>(grid.size());
    SparseC A(size, size);
    A.setFromTriplets(entries.begin(), entries.end());
    return A;
}

PolyhomSymbol vector_field_symbol(const PolyVectorField& X, int n, const WeightPtr& weight) {
    std::vector<SymbolPiece> pieces;
    for (int j = 0; j < n; ++j) {
        if (X[j].is_zero()) continue;
        std::vector<int> pow(n, 0);
        pow[j] = 1;
        SymbolPiece p = xi_monomial(Coeff::constant(n, GaussRational::I()) * X[j], pow);
        p.weight = weight;
        pieces.push_back(std::move(p));
    }
    if (pieces.empty()) return PolyhomSymbol(n, n, 1, {HomogeneousTerm(1, n, n)}, CutoffKind::None);
    return PolyhomSymbol::from_pieces(n, n, std::move(pieces), CutoffKind::None);
}

}  // namespace

PdoElement vector_field_op(const PolyVectorField& X, const PeriodicGrid& grid, WeightPtr weight) {
    if (X.dim() != grid.dim()) throw InputError("vector field dimension does not match the grid");
    CMatrix op(vector_field_matrix(X, grid, weight));
    return {vector_field_symbol(X, grid.dim(), weight), GridOperator(grid, std::move(op)), 1};
}

PdoElement compose(const PdoElement& P, const PdoElement& Q) {
    require_same_grid(P, Q, "compose");
    return {symbol_product(P.symbol, Q.symbol).principal(), P.op * Q.op, P.order + Q.order};
}

PdoElement adjoint_op(const PdoElement& P) {
    return {P.symbol.principal().conj(), adjoint(P.op), P.order};
}

PdoElement add(const PdoElement& P, const PdoElement& Q, cplx s) {
    require_same_grid(P, Q, "add");
    GridOperator op = P.op + s * Q.op;
    if (P.order > Q.order) return {P.symbol.principal(), op, P.order};
    GaussRational sr = GaussRational::from_double(s.real()) + GaussRational::from_double(s.imag()) * GaussRational::I();
    PolyhomSymbol qs = Q.symbol.principal().scaled(sr);
    if (Q.order > P.order) return {qs, op, Q.order};
    return {symbol_sum(P.symbol.principal(), qs).principal(), op, P.order};
}

PdoElement commutator(const PdoElement& P, const PdoElement& Q) {
    require_same_grid(P, Q, "commutator");
    const int n = P.op.grid.dim();
    const int order = P.order + Q.order - 1;
    // The principal symbol of a commutator is a Poisson bracket, which is not tracked.
    return {PolyhomSymbol(n, n, order, {HomogeneousTerm(order, n, n)}, CutoffKind::Standard),
            P.op * Q.op - Q.op * P.op, order};
}

WeightPtr spatial_cutoff_weight(const SpatialCutoff& c, int dim) {
    if (!(c.inner >= 0.0 && c.inner < c.outer)) throw ConfigError("cutoff radii must satisfy 0 <= inner < outer");
    std::vector<double> center = c.center.empty() ? std::vector<double>(dim, 0.0) : c.center;
    if (static_cast<int>(center.size()) != dim) throw ConfigError("cutoff center has wrong dimension");
    double inner = c.inner, outer = c.outer;
    return std::make_shared<Weight>("chi(|x|;" + std::to_string(inner) + "," + std::to_string(outer) + ")",
                                    [center, inner, outer](std::span<const double> x) {
                                        double r2 = 0.0;
                                        for (std::size_t i = 0; i < x.size(); ++i)
                                            r2 += (x[i] - center[i]) * (x[i] - center[i]);
                                        return smooth_step_down(std::sqrt(r2), inner, outer);
                                    });
}

PdoElement divergence_form(const Coeff& a, const PeriodicGrid& g) {
    const auto n = static_cast<Eigen::Index>(g.size());
    CVector w(n);
    for (std::size_t i = 0; i < g.size(); ++i) w[static_cast<Eigen::Index>(i)] = a.eval(g.point(i));
    PdoElement M{PolyhomSymbol::from_pieces(g.dim(), g.dim(), {xi_monomial(a, std::vector<int>(g.dim(), 0))},
                                            CutoffKind::None),
                 GridOperator::multiplication(g, w), 0};
    std::optional<PdoElement> acc;
    for (int j = 0; j < g.dim(); ++j) {
        PdoElement D = vector_field_op(PolyVectorField::coordinate(g.dim(), j), g);
        PdoElement term = compose(adjoint_op(D), compose(M, D));
        acc = acc ? add(*acc, term) : term;
    }
    return *acc;
}

PdoElement laplacian(const FoliationModule& F, const PeriodicGrid& grid, const std::optional<SpatialCutoff>& cutoff) {
    const int n = F.dim();
    if (grid.dim() != n) throw InputError("laplacian: grid dimension does not match the foliation");
    WeightPtr weight;
    if (F.domain.kind == DomainKind::Box) {
        if (!cutoff) throw ConfigError("laplacian on a box domain needs a spatial cutoff");
        std::vector<double> center = cutoff->center.empty() ? std::vector<double>(n, 0.0) : cutoff->center;
        for (int d = 0; d < n; ++d) {
            if (std::abs(F.domain.upper[d] - F.domain.lower[d] - 2 * std::numbers::pi) > 1e-9)
                throw ConfigError("laplacian on a box domain needs box side length 2*pi");
            if (std::abs(grid.origin()[d] - F.domain.lower[d]) > 1e-9)
                throw ConfigError("grid origin must be the lower box corner");
            if (center[d] - cutoff->outer <= F.domain.lower[d] || center[d] + cutoff->outer >= F.domain.upper[d])
                throw ConfigError("cutoff support must lie strictly inside the box");
        }
    }
    if (cutoff) weight = spatial_cutoff_weight(*cutoff, n);
    const auto size = static_cast<Eigen::Index>(grid.size());
    SparseC op(size, size);
    std::optional<PolyhomSymbol> symbol;
    for (const auto& X : F.generators) {
        SparseC A = vector_field_matrix(X, grid, weight);
        SparseC AtA = SparseC(A.adjoint()) * A;
        op += AtA;
        PolyhomSymbol a = vector_field_symbol(X, n, weight);
        PolyhomSymbol s = symbol_product(a.conj(), a).principal();
        symbol = symbol ? symbol_sum(*symbol, s).principal() : s;
    }
    if (!symbol) symbol = PolyhomSymbol(n, n, 2, {HomogeneousTerm(2, n, n)}, CutoffKind::None);
    return {*symbol, GridOperator(grid, CMatrix(op)), 2};
}

IterationResult parametrix(const PdoElement& P, int iterations, const IterationOptions& opts) {
    if (iterations < 0) throw InputError("parametrix iterations must be >= 0");
    const PeriodicGrid& g = P.op.grid;
    auto freqs = band_frequencies(g, opts);
    SampleSet samples = samples_for(g, opts);
    PolyhomSymbol inv = principal_inverse(P.symbol.principal(), samples);
    GridOperator Q0 = xi_free(P.symbol.leading())
                          ? GridOperator::multiplication(g, multiplier_values(g, P.symbol.leading()).cwiseInverse())
                          : quantize_dense(inv, g);
    GridOperator I = GridOperator::identity(g);
    GridOperator E = I - P.op * Q0;
    GridOperator Qk = Q0;
    GridOperator Q = Q0;
    IterationResult out{{inv, Q0, -P.order}, {}};
    for (int k = 0; k <= iterations; ++k) {
        if (k > 0) {
            Qk = Qk * E;
            Q = Q + Qk;
        }
        out.trace.push_back({k, estimate_order(I - Q * P.op, freqs), estimate_order(I - P.op * Q, freqs)});
    }
    out.Q.op = Q;
    return out;
}

IterationResult sqrt_op(const PdoElement& P, int iterations, const IterationOptions& opts) {
    if (iterations < 0) throw InputError("square root iterations must be >= 0");
    if (P.order % 2 != 0) throw InputError("square root needs an even order");
    double defect = hermitian_defect(P.op);
    if (!(defect < 1e-8)) throw NotHermitianError("operator is not self-adjoint (defect " + std::to_string(defect) + ")");
    const PeriodicGrid& g = P.op.grid;
    auto freqs = band_frequencies(g, opts);
    SampleSet samples = samples_for(g, opts);
    PolyhomSymbol root = principal_sqrt(P.symbol.principal(), samples);
    const bool multiplication = xi_free(P.symbol.leading());
    CVector r = multiplication ? CVector(multiplier_values(g, P.symbol.leading()).cwiseSqrt()) : CVector();
    GridOperator Q0 = multiplication ? GridOperator::multiplication(g, r) : quantize_dense(root, g);
    GridOperator D = multiplication
                         ? GridOperator::multiplication(g, (2.0 * r).cwiseInverse())
                         : quantize_dense(principal_inverse(root.scaled(GaussRational(2)), samples), g);
    Q0.matrix = sym(Q0.matrix);
    GridOperator S = Q0;
    IterationResult out{{root, Q0, P.order / 2}, {}};
    for (int n = 0; n <= iterations; ++n) {
        if (n > 0) {
            GridOperator R = P.op - S * S;
            S.matrix += sym((D * R).matrix);
        }
        GridOperator residual = P.op - S * S;
        out.trace.push_back({n, estimate_order(residual, freqs), 0.0});
    }
    out.Q.op = S;
    return out;
}

double idempotent_check(const PdoElement& P, const PdoElement& Q) {
    require_same_grid(P, Q, "idempotent_check");
    const CMatrix& p = P.op.matrix;
    const CMatrix& q = Q.op.matrix;
    const Eigen::Index n = p.rows();
    CMatrix R = CMatrix::Identity(n, n) - q * p;
    CMatrix T(2 * n, 2 * n);
    T.topLeftCorner(n, n) = R;
    T.topRightCorner(n, n) = q;
    T.bottomLeftCorner(n, n) = p * R;
    T.bottomRightCorner(n, n) = p * q;
    return ((T * T) - T).cwiseAbs().maxCoeff();
}

double hermitian_defect(const GridOperator& A) {
    if (A.matrix.size() == 0) return 0.0;
    return (A.matrix - A.matrix.adjoint()).cwiseAbs().maxCoeff();
}

}  // namespace folpsi
