#include "folpsi/foliation.hpp"

#include "folpsi/error.hpp"
#include "folpsi/linalg.hpp"

#include <cmath>
#include <map>
#include <numbers>

namespace folpsi {

// ---------------------------------------------------------------------------
// Domain and vector fields

Domain Domain::torus(int dim) {
    if (dim < 1) throw InputError("domain dimension must be >= 1");
    Domain d;
    d.kind = DomainKind::Torus;
    d.dim = dim;
    d.lower.assign(dim, 0.0);
    d.upper.assign(dim, 2.0 * std::numbers::pi);
    return d;
}

Domain Domain::box(std::vector<double> lower, std::vector<double> upper) {
    if (lower.empty() || lower.size() != upper.size()) throw InputError("box bounds must have equal, positive length");
    for (std::size_t i = 0; i < lower.size(); ++i)
        if (!(lower[i] < upper[i])) throw InputError("box bounds must satisfy lower < upper");
    Domain d;
    d.kind = DomainKind::Box;
    d.dim = static_cast<int>(lower.size());
    d.lower = std::move(lower);
    d.upper = std::move(upper);
    return d;
}

bool Domain::contains(std::span<const double> x) const {
    if (static_cast<int>(x.size()) != dim) return false;
    for (double v : x)
        if (!std::isfinite(v)) return false;
    if (kind == DomainKind::Torus) return true;
    for (int i = 0; i < dim; ++i)
        if (x[i] < lower[i] || x[i] > upper[i]) return false;
    return true;
}

PolyVectorField::PolyVectorField(std::vector<Coeff> components) : components_(std::move(components)) {
    for (const auto& c : components_)
        if (c.dim() != dim()) throw InputError("vector field component ring dimension differs from field dimension");
}

PolyVectorField PolyVectorField::zero(int dim) {
    return PolyVectorField(std::vector<Coeff>(dim, Coeff(dim)));
}

PolyVectorField PolyVectorField::coordinate(int dim, int axis) {
    std::vector<Coeff> c(dim, Coeff(dim));
    c.at(axis) = Coeff::constant(dim, GaussRational(1));
    return PolyVectorField(std::move(c));
}

bool PolyVectorField::is_zero() const {
    for (const auto& c : components_)
        if (!c.is_zero()) return false;
    return true;
}

bool PolyVectorField::has_polynomial_part() const {
    for (const auto& c : components_)
        if (c.has_polynomial_part()) return true;
    return false;
}

int PolyVectorField::degree() const {
    int d = 0;
    for (const auto& c : components_) d = std::max(d, c.degree());
    return d;
}

std::vector<double> PolyVectorField::eval(std::span<const double> x) const {
    std::vector<double> v(components_.size());
    for (std::size_t i = 0; i < components_.size(); ++i) v[i] = components_[i].eval(x).real();
    return v;
}

Coeff PolyVectorField::divergence() const {
    Coeff out(dim());
    for (int j = 0; j < dim(); ++j) out += components_[j].derivative(j);
    return out;
}

PolyVectorField PolyVectorField::real_part() const {
    std::vector<Coeff> c;
    for (const auto& v : components_) c.push_back(v.real_part());
    return PolyVectorField(std::move(c));
}

PolyVectorField operator+(const PolyVectorField& a, const PolyVectorField& b) {
    if (a.dim() != b.dim()) throw InputError("vector field ring mismatch");
    std::vector<Coeff> c;
    for (int i = 0; i < a.dim(); ++i) c.push_back(a[i] + b[i]);
    return PolyVectorField(std::move(c));
}

PolyVectorField operator-(const PolyVectorField& a, const PolyVectorField& b) {
    if (a.dim() != b.dim()) throw InputError("vector field ring mismatch");
    std::vector<Coeff> c;
    for (int i = 0; i < a.dim(); ++i) c.push_back(a[i] - b[i]);
    return PolyVectorField(std::move(c));
}

PolyVectorField operator*(const Coeff& f, const PolyVectorField& v) {
    std::vector<Coeff> c;
    for (const auto& comp : v.components_) c.push_back(f * comp);
    return PolyVectorField(std::move(c));
}

bool operator==(const PolyVectorField& a, const PolyVectorField& b) {
    return a.components_ == b.components_;
}

std::string PolyVectorField::str(const std::vector<std::string>& names) const {
    std::string out;
    for (int j = 0; j < dim(); ++j) {
        if (components_[j].is_zero()) continue;
        if (!out.empty()) out += " + ";
        out += "(" + components_[j].str(names) + ")*d/d" + names[j];
    }
    return out.empty() ? "0" : out;
}

PolyVectorField bracket(const PolyVectorField& X, const PolyVectorField& Y) {
    if (X.dim() != Y.dim()) throw InputError("bracket: vector fields on different rings");
    const int n = X.dim();
    std::vector<Coeff> out(n, Coeff(n));
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            out[i] += X[j] * Y[i].derivative(j);
            out[i] -= Y[j] * X[i].derivative(j);
        }
    }
    return PolyVectorField(std::move(out));
}

// ---------------------------------------------------------------------------
// Module

FoliationModule::FoliationModule(Domain d, std::vector<PolyVectorField> gens, std::vector<std::string> coordinate_names)
    : domain(std::move(d)), generators(std::move(gens)), names(std::move(coordinate_names)) {
    if (names.empty()) names = default_coordinate_names(domain.dim);
    if (static_cast<int>(names.size()) != domain.dim) throw InputError("coordinate names do not match the domain");
    for (const auto& X : generators) {
        if (X.dim() != domain.dim) throw InputError("generator dimension does not match the domain");
        if (domain.kind == DomainKind::Torus && X.has_polynomial_part())
            throw InputError("torus generators must be trigonometric polynomials");
    }
}

Eigen::MatrixXd FoliationModule::anchor(std::span<const double> x) const {
    if (!domain.contains(x)) throw InputError("point outside the domain");
    Eigen::MatrixXd A(dim(), rank());
    for (int k = 0; k < rank(); ++k) {
        auto v = generators[k].eval(x);
        for (int i = 0; i < dim(); ++i) A(i, k) = v[i];
    }
    return A;
}

bool FoliationModule::structure_holds() const {
    return structure && structure_identity_holds(*this, *structure);
}

bool structure_identity_holds(const FoliationModule& F, const StructureTable& f) {
    const int N = F.rank();
    if (static_cast<int>(f.size()) != N) return false;
    for (int i = 0; i < N; ++i) {
        for (int j = 0; j < N; ++j) {
            PolyVectorField rhs = PolyVectorField::zero(F.dim());
            for (int k = 0; k < N; ++k) rhs = rhs + f[i][j][k] * F.generators[k];
            if (!(rhs == bracket(F.generators[i], F.generators[j]))) return false;
        }
    }
    return true;
}

namespace {

using linalg::Matrix;

/// Coordinates of vector fields in coefficient space: one row per
/// (component, monomial) pair encountered.
template <class F>
struct CoefficientSpace {
    std::map<std::pair<int, Monomial>, std::size_t> rows;

    std::size_t row(int comp, const Monomial& m) {
        auto [it, inserted] = rows.try_emplace({comp, m}, rows.size());
        return it->second;
    }
};

/// Sparse column: row index -> value.
template <class F>
using Column = std::map<std::size_t, F>;

template <class F>
F convert(const GaussRational& g) {
    if constexpr (std::is_same_v<F, GaussRational>) return g;
    else return g.to_complex();
}

/// Column of h * X where h = sum_t s_t m_t is given as (monomial, scalar) pairs.
template <class F>
Column<F> product_column(CoefficientSpace<F>& space, const std::vector<std::pair<Monomial, F>>& h,
                         const PolyVectorField& X) {
    Column<F> col;
    for (int comp = 0; comp < X.dim(); ++comp) {
        for (const auto& [mx, cx] : X[comp].terms()) {
            for (const auto& [mh, ch] : h) {
                Monomial m = mx;
                for (int d = 0; d < X.dim(); ++d) {
                    m.pow[d] += mh.pow[d];
                    m.freq[d] += mh.freq[d];
                }
                F v = convert<F>(cx) * ch;
                auto r = space.row(comp, m);
                auto it = col.find(r);
                if (it == col.end()) col.emplace(r, v);
                else it->second = it->second + v;
            }
        }
    }
    return col;
}

template <class F>
Matrix<F> densify(const std::vector<Column<F>>& cols, std::size_t nrows) {
    Matrix<F> m(nrows, std::vector<F>(cols.size(), F(0)));
    for (std::size_t c = 0; c < cols.size(); ++c)
        for (const auto& [r, v] : cols[c]) m[r][c] = v;
    return m;
}

Monomial unit(int dim) {
    return Monomial{std::vector<int>(dim, 0), std::vector<int>(dim, 0)};
}

/// Monomials of degree <= cap in the ring natural to the domain, by ascending degree.
std::vector<Monomial> capped_basis(const Domain& domain, int cap) {
    const int n = domain.dim;
    std::vector<Monomial> out;
    std::vector<int> idx(n, 0);
    // Enumerate integer vectors with sum |k| <= cap (torus) or k >= 0, sum k <= cap (box).
    const bool torus = domain.kind == DomainKind::Torus;
    std::vector<std::vector<int>> vecs;
    std::vector<int> cur(n, 0);
    auto rec = [&](auto&& self, int axis, int budget) -> void {
        if (axis == n) {
            vecs.push_back(cur);
            return;
        }
        for (int k = torus ? -budget : 0; k <= budget; ++k) {
            cur[axis] = k;
            self(self, axis + 1, budget - std::abs(k));
        }
        cur[axis] = 0;
    };
    rec(rec, 0, cap);
    for (const auto& v : vecs) {
        Monomial m = unit(n);
        (torus ? m.freq : m.pow) = v;
        out.push_back(m);
    }
    std::stable_sort(out.begin(), out.end(), [](const Monomial& a, const Monomial& b) {
        if (a.degree() != b.degree()) return a.degree() < b.degree();
        return a < b;
    });
    return out;
}

PolyVectorField field_from_rows(const std::map<std::pair<int, Monomial>, std::size_t>& rows,
                                const std::vector<GaussRational>& values, int dim) {
    std::vector<Coeff> comps(dim, Coeff(dim));
    for (const auto& [key, r] : rows) comps[key.first].add_term(key.second, values[r]);
    return PolyVectorField(std::move(comps));
}

}  // namespace

StructureResult solve_structure_functions(const FoliationModule& F, int degree_cap) {
    if (degree_cap < 0) throw InputError("degree cap must be >= 0");
    const int N = F.rank();
    const int n = F.dim();
    auto basis = capped_basis(F.domain, degree_cap);
    StructureTable table(N, std::vector<std::vector<Coeff>>(N, std::vector<Coeff>(N, Coeff(n))));
    for (int i = 0; i < N; ++i) {
        for (int j = i + 1; j < N; ++j) {
            PolyVectorField target = bracket(F.generators[i], F.generators[j]);
            CoefficientSpace<GaussRational> space;
            std::vector<Column<GaussRational>> cols;
            std::vector<std::pair<int, const Monomial*>> unknowns;  // (generator, basis function)
            for (const auto& h : basis) {
                for (int k = 0; k < N; ++k) {
                    cols.push_back(product_column<GaussRational>(space, {{h, GaussRational(1)}}, F.generators[k]));
                    unknowns.push_back({k, &h});
                }
            }
            Column<GaussRational> rhs = product_column<GaussRational>(space, {{unit(n), GaussRational(1)}}, target);
            const std::size_t nrows = space.rows.size();
            Matrix<GaussRational> A = densify(cols, nrows);
            std::vector<GaussRational> b(nrows, GaussRational(0));
            for (const auto& [r, v] : rhs) b[r] = v;
            auto sol = linalg::solve(A, b, cols.size());
            if (!sol) {
                // Row space of A^T is the column space of A.
                Matrix<GaussRational> At(cols.size(), std::vector<GaussRational>(nrows, GaussRational(0)));
                for (std::size_t c = 0; c < cols.size(); ++c)
                    for (const auto& [r, v] : cols[c]) At[c][r] = v;
                auto rem = linalg::reduce(At, b, nrows);
                StructureFailure fail;
                fail.i = i;
                fail.j = j;
                fail.bracket = target;
                fail.residual = field_from_rows(space.rows, rem, n);
                fail.degree_cap = degree_cap;
                return {std::nullopt, fail};
            }
            for (std::size_t u = 0; u < unknowns.size(); ++u) {
                const auto& [k, h] = unknowns[u];
                table[i][j][k].add_term(*h, (*sol)[u]);
            }
            for (int k = 0; k < N; ++k) {
                // Real generators admit real structure functions: average with the conjugate solution.
                table[i][j][k] = table[i][j][k].real_part();
                table[j][i][k] = -table[i][j][k];
            }
        }
    }
    if (!structure_identity_holds(F, table)) throw Error("structure function solve produced an invalid table");
    return {table, std::nullopt};
}

int leaf_tangent_dim(const FoliationModule& F, std::span<const double> x) {
    Eigen::MatrixXd A = F.anchor(x);
    if (A.size() == 0) return 0;
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(A);
    const auto& s = svd.singularValues();
    if (s.size() == 0 || s(0) == 0.0) return 0;
    int r = 0;
    for (Eigen::Index i = 0; i < s.size(); ++i)
        if (s(i) > 1e-8 * s(0)) ++r;
    return r;
}

namespace {

/// Vanishing basis at x0: functions g of degree <= cap with g(x0) = 0,
/// each given as a list of (monomial, scalar) pairs.
template <class F>
std::vector<std::vector<std::pair<Monomial, F>>> vanishing_basis(const Domain& domain, std::span<const double> x0,
                                                                 int cap, const std::vector<int>* quarter_turns) {
    const int n = domain.dim;
    std::vector<std::vector<std::pair<Monomial, F>>> out;
    for (const auto& m : capped_basis(domain, cap)) {
        if (m.degree() == 0) continue;
        std::vector<std::pair<Monomial, F>> g;
        if (domain.kind == DomainKind::Box) {
            // (x - x0)^alpha, expanded exactly.
            Coeff c = Coeff::constant(n, GaussRational(1));
            for (int d = 0; d < n; ++d) {
                Coeff shift = Coeff::coordinate(n, d) - Coeff::constant(n, GaussRational::from_double(x0[d]));
                c = c * shift.pow(m.pow[d]);
            }
            for (const auto& [mm, cc] : c.terms()) g.push_back({mm, convert<F>(cc)});
        } else {
            // exp(i k.(x - x0)) - 1
            if constexpr (std::is_same_v<F, GaussRational>) {
                long turns = 0;
                for (int d = 0; d < n; ++d) turns += static_cast<long>(m.freq[d]) * (*quarter_turns)[d];
                // exp(-i k.x0) = i^(-turns)
                int r = static_cast<int>(((-turns) % 4 + 4) % 4);
                static const GaussRational powers[4] = {GaussRational(1), GaussRational::I(), GaussRational(-1),
                                                        -GaussRational::I()};
                g.push_back({m, powers[r]});
            } else {
                double phase = 0.0;
                for (int d = 0; d < n; ++d) phase += m.freq[d] * x0[d];
                g.push_back({m, std::polar(1.0, -phase)});
            }
            g.push_back({unit(n), F(-1)});
        }
        out.push_back(std::move(g));
    }
    return out;
}

/// Real span of the given complex vectors, as rows of doubles (Re and Im parts).
template <class F>
Eigen::MatrixXd real_rows(const Matrix<F>& vecs, std::size_t len) {
    Eigen::MatrixXd out(2 * vecs.size(), len);
    for (std::size_t r = 0; r < vecs.size(); ++r) {
        for (std::size_t c = 0; c < len; ++c) {
            std::complex<double> v;
            if constexpr (std::is_same_v<F, GaussRational>) v = vecs[r][c].to_complex();
            else v = vecs[r][c];
            out(2 * r, c) = v.real();
            out(2 * r + 1, c) = v.imag();
        }
    }
    return out;
}

template <class F>
CotangentFiber fiber_impl(const FoliationModule& Fm, std::span<const double> x, int cap,
                          const std::vector<int>* quarter_turns) {
    const int N = Fm.rank();
    const int n = Fm.dim();
    CoefficientSpace<F> space;
    std::vector<Column<F>> cols;
    for (int k = 0; k < N; ++k) cols.push_back(product_column<F>(space, {{unit(n), F(1)}}, Fm.generators[k]));
    for (const auto& g : vanishing_basis<F>(Fm.domain, x, cap, quarter_turns))
        for (int k = 0; k < N; ++k) cols.push_back(product_column<F>(space, g, Fm.generators[k]));
    Matrix<F> M = densify(cols, space.rows.size());
    Matrix<F> null = linalg::nullspace(M, cols.size(), 1e-10);
    // K_x: the generator-coefficient part of each null vector.
    Matrix<F> kx;
    for (auto& v : null) {
        v.resize(N);
        kx.push_back(std::move(v));
    }

    CotangentFiber out;
    out.point.assign(x.begin(), x.end());
    out.exact = linalg::Field<F>::exact;

    Eigen::MatrixXd real = real_rows(kx, N);
    int kdim = 0;
    if constexpr (linalg::Field<F>::exact) {
        // Exact rank of the real and imaginary parts.
        Matrix<GaussRational> parts;
        for (const auto& v : kx) {
            std::vector<GaussRational> re(N), im(N);
            for (int c = 0; c < N; ++c) {
                re[c] = GaussRational(v[c].re);
                im[c] = GaussRational(v[c].im);
            }
            parts.push_back(re);
            parts.push_back(im);
        }
        kdim = static_cast<int>(linalg::rank(parts, N));
    } else if (real.rows() > 0) {
        Eigen::JacobiSVD<Eigen::MatrixXd> svd(real);
        const auto& s = svd.singularValues();
        for (Eigen::Index i = 0; i < s.size(); ++i)
            if (s(i) > 1e-8 * std::max(1.0, s(0))) ++kdim;
    }

    Eigen::MatrixXd V = Eigen::MatrixXd::Identity(N, N);
    if (real.rows() > 0 && N > 0) {
        Eigen::JacobiSVD<Eigen::MatrixXd> svd(real, Eigen::ComputeFullV);
        V = svd.matrixV();
    }
    out.kernel = V.leftCols(kdim);
    out.basis = V.rightCols(N - kdim);
    out.fiber_dim = N - kdim;
    return out;
}

/// Integers q with x_d = q_d * pi/2 for every axis, if all exist.
std::optional<std::vector<int>> quarter_turn_point(std::span<const double> x) {
    std::vector<int> q;
    for (double v : x) {
        double s = v / (std::numbers::pi / 2);
        double r = std::round(s);
        if (std::abs(s - r) > 1e-12) return std::nullopt;
        q.push_back(static_cast<int>(r));
    }
    return q;
}

}  // namespace

CotangentFiber cotangent_fiber(const FoliationModule& F, std::span<const double> x, int degree_cap) {
    if (degree_cap < 0) throw InputError("degree cap must be >= 0");
    if (!F.domain.contains(x)) throw InputError("point outside the domain");
    if (F.domain.kind == DomainKind::Box) return fiber_impl<GaussRational>(F, x, degree_cap, nullptr);
    if (auto q = quarter_turn_point(x)) return fiber_impl<GaussRational>(F, x, degree_cap, &*q);
    return fiber_impl<std::complex<double>>(F, x, degree_cap, nullptr);
}

int fiber_dimension(const FoliationModule& F, std::span<const double> x, int degree_cap) {
    return cotangent_fiber(F, x, degree_cap).fiber_dim;
}

Eigen::VectorXd pullback_covector(const FoliationModule& F, std::span<const double> x, std::span<const double> xi) {
    if (static_cast<int>(xi.size()) != F.dim()) throw InputError("covector dimension mismatch");
    Eigen::Map<const Eigen::VectorXd> v(xi.data(), static_cast<Eigen::Index>(xi.size()));
    return F.anchor(x).transpose() * v;
}

cplx longitudinal_symbol(const FoliationModule& F, const PolyhomSymbol& a, std::span<const double> x,
                         std::span<const double> eta, int degree_cap) {
    if (a.x_dim() != F.dim() || a.xi_dim() != F.rank())
        throw InputError("longitudinal symbol must live on (x, eta) with eta in (R^N)*");
    if (static_cast<int>(eta.size()) != F.rank()) throw InputError("eta has wrong dimension");
    Eigen::Map<const Eigen::VectorXd> e(eta.data(), static_cast<Eigen::Index>(eta.size()));
    if (e.norm() == 0.0) throw InputError("eta must be nonzero");
    CotangentFiber fib = cotangent_fiber(F, x, degree_cap);
    Eigen::VectorXd proj = fib.basis * (fib.basis.transpose() * e);
    if ((e - proj).norm() > 1e-10 * std::max(1.0, e.norm())) throw InputError("eta does not lie in the fiber F*_x");
    return a.leading().eval(x, eta);
}

EllipticityResult ellipticity_check(const FoliationModule& F, const PolyhomSymbol& a,
                                    const std::vector<std::vector<double>>& sample_points, double tol, int degree_cap,
                                    int mesh_resolution) {
    if (a.x_dim() != F.dim() || a.xi_dim() != F.rank())
        throw InputError("ellipticity_check: symbol must live on (x, eta) with eta in (R^N)*");
    for (const auto& x : sample_points) {
        CotangentFiber fib = cotangent_fiber(F, x, degree_cap);
        if (fib.fiber_dim == 0) continue;
        for (const auto& u : unit_sphere_mesh(fib.fiber_dim, mesh_resolution)) {
            Eigen::Map<const Eigen::VectorXd> uv(u.data(), static_cast<Eigen::Index>(u.size()));
            Eigen::VectorXd eta = fib.basis * uv;
            std::vector<double> ev(eta.data(), eta.data() + eta.size());
            double mag = std::abs(a.leading().eval(x, ev));
            if (!(mag >= tol)) return {false, EllipticityWitness{x, ev, mag}};
        }
    }
    return {true, std::nullopt};
}

PolyhomSymbol laplacian_longitudinal_symbol(int x_dim, int rank) {
    std::vector<SymbolPiece> pieces;
    for (int k = 0; k < rank; ++k) {
        std::vector<int> pow(rank, 0);
        pow[k] = 2;
        pieces.push_back(xi_monomial(Coeff::constant(x_dim, GaussRational(1)), pow));
    }
    return PolyhomSymbol::from_pieces(x_dim, rank, std::move(pieces));
}

PolyhomSymbol flat_vanishing_symbol(int dim) {
    auto ang = std::make_shared<AngularFactor>(
        "exp(-1/<x,omega>^2)", [](std::span<const double> x, std::span<const double> w) -> cplx {
            double s = 0.0;
            for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * w[i];
            if (s == 0.0) return 0.0;
            return std::exp(-1.0 / (s * s));
        });
    SymbolPiece p = xi_norm_power(Coeff::constant(dim, GaussRational(1)), dim, 0);
    p.angular = ang;
    return PolyhomSymbol::from_pieces(dim, dim, {p});
}

PolyhomSymbol radial_pairing_symbol(int dim) {
    std::vector<SymbolPiece> pieces;
    for (int k = 0; k < dim; ++k) {
        std::vector<int> pow(dim, 0);
        pow[k] = 1;
        pieces.push_back(xi_monomial(Coeff::coordinate(dim, k), pow));
    }
    return PolyhomSymbol::from_pieces(dim, dim, std::move(pieces));
}

}  // namespace folpsi
