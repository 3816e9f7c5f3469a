#pragma once

#include "folpsi/coeff.hpp"

#include <complex>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace folpsi {

using cplx = std::complex<double>;

/// Smooth radial cutoff: 0 for r < 1/2, 1 for r >= 1, C^3 polynomial spline between.
double radial_cutoff(double r);

/// Mollifier profile on R_+: 1 on [0, 1], 0 on [2, inf), smooth between.
double mollifier_profile(double s);
inline constexpr double kMollifierPlateau = 1.0;
inline constexpr double kMollifierSupport = 2.0;

/// A factor depending jointly on x and the unit covector omega = xi/|xi|.
/// Used for leading terms that leave the exact ring (reciprocals, square
/// roots) and for closed-form symbols such as exp(-1/<x,omega>^2).
class AngularFactor {
public:
    using Fn = std::function<cplx(std::span<const double> x, std::span<const double> omega)>;
    AngularFactor(std::string label, Fn fn) : label_(std::move(label)), fn_(std::move(fn)) {}
    const std::string& label() const { return label_; }
    cplx operator()(std::span<const double> x, std::span<const double> omega) const { return fn_(x, omega); }

private:
    std::string label_;
    Fn fn_;
};
using AngularPtr = std::shared_ptr<const AngularFactor>;

/// Real weight w(x), e.g. a spatial cutoff transplanting box-domain fields.
class Weight {
public:
    using Fn = std::function<double(std::span<const double> x)>;
    Weight(std::string label, Fn fn) : label_(std::move(label)), fn_(std::move(fn)) {}
    const std::string& label() const { return label_; }
    double operator()(std::span<const double> x) const { return fn_(x); }

private:
    std::string label_;
    Fn fn_;
};
using WeightPtr = std::shared_ptr<const Weight>;

/// coeff(x) * weight(x) * xi^xi_pow * |xi|^norm_pow * angular(x, xi/|xi|)
struct SymbolPiece {
    Coeff coeff;
    std::vector<int> xi_pow;
    int norm_pow = 0;
    AngularPtr angular;
    WeightPtr weight;

    int degree() const;
    /// No closure factors; comparable and serializable exactly.
    bool algebraic() const { return !angular && !weight; }
    std::string xi_str() const;
};

/// Positively homogeneous term a_k of a fixed degree, as a sum of pieces.
class HomogeneousTerm {
public:
    HomogeneousTerm(int degree, int x_dim, int xi_dim) : degree_(degree), x_dim_(x_dim), xi_dim_(xi_dim) {}

    int degree() const { return degree_; }
    int x_dim() const { return x_dim_; }
    int xi_dim() const { return xi_dim_; }
    const std::vector<SymbolPiece>& pieces() const { return pieces_; }
    bool is_zero() const { return pieces_.empty(); }

    /// Appends a piece; throws InputError if its degree or dimensions differ.
    HomogeneousTerm& add(SymbolPiece piece);

    /// Homogeneous value. At xi = 0 only pieces polynomial in xi contribute.
    cplx eval(std::span<const double> x, std::span<const double> xi) const;

    HomogeneousTerm conj() const;
    /// Merges algebraic pieces sharing a xi factor and drops zeros.
    HomogeneousTerm canonical() const;
    friend HomogeneousTerm operator*(const HomogeneousTerm& a, const HomogeneousTerm& b);
    /// Exact comparison of canonical forms; closure pieces compare by identity.
    friend bool operator==(const HomogeneousTerm& a, const HomogeneousTerm& b);

private:
    int degree_;
    int x_dim_;
    int xi_dim_;
    std::vector<SymbolPiece> pieces_;
};

enum class CutoffKind { Standard, None };

class BoundSymbol;

/// Finite truncation a ~ chi(xi) * sum_k a_k of a classical symbol.
/// Terms carry degrees order, order-1, ... (depth >= 1). `x_dim` and
/// `xi_dim` differ for longitudinal symbols in generator coordinates.
class PolyhomSymbol {
public:
    PolyhomSymbol(int x_dim, int xi_dim, int order, std::vector<HomogeneousTerm> terms,
                  CutoffKind cutoff = CutoffKind::Standard);

    static PolyhomSymbol constant(int dim, const GaussRational& c, CutoffKind cutoff = CutoffKind::None);
    /// Single-term symbol built from the given pieces (all of one degree).
    static PolyhomSymbol from_pieces(int x_dim, int xi_dim, std::vector<SymbolPiece> pieces,
                                     CutoffKind cutoff = CutoffKind::Standard);

    int x_dim() const { return x_dim_; }
    int xi_dim() const { return xi_dim_; }
    int order() const { return order_; }
    int depth() const { return static_cast<int>(terms_.size()); }
    const std::vector<HomogeneousTerm>& terms() const { return terms_; }
    const HomogeneousTerm& leading() const { return terms_.front(); }
    CutoffKind cutoff() const { return cutoff_; }
    double mollifier_scale() const { return mollifier_n_; }
    bool is_x_independent() const;

    cplx eval(std::span<const double> x, std::span<const double> xi) const;
    BoundSymbol bind(std::span<const double> x) const;

    PolyhomSymbol principal() const;
    PolyhomSymbol with_cutoff(CutoffKind cutoff) const;
    PolyhomSymbol conj() const;
    PolyhomSymbol scaled(const GaussRational& s) const;

    /// Structured text (JSON) form: order, cutoff, and per piece
    /// (degree, coefficient expression, xi expression).
    std::string serialize(const std::vector<std::string>& names) const;
    std::string serialize() const;
    /// Inverse of serialize for algebraic symbols; closure factors cannot be
    /// reconstructed and raise InputError.
    static PolyhomSymbol deserialize(const std::string& text, const std::vector<std::string>& names);

    friend PolyhomSymbol mollify(const PolyhomSymbol& a, double n);

private:
    int x_dim_;
    int xi_dim_;
    int order_;
    std::vector<HomogeneousTerm> terms_;
    CutoffKind cutoff_;
    double mollifier_n_ = 0.0;
};

/// A symbol frozen at one base point, for fast evaluation over many xi.
class BoundSymbol {
public:
    cplx operator()(std::span<const double> xi) const;

private:
    friend class PolyhomSymbol;
    struct Piece {
        cplx factor;
        std::vector<int> xi_pow;
        int norm_pow;
        AngularPtr angular;
        bool xi_polynomial;
    };
    std::vector<double> x_;
    std::vector<Piece> pieces_;
    CutoffKind cutoff_;
    double mollifier_n_;
};

/// Points x and unit directions omega used for pointwise leading-term checks.
struct SampleSet {
    std::vector<std::vector<double>> points;
    std::vector<std::vector<double>> directions;
};

/// Deterministic mesh of the unit sphere in R^d (d >= 1).
std::vector<std::vector<double>> unit_sphere_mesh(int d, int resolution = 24);

PolyhomSymbol symbol_product(const PolyhomSymbol& a, const PolyhomSymbol& b, int max_depth = 4);
PolyhomSymbol symbol_sum(const PolyhomSymbol& a, const PolyhomSymbol& b, int max_depth = 4);
PolyhomSymbol principal_inverse(const PolyhomSymbol& a, const SampleSet& samples, double tol = 1e-10);
PolyhomSymbol principal_sqrt(const PolyhomSymbol& a, const SampleSet& samples, double tol = 1e-12);
PolyhomSymbol mollify(const PolyhomSymbol& a, double n);
/// Degree-wise accumulation of a finite sequence with orders m, m-1, ...
PolyhomSymbol asymptotic_sum(const std::vector<PolyhomSymbol>& inputs, int max_depth = 4);

// Small builders used throughout tests and scenarios.

/// coeff(x) * xi^pow
SymbolPiece xi_monomial(Coeff coeff, std::vector<int> pow);
/// coeff(x) * |xi|^p
SymbolPiece xi_norm_power(Coeff coeff, int xi_dim, int p);
/// coeff(x) times a xi expression such as "xi1^2*xi2", "|xi|^-1" or "1".
SymbolPiece parse_xi_expression(const std::string& text, Coeff coeff, int xi_dim);
/// Groups pieces by degree into consecutive terms; the order is the largest degree.
PolyhomSymbol symbol_from_pieces(int x_dim, int xi_dim, std::vector<SymbolPiece> pieces,
                                 CutoffKind cutoff = CutoffKind::Standard);

}  // namespace folpsi
