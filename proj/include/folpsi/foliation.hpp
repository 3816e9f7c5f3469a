#pragma once

#include "folpsi/coeff.hpp"
#include "folpsi/polysym.hpp"

#include <Eigen/Dense>

#include <optional>
#include <string>
#include <vector>

namespace folpsi {

enum class DomainKind { Torus, Box };

/// Torus [0, 2pi)^n or an axis-aligned box.
struct Domain {
    DomainKind kind = DomainKind::Torus;
    int dim = 1;
    std::vector<double> lower;
    std::vector<double> upper;

    static Domain torus(int dim);
    static Domain box(std::vector<double> lower, std::vector<double> upper);
    bool contains(std::span<const double> x) const;
};

/// Vector field with exact coefficient functions.
class PolyVectorField {
public:
    PolyVectorField() = default;
    explicit PolyVectorField(std::vector<Coeff> components);
    static PolyVectorField zero(int dim);
    /// The coordinate field d/dx_axis.
    static PolyVectorField coordinate(int dim, int axis);

    int dim() const { return static_cast<int>(components_.size()); }
    const Coeff& operator[](int j) const { return components_.at(j); }
    const std::vector<Coeff>& components() const { return components_; }
    bool is_zero() const;
    bool has_polynomial_part() const;
    int degree() const;

    /// Real parts of the components at x.
    std::vector<double> eval(std::span<const double> x) const;
    Coeff divergence() const;
    PolyVectorField real_part() const;

    friend PolyVectorField operator+(const PolyVectorField& a, const PolyVectorField& b);
    friend PolyVectorField operator-(const PolyVectorField& a, const PolyVectorField& b);
    friend PolyVectorField operator*(const Coeff& f, const PolyVectorField& v);
    friend bool operator==(const PolyVectorField& a, const PolyVectorField& b);

    std::string str(const std::vector<std::string>& names) const;

private:
    std::vector<Coeff> components_;
};

/// [X, Y]^i = X(Y^i) - Y(X^i)
PolyVectorField bracket(const PolyVectorField& X, const PolyVectorField& Y);

/// f[i][j][k] with [X_i, X_j] = sum_k f_ijk X_k.
using StructureTable = std::vector<std::vector<std::vector<Coeff>>>;

/// The module F generated by finitely many vector fields.
struct FoliationModule {
    Domain domain;
    std::vector<PolyVectorField> generators;
    std::vector<std::string> names;
    std::optional<StructureTable> structure;

    FoliationModule(Domain d, std::vector<PolyVectorField> gens, std::vector<std::string> coordinate_names = {});

    int dim() const { return domain.dim; }
    int rank() const { return static_cast<int>(generators.size()); }
    /// n x N matrix [X_1(x) ... X_N(x)].
    Eigen::MatrixXd anchor(std::span<const double> x) const;
    /// True iff every recorded f_ijk satisfies the bracket identity exactly.
    bool structure_holds() const;
};

struct StructureFailure {
    int i = 0;
    int j = 0;
    PolyVectorField bracket;   // [X_i, X_j], not in the span within the cap
    PolyVectorField residual;  // its normal form modulo the capped span (nonzero)
    int degree_cap = 0;
};

/// Success certifies closure within the degree cap; failure is inconclusive
/// (a larger cap might succeed) and carries the unexpressed bracket.
struct StructureResult {
    std::optional<StructureTable> table;
    std::optional<StructureFailure> failure;
    bool ok() const { return table.has_value(); }
};

StructureResult solve_structure_functions(const FoliationModule& F, int degree_cap);
bool structure_identity_holds(const FoliationModule& F, const StructureTable& table);

/// Numerical rank of the anchor matrix A(x) (singular values > 1e-8 * largest).
int leaf_tangent_dim(const FoliationModule& F, std::span<const double> x);

/// Basis of F*_x as a subspace of (R^N)*, with K_x the generator
/// combinations that lie in I_x F (within the degree cap).
struct CotangentFiber {
    std::vector<double> point;
    Eigen::MatrixXd basis;   // N x fiber_dim, orthonormal columns
    Eigen::MatrixXd kernel;  // N x dim K_x, orthonormal columns
    int fiber_dim = 0;
    bool exact = true;       // computed in exact arithmetic
};

CotangentFiber cotangent_fiber(const FoliationModule& F, std::span<const double> x, int degree_cap);
/// N - dim K_x. Nonincreasing in degree_cap.
int fiber_dimension(const FoliationModule& F, std::span<const double> x, int degree_cap);

/// Base covector xi in T*_x M pulled back to generator coordinates: A(x)^T xi.
Eigen::VectorXd pullback_covector(const FoliationModule& F, std::span<const double> x, std::span<const double> xi);

/// Leading term of a (x, eta)-symbol at eta in F*_x. Throws InputError if eta
/// is zero or leaves the fiber (projection residual above 1e-10).
cplx longitudinal_symbol(const FoliationModule& F, const PolyhomSymbol& a, std::span<const double> x,
                         std::span<const double> eta, int degree_cap = 2);

struct EllipticityWitness {
    std::vector<double> x;
    std::vector<double> eta;
    double magnitude = 0.0;
};

struct EllipticityResult {
    bool pass = true;
    std::optional<EllipticityWitness> witness;
};

/// Checks |sigma_m(x, eta)| >= tol over a unit-sphere mesh of each F*_x.
EllipticityResult ellipticity_check(const FoliationModule& F, const PolyhomSymbol& a,
                                    const std::vector<std::vector<double>>& sample_points, double tol,
                                    int degree_cap = 2, int mesh_resolution = 24);

/// sum_k eta_k^2 on (x, eta) with eta in (R^N)*: the longitudinal symbol of the Laplacian.
PolyhomSymbol laplacian_longitudinal_symbol(int x_dim, int rank);

/// exp(-1/<x,omega>^2) off {<x,eta> = 0} and 0 on it (omega = eta/|eta|), order 0.
/// Requires x_dim == xi_dim.
PolyhomSymbol flat_vanishing_symbol(int dim);

/// <x, eta> on (x, eta), order 1.
PolyhomSymbol radial_pairing_symbol(int dim);

}  // namespace folpsi
