#pragma once

#include <Eigen/Dense>

#include <complex>
#include <span>
#include <vector>

namespace folpsi {

using cplx = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;

/// Flat torus [origin, origin + 2pi)^n sampled with G points per axis.
/// Frequencies are the integers in [-G/2, G/2). Flat index runs axis 0 fastest.
class PeriodicGrid {
public:
    PeriodicGrid(int dim, int points_per_axis, std::vector<double> origin = {});

    int dim() const { return dim_; }
    int points_per_axis() const { return g_; }
    int nyquist() const { return g_ / 2; }
    std::size_t size() const { return size_; }
    double spacing() const;
    /// Uniform quadrature weight (2pi/G)^n of the grid inner product.
    double cell_weight() const;
    const std::vector<double>& origin() const { return origin_; }

    std::vector<int> multi_index(std::size_t flat) const;
    std::size_t flat_index(std::span<const int> multi) const;
    std::vector<double> point(std::size_t flat) const;
    /// Flat index of the grid point at x (within 1e-9 per axis, modulo 2pi), or -1.
    long find_point(std::span<const double> x) const;

    std::vector<int> frequency(std::size_t flat) const;
    std::size_t frequency_index(std::span<const int> xi) const;
    /// True if some component equals -G/2.
    bool on_nyquist_line(std::span<const int> xi) const;

    /// exp(i <x_flat, xi_flat>) computed from integer phases.
    cplx character(std::size_t x_flat, std::size_t xi_flat) const;

    friend bool operator==(const PeriodicGrid& a, const PeriodicGrid& b) {
        return a.dim_ == b.dim_ && a.g_ == b.g_ && a.origin_ == b.origin_;
    }

private:
    int dim_;
    int g_;
    std::size_t size_;
    std::vector<double> origin_;
    std::vector<cplx> roots_;  // exp(2 pi i k / G)
};

/// Complex samples over the grid.
struct GridFunction {
    PeriodicGrid grid;
    CVector values;

    GridFunction(PeriodicGrid g, CVector v);
    explicit GridFunction(PeriodicGrid g) : GridFunction(g, CVector::Zero(static_cast<Eigen::Index>(g.size()))) {}

    template <class F>
    static GridFunction sample(const PeriodicGrid& g, F&& f) {
        GridFunction out(g);
        for (std::size_t i = 0; i < g.size(); ++i) out.values[static_cast<Eigen::Index>(i)] = f(g.point(i));
        return out;
    }
};

/// Dense operator on grid functions. The adjoint is taken against the
/// uniform-weight inner product, which reduces to the conjugate transpose.
struct GridOperator {
    PeriodicGrid grid;
    CMatrix matrix;

    GridOperator(PeriodicGrid g, CMatrix m);
    static GridOperator identity(const PeriodicGrid& g);
    static GridOperator multiplication(const PeriodicGrid& g, const CVector& weights);

    GridFunction operator()(const GridFunction& f) const;
};

GridOperator operator*(const GridOperator& a, const GridOperator& b);
GridOperator operator+(const GridOperator& a, const GridOperator& b);
GridOperator operator-(const GridOperator& a, const GridOperator& b);
GridOperator operator*(cplx s, const GridOperator& a);

/// Normalized forward transform: fhat(xi) = G^-n sum_x f(x) exp(-i<x,xi>).
CVector forward_dft(const PeriodicGrid& g, const CVector& f);
/// Inverse of forward_dft: f(x) = sum_xi fhat(xi) exp(i<x,xi>).
CVector inverse_dft(const PeriodicGrid& g, const CVector& fhat);

cplx inner(const GridFunction& f, const GridFunction& g);
double l2_norm(const GridFunction& f);
double max_norm(const CVector& v);

/// exp(i<x,xi>) / (2pi)^{n/2}, unit norm in the grid inner product.
GridFunction plane_wave(const PeriodicGrid& g, std::span<const int> xi);

/// Spectral derivative along one axis: F^-1 diag(i xi_axis) F.
CMatrix spectral_derivative_matrix(const PeriodicGrid& g, int axis, bool zero_nyquist = false);

}  // namespace folpsi
