#pragma once

#include "folpsi/foliation.hpp"
#include "folpsi/quantize.hpp"

#include <optional>
#include <string>
#include <vector>

namespace folpsi {

/// An operator realized on a grid together with its principal symbol.
struct PdoElement {
    PolyhomSymbol symbol;
    GridOperator op;
    int order = 0;
};

PdoElement identity_element(const PeriodicGrid& grid);
/// Op(a) materialized densely; the order is a's order.
PdoElement quantized_element(const PolyhomSymbol& a, const PeriodicGrid& grid, const QuantizeOptions& opts = {});

/// f -> sum_j w X^j d_j f by spectral differentiation; symbol i w <X, xi>.
PdoElement vector_field_op(const PolyVectorField& X, const PeriodicGrid& grid, WeightPtr weight = nullptr);

PdoElement compose(const PdoElement& P, const PdoElement& Q);
PdoElement adjoint_op(const PdoElement& P);
/// P + s Q. The order is the larger one; equal orders add leading terms.
PdoElement add(const PdoElement& P, const PdoElement& Q, cplx s = 1.0);
/// [P, Q] = PQ - QP with order m_P + m_Q - 1.
PdoElement commutator(const PdoElement& P, const PdoElement& Q);

/// Smooth radial cutoff in x: 1 for |x - center| <= inner, 0 for |x - center| >= outer.
struct SpatialCutoff {
    double inner = 1.5;
    double outer = 3.0;
    std::vector<double> center;  // empty means the origin
};

WeightPtr spatial_cutoff_weight(const SpatialCutoff& c, int dim);

/// sum_k A_k^* A_k with A_k = vector_field_op(chi X_k). Box domains need a
/// cutoff supported inside the box; the grid is then the box's periodization.
PdoElement laplacian(const FoliationModule& F, const PeriodicGrid& grid,
                     const std::optional<SpatialCutoff>& cutoff = std::nullopt);

/// -sum_j d_j(a d_j) as sum_j D_j^* a D_j on the grid; principal symbol a |xi|^2.
PdoElement divergence_form(const Coeff& a, const PeriodicGrid& grid);

/// One row of an iteration trace: the measured residual orders after
/// iteration `iteration`.
struct OrderRow {
    int iteration = 0;
    double left = 0.0;   // I - QP (parametrix) or P - Q^2 (square root)
    double right = 0.0;  // I - PQ (parametrix); unused for square roots
};

struct IterationOptions {
    /// Plane-wave frequencies (along axis 0) used to measure residual orders.
    /// Empty selects {4, ..., G/8}.
    std::vector<int> band;
    /// Grid points used for ellipticity and positivity sampling; empty uses
    /// a stride over the grid.
    std::vector<std::vector<double>> sample_points;
    int sphere_resolution = 24;
};

struct IterationResult {
    PdoElement Q;
    std::vector<OrderRow> trace;
};

/// Q^(N) = sum_{k<=N} Q_k with Q_0 = Op(chi / sigma_m(P)) and
/// Q_k = Q_{k-1}(I - P Q_0), so that I - Q^(N) P = (I - Q_0 P)^(N+1).
IterationResult parametrix(const PdoElement& P, int iterations, const IterationOptions& opts = {});

/// Self-adjoint Q with P - Q^2 of decreasing order. Q_0 = sym Op(chi sqrt sigma_2m(P)),
/// Q_n = sym(D (P - S_n^2)) with S_n = Q_0 + ... + Q_{n-1} and D = Op(chi / 2 sigma_m(Q_0)).
IterationResult sqrt_op(const PdoElement& P, int iterations, const IterationOptions& opts = {});

/// max |T^2 - T| for T = [[R, Q], [PR, PQ]], R = I - QP.
double idempotent_check(const PdoElement& P, const PdoElement& Q);

/// max |A - A^*| entrywise.
double hermitian_defect(const GridOperator& A);

/// Measured-order band default for a grid: {4, ..., max(5, G/8)}.
std::vector<int> default_band(const PeriodicGrid& grid);

}  // namespace folpsi
