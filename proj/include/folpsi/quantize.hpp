#pragma once

#include "folpsi/grid.hpp"
#include "folpsi/polysym.hpp"

#include <functional>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

namespace folpsi {

/// How the frequency line xi_j = -G/2 is treated. Keep quantizes it like any
/// other frequency; Zero drops it (real-valued differentiation matrices).
enum class NyquistPolicy { Keep, Zero };

struct QuantizeOptions {
    NyquistPolicy nyquist = NyquistPolicy::Keep;
    std::size_t dense_cap = 4096;
    /// apply_symbol skips Fourier coefficients with |fhat| <= sparsity * max|fhat|.
    /// The default only skips exact zeros.
    double sparsity = 0.0;
};

/// A general multiplier a(x, xi) with a declared order, for symbols outside
/// the polyhomogeneous class such as (1 + xi^2)^(-1).
struct Multiplier {
    int x_dim = 1;
    int xi_dim = 1;
    int order = 0;
    std::string label;
    std::function<cplx(std::span<const double> x, std::span<const double> xi)> fn;

    static Multiplier from_symbol(const PolyhomSymbol& a, std::string label = "symbol");
    /// coeff(x) xi^xi_pow (1 + |xi|^2)^(s/2), of order |xi_pow| + s.
    static Multiplier bracket(const Coeff& coeff, std::vector<int> xi_pow, int s);
    /// x-independent multiplier f(|xi|^2) on R^dim.
    static Multiplier radial(int dim, int order, std::string label, std::function<cplx(double)> f_of_norm2);
};

/// x -> sum_xi a(x, xi) fhat(xi) exp(i<x,xi>), with fhat normalized so that
/// a == 1 is the identity. One forward transform, then per-x frequency sums.
GridFunction apply_symbol(const PolyhomSymbol& a, const GridFunction& f, const QuantizeOptions& opts = {});

/// Materialized matrix of apply_symbol. Throws CapExceededError above opts.dense_cap rows.
GridOperator quantize_dense(const PolyhomSymbol& a, const PeriodicGrid& grid, const QuantizeOptions& opts = {});

GridFunction apply_multiplier(const Multiplier& a, const GridFunction& f, const QuantizeOptions& opts = {});
GridOperator quantize_dense(const Multiplier& a, const PeriodicGrid& grid, const QuantizeOptions& opts = {});

struct RecoveryResult {
    cplx value;                  // extrapolated to tau -> infinity
    std::vector<int> taus;
    std::vector<cplx> sequence;  // tau^-m P(e^{i tau phi} chi)(x) per tau
};

/// Recovers sigma_m(x, xi_dir) from the action of P on localized oscillations:
/// tau^-m P(e^{i tau phi} chi)(x) with phi(u) = <xi_dir, u - x> (wrapped) and
/// chi a periodic Gaussian of standard deviation `localizer_width` centered
/// at x. With symbols normalized so that d/dx has symbol i xi, this tends to
/// sigma_m(x, xi_dir). `x` must be a grid point. The value is a polynomial
/// extrapolation in 1/tau over the schedule.
RecoveryResult recover_principal_symbol(const GridOperator& P, int m, std::span<const double> x,
                                        std::span<const int> xi_dir, std::span<const int> taus,
                                        double localizer_width = 0.4);

inline constexpr double kOrderMinusInfinity = -std::numeric_limits<double>::infinity();

using OperatorAction = std::function<GridFunction(const GridFunction&)>;

/// Log-log slope of ||P e_xi|| against |xi| over the given frequencies,
/// e_xi the unit plane wave. Returns kOrderMinusInfinity when every norm is
/// below 1e-14.
double estimate_order(const GridOperator& P, const std::vector<std::vector<int>>& freqs);
double estimate_order(const OperatorAction& P, const PeriodicGrid& grid, const std::vector<std::vector<int>>& freqs);

/// Frequencies k * e_axis for each k in `ks`.
std::vector<std::vector<int>> axis_frequencies(int dim, const std::vector<int>& ks, int axis = 0);

GridOperator adjoint(const GridOperator& P);

/// Least-squares slope of log(values) against log(abscissae).
double loglog_slope(const std::vector<double>& abscissae, const std::vector<double>& values);

}  // namespace folpsi
