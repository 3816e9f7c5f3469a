#pragma once

#include "folpsi/foliation.hpp"

#include <optional>
#include <vector>

namespace folpsi {

/// U = {(y, xi) : |xi| <= radius} in M x R^N with s(y, xi) = y and
/// t(y, xi) = exp(sum xi_i X_i)(y), the time-1 flow of the frozen field.
struct IdentityBisubmersion {
    const FoliationModule* module;
    double radius = 0.5;
    int steps = 64;  // classical RK4 steps over [0, 1]

    explicit IdentityBisubmersion(const FoliationModule& F, double r = 0.5, int n_steps = 64);

    std::vector<double> source(std::span<const double> y, std::span<const double> xi) const;
    std::vector<double> target(std::span<const double> y, std::span<const double> xi) const;
    std::vector<double> target(std::span<const double> y, std::span<const double> xi, int n_steps) const;
    /// Points of the discrete trajectory, steps + 1 rows (unwrapped on the torus).
    std::vector<std::vector<double>> trajectory(std::span<const double> y, std::span<const double> xi) const;
};

struct SubmersionWitness {
    std::vector<double> y;
    std::vector<double> xi;
    int rank = 0;
    std::vector<double> singular_values;
};

struct SubmersionResult {
    bool pass = true;
    std::optional<SubmersionWitness> witness;
};

/// Central-difference Jacobian of t in (y, xi); requires rank dim M with
/// singular values above 1e-6 at every sample.
SubmersionResult check_submersion(const IdentityBisubmersion& B,
                                  const std::vector<std::pair<std::vector<double>, std::vector<double>>>& samples,
                                  double fd_step = 1e-5);

/// N - dim F_x; zero means U is minimal at (x, 0).
int minimality_gap(const IdentityBisubmersion& B, std::span<const double> x, int degree_cap = 2);

struct ConvergenceReport {
    std::vector<int> steps;
    std::vector<double> differences;  // |t_n - t_2n| for n in steps
    double order = 0.0;               // mean of log2 ratios of consecutive differences
};

/// Richardson estimate of the integrator's order at one (y, xi).
ConvergenceReport convergence_order(const IdentityBisubmersion& B, std::span<const double> y,
                                    std::span<const double> xi, std::vector<int> steps = {4, 8, 16, 32});

}  // namespace folpsi
