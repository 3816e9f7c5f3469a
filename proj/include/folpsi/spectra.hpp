#pragma once

#include "folpsi/calculus.hpp"
#include "folpsi/quantize.hpp"

#include <string>
#include <vector>

namespace folpsi {

struct BoundednessReport {
    std::string symbol_id;
    std::vector<int> grids;
    std::vector<double> norms;  // largest singular value per grid
    double max_ratio = 0.0;     // max over consecutive grids of max(n1/n0, n0/n1)
    bool pass = false;
};

/// Operator norm of quantize_dense(a) under refinement; passes when the
/// largest consecutive ratio is at most `threshold`. Needs >= 3 grids.
BoundednessReport boundedness_scan(const Multiplier& a, const std::vector<int>& grids,
                                   const QuantizeOptions& opts = {}, double threshold = 1.25);

struct DecayReport {
    std::string symbol_id;
    std::vector<int> cutoffs;
    std::vector<double> norms;  // norm of Op(a) restricted to plane waves with |xi| >= K
    double slope = 0.0;
    bool pass = false;
};

/// High-frequency decay of a negative-order multiplier; passes when the
/// fitted slope is at most order + slack.
DecayReport negative_order_decay(const Multiplier& a, const PeriodicGrid& grid, const std::vector<int>& cutoffs,
                                 const QuantizeOptions& opts = {}, double slack = 0.5);

/// Lowest `count` eigenvalues (all when count == 0), ascending. Throws
/// NotHermitianError when the Hermitian defect is >= tol.
std::vector<double> spectrum(const GridOperator& P, std::size_t count = 0, double tol = 1e-8);
/// Eigenvalues of a general operator sorted by real part, then imaginary part.
std::vector<cplx> spectrum_general(const GridOperator& P, std::size_t count = 0);

/// Anisotropic Gaussian wave packet exp(i<xi0, u>) g(u - x0), narrow along
/// xi0 and wide across it, normalized to unit grid norm.
GridFunction wave_packet(const PeriodicGrid& grid, std::span<const double> x0, std::span<const int> xi0,
                         double width_parallel, double width_perp);

struct PacketProbe {
    std::vector<double> x0;
    std::vector<int> xi0;
    double symbol_value = 0.0;  // |a(x0, xi0)|
    double response = 0.0;      // ||Op(a) packet||
};

struct ExtensionReport {
    std::string symbol_id;
    PacketProbe on;   // packet concentrated where the symbol vanishes
    PacketProbe off;  // packet concentrated away from it
    double order_estimate = 0.0;
    bool pass = false;  // on.response < 0.1 and off.response >= off.symbol_value / 2
};

struct PacketShape {
    double width_parallel = 0.2;
    double width_perp = 0.8;
    double sparsity = 1e-10;
};

ExtensionReport extension_report(const PolyhomSymbol& a, const PeriodicGrid& grid, const PacketProbe& on,
                                 const PacketProbe& off, const PacketShape& shape = {},
                                 const std::vector<int>& order_band = {});

}  // namespace folpsi
