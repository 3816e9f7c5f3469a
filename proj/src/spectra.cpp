#include "folpsi/spectra.hpp"

#include "folpsi/error.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace folpsi {

namespace {

double largest_singular_value(const CMatrix& A) {
    if (A.size() == 0) return 0.0;
    Eigen::BDCSVD<CMatrix> svd(A);
    return svd.singularValues()(0);
}

double wrapped(double d) {
    d = std::fmod(d + std::numbers::pi, 2 * std::numbers::pi);
    if (d < 0) d += 2 * std::numbers::pi;
    return d - std::numbers::pi;
}

}  // namespace

BoundednessReport boundedness_scan(const Multiplier& a, const std::vector<int>& grids, const QuantizeOptions& opts,
                                   double threshold) {
    if (grids.size() < 3) throw InputError("boundedness_scan needs at least three grids");
    BoundednessReport r;
    r.symbol_id = a.label;
    r.grids = grids;
    for (int G : grids) {
        PeriodicGrid g(a.x_dim, G);
        double s = largest_singular_value(quantize_dense(a, g, opts).matrix);
        r.norms.push_back(s);
    }
    for (std::size_t i = 0; i + 1 < r.norms.size(); ++i) {
        double lo = std::min(r.norms[i], r.norms[i + 1]);
        double hi = std::max(r.norms[i], r.norms[i + 1]);
        r.max_ratio = std::max(r.max_ratio, lo > 0 ? hi / lo : std::numeric_limits<double>::infinity());
    }
    bool positive = std::all_of(r.norms.begin(), r.norms.end(), [](double v) { return v > 0; });
    r.pass = positive && r.max_ratio <= threshold;
    return r;
}

DecayReport negative_order_decay(const Multiplier& a, const PeriodicGrid& grid, const std::vector<int>& cutoffs,
                                 const QuantizeOptions& opts, double slack) {
    if (a.order >= 0) throw InputError("negative_order_decay needs a negative order");
    if (cutoffs.size() < 2) throw InputError("negative_order_decay needs at least two cutoffs");
    for (std::size_t i = 0; i < cutoffs.size(); ++i) {
        if (cutoffs[i] <= 0 || cutoffs[i] >= grid.nyquist())
            throw InputError("cutoff " + std::to_string(cutoffs[i]) + " outside (0, Nyquist)");
        if (i > 0 && cutoffs[i] <= cutoffs[i - 1]) throw InputError("cutoffs must increase");
    }
    GridOperator A = quantize_dense(a, grid, opts);
    DecayReport r;
    r.symbol_id = a.label;
    r.cutoffs = cutoffs;
    const double sqrt_w = std::sqrt(grid.cell_weight());
    for (int K : cutoffs) {
        std::vector<std::size_t> cols;
        for (std::size_t k = 0; k < grid.size(); ++k) {
            auto xi = grid.frequency(k);
            double r2 = 0.0;
            for (int v : xi) r2 += double(v) * v;
            if (std::sqrt(r2) >= K) cols.push_back(k);
        }
        CMatrix E(static_cast<Eigen::Index>(grid.size()), static_cast<Eigen::Index>(cols.size()));
        for (std::size_t c = 0; c < cols.size(); ++c)
            E.col(static_cast<Eigen::Index>(c)) = plane_wave(grid, grid.frequency(cols[c])).values;
        r.norms.push_back(sqrt_w * largest_singular_value(A.matrix * E));
    }
    bool any = std::any_of(r.norms.begin(), r.norms.end(), [](double v) { return v >= 1e-14; });
    std::vector<double> ks(cutoffs.begin(), cutoffs.end());
    r.slope = any ? loglog_slope(ks, r.norms) : kOrderMinusInfinity;
    r.pass = r.slope <= a.order + slack;
    return r;
}

std::vector<double> spectrum(const GridOperator& P, std::size_t count, double tol) {
    double defect = hermitian_defect(P);
    if (!(defect < tol)) throw NotHermitianError("operator is not Hermitian (defect " + std::to_string(defect) + ")");
    CMatrix H = 0.5 * (P.matrix + P.matrix.adjoint());
    Eigen::SelfAdjointEigenSolver<CMatrix> es(H, Eigen::EigenvaluesOnly);
    const auto& ev = es.eigenvalues();
    std::size_t n = count == 0 ? static_cast<std::size_t>(ev.size()) : std::min<std::size_t>(count, ev.size());
    return {ev.data(), ev.data() + n};
}

std::vector<cplx> spectrum_general(const GridOperator& P, std::size_t count) {
    Eigen::ComplexEigenSolver<CMatrix> es(P.matrix, false);
    std::vector<cplx> ev(es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size());
    std::sort(ev.begin(), ev.end(), [](cplx a, cplx b) {
        return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
    });
    if (count != 0 && count < ev.size()) ev.resize(count);
    return ev;
}

GridFunction wave_packet(const PeriodicGrid& grid, std::span<const double> x0, std::span<const int> xi0,
                         double width_parallel, double width_perp) {
    const int n = grid.dim();
    if (static_cast<int>(x0.size()) != n || static_cast<int>(xi0.size()) != n)
        throw InputError("wave packet center has wrong dimension");
    if (!(width_parallel > 0 && width_perp > 0)) throw InputError("wave packet widths must be positive");
    double norm = 0.0;
    for (int v : xi0) norm += double(v) * v;
    norm = std::sqrt(norm);
    if (norm == 0.0) throw InputError("wave packet frequency must be nonzero");
    GridFunction f = GridFunction::sample(grid, [&](const std::vector<double>& u) {
        double par = 0.0, total = 0.0, phase = 0.0;
        for (int d = 0; d < n; ++d) {
            double du = wrapped(u[d] - x0[d]);
            par += du * xi0[d] / norm;
            total += du * du;
            phase += xi0[d] * u[d];
        }
        double perp2 = std::max(0.0, total - par * par);
        double env = std::exp(-par * par / (2 * width_parallel * width_parallel) -
                              perp2 / (2 * width_perp * width_perp));
        return env * std::polar(1.0, phase);
    });
    f.values /= l2_norm(f);
    return f;
}

ExtensionReport extension_report(const PolyhomSymbol& a, const PeriodicGrid& grid, const PacketProbe& on,
                                 const PacketProbe& off, const PacketShape& shape,
                                 const std::vector<int>& order_band) {
    if (a.x_dim() != grid.dim() || a.xi_dim() != grid.dim())
        throw InputError("extension_report: symbol and grid dimensions differ");
    QuantizeOptions opts;
    opts.sparsity = shape.sparsity;
    auto probe = [&](PacketProbe p) {
        std::vector<double> xi(p.xi0.begin(), p.xi0.end());
        p.symbol_value = std::abs(a.eval(p.x0, xi));
        GridFunction f = wave_packet(grid, p.x0, p.xi0, shape.width_parallel, shape.width_perp);
        p.response = l2_norm(apply_symbol(a, f, opts));
        return p;
    };
    ExtensionReport r;
    r.symbol_id = a.leading().pieces().empty() ? "0" : a.serialize();
    r.on = probe(on);
    r.off = probe(off);
    std::vector<int> band = order_band;
    if (band.empty())
        for (int k = 2; k < grid.nyquist(); k *= 2) band.push_back(k);
    // Plane waves along the diagonal direction of the first two axes, or axis 0 in 1-D.
    std::vector<std::vector<int>> freqs;
    for (int k : band) {
        std::vector<int> xi(grid.dim(), 0);
        xi[0] = k;
        if (grid.dim() > 1) xi[1] = k / 2;
        freqs.push_back(xi);
    }
    r.order_estimate = estimate_order([&](const GridFunction& f) { return apply_symbol(a, f, opts); }, grid, freqs);
    r.pass = r.on.response < 0.1 && r.off.response >= r.off.symbol_value / 2;
    return r;
}

}  // namespace folpsi
