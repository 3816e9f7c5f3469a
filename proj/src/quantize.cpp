#include "folpsi/quantize.hpp"

#include "folpsi/error.hpp"

#include <cmath>
#include <numbers>

namespace folpsi {

namespace {

struct FrequencyTable {
    std::vector<std::vector<double>> xi;
    std::vector<bool> skip;
};

FrequencyTable frequency_table(const PeriodicGrid& g, NyquistPolicy policy) {
    FrequencyTable t;
    t.xi.reserve(g.size());
    t.skip.reserve(g.size());
    for (std::size_t k = 0; k < g.size(); ++k) {
        auto f = g.frequency(k);
        t.xi.emplace_back(f.begin(), f.end());
        t.skip.push_back(policy == NyquistPolicy::Zero && g.on_nyquist_line(f));
    }
    return t;
}

void require_dims(const PolyhomSymbol& a, const PeriodicGrid& g) {
    if (a.x_dim() != g.dim() || a.xi_dim() != g.dim())
        throw InputError("symbol dimension " + std::to_string(a.x_dim()) + "/" + std::to_string(a.xi_dim()) +
                         " does not match grid dimension " + std::to_string(g.dim()));
}

double wrapped(double d) {
    constexpr double two_pi = 2.0 * std::numbers::pi;
    d = std::fmod(d + std::numbers::pi, two_pi);
    if (d < 0) d += two_pi;
    return d - std::numbers::pi;
}

/// Value at h = 0 of the interpolating polynomial through (h_k, v_k) (Neville).
cplx extrapolate_to_zero(const std::vector<double>& h, std::vector<cplx> v) {
    const std::size_t n = h.size();
    for (std::size_t level = 1; level < n; ++level) {
        for (std::size_t i = 0; i + level < n; ++i) {
            v[i] = (h[i + level] * v[i] - h[i] * v[i + 1]) / (h[i + level] - h[i]);
        }
    }
    return v[0];
}

template <class Bind>
GridFunction apply_bound(const Bind& bind, const GridFunction& f, const QuantizeOptions& opts) {
    const PeriodicGrid& g = f.grid;
    CVector fhat = forward_dft(g, f.values);
    FrequencyTable table = frequency_table(g, opts.nyquist);
    double threshold = opts.sparsity * max_norm(fhat);
    std::vector<std::size_t> active;
    for (std::size_t k = 0; k < g.size(); ++k) {
        cplx c = fhat[static_cast<Eigen::Index>(k)];
        if (table.skip[k] || c == 0.0 || std::abs(c) <= threshold) continue;
        active.push_back(k);
    }
    GridFunction out(g);
    for (std::size_t x = 0; x < g.size(); ++x) {
        auto ax = bind(g.point(x));
        cplx acc = 0.0;
        for (std::size_t k : active) acc += ax(table.xi[k]) * fhat[static_cast<Eigen::Index>(k)] * g.character(x, k);
        out.values[static_cast<Eigen::Index>(x)] = acc;
    }
    return out;
}

template <class Bind>
GridOperator dense_bound(const Bind& bind, const PeriodicGrid& g, const QuantizeOptions& opts) {
    if (g.size() > opts.dense_cap)
        throw CapExceededError("dense quantization of " + std::to_string(g.size()) + " rows exceeds cap " +
                               std::to_string(opts.dense_cap));
    const auto n = static_cast<Eigen::Index>(g.size());
    FrequencyTable table = frequency_table(g, opts.nyquist);
    CMatrix symbol_phase(n, n);  // a(x, xi) exp(i<x,xi>)
    for (std::size_t x = 0; x < g.size(); ++x) {
        auto ax = bind(g.point(x));
        for (std::size_t k = 0; k < g.size(); ++k) {
            symbol_phase(static_cast<Eigen::Index>(x), static_cast<Eigen::Index>(k)) =
                table.skip[k] ? cplx(0.0) : ax(table.xi[k]) * g.character(x, k);
        }
    }
    CMatrix analysis(n, n);  // exp(-i<y,xi>) / G^n
    const double inv = 1.0 / static_cast<double>(g.size());
    for (std::size_t k = 0; k < g.size(); ++k)
        for (std::size_t y = 0; y < g.size(); ++y)
            analysis(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(y)) = std::conj(g.character(y, k)) * inv;
    return {g, symbol_phase * analysis};
}

auto symbol_binder(const PolyhomSymbol& a) {
    return [&a](const std::vector<double>& x) { return a.bind(x); };
}

auto multiplier_binder(const Multiplier& a) {
    return [&a](const std::vector<double>& x) {
        return [&a, x](std::span<const double> xi) { return a.fn(x, xi); };
    };
}

void require_dims(const Multiplier& a, const PeriodicGrid& g) {
    if (!a.fn) throw InputError("multiplier '" + a.label + "' has no evaluator");
    if (a.x_dim != g.dim() || a.xi_dim != g.dim())
        throw InputError("multiplier dimension does not match grid dimension " + std::to_string(g.dim()));
}

}  // namespace

Multiplier Multiplier::from_symbol(const PolyhomSymbol& a, std::string label) {
    return {a.x_dim(), a.xi_dim(), a.order(), std::move(label),
            [a](std::span<const double> x, std::span<const double> xi) { return a.eval(x, xi); }};
}

Multiplier Multiplier::bracket(const Coeff& coeff, std::vector<int> xi_pow, int s) {
    const int dim = coeff.dim();
    if (static_cast<int>(xi_pow.size()) != dim) throw InputError("multiplier xi power has wrong dimension");
    int order = s;
    for (int e : xi_pow) {
        if (e < 0) throw InputError("multiplier xi powers must be nonnegative");
        order += e;
    }
    std::string label = "(" + coeff.str() + ")";
    for (int j = 0; j < dim; ++j)
        if (xi_pow[j]) label += "*xi" + std::to_string(j + 1) + (xi_pow[j] > 1 ? "^" + std::to_string(xi_pow[j]) : "");
    if (s != 0) label += "*<xi>^" + std::to_string(s);
    return {dim, dim, order, label, [coeff, xi_pow, s](std::span<const double> x, std::span<const double> xi) {
                double r2 = 0.0;
                cplx v = coeff.eval(x);
                for (std::size_t j = 0; j < xi.size(); ++j) {
                    r2 += xi[j] * xi[j];
                    v *= std::pow(xi[j], xi_pow[j]);
                }
                return v * std::pow(1.0 + r2, 0.5 * s);
            }};
}

Multiplier Multiplier::radial(int dim, int order, std::string label, std::function<cplx(double)> f_of_norm2) {
    return {dim, dim, order, std::move(label), [f = std::move(f_of_norm2)](std::span<const double>, std::span<const double> xi) {
                double r2 = 0.0;
                for (double v : xi) r2 += v * v;
                return f(r2);
            }};
}

GridFunction apply_symbol(const PolyhomSymbol& a, const GridFunction& f, const QuantizeOptions& opts) {
    require_dims(a, f.grid);
    return apply_bound(symbol_binder(a), f, opts);
}

GridOperator quantize_dense(const PolyhomSymbol& a, const PeriodicGrid& g, const QuantizeOptions& opts) {
    require_dims(a, g);
    return dense_bound(symbol_binder(a), g, opts);
}

GridFunction apply_multiplier(const Multiplier& a, const GridFunction& f, const QuantizeOptions& opts) {
    require_dims(a, f.grid);
    return apply_bound(multiplier_binder(a), f, opts);
}

GridOperator quantize_dense(const Multiplier& a, const PeriodicGrid& g, const QuantizeOptions& opts) {
    require_dims(a, g);
    return dense_bound(multiplier_binder(a), g, opts);
}

RecoveryResult recover_principal_symbol(const GridOperator& P, int m, std::span<const double> x,
                                        std::span<const int> xi_dir, std::span<const int> taus,
                                        double localizer_width) {
    const PeriodicGrid& g = P.grid;
    if (static_cast<int>(x.size()) != g.dim() || static_cast<int>(xi_dir.size()) != g.dim())
        throw InputError("recover_principal_symbol: dimension mismatch");
    long center = g.find_point(x);
    if (center < 0) throw InputError("recover_principal_symbol: x must be a grid point");
    if (taus.empty()) throw InputError("recover_principal_symbol: empty tau schedule");
    int dir_max = 0;
    for (int k : xi_dir) dir_max = std::max(dir_max, std::abs(k));
    if (dir_max == 0) throw InputError("recover_principal_symbol: xi_dir must be nonzero");

    if (!(localizer_width > 0.0 && localizer_width <= 0.5))
        throw InputError("recover_principal_symbol: localizer width must lie in (0, 0.5]");
    GridFunction bump = GridFunction::sample(g, [&](const std::vector<double>& u) {
        double r2 = 0.0;
        for (int d = 0; d < g.dim(); ++d) {
            double w = wrapped(u[d] - x[d]);
            r2 += w * w;
        }
        return cplx(std::exp(-r2 / (2 * localizer_width * localizer_width)));
    });

    RecoveryResult out;
    std::vector<double> h;
    for (int tau : taus) {
        if (tau <= 0) throw InputError("recover_principal_symbol: tau must be positive");
        if (tau * dir_max >= g.nyquist())
            throw AliasingError("tau = " + std::to_string(tau) + " exceeds the grid Nyquist frequency " +
                                std::to_string(g.nyquist()));
        GridFunction probe(g);
        for (std::size_t i = 0; i < g.size(); ++i) {
            auto u = g.point(i);
            double phase = 0.0;
            for (int d = 0; d < g.dim(); ++d) phase += xi_dir[d] * wrapped(u[d] - x[d]);
            // tau * xi_dir is integral, so wrapping keeps the oscillation periodic.
            probe.values[static_cast<Eigen::Index>(i)] = bump.values[static_cast<Eigen::Index>(i)] *
                                                         std::polar(1.0, tau * phase);
        }
        cplx raw = (P.matrix.row(center) * probe.values)(0);
        cplx scale = std::pow(static_cast<double>(tau), -m);
        out.taus.push_back(tau);
        out.sequence.push_back(scale * raw);
        h.push_back(1.0 / tau);
    }
    out.value = extrapolate_to_zero(h, out.sequence);
    return out;
}

double loglog_slope(const std::vector<double>& abscissae, const std::vector<double>& values) {
    if (abscissae.size() != values.size() || abscissae.size() < 2)
        throw InputError("loglog_slope needs matching lists of length >= 2");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double n = static_cast<double>(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
        double lx = std::log(abscissae[i]);
        double ly = std::log(std::max(values[i], 1e-300));
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    double den = n * sxx - sx * sx;
    if (den == 0.0) throw InputError("loglog_slope: abscissae must not all coincide");
    return (n * sxy - sx * sy) / den;
}

double estimate_order(const OperatorAction& P, const PeriodicGrid& grid, const std::vector<std::vector<int>>& freqs) {
    if (freqs.size() < 2) throw InputError("estimate_order needs at least two frequencies");
    std::vector<double> mags, norms;
    bool any = false;
    for (const auto& xi : freqs) {
        if (static_cast<int>(xi.size()) != grid.dim()) throw InputError("estimate_order: frequency dimension");
        double r = 0.0;
        for (int k : xi) {
            if (std::abs(k) > grid.nyquist()) throw AliasingError("estimate_order: frequency beyond Nyquist");
            r += static_cast<double>(k) * k;
        }
        if (r == 0.0) throw InputError("estimate_order: zero frequency in list");
        double v = l2_norm(P(plane_wave(grid, xi)));
        any = any || v >= 1e-14;
        mags.push_back(std::sqrt(r));
        norms.push_back(v);
    }
    if (!any) return kOrderMinusInfinity;
    return loglog_slope(mags, norms);
}

double estimate_order(const GridOperator& P, const std::vector<std::vector<int>>& freqs) {
    return estimate_order([&P](const GridFunction& f) { return P(f); }, P.grid, freqs);
}

std::vector<std::vector<int>> axis_frequencies(int dim, const std::vector<int>& ks, int axis) {
    std::vector<std::vector<int>> out;
    for (int k : ks) {
        std::vector<int> xi(dim, 0);
        xi.at(axis) = k;
        out.push_back(xi);
    }
    return out;
}

GridOperator adjoint(const GridOperator& P) {
    return {P.grid, P.matrix.adjoint()};
}

}  // namespace folpsi
