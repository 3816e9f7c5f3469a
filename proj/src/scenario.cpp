#include "folpsi/scenario.hpp"

#include "folpsi/bisubmersion.hpp"
#include "folpsi/calculus.hpp"
#include "folpsi/error.hpp"
#include "folpsi/expr.hpp"
#include "folpsi/spectra.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <random>
#include <set>
#include <sstream>

namespace folpsi {

using nlohmann::json;
using ojson = nlohmann::ordered_json;

namespace {

// ---------------------------------------------------------------------------
// Field access with diagnostics

struct Fields {
    const json& j;
    std::string path;

    bool has(const char* key) const { return j.is_object() && j.contains(key); }

    const json& at(const char* key) const {
        if (!has(key)) throw ConfigError(path + "." + key + ": missing required field");
        return j.at(key);
    }

    template <class T>
    T get(const char* key) const {
        try {
            return at(key).get<T>();
        } catch (const json::type_error& e) {
            throw ConfigError(path + "." + key + ": wrong type (" + e.what() + ")");
        }
    }

    template <class T>
    T get(const char* key, T fallback) const {
        return has(key) ? get<T>(key) : fallback;
    }

    Fields sub(const char* key) const { return {at(key), path + "." + key}; }
    std::string field(const char* key) const { return path + "." + key; }
};

std::vector<double> to_point(const json& j, const std::string& field, int dim) {
    std::vector<double> p;
    try {
        p = j.get<std::vector<double>>();
    } catch (const json::type_error&) {
        throw ConfigError(field + ": expected an array of numbers");
    }
    if (static_cast<int>(p.size()) != dim)
        throw ConfigError(field + ": expected " + std::to_string(dim) + " entries, got " + std::to_string(p.size()));
    return p;
}

std::vector<std::vector<double>> to_points(const Fields& f, const char* key, int dim) {
    std::vector<std::vector<double>> out;
    const json& arr = f.at(key);
    if (!arr.is_array()) throw ConfigError(f.field(key) + ": expected an array of points");
    for (std::size_t i = 0; i < arr.size(); ++i)
        out.push_back(to_point(arr[i], f.field(key) + "[" + std::to_string(i) + "]", dim));
    return out;
}

std::vector<int> to_band(const Fields& f, const char* key, std::vector<int> fallback) {
    if (!f.has(key)) return fallback;
    const json& b = f.at(key);
    if (b.is_object()) {
        Fields r{b, f.field(key)};
        int lo = r.get<int>("from"), hi = r.get<int>("to");
        if (hi < lo) throw ConfigError(f.field(key) + ": 'to' must be >= 'from'");
        std::vector<int> out;
        for (int k = lo; k <= hi; ++k) out.push_back(k);
        return out;
    }
    return f.get<std::vector<int>>(key);
}

Coeff coeff_field(const Fields& f, const char* key, const std::vector<std::string>& names) {
    return parse_coeff(f.get<std::string>(key), names, f.field(key));
}

// ---------------------------------------------------------------------------
// Symbol, multiplier and operator descriptions

PolyhomSymbol parse_symbol(const Fields& f, const std::vector<std::string>& names) {
    const int dim = static_cast<int>(names.size());
    std::string cutoff = f.get<std::string>("cutoff", "standard");
    if (cutoff != "standard" && cutoff != "none") throw ConfigError(f.field("cutoff") + ": expected 'standard' or 'none'");
    const json& arr = f.at("pieces");
    if (!arr.is_array() || arr.empty()) throw ConfigError(f.field("pieces") + ": expected a nonempty array");
    std::vector<SymbolPiece> pieces;
    for (std::size_t i = 0; i < arr.size(); ++i) {
        Fields p{arr[i], f.field("pieces") + "[" + std::to_string(i) + "]"};
        Coeff c = coeff_field(p, "coeff", names);
        try {
            pieces.push_back(parse_xi_expression(p.get<std::string>("xi", "1"), c, dim));
        } catch (const InputError& e) {
            throw ConfigError(p.field("xi") + ": " + e.what());
        }
    }
    return symbol_from_pieces(dim, dim, std::move(pieces), cutoff == "none" ? CutoffKind::None : CutoffKind::Standard);
}

Multiplier parse_multiplier(const Fields& f, const std::vector<std::string>& names) {
    const int dim = static_cast<int>(names.size());
    if (f.has("pieces")) return Multiplier::from_symbol(parse_symbol(f, names), f.j.dump());
    Coeff c = f.has("coeff") ? coeff_field(f, "coeff", names) : Coeff::constant(dim, GaussRational(1));
    std::vector<int> pow = f.get<std::vector<int>>("xi", std::vector<int>(dim, 0));
    if (static_cast<int>(pow.size()) != dim) throw ConfigError(f.field("xi") + ": wrong dimension");
    try {
        return Multiplier::bracket(c, pow, f.get<int>("bracket", 0));
    } catch (const InputError& e) {
        throw ConfigError(f.path + ": " + e.what());
    }
}

struct Space {
    int dim;
    std::vector<std::string> names;
    std::vector<double> origin;
};

/// The scenario's own coordinates, or a flat torus of another dimension when the stage sets "dim".
Space stage_space(const ScenarioConfig& cfg, const Fields& f) {
    if (!f.has("dim")) {
        std::vector<double> origin = cfg.domain.kind == DomainKind::Box ? cfg.domain.lower
                                                                         : std::vector<double>(cfg.domain.dim, 0.0);
        return {cfg.domain.dim, cfg.names, origin};
    }
    int dim = f.get<int>("dim");
    if (dim < 1) throw ConfigError(f.field("dim") + ": must be >= 1");
    auto names = f.get<std::vector<std::string>>("coordinates", default_coordinate_names(dim));
    if (static_cast<int>(names.size()) != dim) throw ConfigError(f.field("coordinates") + ": wrong number of names");
    std::vector<double> origin = f.has("origin") ? to_point(f.at("origin"), f.field("origin"), dim)
                                                 : std::vector<double>(dim, 0.0);
    return {dim, names, origin};
}

PeriodicGrid stage_grid(const Space& sp, const Fields& f, const RunOptions& opts, int fallback = 32) {
    int G = opts.grid_override ? *opts.grid_override : f.get<int>("grid", fallback);
    try {
        return PeriodicGrid(sp.dim, G, sp.origin);
    } catch (const InputError& e) {
        throw ConfigError(f.field("grid") + ": " + e.what());
    }
}

PdoElement parse_operator(const ScenarioConfig& cfg, const std::vector<std::string>& names, const Fields& f,
                          const PeriodicGrid& g) {
    std::string kind = f.get<std::string>("kind");
    std::optional<PdoElement> P;
    if (kind == "identity") {
        P = identity_element(g);
    } else if (kind == "symbol") {
        P = quantized_element(parse_symbol(f.sub("symbol"), names), g);
    } else if (kind == "divergence_form") {
        P = divergence_form(coeff_field(f, "coeff", names), g);
    } else if (kind == "laplacian") {
        std::optional<SpatialCutoff> cut;
        if (f.has("cutoff")) {
            Fields c = f.sub("cutoff");
            cut = SpatialCutoff{c.get<double>("inner", 1.5), c.get<double>("outer", 3.0), {}};
        }
        P = laplacian(cfg.module(), g, cut);
    } else {
        throw ConfigError(f.field("kind") + ": unknown operator kind '" + kind + "'");
    }
    double shift = f.get<double>("shift", 0.0);
    if (shift != 0.0) P = add(*P, identity_element(g), shift);
    return *P;
}

// ---------------------------------------------------------------------------
// Stages

struct Context {
    const ScenarioConfig& cfg;
    const RunOptions& opts;
    Report& report;
    std::string stage;

    void plot(double x, double v, const std::string& series) { report.plot.push_back({x, v, stage + ":" + series}); }
};

ojson point_json(const std::vector<double>& p) { return ojson(p); }

bool stage_structure(Context& ctx, const Fields& f, ojson& d) {
    FoliationModule F = ctx.cfg.module();
    int cap = f.get<int>("degree_cap", ctx.cfg.structure_cap);
    d["degree_cap"] = cap;
    StructureResult r = solve_structure_functions(F, cap);
    if (!r.ok()) {
        d["closed"] = false;
        d["pair"] = {r.failure->i + 1, r.failure->j + 1};
        d["bracket"] = r.failure->bracket.str(F.names);
        d["residual"] = r.failure->residual.str(F.names);
        return f.get<bool>("expect_closed", true) == false;
    }
    d["closed"] = true;
    ojson table = ojson::array();
    for (int i = 0; i < F.rank(); ++i)
        for (int j = i + 1; j < F.rank(); ++j)
            for (int k = 0; k < F.rank(); ++k) {
                const Coeff& c = (*r.table)[i][j][k];
                if (c.is_zero()) continue;
                table.push_back(ojson{{"i", i + 1}, {"j", j + 1}, {"k", k + 1}, {"f", c.str(F.names)}});
            }
    d["structure_functions"] = table;
    return f.get<bool>("expect_closed", true);
}

template <class Measure>
bool pointwise_stage(Context& ctx, const Fields& f, ojson& d, const char* label, Measure measure) {
    auto pts = to_points(f, "points", ctx.cfg.domain.dim);
    std::vector<int> expect = f.get<std::vector<int>>("expect", {});
    if (!expect.empty() && expect.size() != pts.size())
        throw ConfigError(f.field("expect") + ": one value per point required");
    bool pass = true;
    ojson rows = ojson::array();
    for (std::size_t i = 0; i < pts.size(); ++i) {
        int v = measure(pts[i]);
        ojson row{{"point", point_json(pts[i])}, {label, v}};
        if (!expect.empty()) {
            row["expected"] = expect[i];
            pass = pass && v == expect[i];
        }
        rows.push_back(row);
    }
    d["points"] = rows;
    return pass;
}

bool stage_fibers(Context& ctx, const Fields& f, ojson& d) {
    FoliationModule F = ctx.cfg.module();
    int cap = f.get<int>("degree_cap", ctx.cfg.fiber_cap);
    d["degree_cap"] = cap;
    return pointwise_stage(ctx, f, d, "fiber_dim", [&](const std::vector<double>& x) { return fiber_dimension(F, x, cap); });
}

bool stage_leaf_dims(Context& ctx, const Fields& f, ojson& d) {
    FoliationModule F = ctx.cfg.module();
    return pointwise_stage(ctx, f, d, "leaf_dim", [&](const std::vector<double>& x) { return leaf_tangent_dim(F, x); });
}

bool stage_minimality(Context& ctx, const Fields& f, ojson& d) {
    FoliationModule F = ctx.cfg.module();
    IdentityBisubmersion B(F);
    int cap = f.get<int>("degree_cap", ctx.cfg.fiber_cap);
    d["degree_cap"] = cap;
    return pointwise_stage(ctx, f, d, "gap", [&](const std::vector<double>& x) { return minimality_gap(B, x, cap); });
}

bool stage_bisubmersion(Context& ctx, const Fields& f, ojson& d) {
    FoliationModule F = ctx.cfg.module();
    IdentityBisubmersion B(F, f.get<double>("radius", 0.5), f.get<int>("steps", 64));
    const json& arr = f.at("samples");
    std::vector<std::pair<std::vector<double>, std::vector<double>>> samples;
    for (std::size_t i = 0; i < arr.size(); ++i) {
        Fields s{arr[i], f.field("samples") + "[" + std::to_string(i) + "]"};
        samples.push_back({to_point(s.at("y"), s.field("y"), F.dim()), to_point(s.at("xi"), s.field("xi"), F.rank())});
    }
    if (samples.empty()) throw ConfigError(f.field("samples") + ": at least one sample required");
    bool identity = true;
    double min_order = std::numeric_limits<double>::infinity();
    double drift = 0.0;
    bool conserve = f.get<bool>("conserves_radius", false);
    for (const auto& [y, xi] : samples) {
        std::vector<double> zero(F.rank(), 0.0);
        identity = identity && B.target(y, zero) == y;
        auto rep = convergence_order(B, y, xi);
        min_order = std::min(min_order, rep.order);
        if (conserve) {
            auto t = B.target(y, xi);
            double r0 = 0.0, r1 = 0.0;
            for (int i = 0; i < F.dim(); ++i) {
                r0 += y[i] * y[i];
                r1 += t[i] * t[i];
            }
            drift = std::max(drift, std::abs(std::sqrt(r1) - std::sqrt(r0)));
        }
    }
    SubmersionResult sub = check_submersion(B, samples, f.get<double>("fd_step", 1e-5));
    d["identity_exact"] = identity;
    d["submersion"] = sub.pass;
    d["min_convergence_order"] = std::isinf(min_order) ? ojson("exact") : ojson(min_order);
    bool pass = identity && sub.pass && min_order >= f.get<double>("min_order", 3.5);
    if (conserve) {
        d["radius_drift"] = drift;
        pass = pass && drift <= f.get<double>("drift_tol", 1e-8);
    }
    return pass;
}

PolyhomSymbol ellipticity_symbol(const ScenarioConfig& cfg, const Fields& f) {
    std::string kind = f.get<std::string>("symbol", "laplacian");
    if (kind == "laplacian") return laplacian_longitudinal_symbol(cfg.domain.dim, static_cast<int>(cfg.generators.size()));
    if (kind == "radial_pairing") return radial_pairing_symbol(cfg.domain.dim);
    if (kind == "flat_vanishing") return flat_vanishing_symbol(cfg.domain.dim);
    throw ConfigError(f.field("symbol") + ": unknown longitudinal symbol '" + kind + "'");
}

bool stage_ellipticity(Context& ctx, const Fields& f, ojson& d) {
    FoliationModule F = ctx.cfg.module();
    PolyhomSymbol a = ellipticity_symbol(ctx.cfg, f);
    auto pts = to_points(f, "points", F.dim());
    EllipticityResult r = ellipticity_check(F, a, pts, f.get<double>("tol", 1e-8), ctx.cfg.fiber_cap);
    d["elliptic"] = r.pass;
    if (r.witness) {
        d["witness_x"] = r.witness->x;
        d["witness_eta"] = r.witness->eta;
        d["magnitude"] = r.witness->magnitude;
    }
    return r.pass == f.get<bool>("expect_elliptic", true);
}

/// Largest |sigma(x, eta)| over unit eta in F*_x: fiber basis vectors and rotations between them.
bool stage_fiber_symbol(Context& ctx, const Fields& f, ojson& d) {
    FoliationModule F = ctx.cfg.module();
    PolyhomSymbol a = ellipticity_symbol(ctx.cfg, f);
    int cap = f.get<int>("degree_cap", ctx.cfg.fiber_cap);
    auto pts = to_points(f, "points", F.dim());
    double worst = 0.0;
    int samples = 0;
    ojson rows = ojson::array();
    for (const auto& x : pts) {
        CotangentFiber cf = cotangent_fiber(F, x, cap);
        std::vector<Eigen::VectorXd> etas;
        for (int i = 0; i < cf.fiber_dim; ++i) etas.push_back(cf.basis.col(i));
        for (int i = 0; i < cf.fiber_dim; ++i)
            for (int j = i + 1; j < cf.fiber_dim; ++j)
                for (int t = 1; t < 8; ++t) {
                    double th = std::numbers::pi * t / 8.0;
                    etas.push_back(std::cos(th) * cf.basis.col(i) + std::sin(th) * cf.basis.col(j));
                }
        double local = 0.0;
        for (const auto& eta : etas) {
            std::vector<double> e(eta.data(), eta.data() + eta.size());
            local = std::max(local, std::abs(longitudinal_symbol(F, a, x, e, cap)));
        }
        samples += static_cast<int>(etas.size());
        worst = std::max(worst, local);
        rows.push_back(ojson{{"point", x}, {"fiber_dim", cf.fiber_dim}, {"max_abs", local}});
    }
    d["points"] = rows;
    d["samples"] = samples;
    d["max_abs"] = worst;
    return worst <= f.get<double>("max_abs", 0.0);
}

bool stage_laplacian(Context& ctx, const Fields& f, ojson& d) {
    Space sp = stage_space(ctx.cfg, f);
    PeriodicGrid g = stage_grid(sp, f, ctx.opts, 16);
    std::optional<SpatialCutoff> cut;
    if (f.has("cutoff")) {
        Fields c = f.sub("cutoff");
        cut = SpatialCutoff{c.get<double>("inner", 1.5), c.get<double>("outer", 3.0), {}};
    }
    PdoElement L = laplacian(ctx.cfg.module(), g, cut);
    double defect = hermitian_defect(L.op);
    d["grid"] = g.points_per_axis();
    d["rows"] = g.size();
    d["symmetry_defect"] = defect;
    bool pass = defect < f.get<double>("symmetry_tol", 1e-10);
    if (!pass) return false;
    auto ev = spectrum(L.op, 0, 1e-8);
    d["min_eigenvalue"] = ev.front();
    pass = ev.front() >= -f.get<double>("psd_tol", 1e-8);
    std::size_t count = f.get<std::size_t>("eigenvalues", 8);
    std::vector<double> low(ev.begin(), ev.begin() + std::min(count, ev.size()));
    d["lowest"] = low;
    for (std::size_t i = 0; i < low.size(); ++i) ctx.plot(static_cast<double>(i), low[i], "eigenvalue");
    if (f.get<bool>("expect_flat", false)) {
        std::vector<double> flat;
        for (std::size_t k = 0; k < g.size(); ++k) {
            double s = 0.0;
            for (int v : g.frequency(k)) s += double(v) * v;
            flat.push_back(s);
        }
        std::sort(flat.begin(), flat.end());
        double err = 0.0;
        for (std::size_t i = 0; i < flat.size(); ++i) err = std::max(err, std::abs(flat[i] - ev[i]));
        d["flat_spectrum_error"] = err;
        pass = pass && err < f.get<double>("flat_tol", 1e-10);
    }
    return pass;
}

/// Relative plane-wave agreement |<e_k, Q e_k> - m(k)| / |m(k)| over k in the band (axis 0).
double oracle_error(const GridOperator& Q, const Multiplier& m, const std::vector<int>& band, Context& ctx,
                    const std::string& series) {
    const PeriodicGrid& g = Q.grid;
    double worst = 0.0;
    for (int k : band) {
        std::vector<int> xi(g.dim(), 0);
        xi[0] = k;
        GridFunction e = plane_wave(g, xi);
        std::vector<double> xd(xi.begin(), xi.end());
        cplx exact = m.fn(g.point(0), xd);
        double rel = std::abs(inner(e, Q(e)) - exact) / std::abs(exact);
        worst = std::max(worst, rel);
        ctx.plot(k, rel, series);
    }
    return worst;
}

IterationOptions iteration_options(const Fields& f, const PeriodicGrid& g) {
    IterationOptions o;
    o.band = to_band(f, "band", default_band(g));
    return o;
}

bool stage_parametrix(Context& ctx, const Fields& f, ojson& d) {
    Space sp = stage_space(ctx.cfg, f);
    PeriodicGrid g = stage_grid(sp, f, ctx.opts, 64);
    PdoElement P = parse_operator(ctx.cfg, sp.names, f.sub("operator"), g);
    int N = f.get<int>("iterations", 2);
    double slack = f.get<double>("slack", 0.7);
    IterationResult r = parametrix(P, N, iteration_options(f, g));
    bool pass = true;
    ojson rows = ojson::array();
    for (const auto& row : r.trace) {
        double bound = -(row.iteration + 1) + slack;
        bool ok = row.left <= bound && row.right <= bound;
        pass = pass && ok;
        rows.push_back(ojson{{"iteration", row.iteration}, {"order_I_minus_QP", row.left},
                             {"order_I_minus_PQ", row.right}, {"bound", bound}});
        ctx.plot(row.iteration, row.left, "I-QP");
        ctx.plot(row.iteration, row.right, "I-PQ");
    }
    d["grid"] = g.points_per_axis();
    d["trace"] = rows;
    if (f.has("oracle")) {
        Fields o = f.sub("oracle");
        double err = oracle_error(r.Q.op, parse_multiplier(o.sub("multiplier"), sp.names),
                                  to_band(o, "band", {2, 16}), ctx, "oracle");
        d["oracle_max_rel_error"] = err;
        pass = pass && err < o.get<double>("tol", 0.02);
    }
    if (f.get<bool>("idempotent", false)) {
        double defect = idempotent_check(P, r.Q);
        d["idempotent_defect"] = defect;
        pass = pass && defect < f.get<double>("idempotent_tol", 1e-8);
    }
    return pass;
}

bool stage_sqrt(Context& ctx, const Fields& f, ojson& d) {
    Space sp = stage_space(ctx.cfg, f);
    PeriodicGrid g = stage_grid(sp, f, ctx.opts, 64);
    PdoElement P = parse_operator(ctx.cfg, sp.names, f.sub("operator"), g);
    int N = f.get<int>("iterations", 3);
    IterationResult r = sqrt_op(P, N, iteration_options(f, g));
    bool pass = true;
    ojson rows = ojson::array();
    for (std::size_t i = 0; i < r.trace.size(); ++i) {
        rows.push_back(ojson{{"iteration", r.trace[i].iteration}, {"order_P_minus_Q2", r.trace[i].left}});
        ctx.plot(r.trace[i].iteration, r.trace[i].left, "P-Q^2");
        if (i > 0) pass = pass && r.trace[i].left < r.trace[i - 1].left;
    }
    double defect = hermitian_defect(r.Q.op);
    d["grid"] = g.points_per_axis();
    d["trace"] = rows;
    d["hermitian_defect"] = defect;
    pass = pass && defect < 1e-8;
    if (f.has("oracle")) {
        Fields o = f.sub("oracle");
        double err = oracle_error(r.Q.op, parse_multiplier(o.sub("multiplier"), sp.names),
                                  to_band(o, "band", {1, 16}), ctx, "oracle");
        d["oracle_max_rel_error"] = err;
        pass = pass && err < o.get<double>("tol", 0.03);
    }
    return pass;
}

bool stage_boundedness(Context& ctx, const Fields& f, ojson& d) {
    Space sp = stage_space(ctx.cfg, f);
    Multiplier a = parse_multiplier(f.sub("multiplier"), sp.names);
    std::vector<int> grids = f.get<std::vector<int>>("grids", {32, 64, 128});
    BoundednessReport r = boundedness_scan(a, grids, {}, f.get<double>("threshold", 1.25));
    d["symbol"] = r.symbol_id;
    d["grids"] = r.grids;
    d["norms"] = r.norms;
    d["max_ratio"] = r.max_ratio;
    d["bounded"] = r.pass;
    for (std::size_t i = 0; i < r.grids.size(); ++i) ctx.plot(r.grids[i], r.norms[i], "norm");
    return r.pass == f.get<bool>("expect_bounded", true);
}

bool stage_decay(Context& ctx, const Fields& f, ojson& d) {
    Space sp = stage_space(ctx.cfg, f);
    PeriodicGrid g = stage_grid(sp, f, ctx.opts, 64);
    Multiplier a = parse_multiplier(f.sub("multiplier"), sp.names);
    std::vector<int> cutoffs = f.get<std::vector<int>>("cutoffs", {4, 8, 16});
    DecayReport r = negative_order_decay(a, g, cutoffs);
    d["symbol"] = r.symbol_id;
    d["cutoffs"] = r.cutoffs;
    d["norms"] = r.norms;
    d["slope"] = std::isinf(r.slope) ? ojson("-inf") : ojson(r.slope);
    for (std::size_t i = 0; i < r.cutoffs.size(); ++i) ctx.plot(r.cutoffs[i], r.norms[i], "norm");
    bool pass = r.pass;
    if (f.has("expect_slope")) {
        auto range = f.get<std::vector<double>>("expect_slope");
        if (range.size() != 2) throw ConfigError(f.field("expect_slope") + ": expected [low, high]");
        pass = pass && r.slope >= range[0] && r.slope <= range[1];
    }
    return pass;
}

bool stage_oracle(Context& ctx, const Fields& f, ojson& d) {
    Space sp = stage_space(ctx.cfg, f);
    PeriodicGrid g = stage_grid(sp, f, ctx.opts, 16);
    const json& arr = f.at("symbols");
    std::mt19937_64 rng(ctx.opts.seed);
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    double worst = 0.0;
    for (std::size_t i = 0; i < arr.size(); ++i) {
        PolyhomSymbol a = parse_symbol({arr[i], f.field("symbols") + "[" + std::to_string(i) + "]"}, sp.names);
        GridFunction u(g);
        for (Eigen::Index k = 0; k < u.values.size(); ++k) u.values[k] = cplx(U(rng), U(rng));
        GridFunction fast = apply_symbol(a, u);
        GridFunction dense = quantize_dense(a, g)(u);
        worst = std::max(worst, max_norm(fast.values - dense.values));
    }
    d["symbols"] = arr.size();
    d["max_difference"] = worst;
    return worst < f.get<double>("tol", 1e-10);
}

bool stage_recovery(Context& ctx, const Fields& f, ojson& d) {
    Space sp = stage_space(ctx.cfg, f);
    PeriodicGrid g = stage_grid(sp, f, ctx.opts, 256);
    PolyhomSymbol a = parse_symbol(f.sub("symbol"), sp.names);
    GridOperator P = quantize_dense(a, g);
    auto x = to_point(f.at("x"), f.field("x"), g.dim());
    auto dir = f.get<std::vector<int>>("xi_dir");
    auto taus = f.get<std::vector<int>>("taus", {8, 16, 32, 64});
    auto expect = f.get<std::vector<double>>("expect");
    if (expect.size() != 2) throw ConfigError(f.field("expect") + ": expected [re, im]");
    cplx target(expect[0], expect[1]);
    double tol = f.get<double>("rel_tol", 0.1);
    ojson rows = ojson::array();
    bool pass = true;
    double prev = std::numeric_limits<double>::infinity();
    for (int tau : taus) {
        std::vector<int> one{tau};
        cplx v = recover_principal_symbol(P, a.order(), x, dir, one).value;
        double err = std::abs(v - target);
        rows.push_back(ojson{{"tau", tau}, {"re", v.real()}, {"im", v.imag()}, {"error", err}});
        ctx.plot(tau, err, "error");
        pass = pass && err <= std::max(prev, 1e-12);
        prev = err;
    }
    d["sequence"] = rows;
    d["final_rel_error"] = prev / std::abs(target);
    return pass && prev <= tol * std::abs(target);
}

bool stage_multiplicativity(Context& ctx, const Fields& f, ojson& d) {
    Space sp = stage_space(ctx.cfg, f);
    PeriodicGrid g = stage_grid(sp, f, ctx.opts, 128);
    PolyhomSymbol a = parse_symbol(f.sub("left"), sp.names);
    PolyhomSymbol b = parse_symbol(f.sub("right"), sp.names);
    PdoElement PQ = compose(quantized_element(a, g), quantized_element(b, g));
    auto taus = f.get<std::vector<int>>("taus", {8, 16, 24});
    double tol = f.get<double>("rel_tol", 0.1);
    const json& arr = f.at("samples");
    bool pass = true;
    ojson rows = ojson::array();
    for (std::size_t i = 0; i < arr.size(); ++i) {
        Fields s{arr[i], f.field("samples") + "[" + std::to_string(i) + "]"};
        auto x = to_point(s.at("x"), s.field("x"), g.dim());
        auto dir = s.get<std::vector<int>>("xi_dir");
        std::vector<double> xi(dir.begin(), dir.end());
        cplx rec = recover_principal_symbol(PQ.op, PQ.order, x, dir, taus).value;
        cplx expect = a.leading().eval(x, xi) * b.leading().eval(x, xi);
        double rel = std::abs(rec - expect) / std::abs(expect);
        pass = pass && rel < tol;
        rows.push_back(ojson{{"x", x}, {"xi_dir", dir}, {"recovered", {rec.real(), rec.imag()}},
                             {"product", {expect.real(), expect.imag()}}, {"rel_error", rel}});
    }
    d["samples"] = rows;
    return pass;
}

bool stage_idempotent(Context& ctx, const Fields& f, ojson& d) {
    Space sp = stage_space(ctx.cfg, f);
    PeriodicGrid g = stage_grid(sp, f, ctx.opts, 32);
    double defect = 0.0;
    if (f.has("operator")) {
        PdoElement P = parse_operator(ctx.cfg, sp.names, f.sub("operator"), g);
        IterationResult r = parametrix(P, f.get<int>("iterations", 2), iteration_options(f, g));
        defect = idempotent_check(P, r.Q);
        d["kind"] = "parametrix";
    } else {
        std::mt19937_64 rng(ctx.opts.seed);
        std::uniform_real_distribution<double> U(-1.0, 1.0);
        const auto n = static_cast<Eigen::Index>(g.size());
        CMatrix p(n, n), q(n, n);
        for (Eigen::Index i = 0; i < n; ++i)
            for (Eigen::Index j = 0; j < n; ++j) {
                p(i, j) = cplx(U(rng), U(rng)) / double(n);
                q(i, j) = cplx(U(rng), U(rng)) / double(n);
            }
        defect = idempotent_check(PdoElement{PolyhomSymbol::constant(g.dim(), GaussRational(1)), {g, p}, 0},
                                  PdoElement{PolyhomSymbol::constant(g.dim(), GaussRational(1)), {g, q}, 0});
        d["kind"] = "random";
    }
    d["defect"] = defect;
    return defect < f.get<double>("tol", 1e-8);
}

bool stage_extension(Context& ctx, const Fields& f, ojson& d) {
    Space sp = stage_space(ctx.cfg, f);
    PeriodicGrid g = stage_grid(sp, f, ctx.opts, 64);
    const int n = g.dim();
    auto probe = [&](const char* key) {
        Fields p = f.sub(key);
        PacketProbe out;
        out.x0 = to_point(p.at("x0"), p.field("x0"), n);
        out.xi0 = p.get<std::vector<int>>("xi0");
        if (static_cast<int>(out.xi0.size()) != n) throw ConfigError(p.field("xi0") + ": wrong dimension");
        return out;
    };
    PacketShape shape{f.get<double>("width_parallel", 0.25), f.get<double>("width_perp", 0.8),
                      f.get<double>("sparsity", 1e-8)};
    ExtensionReport r = extension_report(flat_vanishing_symbol(n), g, probe("on"), probe("off"), shape);
    d["on_response"] = r.on.response;
    d["on_symbol"] = r.on.symbol_value;
    d["off_response"] = r.off.response;
    d["off_symbol"] = r.off.symbol_value;
    d["order_estimate"] = r.order_estimate;
    return r.pass && r.order_estimate > -0.5;
}

bool stage_spectrum(Context& ctx, const Fields& f, ojson& d) {
    Space sp = stage_space(ctx.cfg, f);
    PeriodicGrid g = stage_grid(sp, f, ctx.opts, 32);
    PdoElement P = parse_operator(ctx.cfg, sp.names, f.sub("operator"), g);
    auto ev = spectrum(P.op, f.get<std::size_t>("count", 8));
    d["eigenvalues"] = ev;
    for (std::size_t i = 0; i < ev.size(); ++i) ctx.plot(static_cast<double>(i), ev[i], "eigenvalue");
    if (!f.has("expect")) return true;
    auto expect = f.get<std::vector<double>>("expect");
    if (expect.size() > ev.size()) throw ConfigError(f.field("expect") + ": more values than computed eigenvalues");
    double err = 0.0;
    for (std::size_t i = 0; i < expect.size(); ++i) err = std::max(err, std::abs(expect[i] - ev[i]));
    d["max_error"] = err;
    return err < f.get<double>("tol", 1e-10);
}

using StageFn = bool (*)(Context&, const Fields&, ojson&);

struct CatalogEntry {
    const char* check;
    const char* subcommand;
    StageFn fn;
};

const std::vector<CatalogEntry>& catalog() {
    static const std::vector<CatalogEntry> entries = {
        {"structure", "check-foliation", stage_structure},
        {"leaf_dims", "check-foliation", stage_leaf_dims},
        {"ellipticity", "check-foliation", stage_ellipticity},
        {"fiber_symbol", "check-foliation", stage_fiber_symbol},
        {"bisubmersion", "check-foliation", stage_bisubmersion},
        {"minimality", "fibers", stage_minimality},
        {"fibers", "fibers", stage_fibers},
        {"laplacian", "laplacian", stage_laplacian},
        {"spectrum", "laplacian", stage_spectrum},
        {"parametrix", "parametrix", stage_parametrix},
        {"idempotent", "parametrix", stage_idempotent},
        {"sqrt", "sqrt", stage_sqrt},
        {"boundedness", "scan", stage_boundedness},
        {"decay", "scan", stage_decay},
        {"extension", "scan", stage_extension},
        {"oracle", "scan", stage_oracle},
        {"recovery", "scan", stage_recovery},
        {"multiplicativity", "scan", stage_multiplicativity},
    };
    return entries;
}

const CatalogEntry* find_check(const std::string& check) {
    for (const auto& e : catalog())
        if (check == e.check) return &e;
    return nullptr;
}

std::string render_value(const ojson& v) {
    if (v.is_string()) return v.get<std::string>();
    return v.dump();
}

}  // namespace

// ---------------------------------------------------------------------------

const std::vector<std::pair<std::string, std::string>>& check_catalog() {
    static const std::vector<std::pair<std::string, std::string>> out = [] {
        std::vector<std::pair<std::string, std::string>> v;
        for (const auto& e : catalog()) v.emplace_back(e.check, e.subcommand);
        return v;
    }();
    return out;
}

FoliationModule ScenarioConfig::module() const { return FoliationModule(domain, generators, names); }

ScenarioConfig parse_scenario(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        // Locate the byte offset as line and column.
        std::size_t line = 1, col = 1;
        for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
            if (text[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
        throw ParseError("line " + std::to_string(line), col, "invalid JSON");
    }
    if (!j.is_object()) throw ConfigError("scenario: top level must be an object");
    Fields root{j, "scenario"};
    ScenarioConfig cfg;
    cfg.id = root.get<std::string>("id", "scenario");

    if (root.has("domain")) {
        Fields dom = root.sub("domain");
        std::string kind = dom.get<std::string>("kind", "torus");
        try {
            if (kind == "torus") {
                cfg.domain = Domain::torus(dom.get<int>("dim", 1));
            } else if (kind == "box") {
                cfg.domain = Domain::box(dom.get<std::vector<double>>("lower"), dom.get<std::vector<double>>("upper"));
            } else {
                throw ConfigError(dom.field("kind") + ": expected 'torus' or 'box'");
            }
        } catch (const InputError& e) {
            throw ConfigError(dom.path + ": " + e.what());
        }
    } else {
        cfg.domain = Domain::torus(1);
    }
    cfg.names = root.get<std::vector<std::string>>("coordinates", default_coordinate_names(cfg.domain.dim));
    if (static_cast<int>(cfg.names.size()) != cfg.domain.dim)
        throw ConfigError(root.field("coordinates") + ": expected " + std::to_string(cfg.domain.dim) + " names");

    if (root.has("generators")) {
        const json& gens = root.at("generators");
        if (!gens.is_array()) throw ConfigError(root.field("generators") + ": expected an array");
        for (std::size_t i = 0; i < gens.size(); ++i) {
            std::string field = root.field("generators") + "[" + std::to_string(i) + "]";
            if (!gens[i].is_array() || static_cast<int>(gens[i].size()) != cfg.domain.dim)
                throw ConfigError(field + ": expected " + std::to_string(cfg.domain.dim) + " component expressions");
            std::vector<Coeff> comps;
            for (std::size_t c = 0; c < gens[i].size(); ++c) {
                if (!gens[i][c].is_string()) throw ConfigError(field + "[" + std::to_string(c) + "]: expected a string");
                comps.push_back(parse_coeff(gens[i][c].get<std::string>(), cfg.names, field + "[" + std::to_string(c) + "]"));
            }
            cfg.generators.emplace_back(std::move(comps));
        }
    }
    try {
        (void)cfg.module();
    } catch (const InputError& e) {
        throw ConfigError(root.field("generators") + ": " + e.what());
    }

    if (root.has("caps")) {
        Fields caps = root.sub("caps");
        cfg.structure_cap = caps.get<int>("structure_degree", cfg.structure_cap);
        cfg.fiber_cap = caps.get<int>("fiber_degree", cfg.fiber_cap);
        if (cfg.structure_cap < 0 || cfg.fiber_cap < 0) throw ConfigError(caps.path + ": caps must be >= 0");
    }
    if (root.has("outputs")) {
        Fields out = root.sub("outputs");
        cfg.report_file = out.get<std::string>("report", cfg.report_file);
        cfg.csv_file = out.get<std::string>("csv", cfg.csv_file);
    }
    if (root.has("pipeline")) {
        const json& stages = root.at("pipeline");
        if (!stages.is_array()) throw ConfigError(root.field("pipeline") + ": expected an array");
        std::set<std::string> seen;
        for (std::size_t i = 0; i < stages.size(); ++i) {
            Fields s{stages[i], root.field("pipeline") + "[" + std::to_string(i) + "]"};
            if (!stages[i].is_object()) throw ConfigError(s.path + ": expected an object");
            std::string check = s.get<std::string>("check");
            if (!find_check(check)) throw ConfigError(s.field("check") + ": unknown check '" + check + "'");
            std::string name = s.get<std::string>("name", check);
            if (!seen.insert(name).second)
                throw ConfigError(s.field("name") + ": duplicate stage name '" + name + "' (set distinct names)");
            cfg.pipeline.push_back({name, check, stages[i]});
        }
    }
    return cfg;
}

ScenarioConfig load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open scenario '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_scenario(ss.str());
}

Report run(const ScenarioConfig& config, const RunOptions& opts) {
    bool known = opts.subcommand == "report";
    for (const auto& [check, sub] : check_catalog()) known = known || sub == opts.subcommand;
    if (!known) throw ConfigError("unknown subcommand '" + opts.subcommand + "'");
    Report report;
    report.scenario = config.id;
    for (std::size_t i = 0; i < config.pipeline.size(); ++i) {
        const auto& stage = config.pipeline[i];
        const CatalogEntry* entry = find_check(stage.check);
        if (opts.subcommand != "report" && opts.subcommand != entry->subcommand) continue;
        Context ctx{config, opts, report, stage.name};
        Fields f{stage.params, "scenario.pipeline[" + std::to_string(i) + "]"};
        CheckResult result{stage.name, stage.check, false, ojson::object()};
        try {
            result.pass = entry->fn(ctx, f, result.data);
        } catch (const ConfigError&) {
            throw;
        } catch (const std::exception& e) {
            throw Error("stage '" + stage.name + "': " + e.what());
        }
        report.checks.push_back(std::move(result));
    }
    return report;
}

bool Report::ok() const {
    return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.pass; });
}

std::string Report::text() const {
    std::ostringstream out;
    out << "scenario: " << scenario << "\n";
    out << "status: " << (ok() ? "PASS" : "FAIL") << "\n";
    for (const auto& c : checks) {
        out << "\n[" << c.stage << "] " << c.check << ": " << (c.pass ? "PASS" : "FAIL") << "\n";
        for (const auto& [key, value] : c.data.items()) {
            if (value.is_array() && !value.empty() && value.front().is_object()) {
                out << "  " << key << ":\n";
                for (const auto& row : value) {
                    out << "   ";
                    for (const auto& [k, v] : row.items()) out << " " << k << "=" << render_value(v);
                    out << "\n";
                }
            } else {
                out << "  " << key << ": " << render_value(value) << "\n";
            }
        }
    }
    return out.str();
}

std::string Report::json() const {
    ojson j;
    j["scenario"] = scenario;
    j["status"] = ok() ? "pass" : "fail";
    ojson arr = ojson::array();
    for (const auto& c : checks)
        arr.push_back(ojson{{"stage", c.stage}, {"check", c.check}, {"verdict", c.pass ? "pass" : "fail"}, {"data", c.data}});
    j["checks"] = arr;
    return j.dump(2) + "\n";
}

std::string Report::csv() const {
    std::ostringstream out;
    out << "abscissa,value,series\n";
    for (const auto& r : plot) out << ojson(r.abscissa).dump() << "," << ojson(r.value).dump() << "," << r.series << "\n";
    return out.str();
}

}  // namespace folpsi
