#include "folpsi/polysym.hpp"

#include "folpsi/error.hpp"
#include "folpsi/expr.hpp"
#include "json.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <sstream>

namespace folpsi {

namespace {

double smoothstep(double t) {
    if (t <= 0.0) return 0.0;
    if (t >= 1.0) return 1.0;
    double t4 = t * t * t * t;
    return t4 * (35.0 - 84.0 * t + 70.0 * t * t - 20.0 * t * t * t);
}

double norm(std::span<const double> v) {
    double s = 0.0;
    for (double c : v) s += c * c;
    return std::sqrt(s);
}

cplx xi_monomial_value(std::span<const double> xi, const std::vector<int>& pow) {
    double v = 1.0;
    for (std::size_t j = 0; j < pow.size(); ++j)
        for (int p = 0; p < pow[j]; ++p) v *= xi[j];
    return v;
}

/// Value of xi^pow * |xi|^p * angular(x, omega) given r = |xi| > 0.
cplx xi_factor(std::span<const double> x, std::span<const double> xi, double r, const std::vector<int>& pow,
               int norm_pow, const AngularPtr& angular) {
    cplx v = xi_monomial_value(xi, pow) * std::pow(r, norm_pow);
    if (angular) {
        std::vector<double> omega(xi.begin(), xi.end());
        for (double& c : omega) c /= r;
        v *= (*angular)(x, omega);
    }
    return v;
}

AngularPtr combine(const AngularPtr& a, const AngularPtr& b) {
    if (!a) return b;
    if (!b) return a;
    return std::make_shared<AngularFactor>("(" + a->label() + ")*(" + b->label() + ")",
                                           [a, b](std::span<const double> x, std::span<const double> w) {
                                               return (*a)(x, w) * (*b)(x, w);
                                           });
}

WeightPtr combine(const WeightPtr& a, const WeightPtr& b) {
    if (!a) return b;
    if (!b) return a;
    return std::make_shared<Weight>("(" + a->label() + ")*(" + b->label() + ")",
                                    [a, b](std::span<const double> x) { return (*a)(x) * (*b)(x); });
}

SymbolPiece multiply(const SymbolPiece& a, const SymbolPiece& b) {
    SymbolPiece out;
    out.coeff = a.coeff * b.coeff;
    out.xi_pow = a.xi_pow;
    for (std::size_t j = 0; j < out.xi_pow.size(); ++j) out.xi_pow[j] += b.xi_pow[j];
    out.norm_pow = a.norm_pow + b.norm_pow;
    out.angular = combine(a.angular, b.angular);
    out.weight = combine(a.weight, b.weight);
    return out;
}

CutoffKind merged_cutoff(const PolyhomSymbol& a, const PolyhomSymbol& b) {
    return (a.cutoff() == CutoffKind::Standard || b.cutoff() == CutoffKind::Standard) ? CutoffKind::Standard
                                                                                     : CutoffKind::None;
}

void require_same_space(const PolyhomSymbol& a, const PolyhomSymbol& b, const char* op) {
    if (a.x_dim() != b.x_dim() || a.xi_dim() != b.xi_dim())
        throw InputError(std::string(op) + ": symbol dimension mismatch");
    if (a.mollifier_scale() > 0.0 || b.mollifier_scale() > 0.0)
        throw InputError(std::string(op) + ": mollified symbols are evaluation-only");
}

}  // namespace

double radial_cutoff(double r) {
    return smoothstep((r - 0.5) / 0.5);
}

double mollifier_profile(double s) {
    return 1.0 - smoothstep((s - kMollifierPlateau) / (kMollifierSupport - kMollifierPlateau));
}

// ---------------------------------------------------------------------------

int SymbolPiece::degree() const {
    int d = norm_pow;
    for (int p : xi_pow) d += p;
    return d;
}

std::string SymbolPiece::xi_str() const {
    std::vector<std::string> parts;
    for (std::size_t j = 0; j < xi_pow.size(); ++j) {
        if (xi_pow[j] == 0) continue;
        std::string s = "xi" + std::to_string(j + 1);
        if (xi_pow[j] != 1) s += "^" + std::to_string(xi_pow[j]);
        parts.push_back(s);
    }
    if (norm_pow != 0) parts.push_back(norm_pow == 1 ? "|xi|" : "|xi|^" + std::to_string(norm_pow));
    if (angular) parts.push_back("ang[" + angular->label() + "]");
    if (weight) parts.push_back("w[" + weight->label() + "]");
    if (parts.empty()) return "1";
    std::string out = parts.front();
    for (std::size_t i = 1; i < parts.size(); ++i) out += "*" + parts[i];
    return out;
}

SymbolPiece xi_monomial(Coeff coeff, std::vector<int> pow) {
    SymbolPiece p;
    p.coeff = std::move(coeff);
    p.xi_pow = std::move(pow);
    return p;
}

SymbolPiece xi_norm_power(Coeff coeff, int xi_dim, int power) {
    SymbolPiece p;
    p.coeff = std::move(coeff);
    p.xi_pow.assign(xi_dim, 0);
    p.norm_pow = power;
    return p;
}

// ---------------------------------------------------------------------------

HomogeneousTerm& HomogeneousTerm::add(SymbolPiece piece) {
    if (piece.coeff.dim() != x_dim_ || static_cast<int>(piece.xi_pow.size()) != xi_dim_)
        throw InputError("symbol piece dimension mismatch");
    if (piece.degree() != degree_)
        throw InputError("symbol piece of degree " + std::to_string(piece.degree()) + " added to a degree " +
                         std::to_string(degree_) + " term");
    if (!piece.coeff.is_zero()) pieces_.push_back(std::move(piece));
    return *this;
}

cplx HomogeneousTerm::eval(std::span<const double> x, std::span<const double> xi) const {
    double r = norm(xi);
    cplx acc = 0.0;
    for (const auto& p : pieces_) {
        cplx c = p.coeff.eval(x);
        if (p.weight) c *= (*p.weight)(x);
        if (r == 0.0) {
            bool xi_free = p.norm_pow == 0 && !p.angular && p.degree() == 0;
            if (xi_free) acc += c;
            continue;
        }
        acc += c * xi_factor(x, xi, r, p.xi_pow, p.norm_pow, p.angular);
    }
    return acc;
}

HomogeneousTerm HomogeneousTerm::conj() const {
    HomogeneousTerm out(degree_, x_dim_, xi_dim_);
    for (const auto& p : pieces_) {
        SymbolPiece q = p;
        q.coeff = p.coeff.conj();
        if (p.angular) {
            auto a = p.angular;
            q.angular = std::make_shared<AngularFactor>(
                "conj(" + a->label() + ")",
                [a](std::span<const double> x, std::span<const double> w) { return std::conj((*a)(x, w)); });
        }
        out.pieces_.push_back(std::move(q));
    }
    return out;
}

HomogeneousTerm HomogeneousTerm::canonical() const {
    std::map<std::pair<std::vector<int>, int>, Coeff> merged;
    HomogeneousTerm out(degree_, x_dim_, xi_dim_);
    std::vector<SymbolPiece> closures;
    for (const auto& p : pieces_) {
        if (!p.algebraic()) {
            closures.push_back(p);
            continue;
        }
        auto key = std::make_pair(p.xi_pow, p.norm_pow);
        auto it = merged.find(key);
        if (it == merged.end()) merged.emplace(key, p.coeff);
        else it->second += p.coeff;
    }
    for (auto& [key, c] : merged) {
        if (c.is_zero()) continue;
        SymbolPiece p;
        p.coeff = c;
        p.xi_pow = key.first;
        p.norm_pow = key.second;
        out.pieces_.push_back(std::move(p));
    }
    for (auto& p : closures) out.pieces_.push_back(std::move(p));
    return out;
}

HomogeneousTerm operator*(const HomogeneousTerm& a, const HomogeneousTerm& b) {
    HomogeneousTerm out(a.degree_ + b.degree_, a.x_dim_, a.xi_dim_);
    for (const auto& pa : a.pieces_)
        for (const auto& pb : b.pieces_) out.add(multiply(pa, pb));
    return out.canonical();
}

bool operator==(const HomogeneousTerm& a, const HomogeneousTerm& b) {
    if (a.degree_ != b.degree_ || a.x_dim_ != b.x_dim_ || a.xi_dim_ != b.xi_dim_) return false;
    HomogeneousTerm ca = a.canonical();
    HomogeneousTerm cb = b.canonical();
    if (ca.pieces_.size() != cb.pieces_.size()) return false;
    for (std::size_t i = 0; i < ca.pieces_.size(); ++i) {
        const auto& p = ca.pieces_[i];
        const auto& q = cb.pieces_[i];
        if (!(p.coeff == q.coeff) || p.xi_pow != q.xi_pow || p.norm_pow != q.norm_pow ||
            p.angular != q.angular || p.weight != q.weight)
            return false;
    }
    return true;
}

// ---------------------------------------------------------------------------

PolyhomSymbol::PolyhomSymbol(int x_dim, int xi_dim, int order, std::vector<HomogeneousTerm> terms,
                             CutoffKind cutoff)
    : x_dim_(x_dim), xi_dim_(xi_dim), order_(order), terms_(std::move(terms)), cutoff_(cutoff) {
    if (x_dim < 1 || xi_dim < 1) throw InputError("symbol dimensions must be positive");
    if (terms_.empty()) throw InputError("symbol needs at least one term");
    for (std::size_t k = 0; k < terms_.size(); ++k) {
        const auto& t = terms_[k];
        if (t.degree() != order - static_cast<int>(k))
            throw InputError("term degrees must be consecutive and start at the order");
        if (t.x_dim() != x_dim || t.xi_dim() != xi_dim) throw InputError("term dimension mismatch");
    }
}

PolyhomSymbol PolyhomSymbol::constant(int dim, const GaussRational& c, CutoffKind cutoff) {
    HomogeneousTerm t(0, dim, dim);
    t.add(xi_monomial(Coeff::constant(dim, c), std::vector<int>(dim, 0)));
    return PolyhomSymbol(dim, dim, 0, {t}, cutoff);
}

PolyhomSymbol PolyhomSymbol::from_pieces(int x_dim, int xi_dim, std::vector<SymbolPiece> pieces,
                                         CutoffKind cutoff) {
    if (pieces.empty()) throw InputError("from_pieces needs at least one piece");
    HomogeneousTerm t(pieces.front().degree(), x_dim, xi_dim);
    for (auto& p : pieces) t.add(std::move(p));
    return PolyhomSymbol(x_dim, xi_dim, t.degree(), {t.canonical()}, cutoff);
}

bool PolyhomSymbol::is_x_independent() const {
    for (const auto& t : terms_)
        for (const auto& p : t.pieces())
            if (!p.coeff.is_constant() || p.angular || p.weight) return false;
    return true;
}

cplx PolyhomSymbol::eval(std::span<const double> x, std::span<const double> xi) const {
    if (static_cast<int>(x.size()) != x_dim_ || static_cast<int>(xi.size()) != xi_dim_)
        throw InputError("symbol evaluated with wrong dimensions");
    for (double v : xi)
        if (!std::isfinite(v)) throw InputError("covector must be finite");
    double r = norm(xi);
    double chi = cutoff_ == CutoffKind::Standard ? radial_cutoff(r) : 1.0;
    if (mollifier_n_ > 0.0) chi *= mollifier_profile(r / mollifier_n_);
    if (chi == 0.0) return 0.0;
    cplx acc = 0.0;
    for (const auto& t : terms_) acc += t.eval(x, xi);
    return chi * acc;
}

BoundSymbol PolyhomSymbol::bind(std::span<const double> x) const {
    if (static_cast<int>(x.size()) != x_dim_) throw InputError("symbol bound at a point of wrong dimension");
    BoundSymbol b;
    b.x_.assign(x.begin(), x.end());
    b.cutoff_ = cutoff_;
    b.mollifier_n_ = mollifier_n_;
    for (const auto& t : terms_) {
        for (const auto& p : t.pieces()) {
            cplx f = p.coeff.eval(x);
            if (p.weight) f *= (*p.weight)(x);
            if (f == 0.0) continue;
            b.pieces_.push_back({f, p.xi_pow, p.norm_pow, p.angular, p.norm_pow == 0 && !p.angular});
        }
    }
    return b;
}

cplx BoundSymbol::operator()(std::span<const double> xi) const {
    double r = norm(xi);
    double chi = cutoff_ == CutoffKind::Standard ? radial_cutoff(r) : 1.0;
    if (mollifier_n_ > 0.0) chi *= mollifier_profile(r / mollifier_n_);
    if (chi == 0.0) return 0.0;
    cplx acc = 0.0;
    for (const auto& p : pieces_) {
        if (r == 0.0) {
            bool constant = p.xi_polynomial && std::all_of(p.xi_pow.begin(), p.xi_pow.end(), [](int v) { return v == 0; });
            if (constant) acc += p.factor;
            continue;
        }
        acc += p.factor * xi_factor(x_, xi, r, p.xi_pow, p.norm_pow, p.angular);
    }
    return chi * acc;
}

PolyhomSymbol PolyhomSymbol::principal() const {
    PolyhomSymbol out(x_dim_, xi_dim_, order_, {terms_.front()}, cutoff_);
    out.mollifier_n_ = mollifier_n_;
    return out;
}

PolyhomSymbol PolyhomSymbol::with_cutoff(CutoffKind cutoff) const {
    PolyhomSymbol out = *this;
    out.cutoff_ = cutoff;
    return out;
}

PolyhomSymbol PolyhomSymbol::conj() const {
    PolyhomSymbol out = *this;
    for (auto& t : out.terms_) t = t.conj();
    return out;
}

PolyhomSymbol PolyhomSymbol::scaled(const GaussRational& s) const {
    HomogeneousTerm one(0, x_dim_, xi_dim_);
    one.add(xi_monomial(Coeff::constant(x_dim_, s), std::vector<int>(xi_dim_, 0)));
    PolyhomSymbol c(x_dim_, xi_dim_, 0, {one}, CutoffKind::None);
    PolyhomSymbol out = symbol_product(c, *this, depth());
    out.cutoff_ = cutoff_;
    return out;
}

std::string PolyhomSymbol::serialize(const std::vector<std::string>& names) const {
    nlohmann::ordered_json j;
    j["x_dim"] = x_dim_;
    j["xi_dim"] = xi_dim_;
    j["order"] = order_;
    j["cutoff"] = cutoff_ == CutoffKind::Standard ? "standard" : "none";
    j["mollifier"] = mollifier_n_;
    nlohmann::ordered_json terms = nlohmann::ordered_json::array();
    for (const auto& t : terms_) {
        nlohmann::ordered_json jt;
        jt["degree"] = t.degree();
        nlohmann::ordered_json pieces = nlohmann::ordered_json::array();
        for (const auto& p : t.pieces()) pieces.push_back({{"coeff", p.coeff.str(names)}, {"xi", p.xi_str()}});
        jt["pieces"] = pieces;
        terms.push_back(jt);
    }
    j["terms"] = terms;
    return j.dump(2);
}

std::string PolyhomSymbol::serialize() const {
    return serialize(default_coordinate_names(x_dim_));
}

namespace {

}  // namespace

SymbolPiece parse_xi_expression(const std::string& text, Coeff coeff, int xi_dim) {
    SymbolPiece p;
    p.coeff = std::move(coeff);
    p.xi_pow.assign(xi_dim, 0);
    std::stringstream ss(text);
    std::string tok;
    while (std::getline(ss, tok, '*')) {
        if (tok == "1" || tok.empty()) continue;
        if (tok.rfind("ang[", 0) == 0 || tok.rfind("w[", 0) == 0)
            throw InputError("closure factor '" + tok + "' cannot be deserialized");
        auto caret = tok.find('^');
        std::string base = tok.substr(0, caret);
        int e = caret == std::string::npos ? 1 : std::stoi(tok.substr(caret + 1));
        if (base == "|xi|") {
            p.norm_pow += e;
        } else if (base.rfind("xi", 0) == 0) {
            int j = std::stoi(base.substr(2)) - 1;
            if (j < 0 || j >= xi_dim || e < 0) throw InputError("bad xi factor '" + tok + "'");
            p.xi_pow[j] += e;
        } else {
            throw InputError("bad xi factor '" + tok + "'");
        }
    }
    return p;
}


PolyhomSymbol PolyhomSymbol::deserialize(const std::string& text, const std::vector<std::string>& names) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError("symbol", e.byte, e.what());
    }
    int x_dim = j.at("x_dim");
    int xi_dim = j.at("xi_dim");
    int order = j.at("order");
    CutoffKind cutoff = j.at("cutoff") == "standard" ? CutoffKind::Standard : CutoffKind::None;
    std::vector<HomogeneousTerm> terms;
    for (const auto& jt : j.at("terms")) {
        HomogeneousTerm t(jt.at("degree"), x_dim, xi_dim);
        for (const auto& jp : jt.at("pieces")) {
            Coeff c = parse_coeff(jp.at("coeff").get<std::string>(), names, "symbol.coeff");
            t.add(parse_xi_expression(jp.at("xi"), std::move(c), xi_dim));
        }
        terms.push_back(std::move(t));
    }
    PolyhomSymbol out(x_dim, xi_dim, order, std::move(terms), cutoff);
    out.mollifier_n_ = j.value("mollifier", 0.0);
    return out;
}

// ---------------------------------------------------------------------------

std::vector<std::vector<double>> unit_sphere_mesh(int d, int resolution) {
    if (d < 1) throw InputError("sphere dimension must be positive");
    std::vector<std::vector<double>> out;
    if (d == 1) return {{1.0}, {-1.0}};
    if (d == 2) {
        for (int k = 0; k < resolution; ++k) {
            double t = 2.0 * std::numbers::pi * k / resolution;
            out.push_back({std::cos(t), std::sin(t)});
        }
        return out;
    }
    if (d == 3) {
        int count = std::max(8, resolution * resolution / 2);
        double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
        for (int k = 0; k < count; ++k) {
            double z = 1.0 - 2.0 * (k + 0.5) / count;
            double rho = std::sqrt(1.0 - z * z);
            out.push_back({rho * std::cos(golden * k), rho * std::sin(golden * k), z});
        }
        for (int j = 0; j < 3; ++j)
            for (double s : {1.0, -1.0}) {
                std::vector<double> e(3, 0.0);
                e[j] = s;
                out.push_back(e);
            }
        return out;
    }
    for (int i = 0; i < d; ++i)
        for (double s : {1.0, -1.0}) {
            std::vector<double> e(d, 0.0);
            e[i] = s;
            out.push_back(e);
        }
    for (int i = 0; i < d; ++i)
        for (int j = i + 1; j < d; ++j)
            for (double s : {1.0, -1.0}) {
                std::vector<double> e(d, 0.0);
                e[i] = std::numbers::sqrt2 / 2;
                e[j] = s * std::numbers::sqrt2 / 2;
                out.push_back(e);
            }
    return out;
}

PolyhomSymbol symbol_product(const PolyhomSymbol& a, const PolyhomSymbol& b, int max_depth) {
    require_same_space(a, b, "symbol_product");
    int depth = std::min(max_depth, a.depth() + b.depth() - 1);
    int order = a.order() + b.order();
    std::vector<HomogeneousTerm> terms;
    for (int k = 0; k < depth; ++k) {
        HomogeneousTerm t(order - k, a.x_dim(), a.xi_dim());
        for (int i = 0; i <= k; ++i) {
            int j = k - i;
            if (i >= a.depth() || j >= b.depth()) continue;
            HomogeneousTerm prod = a.terms()[i] * b.terms()[j];
            for (const auto& p : prod.pieces()) t.add(p);
        }
        terms.push_back(t.canonical());
    }
    return PolyhomSymbol(a.x_dim(), a.xi_dim(), order, std::move(terms), merged_cutoff(a, b));
}

PolyhomSymbol symbol_sum(const PolyhomSymbol& a, const PolyhomSymbol& b, int max_depth) {
    require_same_space(a, b, "symbol_sum");
    int order = std::max(a.order(), b.order());
    int lowest = std::min(a.order() - a.depth() + 1, b.order() - b.depth() + 1);
    int depth = std::min(max_depth, order - lowest + 1);
    std::vector<HomogeneousTerm> terms;
    for (int k = 0; k < depth; ++k) {
        int deg = order - k;
        HomogeneousTerm t(deg, a.x_dim(), a.xi_dim());
        for (const PolyhomSymbol* s : {&a, &b}) {
            int idx = s->order() - deg;
            if (idx < 0 || idx >= s->depth()) continue;
            for (const auto& p : s->terms()[idx].pieces()) t.add(p);
        }
        terms.push_back(t.canonical());
    }
    return PolyhomSymbol(a.x_dim(), a.xi_dim(), order, std::move(terms), merged_cutoff(a, b));
}

namespace {

template <class Check>
void scan_samples(const PolyhomSymbol& a, const SampleSet& samples, Check check) {
    for (const auto& x : samples.points) {
        if (static_cast<int>(x.size()) != a.x_dim()) throw InputError("sample point of wrong dimension");
        for (const auto& w : samples.directions) {
            if (static_cast<int>(w.size()) != a.xi_dim()) throw InputError("sample direction of wrong dimension");
            check(x, w, a.leading().eval(x, w));
        }
    }
}

std::string term_label(const HomogeneousTerm& t) {
    std::string s;
    for (const auto& p : t.pieces()) {
        if (!s.empty()) s += " + ";
        s += "(" + p.coeff.str() + ")*" + p.xi_str();
    }
    return s.empty() ? "0" : s;
}

}  // namespace

PolyhomSymbol principal_inverse(const PolyhomSymbol& a, const SampleSet& samples, double tol) {
    scan_samples(a, samples, [&](const auto& x, const auto& w, cplx v) {
        if (std::abs(v) < tol)
            throw EllipticityError("leading term vanishes (|a_m| = " + std::to_string(std::abs(v)) + ")", x, w);
    });
    HomogeneousTerm lead = a.leading();
    auto inv = std::make_shared<AngularFactor>(
        "1/(" + term_label(lead) + ")",
        [lead](std::span<const double> x, std::span<const double> w) { return 1.0 / lead.eval(x, w); });
    SymbolPiece p = xi_norm_power(Coeff::constant(a.x_dim(), GaussRational(1)), a.xi_dim(), -a.order());
    p.angular = inv;
    return PolyhomSymbol::from_pieces(a.x_dim(), a.xi_dim(), {p}, CutoffKind::Standard);
}

PolyhomSymbol principal_sqrt(const PolyhomSymbol& a, const SampleSet& samples, double tol) {
    if (a.order() % 2 != 0) throw InputError("principal_sqrt needs an even order");
    scan_samples(a, samples, [&](const auto& x, const auto& w, cplx v) {
        if (!(v.real() > tol) || std::abs(v.imag()) > 1e-12 * std::max(1.0, std::abs(v.real())))
            throw PositivityError("leading term not positive (value " + std::to_string(v.real()) + ")", x, w);
    });
    HomogeneousTerm lead = a.leading();
    auto root = std::make_shared<AngularFactor>(
        "sqrt(" + term_label(lead) + ")",
        [lead](std::span<const double> x, std::span<const double> w) { return std::sqrt(lead.eval(x, w).real()); });
    SymbolPiece p = xi_norm_power(Coeff::constant(a.x_dim(), GaussRational(1)), a.xi_dim(), a.order() / 2);
    p.angular = root;
    return PolyhomSymbol::from_pieces(a.x_dim(), a.xi_dim(), {p}, CutoffKind::Standard);
}

PolyhomSymbol mollify(const PolyhomSymbol& a, double n) {
    if (!(n >= 1.0)) throw InputError("mollifier scale must be >= 1");
    PolyhomSymbol out = a;
    out.mollifier_n_ = n;
    return out;
}

PolyhomSymbol asymptotic_sum(const std::vector<PolyhomSymbol>& inputs, int max_depth) {
    if (inputs.empty()) throw InputError("asymptotic_sum needs at least one input");
    const int m = inputs.front().order();
    int lowest = m;
    for (std::size_t k = 0; k < inputs.size(); ++k) {
        const auto& s = inputs[k];
        if (s.order() != m - static_cast<int>(k))
            throw InputError("asymptotic_sum inputs must have orders m, m-1, m-2, ...");
        if (s.x_dim() != inputs.front().x_dim() || s.xi_dim() != inputs.front().xi_dim())
            throw InputError("asymptotic_sum dimension mismatch");
        lowest = std::min(lowest, s.order() - s.depth() + 1);
    }
    int depth = std::min(max_depth, m - lowest + 1);
    PolyhomSymbol acc = inputs.front();
    for (std::size_t k = 1; k < inputs.size(); ++k) acc = symbol_sum(acc, inputs[k], depth);
    if (acc.depth() > depth) {
        std::vector<HomogeneousTerm> terms(acc.terms().begin(), acc.terms().begin() + depth);
        acc = PolyhomSymbol(acc.x_dim(), acc.xi_dim(), m, std::move(terms), acc.cutoff());
    }
    return acc;
}

PolyhomSymbol symbol_from_pieces(int x_dim, int xi_dim, std::vector<SymbolPiece> pieces, CutoffKind cutoff) {
    if (pieces.empty()) throw InputError("symbol needs at least one piece");
    int hi = pieces.front().degree(), lo = hi;
    for (const auto& p : pieces) {
        hi = std::max(hi, p.degree());
        lo = std::min(lo, p.degree());
    }
    std::vector<HomogeneousTerm> terms;
    for (int d = hi; d >= lo; --d) {
        HomogeneousTerm t(d, x_dim, xi_dim);
        for (const auto& p : pieces)
            if (p.degree() == d) t.add(p);
        terms.push_back(t.canonical());
    }
    return PolyhomSymbol(x_dim, xi_dim, hi, std::move(terms), cutoff);
}

}  // namespace folpsi
