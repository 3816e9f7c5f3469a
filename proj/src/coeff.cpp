#include "folpsi/coeff.hpp"

#include "folpsi/error.hpp"

#include <cmath>
#include <cstdlib>
#include <sstream>

namespace folpsi {

std::string to_string(const Rational& r) {
    return r.str();
}

std::string GaussRational::str() const {
    if (im == 0) return to_string(re);
    if (re == 0) {
        if (im == 1) return "I";
        if (im == -1) return "-I";
        return to_string(im) + "*I";
    }
    std::string s = "(" + to_string(re);
    if (im > 0) s += "+";
    s += (im == 1 ? std::string("") : im == -1 ? std::string("-") : to_string(im) + "*") + "I)";
    return s;
}

int Monomial::degree() const {
    int d = 0;
    for (int p : pow) d += p;
    for (int k : freq) d += std::abs(k);
    return d;
}

namespace {

void check_dims(const Coeff& a, const Coeff& b) {
    if (a.dim() != b.dim()) {
        throw InputError("coefficient ring mismatch: dim " + std::to_string(a.dim()) + " vs " +
                         std::to_string(b.dim()));
    }
}

Monomial unit_monomial(int dim) {
    return Monomial{std::vector<int>(dim, 0), std::vector<int>(dim, 0)};
}

}  // namespace

void Coeff::add_term(const Monomial& m, const GaussRational& c) {
    if (c.is_zero()) return;
    auto [it, inserted] = terms_.try_emplace(m, c);
    if (!inserted) {
        it->second += c;
        if (it->second.is_zero()) terms_.erase(it);
    }
}

Coeff Coeff::constant(int dim, const GaussRational& c) {
    Coeff out(dim);
    out.add_term(unit_monomial(dim), c);
    return out;
}

Coeff Coeff::coordinate(int dim, int axis) {
    Monomial m = unit_monomial(dim);
    m.pow.at(axis) = 1;
    return monomial(dim, std::move(m));
}

Coeff Coeff::monomial(int dim, Monomial m, const GaussRational& c) {
    Coeff out(dim);
    out.add_term(m, c);
    return out;
}

Coeff Coeff::exp_i(int dim, std::vector<int> k) {
    Monomial m = unit_monomial(dim);
    m.freq = std::move(k);
    return monomial(dim, std::move(m));
}

Coeff Coeff::cos_of(int dim, const std::vector<int>& k) {
    std::vector<int> neg(k.size());
    for (std::size_t i = 0; i < k.size(); ++i) neg[i] = -k[i];
    Rational half(1, 2);
    return exp_i(dim, k) * GaussRational(half) + exp_i(dim, neg) * GaussRational(half);
}

Coeff Coeff::sin_of(int dim, const std::vector<int>& k) {
    std::vector<int> neg(k.size());
    for (std::size_t i = 0; i < k.size(); ++i) neg[i] = -k[i];
    // sin t = (e^{it} - e^{-it}) / (2i) = -i/2 e^{it} + i/2 e^{-it}
    GaussRational minus_half_i(Rational(0), Rational(-1, 2));
    return exp_i(dim, k) * minus_half_i + exp_i(dim, neg) * minus_half_i.conj();
}

bool Coeff::is_constant() const {
    return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.is_constant());
}

GaussRational Coeff::constant_term() const {
    auto it = terms_.find(unit_monomial(dim_));
    return it == terms_.end() ? GaussRational(0) : it->second;
}

bool Coeff::has_polynomial_part() const {
    for (const auto& [m, c] : terms_)
        for (int p : m.pow)
            if (p != 0) return true;
    return false;
}

bool Coeff::has_trig_part() const {
    for (const auto& [m, c] : terms_)
        for (int k : m.freq)
            if (k != 0) return true;
    return false;
}

int Coeff::degree() const {
    int d = 0;
    for (const auto& [m, c] : terms_) d = std::max(d, m.degree());
    return d;
}

Coeff& Coeff::operator+=(const Coeff& o) {
    if (dim_ == 0 && terms_.empty()) dim_ = o.dim_;
    check_dims(*this, o);
    for (const auto& [m, c] : o.terms_) add_term(m, c);
    return *this;
}

Coeff& Coeff::operator-=(const Coeff& o) {
    if (dim_ == 0 && terms_.empty()) dim_ = o.dim_;
    check_dims(*this, o);
    for (const auto& [m, c] : o.terms_) add_term(m, -c);
    return *this;
}

Coeff& Coeff::operator*=(const GaussRational& s) {
    if (s.is_zero()) {
        terms_.clear();
        return *this;
    }
    for (auto& [m, c] : terms_) c = c * s;
    return *this;
}

Coeff operator*(const Coeff& a, const Coeff& b) {
    check_dims(a, b);
    Coeff out(a.dim());
    for (const auto& [ma, ca] : a.terms_) {
        for (const auto& [mb, cb] : b.terms_) {
            Monomial m = ma;
            for (int i = 0; i < a.dim(); ++i) {
                m.pow[i] += mb.pow[i];
                m.freq[i] += mb.freq[i];
            }
            out.add_term(m, ca * cb);
        }
    }
    return out;
}

bool operator==(const Coeff& a, const Coeff& b) {
    if (a.terms_.empty() && b.terms_.empty()) return true;
    return a.dim_ == b.dim_ && a.terms_ == b.terms_;
}

Coeff Coeff::pow(int e) const {
    if (e < 0) throw InputError("negative power of a coefficient function");
    Coeff out = constant(dim_, GaussRational(1));
    for (int i = 0; i < e; ++i) out = out * *this;
    return out;
}

Coeff Coeff::derivative(int axis) const {
    if (axis < 0 || axis >= dim_) throw InputError("derivative axis out of range");
    Coeff out(dim_);
    for (const auto& [m, c] : terms_) {
        // d/dx (x^a e^{ikx}) = a x^{a-1} e^{ikx} + i k x^a e^{ikx}
        if (m.pow[axis] > 0) {
            Monomial d = m;
            d.pow[axis] -= 1;
            out.add_term(d, c * GaussRational(m.pow[axis]));
        }
        if (m.freq[axis] != 0) {
            out.add_term(m, c * GaussRational(Rational(0), Rational(m.freq[axis])));
        }
    }
    return out;
}

Coeff Coeff::conj() const {
    Coeff out(dim_);
    for (const auto& [m, c] : terms_) {
        Monomial n = m;
        for (int& k : n.freq) k = -k;
        out.add_term(n, c.conj());
    }
    return out;
}

Coeff Coeff::real_part() const {
    return (*this + conj()) * GaussRational(Rational(1, 2));
}

std::complex<double> Coeff::eval(std::span<const double> x) const {
    if (static_cast<int>(x.size()) != dim_) throw InputError("coefficient evaluated at a point of wrong dimension");
    std::complex<double> acc{0.0, 0.0};
    for (const auto& [m, c] : terms_) {
        double mag = 1.0;
        double phase = 0.0;
        for (int i = 0; i < dim_; ++i) {
            for (int p = 0; p < m.pow[i]; ++p) mag *= x[i];
            phase += m.freq[i] * x[i];
        }
        acc += c.to_complex() * std::polar(mag, phase);
    }
    return acc;
}

std::vector<std::string> default_coordinate_names(int dim) {
    std::vector<std::string> names;
    for (int i = 0; i < dim; ++i) names.push_back("x" + std::to_string(i + 1));
    return names;
}

namespace {

std::string render_linear_form(const std::vector<int>& k, const std::vector<std::string>& names) {
    std::string s;
    for (std::size_t i = 0; i < k.size(); ++i) {
        if (k[i] == 0) continue;
        if (!s.empty() && k[i] > 0) s += "+";
        if (k[i] == -1) s += "-";
        else if (k[i] != 1) s += std::to_string(k[i]) + "*";
        s += names[i];
    }
    return s;
}

std::string render_powers(const std::vector<int>& pow, const std::vector<std::string>& names) {
    std::string s;
    for (std::size_t i = 0; i < pow.size(); ++i) {
        if (pow[i] == 0) continue;
        if (!s.empty()) s += "*";
        s += names[i];
        if (pow[i] > 1) s += "^" + std::to_string(pow[i]);
    }
    return s;
}

bool canonical_sign(const std::vector<int>& k) {
    for (int v : k)
        if (v != 0) return v > 0;
    return true;
}

void append_item(std::string& out, const GaussRational& c, const std::string& body) {
    if (c.is_zero()) return;
    std::string coef = c.str();
    bool negative = c.is_real() && c.re < 0;
    if (!out.empty()) out += negative ? " - " : " + ";
    else if (negative) out += "-";
    if (negative) coef = GaussRational(-c.re).str();
    if (body.empty()) {
        out += coef;
    } else if (coef == "1") {
        out += body;
    } else {
        out += coef + "*" + body;
    }
}

}  // namespace

std::string Coeff::str(const std::vector<std::string>& names) const {
    if (terms_.empty()) return "0";
    // Pair e^{ikx} with e^{-ikx} into cos/sin so real functions print naturally.
    struct Pair {
        GaussRational plus, minus;
    };
    std::map<std::pair<std::vector<int>, std::vector<int>>, Pair> grouped;
    for (const auto& [m, c] : terms_) {
        std::vector<int> k = m.freq;
        bool pos = canonical_sign(k);
        if (!pos)
            for (int& v : k) v = -v;
        auto& p = grouped[{m.pow, k}];
        (pos ? p.plus : p.minus) += c;
    }
    std::string out;
    for (const auto& [key, p] : grouped) {
        const auto& [pow, k] = key;
        std::string poly = render_powers(pow, names);
        bool trig = false;
        for (int v : k) trig = trig || v != 0;
        if (!trig) {
            append_item(out, p.plus, poly);
            continue;
        }
        // c+ e^{it} + c- e^{-it} = (c+ + c-) cos t + I (c+ - c-) sin t
        GaussRational a = p.plus + p.minus;
        GaussRational b = GaussRational::I() * (p.plus - p.minus);
        std::string arg = render_linear_form(k, names);
        std::string prefix = poly.empty() ? "" : poly + "*";
        append_item(out, a, prefix + "cos(" + arg + ")");
        append_item(out, b, prefix + "sin(" + arg + ")");
    }
    return out.empty() ? "0" : out;
}

std::string Coeff::str() const {
    return str(default_coordinate_names(dim_));
}

}  // namespace folpsi
