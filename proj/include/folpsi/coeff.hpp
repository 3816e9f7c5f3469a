#pragma once

#include "folpsi/rational.hpp"

#include <complex>
#include <compare>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace folpsi {

/// x^pow * exp(i <freq, x>). Products and derivatives of these stay in the span.
struct Monomial {
    std::vector<int> pow;
    std::vector<int> freq;

    int degree() const;
    bool is_constant() const { return degree() == 0; }
    auto operator<=>(const Monomial&) const = default;
};

/// Exact coefficient function of x: a finite Q(i)-linear combination of
/// Monomials. Covers both multivariate polynomials (box domains) and finite
/// Fourier series (torus domains) in one ring, closed under product and d/dx_j.
class Coeff {
public:
    using TermMap = std::map<Monomial, GaussRational>;

    Coeff() = default;
    explicit Coeff(int dim) : dim_(dim) {}

    static Coeff constant(int dim, const GaussRational& c);
    static Coeff coordinate(int dim, int axis);
    static Coeff monomial(int dim, Monomial m, const GaussRational& c = GaussRational(1));
    /// exp(i <k, x>)
    static Coeff exp_i(int dim, std::vector<int> k);
    static Coeff cos_of(int dim, const std::vector<int>& k);
    static Coeff sin_of(int dim, const std::vector<int>& k);

    int dim() const { return dim_; }
    const TermMap& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    /// Value of the constant monomial if this is a constant.
    bool is_constant() const;
    GaussRational constant_term() const;

    bool has_polynomial_part() const;
    bool has_trig_part() const;
    int degree() const;

    Coeff& operator+=(const Coeff& o);
    Coeff& operator-=(const Coeff& o);
    Coeff& operator*=(const GaussRational& s);
    friend Coeff operator+(Coeff a, const Coeff& b) { return a += b; }
    friend Coeff operator-(Coeff a, const Coeff& b) { return a -= b; }
    friend Coeff operator*(const Coeff& a, const Coeff& b);
    friend Coeff operator*(Coeff a, const GaussRational& s) { return a *= s; }
    friend Coeff operator*(const GaussRational& s, Coeff a) { return a *= s; }
    Coeff operator-() const { return *this * GaussRational(-1); }
    friend bool operator==(const Coeff& a, const Coeff& b);

    Coeff pow(int e) const;
    Coeff derivative(int axis) const;
    /// Pointwise complex conjugate.
    Coeff conj() const;
    /// (f + conj f) / 2
    Coeff real_part() const;
    bool is_real() const { return conj() == *this; }

    std::complex<double> eval(std::span<const double> x) const;

    /// Parseable rendering using cos/sin and I; `names` are coordinate names.
    std::string str(const std::vector<std::string>& names) const;
    std::string str() const;

    void add_term(const Monomial& m, const GaussRational& c);

private:
    int dim_ = 0;
    TermMap terms_;
};

std::vector<std::string> default_coordinate_names(int dim);

}  // namespace folpsi
