#include "folpsi/expr.hpp"

#include "folpsi/error.hpp"

#include <cctype>

namespace folpsi {

namespace {

class Parser {
public:
    Parser(std::string_view text, const std::vector<std::string>& names, const std::string& field)
        : text_(text), names_(names), field_(field), dim_(static_cast<int>(names.size())) {}

    Coeff parse() {
        Coeff c = expr();
        skip_ws();
        if (pos_ != text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
        return c;
    }

private:
    [[noreturn]] void fail(const std::string& what) const { throw ParseError(field_, pos_ + 1, what); }

    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    bool accept(char ch) {
        skip_ws();
        if (pos_ < text_.size() && text_[pos_] == ch) {
            ++pos_;
            return true;
        }
        return false;
    }

    void expect(char ch) {
        if (!accept(ch)) fail(std::string("expected '") + ch + "'");
    }

    Coeff expr() {
        Coeff acc = term();
        while (true) {
            if (accept('+')) acc += term();
            else if (accept('-')) acc -= term();
            else return acc;
        }
    }

    Coeff term() {
        Coeff acc = unary();
        while (true) {
            if (accept('*')) {
                acc = acc * unary();
            } else if (accept('/')) {
                std::size_t at = pos_;
                Coeff d = unary();
                if (!d.is_constant() || d.constant_term().is_zero()) {
                    pos_ = at;
                    fail("division is only allowed by a nonzero constant");
                }
                acc = acc * (GaussRational(1) / d.constant_term());
            } else {
                return acc;
            }
        }
    }

    Coeff unary() {
        if (accept('-')) return -unary();
        if (accept('+')) return unary();
        return power();
    }

    Coeff power() {
        Coeff base = atom();
        if (accept('^')) {
            skip_ws();
            std::size_t start = pos_;
            while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
            if (start == pos_) fail("exponent must be a non-negative integer");
            int e = std::stoi(std::string(text_.substr(start, pos_ - start)));
            return base.pow(e);
        }
        return base;
    }

    Coeff number() {
        std::size_t start = pos_;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
        Rational value(0);
        std::string digits(text_.substr(start, pos_ - start));
        if (!digits.empty()) value = Rational(boost::multiprecision::cpp_int(digits));
        if (pos_ < text_.size() && text_[pos_] == '.') {
            ++pos_;
            std::size_t fstart = pos_;
            while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
            std::string frac(text_.substr(fstart, pos_ - fstart));
            if (!frac.empty()) {
                boost::multiprecision::cpp_int scale = 1;
                for (std::size_t i = 0; i < frac.size(); ++i) scale *= 10;
                value += Rational(boost::multiprecision::cpp_int(frac), scale);
            }
            if (digits.empty() && frac.empty()) fail("malformed number");
        }
        return Coeff::constant(dim_, GaussRational(value));
    }

    std::vector<int> linear_form(const Coeff& arg, std::size_t at) {
        std::vector<int> k(dim_, 0);
        for (const auto& [m, c] : arg.terms()) {
            int deg = 0;
            int axis = -1;
            for (int i = 0; i < dim_; ++i) {
                deg += m.pow[i];
                if (m.pow[i] == 1) axis = i;
                if (m.freq[i] != 0) deg = 99;
            }
            bool integral = c.is_real() && boost::multiprecision::denominator(c.re) == 1;
            if (deg != 1 || axis < 0 || !integral) {
                pos_ = at;
                fail("sin/cos argument must be an integer-linear combination of coordinates");
            }
            k[axis] = static_cast<int>(boost::multiprecision::numerator(c.re));
        }
        return k;
    }

    Coeff atom() {
        skip_ws();
        if (pos_ >= text_.size()) fail("unexpected end of expression");
        char ch = text_[pos_];
        if (std::isdigit(static_cast<unsigned char>(ch)) || ch == '.') return number();
        if (accept('(')) {
            Coeff inner = expr();
            expect(')');
            return inner;
        }
        if (std::isalpha(static_cast<unsigned char>(ch)) || ch == '_') {
            std::size_t start = pos_;
            while (pos_ < text_.size() &&
                   (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
                ++pos_;
            std::string ident(text_.substr(start, pos_ - start));
            if (ident == "sin" || ident == "cos") {
                expect('(');
                std::size_t at = pos_;
                Coeff arg = expr();
                expect(')');
                std::vector<int> k = linear_form(arg, at);
                return ident == "sin" ? Coeff::sin_of(dim_, k) : Coeff::cos_of(dim_, k);
            }
            if (ident == "I") return Coeff::constant(dim_, GaussRational::I());
            for (int i = 0; i < dim_; ++i)
                if (names_[i] == ident) return Coeff::coordinate(dim_, i);
            pos_ = start;
            fail("unknown identifier '" + ident + "'");
        }
        fail("unexpected '" + std::string(1, ch) + "'");
    }

    std::string_view text_;
    const std::vector<std::string>& names_;
    std::string field_;
    int dim_;
    std::size_t pos_ = 0;
};

}  // namespace

Coeff parse_coeff(std::string_view text, const std::vector<std::string>& names, const std::string& field) {
    return Parser(text, names, field).parse();
}

}  // namespace folpsi
