#pragma once

#include "folpsi/expr.hpp"
#include "folpsi/foliation.hpp"
#include "folpsi/polysym.hpp"

#include <numbers>
#include <string>
#include <utility>
#include <vector>

namespace folpsi::testing {

inline constexpr double kPi = std::numbers::pi;

inline Coeff coeff(const std::string& text, int dim = 1) {
    return parse_coeff(text, default_coordinate_names(dim), "test");
}

/// Symbol from (coefficient, xi expression) pairs in default coordinates x1, x2, ...
inline PolyhomSymbol sym(int dim, const std::vector<std::pair<std::string, std::string>>& pieces,
                         CutoffKind cutoff = CutoffKind::Standard) {
    std::vector<SymbolPiece> out;
    for (const auto& [c, xi] : pieces) out.push_back(parse_xi_expression(xi, coeff(c, dim), dim));
    return symbol_from_pieces(dim, dim, std::move(out), cutoff);
}

inline PolyVectorField field(const std::vector<std::string>& comps, const std::vector<std::string>& names) {
    std::vector<Coeff> cs;
    for (const auto& c : comps) cs.push_back(parse_coeff(c, names, "field"));
    return PolyVectorField(cs);
}

inline FoliationModule so3_module() {
    std::vector<std::string> n{"x", "y", "z"};
    return FoliationModule(Domain::box({-kPi, -kPi, -kPi}, {kPi, kPi, kPi}),
                           {field({"0", "-z", "y"}, n), field({"z", "0", "-x"}, n), field({"-y", "x", "0"}, n)}, n);
}

inline FoliationModule flat_module(int dim) {
    std::vector<PolyVectorField> gens;
    for (int j = 0; j < dim; ++j) gens.push_back(PolyVectorField::coordinate(dim, j));
    return FoliationModule(Domain::torus(dim), gens);
}

}  // namespace folpsi::testing
