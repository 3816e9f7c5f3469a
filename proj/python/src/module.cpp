#include "folpsi/calculus.hpp"
#include "folpsi/error.hpp"
#include "folpsi/expr.hpp"
#include "folpsi/foliation.hpp"
#include "folpsi/polysym.hpp"
#include "folpsi/quantize.hpp"
#include "folpsi/scenario.hpp"
#include "folpsi/spectra.hpp"

#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace py = pybind11;
using namespace folpsi;

namespace {

using Names = std::vector<std::string>;

Names names_or_default(const Names& names, int dim) {
    return names.empty() ? default_coordinate_names(dim) : names;
}

std::vector<std::string> render(const PolyVectorField& v, const Names& names) {
    std::vector<std::string> out;
    for (const auto& c : v.components()) out.push_back(c.str(names));
    return out;
}

/// Foliation module plus the coordinate names used to print it.
struct PyFoliation {
    FoliationModule module;
    Names names;

    PyFoliation(const std::vector<std::vector<std::string>>& generators, Names coordinates,
                std::optional<std::vector<double>> lower, std::optional<std::vector<double>> upper)
        : module(Domain::torus(1), {}) {
        if (generators.empty()) throw InputError("at least one generator is required");
        int dim = static_cast<int>(generators.front().size());
        names = names_or_default(coordinates, dim);
        if (static_cast<int>(names.size()) != dim) throw InputError("coordinate count does not match generators");
        Domain domain = Domain::torus(dim);
        if (lower || upper) {
            if (!lower || !upper) throw InputError("box domains need both lower and upper");
            domain = Domain::box(*lower, *upper);
        }
        std::vector<PolyVectorField> fields;
        for (std::size_t k = 0; k < generators.size(); ++k) {
            if (static_cast<int>(generators[k].size()) != dim) throw InputError("generators differ in dimension");
            std::vector<Coeff> comps;
            for (std::size_t j = 0; j < generators[k].size(); ++j)
                comps.push_back(parse_coeff(generators[k][j], names,
                                            "generators[" + std::to_string(k) + "][" + std::to_string(j) + "]"));
            fields.emplace_back(std::move(comps));
        }
        module = FoliationModule(domain, std::move(fields), names);
    }
};

PolyhomSymbol make_symbol(int dim, const std::vector<std::pair<std::string, std::string>>& pieces,
                          const Names& coordinates, bool cutoff) {
    Names names = names_or_default(coordinates, dim);
    std::vector<SymbolPiece> out;
    for (const auto& [coeff, xi] : pieces) out.push_back(parse_xi_expression(xi, parse_coeff(coeff, names), dim));
    return symbol_from_pieces(dim, dim, std::move(out), cutoff ? CutoffKind::Standard : CutoffKind::None);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Longitudinal pseudodifferential calculus on singular foliations";

    auto base = py::register_exception<Error>(m, "FolpsiError", PyExc_RuntimeError);
    py::register_exception<InputError>(m, "InputError", base.ptr());
    py::register_exception<ParseError>(m, "ParseError", base.ptr());
    py::register_exception<ConfigError>(m, "ConfigError", base.ptr());

    py::class_<Coeff>(m, "Coeff")
        .def_property_readonly("dim", &Coeff::dim)
        .def("eval", [](const Coeff& c, std::vector<double> x) { return c.eval(x); }, py::arg("x"))
        .def("derivative", &Coeff::derivative, py::arg("axis"))
        .def("conj", &Coeff::conj)
        .def("is_zero", &Coeff::is_zero)
        .def("__add__", [](const Coeff& a, const Coeff& b) { return a + b; })
        .def("__sub__", [](const Coeff& a, const Coeff& b) { return a - b; })
        .def("__mul__", [](const Coeff& a, const Coeff& b) { return a * b; })
        .def("__eq__", [](const Coeff& a, const Coeff& b) { return a == b; })
        .def("str", [](const Coeff& c, const Names& names) { return c.str(names); }, py::arg("names"))
        .def("__str__", [](const Coeff& c) { return c.str(); })
        .def("__repr__", [](const Coeff& c) { return "Coeff('" + c.str() + "')"; });

    m.def("parse_coeff",
          [](const std::string& text, const Names& names) { return parse_coeff(text, names); },
          py::arg("text"), py::arg("names"));

    py::class_<PolyhomSymbol>(m, "Symbol")
        .def_property_readonly("order", &PolyhomSymbol::order)
        .def_property_readonly("depth", &PolyhomSymbol::depth)
        .def_property_readonly("dim", &PolyhomSymbol::x_dim)
        .def("eval",
             [](const PolyhomSymbol& a, std::vector<double> x, std::vector<double> xi) { return a.eval(x, xi); },
             py::arg("x"), py::arg("xi"))
        .def("principal", &PolyhomSymbol::principal)
        .def("serialize", py::overload_cast<>(&PolyhomSymbol::serialize, py::const_))
        .def("__mul__", [](const PolyhomSymbol& a, const PolyhomSymbol& b) { return symbol_product(a, b); })
        .def("__add__", [](const PolyhomSymbol& a, const PolyhomSymbol& b) { return symbol_sum(a, b); });

    m.def("symbol", &make_symbol, py::arg("dim"), py::arg("pieces"), py::arg("coordinates") = Names{},
          py::arg("cutoff") = true,
          "Symbol from (coefficient, xi expression) pairs, e.g. [(\"2+sin(x)\", \"xi1\")].");

    m.def(
        "estimate_order",
        [](const PolyhomSymbol& a, int grid, const std::vector<int>& frequencies, int axis) {
            PeriodicGrid g(a.x_dim(), grid);
            return estimate_order(quantize_dense(a, g), axis_frequencies(a.x_dim(), frequencies, axis));
        },
        py::arg("symbol"), py::arg("grid"), py::arg("frequencies"), py::arg("axis") = 0,
        "Log-log slope of ||Op(a) e_xi|| over plane waves along one axis.");

    m.def(
        "bracket",
        [](const std::vector<std::string>& X, const std::vector<std::string>& Y, const Names& names) {
            auto field = [&](const std::vector<std::string>& v) {
                std::vector<Coeff> c;
                for (const auto& s : v) c.push_back(parse_coeff(s, names));
                return PolyVectorField(std::move(c));
            };
            return render(bracket(field(X), field(Y)), names);
        },
        py::arg("X"), py::arg("Y"), py::arg("names"));

    py::class_<PyFoliation>(m, "Foliation")
        .def(py::init<const std::vector<std::vector<std::string>>&, Names, std::optional<std::vector<double>>,
                      std::optional<std::vector<double>>>(),
             py::arg("generators"), py::arg("coordinates") = Names{}, py::arg("lower") = py::none(),
             py::arg("upper") = py::none())
        .def_property_readonly("dim", [](const PyFoliation& f) { return f.module.dim(); })
        .def_property_readonly("rank", [](const PyFoliation& f) { return f.module.rank(); })
        .def_property_readonly("coordinates", [](const PyFoliation& f) { return f.names; })
        .def(
            "leaf_dim", [](const PyFoliation& f, std::vector<double> x) { return leaf_tangent_dim(f.module, x); },
            py::arg("x"))
        .def(
            "fiber_dim",
            [](const PyFoliation& f, std::vector<double> x, int cap) { return fiber_dimension(f.module, x, cap); },
            py::arg("x"), py::arg("degree_cap") = 2)
        .def(
            "structure",
            [](const PyFoliation& f, int cap) -> std::optional<std::vector<std::vector<std::vector<std::string>>>> {
                auto r = solve_structure_functions(f.module, cap);
                if (!r.ok()) return std::nullopt;
                std::vector<std::vector<std::vector<std::string>>> out;
                for (const auto& row : *r.table) {
                    auto& o = out.emplace_back();
                    for (const auto& cell : row) {
                        auto& oc = o.emplace_back();
                        for (const auto& c : cell) oc.push_back(c.str(f.names));
                    }
                }
                return out;
            },
            py::arg("degree_cap") = 2,
            "f[i][j][k] with [X_i, X_j] = sum_k f_ijk X_k, or None if not found within the cap.")
        .def(
            "laplacian_spectrum",
            [](const PyFoliation& f, int grid, std::size_t count) {
                PeriodicGrid g(f.module.dim(), grid);
                std::optional<SpatialCutoff> cutoff;
                if (f.module.domain.kind == DomainKind::Box) {
                    g = PeriodicGrid(f.module.dim(), grid, f.module.domain.lower);
                    cutoff = SpatialCutoff{};
                }
                return spectrum(laplacian(f.module, g, cutoff).op, count);
            },
            py::arg("grid"), py::arg("count") = 0, "Smallest eigenvalues of the leafwise Laplacian.");

    m.def(
        "run_scenario",
        [](const std::string& text, const std::string& subcommand, std::uint64_t seed, std::optional<int> grid) {
            RunOptions opts;
            opts.subcommand = subcommand;
            opts.seed = seed;
            opts.grid_override = grid;
            Report r;
            {
                py::gil_scoped_release release;
                r = run(parse_scenario(text), opts);
            }
            return r.json();
        },
        py::arg("text"), py::arg("subcommand") = "report", py::arg("seed") = RunOptions{}.seed,
        py::arg("grid") = py::none(), "Runs a scenario given as JSON text and returns the JSON report.");
}
