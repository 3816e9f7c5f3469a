#include "folpsi/io.hpp"

#include "folpsi/error.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace folpsi {

namespace {

std::string hex(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%a", v);
    return buf;
}

double parse_double(const std::string& tok, int line) {
    char* end = nullptr;
    double v = std::strtod(tok.c_str(), &end);
    if (tok.empty() || *end != '\0') throw ParseError("array", static_cast<std::size_t>(line), "bad number '" + tok + "'");
    return v;
}

void write_header(std::ostream& out, const char* kind, const PeriodicGrid& g, Eigen::Index rows, Eigen::Index cols) {
    out << "folpsi-array v1\nkind " << kind << "\ngrid " << g.dim() << ' ' << g.points_per_axis();
    for (double o : g.origin()) out << ' ' << hex(o);
    out << "\nshape " << rows << ' ' << cols << '\n';
}

struct Header {
    std::string kind;
    PeriodicGrid grid{1, 4};
    long rows = 0;
    long cols = 0;
};

std::string next_line(std::istream& in, int& line) {
    std::string s;
    if (!std::getline(in, s)) throw ParseError("array", static_cast<std::size_t>(line + 1), "unexpected end of input");
    ++line;
    return s;
}

Header read_header(std::istream& in, int& line) {
    if (next_line(in, line) != "folpsi-array v1") throw ParseError("array", 1, "missing 'folpsi-array v1' header");
    Header h;
    {
        std::istringstream ss(next_line(in, line));
        std::string key;
        ss >> key >> h.kind;
        if (key != "kind" || (h.kind != "function" && h.kind != "operator"))
            throw ParseError("array", static_cast<std::size_t>(line), "expected 'kind function|operator'");
    }
    {
        std::istringstream ss(next_line(in, line));
        std::string key;
        int dim = 0, G = 0;
        ss >> key >> dim >> G;
        if (key != "grid" || !ss) throw ParseError("array", static_cast<std::size_t>(line), "expected 'grid <dim> <G> ...'");
        std::vector<double> origin;
        std::string tok;
        while (ss >> tok) origin.push_back(parse_double(tok, line));
        h.grid = PeriodicGrid(dim, G, origin);
    }
    {
        std::istringstream ss(next_line(in, line));
        std::string key;
        ss >> key >> h.rows >> h.cols;
        if (key != "shape" || !ss || h.rows < 0 || h.cols < 0)
            throw ParseError("array", static_cast<std::size_t>(line), "expected 'shape <rows> <cols>'");
    }
    return h;
}

CMatrix read_values(std::istream& in, int& line, long rows, long cols) {
    CMatrix m(rows, cols);
    for (long r = 0; r < rows; ++r) {
        for (long c = 0; c < cols; ++c) {
            std::istringstream ss(next_line(in, line));
            std::string re, im, extra;
            ss >> re >> im;
            if (ss >> extra) throw ParseError("array", static_cast<std::size_t>(line), "trailing data");
            m(r, c) = cplx(parse_double(re, line), parse_double(im, line));
        }
    }
    return m;
}

void write_values(std::ostream& out, const CMatrix& m) {
    for (Eigen::Index r = 0; r < m.rows(); ++r)
        for (Eigen::Index c = 0; c < m.cols(); ++c) out << hex(m(r, c).real()) << ' ' << hex(m(r, c).imag()) << '\n';
}

template <class T, class W>
void save_file(const std::string& path, const T& value, W writer) {
    std::ofstream out(path);
    if (!out) throw InputError("cannot open '" + path + "' for writing");
    writer(out, value);
}

}  // namespace

void write_function(std::ostream& out, const GridFunction& f) {
    write_header(out, "function", f.grid, f.values.size(), 1);
    write_values(out, f.values);
}

void write_operator(std::ostream& out, const GridOperator& op) {
    write_header(out, "operator", op.grid, op.matrix.rows(), op.matrix.cols());
    write_values(out, op.matrix);
}

GridFunction read_function(std::istream& in) {
    int line = 0;
    Header h = read_header(in, line);
    if (h.kind != "function" || h.cols != 1 || h.rows != static_cast<long>(h.grid.size()))
        throw ParseError("array", 4, "shape does not describe a grid function on the stated grid");
    return GridFunction(h.grid, read_values(in, line, h.rows, 1).col(0));
}

GridOperator read_operator(std::istream& in) {
    int line = 0;
    Header h = read_header(in, line);
    if (h.kind != "operator" || h.rows != h.cols || h.rows != static_cast<long>(h.grid.size()))
        throw ParseError("array", 4, "shape does not describe an operator on the stated grid");
    return GridOperator(h.grid, read_values(in, line, h.rows, h.cols));
}

void save(const std::string& path, const GridFunction& f) { save_file(path, f, write_function); }
void save(const std::string& path, const GridOperator& op) { save_file(path, op, write_operator); }

GridFunction load_function(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open '" + path + "'");
    return read_function(in);
}

GridOperator load_operator(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open '" + path + "'");
    return read_operator(in);
}

}  // namespace folpsi
