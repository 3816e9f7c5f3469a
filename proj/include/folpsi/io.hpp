#pragma once

#include "folpsi/grid.hpp"

#include <iosfwd>
#include <string>

namespace folpsi {

// Text array format:
//   folpsi-array v1
//   kind function|operator
//   grid <dim> <G> <origin_1> ... <origin_dim>
//   shape <rows> <cols>
//   <re> <im>            (one entry per line, row-major, hexfloat)

void write_function(std::ostream& out, const GridFunction& f);
void write_operator(std::ostream& out, const GridOperator& op);
GridFunction read_function(std::istream& in);
GridOperator read_operator(std::istream& in);

void save(const std::string& path, const GridFunction& f);
void save(const std::string& path, const GridOperator& op);
GridFunction load_function(const std::string& path);
GridOperator load_operator(const std::string& path);

}  // namespace folpsi
