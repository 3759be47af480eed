#pragma once

#include <iosfwd>
#include <string>

#include "pnn/lines.hpp"

namespace pnn {

// Layout:
//   dim,r
//   <d>,<r>
//   r rows of d unit-vector entries, 17 significant digits
// Lines starting with '#' are skipped on read. Round trips are bit-exact.
void write_line_set(std::ostream& out, const LineSet& lines);
LineSet read_line_set(std::istream& in);

void save_line_set(const std::string& path, const LineSet& lines);
LineSet load_line_set(const std::string& path);

// %.17g
std::string format_double(double x);

}  // namespace pnn
