#include "pnn/line_csv.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <vector>

namespace pnn {

namespace {

bool next_row(std::istream& in, std::string& line) {
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    return true;
  }
  return false;
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  return out;
}

double parse_double(const std::string& s) {
  double v = 0.0;
  const char* begin = s.data();
  const char* end = s.data() + s.size();
  while (begin != end && *begin == ' ') ++begin;
  const auto res = std::from_chars(begin, end, v);
  if (res.ec != std::errc() || res.ptr != end) fail(ErrorKind::ParseError, "bad number '" + s + "'");
  return v;
}

Eigen::Index parse_count(const std::string& s) {
  const double v = parse_double(s);
  if (!(v >= 0.0) || v != static_cast<double>(static_cast<Eigen::Index>(v))) {
    fail(ErrorKind::ParseError, "bad count '" + s + "'");
  }
  return static_cast<Eigen::Index>(v);
}

}  // namespace

std::string format_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void write_line_set(std::ostream& out, const LineSet& lines) {
  out << "dim,r\n" << lines.dim() << ',' << lines.size() << '\n';
  for (Eigen::Index j = 0; j < lines.size(); ++j) {
    for (Eigen::Index i = 0; i < lines.dim(); ++i) {
      if (i) out << ',';
      out << format_double(lines.unit_vectors()(i, j));
    }
    out << '\n';
  }
}

LineSet read_line_set(std::istream& in) {
  std::string line;
  if (!next_row(in, line) || line != "dim,r") fail(ErrorKind::ParseError, "expected header 'dim,r'");
  if (!next_row(in, line)) fail(ErrorKind::ParseError, "missing size row");
  const auto sizes = split(line);
  if (sizes.size() != 2) fail(ErrorKind::ParseError, "size row needs two fields");
  const Eigen::Index d = parse_count(sizes[0]);
  const Eigen::Index r = parse_count(sizes[1]);
  if (d < 1) fail(ErrorKind::ParseError, "dimension must be positive");
  Matrix units(d, r);
  for (Eigen::Index j = 0; j < r; ++j) {
    if (!next_row(in, line)) fail(ErrorKind::ParseError, "expected " + std::to_string(r) + " line rows");
    const auto cells = split(line);
    if (static_cast<Eigen::Index>(cells.size()) != d) {
      fail(ErrorKind::ParseError, "row " + std::to_string(j) + " has the wrong number of fields");
    }
    for (Eigen::Index i = 0; i < d; ++i) units(i, j) = parse_double(cells[static_cast<std::size_t>(i)]);
  }
  if (next_row(in, line)) fail(ErrorKind::ParseError, "trailing rows after line set");
  return LineSet::from_units(units);
}

void save_line_set(const std::string& path, const LineSet& lines) {
  std::ofstream out(path);
  if (!out) fail(ErrorKind::ConfigError, "cannot open " + path + " for writing");
  write_line_set(out, lines);
}

LineSet load_line_set(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::ConfigError, "cannot open " + path);
  return read_line_set(in);
}

}  // namespace pnn
