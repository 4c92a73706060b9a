// SPDX-License-Identifier: Apache-2.0
#include "tsgrqi/matrix_io.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

namespace tsgrqi {

namespace {

std::string lower(std::string s)
{
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  return s;
}

[[noreturn]] void parse_error(const std::string& name, int line, const std::string& what)
{
  detail::raise(ErrorCode::ParseError, name + ":" + std::to_string(line) + ": " + what);
}

double parse_double(const std::string& tok, const std::string& name, int line)
{
  double v = 0.0;
  const char* first = tok.data();
  const char* last = tok.data() + tok.size();
  if (!tok.empty() && *first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last) parse_error(name, line, "bad number '" + tok + "'");
  return v;
}

}  // namespace

Matrix read_matrix_market(std::istream& in, const std::string& name)
{
  std::string line;
  int lineno = 0;
  if (!std::getline(in, line)) parse_error(name, 1, "empty file");
  ++lineno;
  std::istringstream head(line);
  std::string banner, object, format, field, symmetry;
  head >> banner >> object >> format >> field >> symmetry;
  if (banner != "%%MatrixMarket" || lower(object) != "matrix")
    parse_error(name, lineno, "missing '%%MatrixMarket matrix' header");
  format = lower(format);
  field = lower(field);
  symmetry = lower(symmetry);
  if (format == "coordinate")
    detail::raise(ErrorCode::UnsupportedFormat, name + ": sparse coordinate files are not supported");
  if (format != "array") parse_error(name, lineno, "unknown format '" + format + "'");
  if (field != "real" && field != "complex" && field != "integer" && field != "double")
    detail::raise(ErrorCode::UnsupportedFormat, name + ": unsupported field '" + field + "'");
  if (symmetry != "general")
    detail::raise(ErrorCode::UnsupportedFormat, name + ": only general symmetry is supported");
  const bool is_complex = field == "complex";

  auto next_data_line = [&](std::string& out) {
    while (std::getline(in, out)) {
      ++lineno;
      const auto pos = out.find_first_not_of(" \t\r");
      if (pos == std::string::npos || out[pos] == '%') continue;
      return true;
    }
    return false;
  };

  if (!next_data_line(line)) parse_error(name, lineno + 1, "missing size line");
  std::istringstream size_line(line);
  long long rows = -1, cols = -1;
  std::string extra;
  if (!(size_line >> rows >> cols) || (size_line >> extra) || rows < 0 || cols < 0)
    parse_error(name, lineno, "expected 'rows cols'");

  Matrix m(rows, cols);
  for (Index j = 0; j < cols; ++j) {
    for (Index i = 0; i < rows; ++i) {
      if (!next_data_line(line)) parse_error(name, lineno + 1, "unexpected end of data");
      std::istringstream entry(line);
      std::vector<std::string> tok;
      for (std::string t; entry >> t;) tok.push_back(t);
      if (tok.size() != (is_complex ? 2u : 1u))
        parse_error(name, lineno, is_complex ? "expected 're im'" : "expected one value");
      const double re = parse_double(tok[0], name, lineno);
      const double im = is_complex ? parse_double(tok[1], name, lineno) : 0.0;
      m(i, j) = Complex(re, im);
    }
  }
  if (next_data_line(line)) parse_error(name, lineno, "trailing data after the last entry");
  return m;
}

Matrix read_matrix_market(const std::string& path)
{
  std::ifstream in(path);
  TSGRQI_REQUIRE(in.good(), ErrorCode::IoError, "cannot open '" + path + "'");
  return read_matrix_market(in, path);
}

void write_matrix_market(std::ostream& out, const Matrix& m, bool prefer_real)
{
  const bool real = prefer_real && (m.size() == 0 || m.imag().cwiseAbs().maxCoeff() == 0.0);
  out << "%%MatrixMarket matrix array " << (real ? "real" : "complex") << " general\n";
  out << m.rows() << ' ' << m.cols() << '\n';
  char buf[64];
  for (Index j = 0; j < m.cols(); ++j) {
    for (Index i = 0; i < m.rows(); ++i) {
      if (real)
        std::snprintf(buf, sizeof buf, "%.17g\n", m(i, j).real());
      else
        std::snprintf(buf, sizeof buf, "%.17g %.17g\n", m(i, j).real(), m(i, j).imag());
      out << buf;
    }
  }
}

void write_matrix_market(const std::string& path, const Matrix& m, bool prefer_real)
{
  std::ofstream out(path);
  TSGRQI_REQUIRE(out.good(), ErrorCode::IoError, "cannot write '" + path + "'");
  write_matrix_market(out, m, prefer_real);
  TSGRQI_REQUIRE(out.good(), ErrorCode::IoError, "write to '" + path + "' failed");
}

}  // namespace tsgrqi
