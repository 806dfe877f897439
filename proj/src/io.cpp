#include "subattack/io.hpp"

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <regex>
#include <sstream>
#include <vector>

#include "subattack/error.hpp"

namespace subattack {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

}  // namespace

std::string format_number(double value) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", value);
  return buf;
}

double parse_number(std::string_view token, const std::string& context) {
  const std::string text(trim(token));
  if (text.empty()) throw Error(ErrorKind::ParseError, context + ": empty field");
  char* end = nullptr;
  errno = 0;
  const double v = std::strtod(text.c_str(), &end);
  if (end != text.c_str() + text.size() || errno == ERANGE || !std::isfinite(v)) {
    throw Error(ErrorKind::ParseError, context + ": not a finite number: '" + text + "'");
  }
  return v;
}

std::vector<std::string> split_fields(std::string_view line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    fields.emplace_back(trim(line.substr(start, comma == std::string_view::npos ? comma : comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return fields;
}

DataMatrix read_matrix_csv(std::istream& in) {
  static const std::regex header(R"(^#\s*d\s*=\s*(\d+)\s+n\s*=\s*(\d+)\s*$)");
  std::vector<std::vector<double>> rows;
  long want_d = -1;
  long want_n = -1;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view body = trim(line);
    if (body.empty()) continue;
    if (body.front() == '#') {
      std::smatch m;
      const std::string text(body);
      if (rows.empty() && want_d < 0 && std::regex_match(text, m, header)) {
        want_d = std::stol(m[1]);
        want_n = std::stol(m[2]);
        continue;
      }
      throw Error(ErrorKind::ParseError, "line " + std::to_string(line_no) +
                                             ": unexpected comment; only a leading '# d=<d> n=<n>' header is allowed");
    }
    std::vector<double> row;
    for (const auto& field : split_fields(body)) {
      row.push_back(parse_number(field, "line " + std::to_string(line_no)));
    }
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw Error(ErrorKind::ParseError, "line " + std::to_string(line_no) + ": expected " +
                                             std::to_string(rows.front().size()) + " values, got " +
                                             std::to_string(row.size()));
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw Error(ErrorKind::ParseError, "matrix file has no data rows");
  const auto d = static_cast<Index>(rows.size());
  const auto n = static_cast<Index>(rows.front().size());
  if (want_d >= 0 && (want_d != d || want_n != n)) {
    throw Error(ErrorKind::ParseError, "header declares d=" + std::to_string(want_d) + " n=" +
                                           std::to_string(want_n) + " but data is " +
                                           std::to_string(d) + "x" + std::to_string(n));
  }
  Matrix m(d, n);
  for (Index i = 0; i < d; ++i) {
    for (Index j = 0; j < n; ++j) m(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
  }
  return DataMatrix(std::move(m));
}

DataMatrix read_matrix_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::IoError, "cannot open '" + path + "'");
  return read_matrix_csv(in);
}

void write_matrix_csv(std::ostream& out, const Matrix& m, bool with_header) {
  if (with_header) out << "# d=" << m.rows() << " n=" << m.cols() << '\n';
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) {
      if (j > 0) out << ',';
      out << format_number(m(i, j));
    }
    out << '\n';
  }
}

void write_matrix_csv(const std::string& path, const Matrix& m, bool with_header) {
  std::ostringstream buf;
  write_matrix_csv(buf, m, with_header);
  write_text_file(path, buf.str());
}

void write_text_file(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::IoError, "cannot open '" + path + "' for writing");
  out << contents;
  if (!out) throw Error(ErrorKind::IoError, "write to '" + path + "' failed");
}

}  // namespace subattack
