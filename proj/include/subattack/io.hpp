#pragma once

// Plain-text matrix and number formatting shared by the sweep, PCR and CLI
// front ends.
//
// Matrix CSV: an optional first line "# d=<d> n=<n>", then d lines of n
// comma-separated values; columns are samples. Blank lines are skipped.

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "subattack/subspace.hpp"

namespace subattack {

/// printf "%.12g".
std::string format_number(double value);

/// Parses a finite double, the whole token must be consumed. Throws ParseError
/// mentioning `context`.
double parse_number(std::string_view token, const std::string& context);

DataMatrix read_matrix_csv(std::istream& in);
DataMatrix read_matrix_csv(const std::string& path);
void write_matrix_csv(std::ostream& out, const Matrix& m, bool with_header = true);
void write_matrix_csv(const std::string& path, const Matrix& m, bool with_header = true);

/// Opens a file for writing, or throws IoError.
void write_text_file(const std::string& path, const std::string& contents);

/// Splits on commas and trims surrounding whitespace from each field.
std::vector<std::string> split_fields(std::string_view line);

}  // namespace subattack
