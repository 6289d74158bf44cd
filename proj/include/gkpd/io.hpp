#pragma once

#include <iosfwd>
#include <string>
#include <string_view>

#include "gkpd/types.hpp"

namespace gkpd {

// Shortest round-trip decimal form via std::to_chars: locale-independent and
// byte-stable, which the CLI determinism contract depends on. Infinities are
// rendered as "inf"/"-inf".
std::string format_double(double value);

// Strict parse of a full token; throws std::invalid_argument on anything else.
double parse_double(std::string_view token);

// CSV without header, one point per row, comma separators.
Matrix read_csv_matrix(const std::string& path);
void write_csv_matrix(const std::string& path, const Matrix& m);

// One value per line.
Vector read_csv_vector(const std::string& path);
void write_csv_vector(const std::string& path, const Vector& v);

// Throws when the target exists and force is false.
void refuse_existing(const std::string& path, bool force);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

}  // namespace gkpd
