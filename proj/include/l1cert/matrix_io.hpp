#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "l1cert/linalg.hpp"

namespace l1cert {

// Text format: "rows cols" on the first line, then one whitespace-separated
// row per line. Output uses 17 significant digits so values round-trip.
Matrix read_matrix(std::istream& in);
Matrix read_matrix_file(const std::filesystem::path& path);
void write_matrix(std::ostream& out, const Matrix& M);
void write_matrix_file(const std::filesystem::path& path, const Matrix& M);
std::string format_matrix(const Matrix& M);

}  // namespace l1cert
