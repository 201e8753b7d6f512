#include "l1cert/matrix_io.hpp"

#include <charconv>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <vector>

#include "l1cert/error.hpp"

namespace l1cert {

namespace {

std::vector<double> parse_numbers(const std::string& line, long line_no) {
  std::vector<double> out;
  const char* p = line.data();
  const char* end = p + line.size();
  while (p < end) {
    while (p < end && (*p == ' ' || *p == '\t' || *p == '\r')) ++p;
    if (p == end) break;
    double v = 0.0;
    auto [next, ec] = std::from_chars(p, end, v);
    if (ec != std::errc() || (next < end && *next != ' ' && *next != '\t' && *next != '\r'))
      fail(ErrorKind::ParseError, "line " + std::to_string(line_no) + ": bad number");
    out.push_back(v);
    p = next;
  }
  return out;
}

}  // namespace

Matrix read_matrix(std::istream& in) {
  std::string line;
  long line_no = 0;
  auto next_line = [&](std::string& dst) {
    while (std::getline(in, dst)) {
      ++line_no;
      if (dst.find_first_not_of(" \t\r") != std::string::npos) return true;
    }
    return false;
  };
  if (!next_line(line)) fail(ErrorKind::ParseError, "empty matrix file");
  auto dims = parse_numbers(line, line_no);
  if (dims.size() != 2 || dims[0] < 0 || dims[1] < 0 || dims[0] != static_cast<long>(dims[0]) ||
      dims[1] != static_cast<long>(dims[1]))
    fail(ErrorKind::ParseError, "line " + std::to_string(line_no) + ": expected \"rows cols\"");
  const auto rows = static_cast<Index>(dims[0]);
  const auto cols = static_cast<Index>(dims[1]);
  Matrix M(rows, cols);
  for (Index i = 0; i < rows; ++i) {
    if (!next_line(line))
      fail(ErrorKind::ParseError, "expected " + std::to_string(rows) + " rows, got " + std::to_string(i));
    auto row = parse_numbers(line, line_no);
    if (static_cast<Index>(row.size()) != cols)
      fail(ErrorKind::ParseError, "line " + std::to_string(line_no) + ": expected " +
                                      std::to_string(cols) + " entries, got " + std::to_string(row.size()));
    for (Index j = 0; j < cols; ++j) M(i, j) = row[static_cast<std::size_t>(j)];
  }
  if (!M.allFinite()) fail(ErrorKind::NonFinite, "matrix file contains non-finite entries");
  return M;
}

Matrix read_matrix_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::ConfigError, "cannot open matrix file " + path.string());
  return read_matrix(in);
}

void write_matrix(std::ostream& out, const Matrix& M) {
  out << M.rows() << ' ' << M.cols() << '\n';
  std::ostringstream buf;
  buf << std::setprecision(17);
  for (Index i = 0; i < M.rows(); ++i) {
    for (Index j = 0; j < M.cols(); ++j) {
      if (j) buf << ' ';
      buf << M(i, j);
    }
    buf << '\n';
  }
  out << buf.str();
}

void write_matrix_file(const std::filesystem::path& path, const Matrix& M) {
  std::ofstream out(path);
  if (!out) fail(ErrorKind::ConfigError, "cannot write " + path.string());
  write_matrix(out, M);
}

std::string format_matrix(const Matrix& M) {
  std::ostringstream out;
  write_matrix(out, M);
  return out.str();
}

}  // namespace l1cert
