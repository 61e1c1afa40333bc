#pragma once

#include <cstdint>
#include <optional>
#include <vector>

namespace qcl::gf2 {

using Row = std::vector<std::uint8_t>;

// Dense matrix over GF(2), row-major.
struct Matrix {
  int cols = 0;
  std::vector<Row> rows;

  Matrix() = default;
  Matrix(int num_rows, int num_cols) : cols(num_cols), rows(num_rows, Row(num_cols, 0)) {}
  int num_rows() const { return static_cast<int>(rows.size()); }
};

int rank(Matrix a);

// Basis of the solution space of a x = 0.
std::vector<Row> nullspace(const Matrix& a);

// Some solution of a x = b, or nothing if inconsistent.
std::optional<Row> solve(const Matrix& a, const Row& b);

// The lexicographically smallest solution of a x = b, x[0] most significant.
std::optional<Row> solve_lex_min(const Matrix& a, const Row& b);

}  // namespace qcl::gf2
