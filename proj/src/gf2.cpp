#include "qcl/gf2.hpp"

#include <stdexcept>

namespace qcl::gf2 {

namespace {

// Reduces [a | b] to row echelon form; returns pivot columns.
std::vector<int> eliminate(Matrix& a, Row* b) {
  std::vector<int> pivots;
  int r = 0;
  for (int c = 0; c < a.cols && r < a.num_rows(); ++c) {
    int p = r;
    while (p < a.num_rows() && !a.rows[p][c]) ++p;
    if (p == a.num_rows()) continue;
    std::swap(a.rows[p], a.rows[r]);
    if (b) std::swap((*b)[p], (*b)[r]);
    for (int i = 0; i < a.num_rows(); ++i) {
      if (i != r && a.rows[i][c]) {
        for (int j = c; j < a.cols; ++j) a.rows[i][j] ^= a.rows[r][j];
        if (b) (*b)[i] ^= (*b)[r];
      }
    }
    pivots.push_back(c);
    ++r;
  }
  return pivots;
}

}  // namespace

int rank(Matrix a) { return static_cast<int>(eliminate(a, nullptr).size()); }

std::vector<Row> nullspace(const Matrix& a) {
  Matrix m = a;
  const auto pivots = eliminate(m, nullptr);
  std::vector<bool> is_pivot(a.cols, false);
  for (int c : pivots) is_pivot[c] = true;
  std::vector<Row> out;
  for (int f = 0; f < a.cols; ++f) {
    if (is_pivot[f]) continue;
    Row x(a.cols, 0);
    x[f] = 1;
    for (std::size_t i = 0; i < pivots.size(); ++i) {
      if (m.rows[i][f]) x[pivots[i]] = 1;
    }
    out.push_back(std::move(x));
  }
  return out;
}

std::optional<Row> solve(const Matrix& a, const Row& b) {
  if (static_cast<int>(b.size()) != a.num_rows()) throw std::invalid_argument("gf2 solve: size mismatch");
  Matrix m = a;
  Row rhs = b;
  const auto pivots = eliminate(m, &rhs);
  for (int i = static_cast<int>(pivots.size()); i < m.num_rows(); ++i) {
    if (rhs[i]) return std::nullopt;
  }
  Row x(a.cols, 0);
  for (std::size_t i = 0; i < pivots.size(); ++i) x[pivots[i]] = rhs[i];
  return x;
}

std::optional<Row> solve_lex_min(const Matrix& a, const Row& b) {
  if (!solve(a, b)) return std::nullopt;
  Matrix m = a;
  Row rhs = b;
  // Fix variables one at a time, preferring 0, keeping the system consistent.
  for (int v = 0; v < a.cols; ++v) {
    Row pin(a.cols, 0);
    pin[v] = 1;
    m.rows.push_back(pin);
    rhs.push_back(0);
    if (!solve(m, rhs)) rhs.back() = 1;
  }
  return solve(m, rhs);
}

}  // namespace qcl::gf2
