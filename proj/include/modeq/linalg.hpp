#ifndef MODEQ_LINALG_HPP
#define MODEQ_LINALG_HPP

#include <optional>
#include <vector>

#include "modeq/rational.hpp"

namespace modeq {

using Vec = std::vector<Rat>;
using Mat = std::vector<Vec>;  // row-major

// In-place reduced row echelon form; returns the pivot column of each
// pivot row in order.
inline std::vector<size_t> rref(Mat& m) {
  std::vector<size_t> pivots;
  if (m.empty()) return pivots;
  size_t rows = m.size(), cols = m[0].size();
  size_t r = 0;
  for (size_t c = 0; c < cols && r < rows; ++c) {
    size_t sel = r;
    while (sel < rows && m[sel][c].is_zero()) ++sel;
    if (sel == rows) continue;
    std::swap(m[sel], m[r]);
    Rat inv = Rat(1) / m[r][c];
    for (size_t j = c; j < cols; ++j) m[r][j] *= inv;
    for (size_t i = 0; i < rows; ++i) {
      if (i == r || m[i][c].is_zero()) continue;
      Rat f = m[i][c];
      for (size_t j = c; j < cols; ++j) m[i][j] -= f * m[r][j];
    }
    pivots.push_back(c);
    ++r;
  }
  return pivots;
}

// Solves A x = b exactly; nullopt if inconsistent.  When the system is
// underdetermined the free variables are set to zero.
inline std::optional<Vec> solve_exact(const Mat& a, const Vec& b) {
  size_t rows = a.size();
  size_t cols = rows ? a[0].size() : 0;
  Mat aug(rows, Vec(cols + 1, Rat(0)));
  for (size_t i = 0; i < rows; ++i) {
    for (size_t j = 0; j < cols; ++j) aug[i][j] = a[i][j];
    aug[i][cols] = b[i];
  }
  std::vector<size_t> piv = rref(aug);
  Vec x(cols, Rat(0));
  for (size_t i = 0; i < piv.size(); ++i) {
    if (piv[i] == cols) return std::nullopt;  // pivot in the constant column
    x[piv[i]] = aug[i][cols];
  }
  return x;
}

// Basis of the right kernel of A; ncols is passed explicitly so that
// constraint-free systems (zero rows) keep their column count.
inline std::vector<Vec> nullspace(Mat a, size_t cols) {
  if (a.empty()) {
    std::vector<Vec> basis;
    for (size_t j = 0; j < cols; ++j) {
      Vec v(cols, Rat(0));
      v[j] = Rat(1);
      basis.push_back(std::move(v));
    }
    return basis;
  }
  std::vector<size_t> piv = rref(a);
  std::vector<bool> is_pivot(cols, false);
  for (size_t c : piv) is_pivot[c] = true;
  std::vector<Vec> basis;
  for (size_t f = 0; f < cols; ++f) {
    if (is_pivot[f]) continue;
    Vec v(cols, Rat(0));
    v[f] = Rat(1);
    for (size_t i = 0; i < piv.size(); ++i) v[piv[i]] = -a[i][f];
    basis.push_back(std::move(v));
  }
  return basis;
}

}  // namespace modeq

#endif
