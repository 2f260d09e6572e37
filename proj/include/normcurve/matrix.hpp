#pragma once

#include <cstddef>
#include <stdexcept>
#include <utility>
#include <vector>

#include "normcurve/field.hpp"

namespace normcurve {

// Dense row-major matrix over an exact field scalar.
template <Scalar K>
class ExactMatrix {
 public:
  ExactMatrix() : rows_(0), cols_(0) {}
  ExactMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), e_(rows * cols) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  K& at(std::size_t i, std::size_t j) { return e_[i * cols_ + j]; }
  const K& at(std::size_t i, std::size_t j) const { return e_[i * cols_ + j]; }

  static ExactMatrix identity(std::size_t n) {
    ExactMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m.at(i, i) = K(1);
    return m;
  }

  ExactMatrix transposed() const {
    ExactMatrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) t.at(j, i) = at(i, j);
    return t;
  }

  std::vector<K> apply(const std::vector<K>& v) const {
    if (v.size() != cols_) throw std::invalid_argument("matrix-vector size mismatch");
    std::vector<K> out(rows_);
    for (std::size_t i = 0; i < rows_; ++i) {
      K acc{};
      for (std::size_t j = 0; j < cols_; ++j) acc += at(i, j) * v[j];
      out[i] = acc;
    }
    return out;
  }

  // [this | other], same row count.
  ExactMatrix hstacked(const ExactMatrix& other) const {
    if (rows_ != other.rows_) throw std::invalid_argument("hstack: row count mismatch");
    ExactMatrix m(rows_, cols_ + other.cols_);
    for (std::size_t i = 0; i < rows_; ++i) {
      for (std::size_t j = 0; j < cols_; ++j) m.at(i, j) = at(i, j);
      for (std::size_t j = 0; j < other.cols_; ++j) m.at(i, cols_ + j) = other.at(i, j);
    }
    return m;
  }

  friend bool operator==(const ExactMatrix& a, const ExactMatrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.e_ == b.e_;
  }

 private:
  std::size_t rows_, cols_;
  std::vector<K> e_;
};

namespace detail {

// Over the rationals, scale each row to integer entries first so the
// fraction-free updates below never leave the integers. Row scaling changes
// neither the rank nor the right kernel.
inline void clear_row_denominators(ExactMatrix<Rat>& m) {
  for (std::size_t i = 0; i < m.rows(); ++i) {
    BigInt lcm = 1;
    for (std::size_t j = 0; j < m.cols(); ++j) {
      const BigInt den = denominator(m.at(i, j));
      lcm = lcm / gcd(lcm, den) * den;
    }
    if (lcm == 1) continue;
    const Rat f(lcm);
    for (std::size_t j = 0; j < m.cols(); ++j) m.at(i, j) *= f;
  }
}
inline void clear_row_denominators(ExactMatrix<Fp>&) {}

template <Scalar K>
struct Echelon {
  ExactMatrix<K> m;
  std::vector<std::pair<std::size_t, std::size_t>> pivots;  // (row, col)
  std::size_t rank_at_split = 0;  // pivots found in columns [0, split)
};

// Fraction-free (Bareiss) elimination with the deterministic pivot rule:
// for each column left to right, the first nonzero entry scanning rows top
// to bottom below the current frontier. Columns in [0, split) are pivoted
// before columns in [split, cols), which yields rank of the left block and
// of the whole matrix from one pass.
template <Scalar K>
Echelon<K> eliminate(ExactMatrix<K> m, std::size_t split) {
  clear_row_denominators(m);
  Echelon<K> res;
  const std::size_t rows = m.rows(), cols = m.cols();
  std::size_t frontier = 0;
  K prev(1);
  auto sweep = [&](std::size_t col_begin, std::size_t col_end) {
    for (std::size_t col = col_begin; col < col_end && frontier < rows; ++col) {
      std::size_t pr = frontier;
      while (pr < rows && is_zero(m.at(pr, col))) ++pr;
      if (pr == rows) continue;
      if (pr != frontier) {
        for (std::size_t j = 0; j < cols; ++j)
          std::swap(m.at(pr, j), m.at(frontier, j));
      }
      const K pivot = m.at(frontier, col);
      for (std::size_t i = frontier + 1; i < rows; ++i) {
        for (std::size_t j = col + 1; j < cols; ++j)
          m.at(i, j) = (m.at(i, j) * pivot - m.at(i, col) * m.at(frontier, j)) / prev;
        m.at(i, col) = K{};
      }
      prev = pivot;
      res.pivots.emplace_back(frontier, col);
      ++frontier;
    }
  };
  sweep(0, split < cols ? split : cols);
  res.rank_at_split = res.pivots.size();
  if (split < cols) sweep(split, cols);
  res.m = std::move(m);
  return res;
}

}  // namespace detail

template <Scalar K>
std::size_t rank(const ExactMatrix<K>& m) {
  return detail::eliminate(m, m.cols()).pivots.size();
}

// Basis of the right kernel {v : m v = 0}; size cols - rank.
template <Scalar K>
std::vector<std::vector<K>> kernel_basis(const ExactMatrix<K>& m) {
  const auto ech = detail::eliminate(m, m.cols());
  const std::size_t cols = m.cols();
  std::vector<bool> is_pivot_col(cols, false);
  for (const auto& [r, c] : ech.pivots) is_pivot_col[c] = true;

  std::vector<std::vector<K>> basis;
  for (std::size_t f = 0; f < cols; ++f) {
    if (is_pivot_col[f]) continue;
    std::vector<K> v(cols);
    v[f] = K(1);
    // Echelon rows solved bottom-up; every entry right of the pivot is
    // already determined.
    for (auto it = ech.pivots.rbegin(); it != ech.pivots.rend(); ++it) {
      const auto [r, c] = *it;
      if (c > f) {
        v[c] = K{};
        continue;
      }
      K acc{};
      for (std::size_t j = c + 1; j < cols; ++j) {
        if (!is_zero(v[j])) acc += ech.m.at(r, j) * v[j];
      }
      v[c] = -acc / ech.m.at(r, c);
    }
    basis.push_back(std::move(v));
  }
  return basis;
}

// (rank of base, rank of [base | ext]) from a single staged elimination.
template <Scalar K>
std::pair<std::size_t, std::size_t> rank_rel(const ExactMatrix<K>& m_base,
                                             const ExactMatrix<K>& m_ext) {
  if (m_base.rows() != m_ext.rows())
    throw std::invalid_argument("rank_rel: row count mismatch");
  const auto ech = detail::eliminate(m_base.hstacked(m_ext), m_base.cols());
  return {ech.rank_at_split, ech.pivots.size()};
}

}  // namespace normcurve
