#pragma once

#include <optional>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "pertalg/scalar.hpp"

namespace pertalg {

/* Dense matrix over an exact field, row major.  Sizes here stay tiny
 * (graded pieces of small complexes), so no attempt at sparsity. */
template <class S>
struct Matrix {
  int rows = 0;
  int cols = 0;
  std::vector<S> a;

  Matrix() = default;
  Matrix(int r, int c) : rows(r), cols(c), a(size_t(r) * size_t(c), FieldTraits<S>::zero()) {}

  static Matrix zero(int r, int c) { return Matrix(r, c); }

  static Matrix identity(int n) {
    Matrix m(n, n);
    for (int i = 0; i < n; ++i) m.at(i, i) = FieldTraits<S>::one();
    return m;
  }

  S& at(int i, int j) { return a[size_t(i) * cols + j]; }
  const S& at(int i, int j) const { return a[size_t(i) * cols + j]; }

  bool operator==(const Matrix& o) const {
    return rows == o.rows && cols == o.cols && a == o.a;
  }

  bool is_zero() const {
    for (const auto& v : a)
      if (!FieldTraits<S>::is_zero(v)) return false;
    return true;
  }

  Matrix operator+(const Matrix& o) const {
    if (rows != o.rows || cols != o.cols) throw std::invalid_argument("matrix shape mismatch in +");
    Matrix r = *this;
    for (size_t i = 0; i < a.size(); ++i) r.a[i] = S(r.a[i] + o.a[i]);
    return r;
  }

  Matrix operator-(const Matrix& o) const {
    if (rows != o.rows || cols != o.cols) throw std::invalid_argument("matrix shape mismatch in -");
    Matrix r = *this;
    for (size_t i = 0; i < a.size(); ++i) r.a[i] = S(r.a[i] - o.a[i]);
    return r;
  }

  Matrix operator*(const Matrix& o) const {
    if (cols != o.rows) throw std::invalid_argument("matrix shape mismatch in *");
    Matrix r(rows, o.cols);
    for (int i = 0; i < rows; ++i)
      for (int k = 0; k < cols; ++k) {
        const S& v = at(i, k);
        if (FieldTraits<S>::is_zero(v)) continue;
        for (int j = 0; j < o.cols; ++j) r.at(i, j) = S(r.at(i, j) + v * o.at(k, j));
      }
    return r;
  }

  Matrix scaled(const S& c) const {
    Matrix r = *this;
    for (auto& v : r.a) v = S(v * c);
    return r;
  }

  Matrix column(int j) const {
    Matrix r(rows, 1);
    for (int i = 0; i < rows; ++i) r.at(i, 0) = at(i, j);
    return r;
  }

  void set_column(int j, const Matrix& col) {
    for (int i = 0; i < rows; ++i) at(i, j) = col.at(i, 0);
  }

  std::string str() const {
    std::ostringstream os;
    for (int i = 0; i < rows; ++i) {
      os << (i ? "; " : "[");
      for (int j = 0; j < cols; ++j) os << (j ? " " : "") << FieldTraits<S>::str(at(i, j));
    }
    os << "]";
    return os.str();
  }
};

/* Row reduce in place to reduced row echelon form with leftmost pivots.
 * Returns the pivot column indices in order. */
template <class S>
std::vector<int> rref_in_place(Matrix<S>& m) {
  std::vector<int> pivots;
  int row = 0;
  for (int col = 0; col < m.cols && row < m.rows; ++col) {
    int sel = -1;
    for (int i = row; i < m.rows; ++i)
      if (!FieldTraits<S>::is_zero(m.at(i, col))) { sel = i; break; }
    if (sel < 0) continue;
    if (sel != row)
      for (int j = 0; j < m.cols; ++j) std::swap(m.at(sel, j), m.at(row, j));
    S inv = S(FieldTraits<S>::one() / m.at(row, col));
    for (int j = col; j < m.cols; ++j) m.at(row, j) = S(m.at(row, j) * inv);
    for (int i = 0; i < m.rows; ++i) {
      if (i == row) continue;
      S f = m.at(i, col);
      if (FieldTraits<S>::is_zero(f)) continue;
      for (int j = col; j < m.cols; ++j) m.at(i, j) = S(m.at(i, j) - f * m.at(row, j));
    }
    pivots.push_back(col);
    ++row;
  }
  return pivots;
}

template <class S>
int rank(Matrix<S> m) {
  return int(rref_in_place(m).size());
}

/* Columns of the returned matrix form a basis of the null space,
 * one per free column, in ascending free-column order. */
template <class S>
Matrix<S> kernel_basis(Matrix<S> m) {
  std::vector<int> pivots = rref_in_place(m);
  std::vector<bool> is_pivot(size_t(m.cols), false);
  for (int p : pivots) is_pivot[size_t(p)] = true;
  std::vector<int> free_cols;
  for (int j = 0; j < m.cols; ++j)
    if (!is_pivot[size_t(j)]) free_cols.push_back(j);
  Matrix<S> k(m.cols, int(free_cols.size()));
  for (int fi = 0; fi < int(free_cols.size()); ++fi) {
    int f = free_cols[size_t(fi)];
    k.at(f, fi) = FieldTraits<S>::one();
    for (int r = 0; r < int(pivots.size()); ++r) k.at(pivots[size_t(r)], fi) = S(-m.at(r, f));
  }
  return k;
}

template <class S>
std::optional<Matrix<S>> inverse(const Matrix<S>& m) {
  if (m.rows != m.cols) return std::nullopt;
  int n = m.rows;
  Matrix<S> aug(n, 2 * n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) aug.at(i, j) = m.at(i, j);
    aug.at(i, n + i) = FieldTraits<S>::one();
  }
  std::vector<int> pivots = rref_in_place(aug);
  if (int(pivots.size()) != n || pivots.back() != n - 1) return std::nullopt;
  Matrix<S> r(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) r.at(i, j) = aug.at(i, n + j);
  return r;
}

/* Solve A x = b for each column of b; nullopt when inconsistent.
 * Free variables are set to zero. */
template <class S>
std::optional<Matrix<S>> solve(const Matrix<S>& m, const Matrix<S>& b) {
  if (m.rows != b.rows) throw std::invalid_argument("matrix shape mismatch in solve");
  Matrix<S> aug(m.rows, m.cols + b.cols);
  for (int i = 0; i < m.rows; ++i) {
    for (int j = 0; j < m.cols; ++j) aug.at(i, j) = m.at(i, j);
    for (int j = 0; j < b.cols; ++j) aug.at(i, m.cols + j) = b.at(i, j);
  }
  std::vector<int> pivots = rref_in_place(aug);
  for (int p : pivots)
    if (p >= m.cols) return std::nullopt;
  Matrix<S> x(m.cols, b.cols);
  for (int r = 0; r < int(pivots.size()); ++r)
    for (int j = 0; j < b.cols; ++j) x.at(pivots[size_t(r)], j) = aug.at(r, m.cols + j);
  return x;
}

/* Greedy extension: starting from the (independent) columns of `base`,
 * append columns of `pool` left to right whenever one enlarges the span.
 * Returns the chosen pool column indices. */
template <class S>
std::vector<int> extend_basis_greedy(const Matrix<S>& base, const Matrix<S>& pool) {
  if (base.rows != pool.rows) throw std::invalid_argument("matrix shape mismatch in basis extension");
  std::vector<int> chosen;
  Matrix<S> acc = base;
  int r = rank(acc);
  for (int j = 0; j < pool.cols; ++j) {
    Matrix<S> trial(acc.rows, acc.cols + 1);
    for (int i = 0; i < acc.rows; ++i) {
      for (int c = 0; c < acc.cols; ++c) trial.at(i, c) = acc.at(i, c);
      trial.at(i, acc.cols) = pool.at(i, j);
    }
    int tr = rank(trial);
    if (tr > r) {
      acc = trial;
      r = tr;
      chosen.push_back(j);
    }
  }
  return chosen;
}

}  // namespace pertalg
