#pragma once

// Dense matrices over a noncommutative ring backend. Public indices are
// 1-based throughout.

#include "ncspec/errors.hpp"
#include "ncspec/ring.hpp"

#include <cstddef>
#include <initializer_list>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace ncspec {

template <RingElement T>
class NcMatrix {
 public:
  using value_type = T;

  NcMatrix() = default;
  NcMatrix(std::size_t rows, std::size_t cols, const T& fill) : rows_(rows), cols_(cols), data_(rows * cols, fill) {
    if (rows == 0 || cols == 0) throw DimensionMismatch("matrix dimensions must be positive");
  }
  NcMatrix(std::initializer_list<std::initializer_list<T>> init) {
    rows_ = init.size();
    cols_ = rows_ ? init.begin()->size() : 0;
    if (rows_ == 0 || cols_ == 0) throw DimensionMismatch("matrix dimensions must be positive");
    data_.reserve(rows_ * cols_);
    for (const auto& row : init) {
      if (row.size() != cols_) throw DimensionMismatch("ragged initializer");
      data_.insert(data_.end(), row.begin(), row.end());
    }
  }
  NcMatrix(std::size_t rows, std::size_t cols, std::vector<T> entries)
      : rows_(rows), cols_(cols), data_(std::move(entries)) {
    if (rows == 0 || cols == 0 || data_.size() != rows * cols)
      throw DimensionMismatch("entry count must equal rows x cols");
  }

  static NcMatrix zeros(std::size_t rows, std::size_t cols, const T& like) {
    return NcMatrix(rows, cols, ring_traits<T>::zero_like(like));
  }
  static NcMatrix identity(std::size_t n, const T& like) {
    NcMatrix m = zeros(n, n, like);
    for (std::size_t i = 1; i <= n; ++i) m(i, i) = ring_traits<T>::one_like(like);
    return m;
  }
  static NcMatrix diagonal(const std::vector<T>& d) {
    if (d.empty()) throw DimensionMismatch("empty diagonal");
    NcMatrix m = zeros(d.size(), d.size(), d.front());
    for (std::size_t i = 1; i <= d.size(); ++i) m(i, i) = d[i - 1];
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool is_square() const { return rows_ == cols_; }
  const std::vector<T>& entries() const { return data_; }

  T& operator()(std::size_t i, std::size_t j) { return data_[(i - 1) * cols_ + (j - 1)]; }
  const T& operator()(std::size_t i, std::size_t j) const { return data_[(i - 1) * cols_ + (j - 1)]; }

  const T& at(std::size_t i, std::size_t j) const {
    check_index(i, j);
    return (*this)(i, j);
  }
  T& at(std::size_t i, std::size_t j) {
    check_index(i, j);
    return (*this)(i, j);
  }

  /// An element of the entry ring, used as a shape prototype.
  const T& sample() const { return data_.front(); }

  friend NcMatrix operator+(const NcMatrix& a, const NcMatrix& b) {
    a.check_same_shape(b);
    NcMatrix r = a;
    for (std::size_t k = 0; k < r.data_.size(); ++k) r.data_[k] = a.data_[k] + b.data_[k];
    return r;
  }
  friend NcMatrix operator-(const NcMatrix& a, const NcMatrix& b) {
    a.check_same_shape(b);
    NcMatrix r = a;
    for (std::size_t k = 0; k < r.data_.size(); ++k) r.data_[k] = a.data_[k] - b.data_[k];
    return r;
  }
  friend NcMatrix operator-(const NcMatrix& a) {
    NcMatrix r = a;
    for (auto& e : r.data_) e = -e;
    return r;
  }
  friend NcMatrix operator*(const NcMatrix& a, const NcMatrix& b) {
    if (a.cols_ != b.rows_)
      throw DimensionMismatch("cannot multiply " + a.shape() + " by " + b.shape());
    NcMatrix r = zeros(a.rows_, b.cols_, a.sample());
    for (std::size_t i = 1; i <= a.rows_; ++i)
      for (std::size_t j = 1; j <= b.cols_; ++j) {
        T acc = a(i, 1) * b(1, j);
        for (std::size_t k = 2; k <= a.cols_; ++k) acc = acc + a(i, k) * b(k, j);
        r(i, j) = std::move(acc);
      }
    return r;
  }
  /// Left and right multiplication by an entry-ring scalar.
  friend NcMatrix operator*(const T& s, const NcMatrix& a) {
    NcMatrix r = a;
    for (auto& e : r.data_) e = s * e;
    return r;
  }
  friend NcMatrix operator*(const NcMatrix& a, const T& s) {
    NcMatrix r = a;
    for (auto& e : r.data_) e = e * s;
    return r;
  }

  std::string shape() const { return std::to_string(rows_) + "x" + std::to_string(cols_); }

 private:
  void check_index(std::size_t i, std::size_t j) const {
    if (i < 1 || i > rows_ || j < 1 || j > cols_)
      throw IndexOutOfRange("index (" + std::to_string(i) + "," + std::to_string(j) + ") outside " + shape());
  }
  void check_same_shape(const NcMatrix& b) const {
    if (rows_ != b.rows_ || cols_ != b.cols_) throw DimensionMismatch(shape() + " vs " + b.shape());
  }

  std::size_t rows_ = 0, cols_ = 0;
  std::vector<T> data_;
};

template <RingElement T>
NcMatrix<T> mat_power(const NcMatrix<T>& a, std::size_t m) {
  if (!a.is_square()) throw DimensionMismatch("mat_power needs a square matrix");
  NcMatrix<T> r = NcMatrix<T>::identity(a.rows(), a.sample());
  for (std::size_t k = 0; k < m; ++k) r = r * a;
  return r;
}

/// A^{ij}: delete row i and column j.
template <RingElement T>
NcMatrix<T> delete_row_col(const NcMatrix<T>& a, std::size_t i, std::size_t j) {
  if (i < 1 || i > a.rows() || j < 1 || j > a.cols()) throw IndexOutOfRange("delete_row_col index");
  if (a.rows() < 2 || a.cols() < 2) throw DimensionMismatch("cannot delete from a single row/column");
  std::vector<T> out;
  out.reserve((a.rows() - 1) * (a.cols() - 1));
  for (std::size_t r = 1; r <= a.rows(); ++r) {
    if (r == i) continue;
    for (std::size_t c = 1; c <= a.cols(); ++c)
      if (c != j) out.push_back(a(r, c));
  }
  return NcMatrix<T>(a.rows() - 1, a.cols() - 1, std::move(out));
}

/// Row i without its j-th entry, as a 1 x (n-1) matrix.
template <RingElement T>
NcMatrix<T> extract_row_without(const NcMatrix<T>& a, std::size_t i, std::size_t j) {
  if (i < 1 || i > a.rows() || j < 1 || j > a.cols()) throw IndexOutOfRange("extract_row_without index");
  if (a.cols() < 2) throw DimensionMismatch("row has a single entry");
  std::vector<T> out;
  for (std::size_t c = 1; c <= a.cols(); ++c)
    if (c != j) out.push_back(a(i, c));
  return NcMatrix<T>(1, a.cols() - 1, std::move(out));
}

/// Column j without its i-th entry, as an (n-1) x 1 matrix.
template <RingElement T>
NcMatrix<T> extract_col_without(const NcMatrix<T>& a, std::size_t j, std::size_t i) {
  if (i < 1 || i > a.rows() || j < 1 || j > a.cols()) throw IndexOutOfRange("extract_col_without index");
  if (a.rows() < 2) throw DimensionMismatch("column has a single entry");
  std::vector<T> out;
  for (std::size_t r = 1; r <= a.rows(); ++r)
    if (r != i) out.push_back(a(r, j));
  return NcMatrix<T>(a.rows() - 1, 1, std::move(out));
}

template <RingElement T>
bool mat_approx_equal(const NcMatrix<T>& a, const NcMatrix<T>& b, const ToleranceConfig& cfg) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
  for (std::size_t k = 0; k < a.entries().size(); ++k)
    if (!approx_equal(a.entries()[k], b.entries()[k], cfg)) return false;
  return true;
}

template <RingElement T>
double mat_max_abs(const NcMatrix<T>& a, const ToleranceConfig& cfg) {
  double m = 0.0;
  for (const auto& e : a.entries()) m = std::max(m, magnitude(e, cfg));
  return m;
}

/// Gauss-Jordan inversion with left row multipliers and full pivoting: the
/// pivot is the first entry of the active block (row-major) whose inverse
/// exists. The result is checked against A*B = B*A = I. Empty if singular.
template <RingElement T>
std::optional<NcMatrix<T>> mat_inverse_elimination(const NcMatrix<T>& a, const ToleranceConfig& cfg) {
  if (!a.is_square()) throw DimensionMismatch("inverse needs a square matrix");
  const std::size_t n = a.rows();
  NcMatrix<T> work = a;
  NcMatrix<T> left = NcMatrix<T>::identity(n, a.sample());
  std::vector<std::size_t> col_of(n);  // column of a held in working column t
  std::iota(col_of.begin(), col_of.end(), std::size_t{1});

  auto swap_rows = [n](NcMatrix<T>& m, std::size_t r1, std::size_t r2) {
    if (r1 == r2) return;
    for (std::size_t c = 1; c <= m.cols(); ++c) std::swap(m(r1, c), m(r2, c));
  };

  for (std::size_t t = 1; t <= n; ++t) {
    std::optional<T> pivot_inv;
    std::size_t pr = 0, pc = 0;
    for (std::size_t r = t; r <= n && !pivot_inv; ++r)
      for (std::size_t c = t; c <= n && !pivot_inv; ++c)
        if (auto inv = try_inverse(work(r, c), cfg)) {
          pivot_inv = std::move(inv);
          pr = r;
          pc = c;
        }
    if (!pivot_inv) return std::nullopt;

    swap_rows(work, t, pr);
    swap_rows(left, t, pr);
    if (pc != t) {
      for (std::size_t r = 1; r <= n; ++r) std::swap(work(r, t), work(r, pc));
      std::swap(col_of[t - 1], col_of[pc - 1]);
    }

    for (std::size_t c = 1; c <= n; ++c) {
      work(t, c) = *pivot_inv * work(t, c);
      left(t, c) = *pivot_inv * left(t, c);
    }
    for (std::size_t r = 1; r <= n; ++r) {
      if (r == t) continue;
      const T factor = work(r, t);
      if (is_zero(factor, cfg)) continue;
      for (std::size_t c = 1; c <= n; ++c) {
        work(r, c) = work(r, c) - factor * work(t, c);
        left(r, c) = left(r, c) - factor * left(t, c);
      }
    }
  }

  // (A Q)^{-1} = L, so A^{-1} = Q L: row t of L becomes row col_of[t].
  NcMatrix<T> inv = left;
  for (std::size_t t = 1; t <= n; ++t)
    for (std::size_t c = 1; c <= n; ++c) inv(col_of[t - 1], c) = left(t, c);

  const NcMatrix<T> id = NcMatrix<T>::identity(n, a.sample());
  if (!mat_approx_equal(a * inv, id, cfg) || !mat_approx_equal(inv * a, id, cfg)) return std::nullopt;
  return inv;
}

/// Matrices over T form a ring themselves; the spectral machinery works in M(n, T).
template <RingElement T>
struct ring_traits<NcMatrix<T>> {
  static constexpr Exactness exactness = ring_traits<T>::exactness;
  static NcMatrix<T> zero_like(const NcMatrix<T>& m) { return NcMatrix<T>::zeros(m.rows(), m.cols(), m.sample()); }
  static NcMatrix<T> one_like(const NcMatrix<T>& m) { return NcMatrix<T>::identity(m.rows(), m.sample()); }
  static std::optional<NcMatrix<T>> try_inverse(const NcMatrix<T>& m, const ToleranceConfig& cfg) {
    if (!m.is_square()) return std::nullopt;
    return mat_inverse_elimination(m, cfg);
  }
  static bool approx_equal(const NcMatrix<T>& a, const NcMatrix<T>& b, const ToleranceConfig& cfg) {
    return mat_approx_equal(a, b, cfg);
  }
  static double magnitude(const NcMatrix<T>& m, const ToleranceConfig& cfg) { return mat_max_abs(m, cfg); }
};

}  // namespace ncspec
