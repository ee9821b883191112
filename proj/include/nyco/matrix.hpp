#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <utility>
#include <vector>

namespace nyco {

// Dense row-major real matrix. Minimal surface: this project only needs
// products, transposes and norms on matrices up to a few thousand rows.
class Matrix {
 public:
  Matrix() : rows_(0), cols_(0) {}
  Matrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {}

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  double* row_ptr(std::size_t i) { return data_.data() + i * cols_; }
  const double* row_ptr(std::size_t i) const { return data_.data() + i * cols_; }

  const std::vector<double>& data() const { return data_; }
  std::vector<double>& data() { return data_; }

  Matrix transposed() const {
    Matrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  bool operator==(const Matrix& other) const {
    return rows_ == other.rows_ && cols_ == other.cols_ && data_ == other.data_;
  }

 private:
  std::size_t rows_, cols_;
  std::vector<double> data_;
};

// C = A * B, ikj order for cache friendliness.
inline Matrix multiply(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows()) throw std::invalid_argument("multiply: dimension mismatch");
  Matrix c(a.rows(), b.cols());
  const std::size_t n = a.rows(), m = a.cols(), p = b.cols();
  for (std::size_t i = 0; i < n; ++i) {
    double* ci = c.row_ptr(i);
    const double* ai = a.row_ptr(i);
    for (std::size_t k = 0; k < m; ++k) {
      const double aik = ai[k];
      if (aik == 0.0) continue;
      const double* bk = b.row_ptr(k);
      for (std::size_t j = 0; j < p; ++j) ci[j] += aik * bk[j];
    }
  }
  return c;
}

inline Matrix operator*(const Matrix& a, const Matrix& b) { return multiply(a, b); }

// A * A^T without forming the transpose; result is exactly symmetric.
inline Matrix multiply_aat(const Matrix& a) {
  const std::size_t n = a.rows(), m = a.cols();
  Matrix c(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    const double* ai = a.row_ptr(i);
    for (std::size_t j = i; j < n; ++j) {
      const double* aj = a.row_ptr(j);
      double s = 0.0;
      for (std::size_t k = 0; k < m; ++k) s += ai[k] * aj[k];
      c(i, j) = s;
      c(j, i) = s;
    }
  }
  return c;
}

inline double frobenius(const Matrix& a) {
  double s = 0.0;
  for (double v : a.data()) s += v * v;
  return std::sqrt(s);
}

inline double frobenius_diff(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw std::invalid_argument("frobenius_diff: dimension mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < a.data().size(); ++i) {
    const double d = a.data()[i] - b.data()[i];
    s += d * d;
  }
  return std::sqrt(s);
}

inline double max_abs(const Matrix& a) {
  double m = 0.0;
  for (double v : a.data()) m = std::max(m, std::abs(v));
  return m;
}

// Symmetric n x n matrix. Construction symmetrizes via (A + A^T)/2 so the
// invariant data[i,j] == data[j,i] holds exactly regardless of the source.
class SymMatrix {
 public:
  explicit SymMatrix(Matrix a) : m_(std::move(a)) {
    if (m_.rows() != m_.cols()) throw std::invalid_argument("SymMatrix: not square");
    if (m_.rows() == 0) throw std::invalid_argument("SymMatrix: empty");
    for (std::size_t i = 0; i < m_.rows(); ++i)
      for (std::size_t j = i + 1; j < m_.cols(); ++j) {
        const double v = 0.5 * (m_(i, j) + m_(j, i));
        m_(i, j) = v;
        m_(j, i) = v;
      }
  }

  explicit SymMatrix(std::size_t n) : m_(n, n) {
    if (n == 0) throw std::invalid_argument("SymMatrix: empty");
  }

  static SymMatrix diagonal(const std::vector<double>& d) {
    SymMatrix s(d.size());
    for (std::size_t i = 0; i < d.size(); ++i) s.m_(i, i) = d[i];
    return s;
  }

  static SymMatrix identity(std::size_t n) { return SymMatrix(Matrix::identity(n)); }

  std::size_t size() const { return m_.rows(); }
  double operator()(std::size_t i, std::size_t j) const { return m_(i, j); }
  const Matrix& mat() const { return m_; }

  // symmetric write: sets both (i,j) and (j,i)
  void set(std::size_t i, std::size_t j, double v) {
    m_(i, j) = v;
    m_(j, i) = v;
  }

  double trace() const {
    double t = 0.0;
    for (std::size_t i = 0; i < size(); ++i) t += m_(i, i);
    return t;
  }

 private:
  Matrix m_;
};

inline double frobenius(const SymMatrix& a) { return frobenius(a.mat()); }
inline double frobenius_diff(const SymMatrix& a, const SymMatrix& b) {
  return frobenius_diff(a.mat(), b.mat());
}

}  // namespace nyco
