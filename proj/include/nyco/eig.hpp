#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "nyco/matrix.hpp"

namespace nyco {

// Cutoff for deciding which eigenvalues count as nonzero. The default scales
// with dimension and the largest eigenvalue magnitude, machine-epsilon style.
struct RankTolerance {
  double relative_cutoff;
  double absolute_floor = 0.0;

  static RankTolerance for_size(std::size_t n) {
    return RankTolerance{static_cast<double>(n) * 1e-12, 0.0};
  }
};

// Orthonormal eigenvectors (columns) with eigenvalues sorted non-increasing.
struct EigenDecomp {
  Matrix vectors;               // n x r, column-orthonormal
  std::vector<double> values;   // r entries, descending
};

class EigenConvergenceError : public std::runtime_error {
 public:
  EigenConvergenceError(double off_norm, int sweeps)
      : std::runtime_error("Jacobi eigensolver did not converge after " +
                           std::to_string(sweeps) +
                           " sweeps; remaining off-diagonal norm " +
                           std::to_string(off_norm)),
        off_diagonal_norm(off_norm) {}
  double off_diagonal_norm;
};

namespace detail {

inline double off_diagonal_norm(const Matrix& a) {
  double s = 0.0;
  const std::size_t n = a.rows();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) s += a(i, j) * a(i, j);
  return std::sqrt(2.0 * s);
}

}  // namespace detail

// Full symmetric eigendecomposition by cyclic Jacobi rotations.
// Converged when the off-diagonal Frobenius norm drops below 1e-12 * ||A||_F;
// budget of 30 sweeps (typical matrices need well under 15).
// Eigenvalues may be negative for general symmetric input.
// Sign convention: the entry of largest magnitude in each eigenvector is made
// positive, so downstream coherence/argmax reporting is deterministic.
inline EigenDecomp eig_sym(const SymMatrix& sym) {
  const std::size_t n = sym.size();
  Matrix a = sym.mat();
  Matrix v = Matrix::identity(n);

  const double norm_a = frobenius(a);
  const double threshold = 1e-12 * norm_a;
  const int max_sweeps = 30;

  double off = detail::off_diagonal_norm(a);
  int sweep = 0;
  while (off > threshold && sweep < max_sweeps) {
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (std::abs(apq) <= 1e-300) continue;
        const double app = a(p, p), aqq = a(q, q);
        const double theta = (aqq - app) / (2.0 * apq);
        double t;
        if (std::abs(theta) > 1e154) {
          t = 1.0 / (2.0 * theta);  // avoid theta^2 overflow
        } else {
          t = 1.0 / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
          if (theta < 0.0) t = -t;
        }
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        const double tau = s / (1.0 + c);

        a(p, p) = app - t * apq;
        a(q, q) = aqq + t * apq;
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
          if (i != p && i != q) {
            const double aip = a(i, p), aiq = a(i, q);
            a(i, p) = aip - s * (aiq + tau * aip);
            a(p, i) = a(i, p);
            a(i, q) = aiq + s * (aip - tau * aiq);
            a(q, i) = a(i, q);
          }
          const double vip = v(i, p), viq = v(i, q);
          v(i, p) = vip - s * (viq + tau * vip);
          v(i, q) = viq + s * (vip - tau * viq);
        }
      }
    }
    off = detail::off_diagonal_norm(a);
    ++sweep;
  }
  if (off > threshold) throw EigenConvergenceError(off, max_sweeps);

  // sort descending by eigenvalue
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::vector<double> diag(n);
  for (std::size_t i = 0; i < n; ++i) diag[i] = a(i, i);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return diag[x] > diag[y]; });

  EigenDecomp out;
  out.values.resize(n);
  out.vectors = Matrix(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    const std::size_t src = order[j];
    out.values[j] = diag[src];
    // locate the largest-magnitude entry to fix the sign
    std::size_t imax = 0;
    double vmax = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (std::abs(v(i, src)) > vmax) {
        vmax = std::abs(v(i, src));
        imax = i;
      }
    }
    const double sign = v(imax, src) < 0.0 ? -1.0 : 1.0;
    for (std::size_t i = 0; i < n; ++i) out.vectors(i, j) = sign * v(i, src);
  }
  return out;
}

// Count of eigenvalues with |sigma_i| > relative_cutoff * sigma_1 (and above
// the absolute floor). Values must be sorted by |.| implicitly via sigma_1.
inline std::size_t rank_numeric(const std::vector<double>& values, const RankTolerance& tol) {
  double sigma1 = 0.0;
  for (double v : values) sigma1 = std::max(sigma1, std::abs(v));
  if (sigma1 == 0.0) return 0;
  const double cutoff = std::max(tol.relative_cutoff * sigma1, tol.absolute_floor);
  std::size_t r = 0;
  for (double v : values)
    if (std::abs(v) > cutoff) ++r;
  return r;
}

inline std::size_t rank_numeric(const SymMatrix& a, const RankTolerance& tol) {
  return rank_numeric(eig_sym(a).values, tol);
}

inline std::size_t rank_numeric(const SymMatrix& a) {
  return rank_numeric(a, RankTolerance::for_size(a.size()));
}

// For inputs declared SPSD: small negative eigenvalues (round-off from
// kernel evaluation) within -1e-10 * sigma_1 are clamped to zero; anything
// more negative is a genuine violation and raises.
inline void clamp_spsd(EigenDecomp& e) {
  double sigma1 = 0.0;
  for (double v : e.values) sigma1 = std::max(sigma1, std::abs(v));
  const double floor = -1e-10 * sigma1;
  for (double& v : e.values) {
    if (v < 0.0) {
      if (v < floor)
        throw std::runtime_error("matrix declared SPSD has eigenvalue " +
                                 std::to_string(v) + " below clamp threshold " +
                                 std::to_string(floor));
      v = 0.0;
    }
  }
}

// Truncated Moore-Penrose pseudo-inverse: sum over the top min(k, numerical
// rank) eigenpairs of sigma_t^{-1} v_t v_t^T. Eigenvalues under the cutoff are
// excluded, never inverted; a numerically zero matrix yields the zero matrix.
inline SymMatrix pinv_trunc(const SymMatrix& a, std::size_t k, const RankTolerance& tol) {
  const std::size_t n = a.size();
  if (k < 1 || k > n) throw std::invalid_argument("pinv_trunc: k out of range");
  const EigenDecomp e = eig_sym(a);

  double sigma1 = 0.0;
  for (double v : e.values) sigma1 = std::max(sigma1, std::abs(v));
  const double cutoff = std::max(tol.relative_cutoff * sigma1, tol.absolute_floor);

  Matrix out(n, n);
  std::size_t taken = 0;
  for (std::size_t t = 0; t < n && taken < k; ++t) {
    const double sigma = e.values[t];
    if (std::abs(sigma) <= cutoff) continue;
    const double inv = 1.0 / sigma;
    for (std::size_t i = 0; i < n; ++i) {
      const double vi = e.vectors(i, t) * inv;
      for (std::size_t j = i; j < n; ++j) {
        out(i, j) += vi * e.vectors(j, t);
      }
    }
    ++taken;
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) out(j, i) = out(i, j);
  return SymMatrix(std::move(out));
}

inline SymMatrix pinv_trunc(const SymMatrix& a, std::size_t k) {
  return pinv_trunc(a, k, RankTolerance::for_size(a.size()));
}

// Best rank-k approximation: sum of the top-k eigenpairs (eigenvalues clamped
// to SPSD beforehand by the caller if required).
inline SymMatrix truncate_rank(const EigenDecomp& e, std::size_t k) {
  const std::size_t n = e.vectors.rows();
  Matrix scaled(n, k);
  for (std::size_t t = 0; t < k; ++t) {
    const double s = std::sqrt(std::max(e.values[t], 0.0));
    for (std::size_t i = 0; i < n; ++i) scaled(i, t) = e.vectors(i, t) * s;
  }
  return SymMatrix(multiply_aat(scaled));
}

}  // namespace nyco
