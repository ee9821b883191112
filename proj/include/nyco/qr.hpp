#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>

#include "nyco/matrix.hpp"
#include "nyco/rng.hpp"

namespace nyco {

// Column-orthonormalization by modified Gram-Schmidt with one
// re-orthogonalization pass (needed to hold ||Q^T Q - I||_max under 1e-10 at
// n in the thousands). Column order and directions are preserved: the first
// output column is the first input column normalized, which the
// targeted-coherence construction depends on.
inline Matrix qr_orthonormalize(const Matrix& m) {
  const std::size_t n = m.rows(), cols = m.cols();
  if (cols > n) throw std::invalid_argument("qr_orthonormalize: more columns than rows");

  Matrix q = m;
  for (std::size_t j = 0; j < cols; ++j) {
    double orig_norm = 0.0;
    for (std::size_t i = 0; i < n; ++i) orig_norm += q(i, j) * q(i, j);
    orig_norm = std::sqrt(orig_norm);

    for (int pass = 0; pass < 2; ++pass) {
      for (std::size_t t = 0; t < j; ++t) {
        double dot = 0.0;
        for (std::size_t i = 0; i < n; ++i) dot += q(i, t) * q(i, j);
        for (std::size_t i = 0; i < n; ++i) q(i, j) -= dot * q(i, t);
      }
    }
    double norm = 0.0;
    for (std::size_t i = 0; i < n; ++i) norm += q(i, j) * q(i, j);
    norm = std::sqrt(norm);
    if (norm <= 1e-10 * std::max(orig_norm, 1e-300) || norm == 0.0)
      throw std::runtime_error("qr_orthonormalize: column " + std::to_string(j) +
                               " is numerically dependent on earlier columns");
    const double inv = 1.0 / norm;
    for (std::size_t i = 0; i < n; ++i) q(i, j) *= inv;
  }
  return q;
}

// n x m block with Haar-distributed orthonormal columns: QR of an i.i.d.
// Gaussian block. Canonical low-coherence construction.
inline Matrix haar_basis(std::size_t n, std::size_t m, Rng& rng) {
  Matrix g(n, m);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < m; ++j) g(i, j) = rng.normal();
  return qr_orthonormalize(g);
}

inline Matrix haar_basis(std::size_t n, std::size_t m, std::uint64_t seed) {
  Rng rng(seed);
  return haar_basis(n, m, rng);
}

}  // namespace nyco
