#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "nyco/eig.hpp"
#include "nyco/matrix.hpp"
#include "nyco/rng.hpp"

namespace nyco {

// How columns are drawn: l uniform draws, with or without replacement,
// fully determined by the seed.
struct SampleScheme {
  std::size_t l;
  bool replacement = false;
  std::uint64_t seed = 0;
};

// Sampled-column factorization of G: reconstruction is C * W_k^+ * C^T.
// The full approximation is never stored; materializing it is opt-in via
// reconstruct().
struct NystromModel {
  std::vector<std::size_t> indices;  // l sampled column ids
  Matrix c;                          // n x l
  SymMatrix w;                       // l x l intersection block
  std::size_t k;                     // truncation rank, k <= l
  SymMatrix w_k_pinv;                // pinv_trunc(W, k)
};

// Uniform column sample. Without replacement: a uniform l-subset, returned
// ascending. With replacement: l i.i.d. draws in draw order (duplicates kept).
inline std::vector<std::size_t> sample_columns(std::size_t n, const SampleScheme& scheme) {
  if (scheme.l < 1) throw std::invalid_argument("sample_columns: l must be >= 1");
  Rng rng(scheme.seed);
  std::vector<std::size_t> out;
  out.reserve(scheme.l);
  if (scheme.replacement) {
    for (std::size_t t = 0; t < scheme.l; ++t) out.push_back(rng.index(n));
  } else {
    if (scheme.l > n)
      throw std::invalid_argument("sample_columns: l > n without replacement");
    std::vector<std::size_t> idx(n);
    for (std::size_t i = 0; i < n; ++i) idx[i] = i;
    for (std::size_t i = 0; i < scheme.l; ++i) {
      const std::size_t j = i + rng.index(n - i);
      std::swap(idx[i], idx[j]);
    }
    out.assign(idx.begin(), idx.begin() + scheme.l);
    std::sort(out.begin(), out.end());
  }
  return out;
}

inline std::vector<std::size_t> sample_columns(const SymMatrix& g, const SampleScheme& scheme) {
  return sample_columns(g.size(), scheme);
}

// Principal submatrix G[idx, idx].
inline SymMatrix submatrix(const SymMatrix& g, const std::vector<std::size_t>& idx) {
  Matrix w(idx.size(), idx.size());
  for (std::size_t a = 0; a < idx.size(); ++a)
    for (std::size_t b = 0; b < idx.size(); ++b) w(a, b) = g(idx[a], idx[b]);
  return SymMatrix(std::move(w));
}

// Extract C and W at the sampled indices and invert the top-k spectrum of W.
inline NystromModel fit(const SymMatrix& g, const SampleScheme& scheme, std::size_t k,
                        const RankTolerance& tol) {
  if (k < 1 || k > scheme.l) throw std::invalid_argument("fit: need 1 <= k <= l");
  const std::size_t n = g.size();
  auto indices = sample_columns(n, scheme);
  Matrix c(n, indices.size());
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t t = 0; t < indices.size(); ++t) c(i, t) = g(i, indices[t]);
  SymMatrix w = submatrix(g, indices);
  SymMatrix wk_pinv = pinv_trunc(w, k, tol);
  return NystromModel{std::move(indices), std::move(c), std::move(w), k, std::move(wk_pinv)};
}

inline NystromModel fit(const SymMatrix& g, const SampleScheme& scheme, std::size_t k) {
  return fit(g, scheme, k, RankTolerance::for_size(scheme.l));
}

// Materialize C * W_k^+ * C^T (O(n^2) memory).
inline SymMatrix reconstruct(const NystromModel& model) {
  Matrix cp = model.c * model.w_k_pinv.mat();  // n x l
  const std::size_t n = model.c.rows(), l = model.c.cols();
  Matrix out(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    const double* cpi = cp.row_ptr(i);
    for (std::size_t j = i; j < n; ++j) {
      const double* cj = model.c.row_ptr(j);
      double s = 0.0;
      for (std::size_t t = 0; t < l; ++t) s += cpi[t] * cj[t];
      out(i, j) = s;
      out(j, i) = s;
    }
  }
  return SymMatrix(std::move(out));
}

// 100 * ||G - C W_k^+ C^T||_F / ||G||_F, accumulated row by row so the
// approximation is never materialized.
inline double percent_error(const SymMatrix& g, const NystromModel& model) {
  const double norm_g = frobenius(g);
  if (norm_g == 0.0) throw std::invalid_argument("percent_error: zero matrix");
  const std::size_t n = g.size(), l = model.c.cols();
  // M = W_k^+ C^T, l x n
  Matrix m(l, n);
  for (std::size_t a = 0; a < l; ++a) {
    double* ma = m.row_ptr(a);
    for (std::size_t b = 0; b < l; ++b) {
      const double p = model.w_k_pinv(a, b);
      if (p == 0.0) continue;
      for (std::size_t j = 0; j < n; ++j) ma[j] += p * model.c(j, b);
    }
  }
  double err2 = 0.0;
  std::vector<double> row(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::fill(row.begin(), row.end(), 0.0);
    const double* ci = model.c.row_ptr(i);
    for (std::size_t t = 0; t < l; ++t) {
      const double cit = ci[t];
      if (cit == 0.0) continue;
      const double* mt = m.row_ptr(t);
      for (std::size_t j = 0; j < n; ++j) row[j] += cit * mt[j];
    }
    for (std::size_t j = 0; j < n; ++j) {
      const double d = g(i, j) - row[j];
      err2 += d * d;
    }
  }
  return 100.0 * std::sqrt(err2) / norm_g;
}

// Monte Carlo estimate of Pr[rank(W) = r] under the sampling scheme. Trials
// use sub-seeds derived from (seed, trial index), so the estimate is
// schedule-independent and any single trial is replayable.
inline double estimate_recovery_prob(const SymMatrix& g, std::size_t r, std::size_t l,
                                     bool replacement, std::size_t trials, std::uint64_t seed,
                                     const RankTolerance& tol) {
  if (trials < 1) throw std::invalid_argument("estimate_recovery_prob: trials >= 1");
  std::size_t hits = 0;
  for (std::size_t t = 0; t < trials; ++t) {
    SampleScheme scheme{l, replacement, hash64(seed, t)};
    auto idx = sample_columns(g.size(), scheme);
    SymMatrix w = submatrix(g, idx);
    if (rank_numeric(w, tol) == r) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(trials);
}

inline double estimate_recovery_prob(const SymMatrix& g, std::size_t r, std::size_t l,
                                     bool replacement, std::size_t trials,
                                     std::uint64_t seed) {
  return estimate_recovery_prob(g, r, l, replacement, trials, seed,
                                RankTolerance::for_size(l));
}

// Exact probability that l uniform draws without replacement from n columns
// capture all r special ones: C(n-r, l-r) / C(n, l).
inline double hypergeometric_all_captured(std::size_t n, std::size_t r, std::size_t l) {
  if (l < r) return 0.0;
  double p = 1.0;
  for (std::size_t i = 0; i < r; ++i)
    p *= static_cast<double>(l - i) / static_cast<double>(n - i);
  return p;
}

}  // namespace nyco
