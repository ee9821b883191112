#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "nyco/eig.hpp"
#include "nyco/matrix.hpp"
#include "nyco/nystrom.hpp"
#include "nyco/rng.hpp"

namespace nyco {

// mu(V_r) = sqrt(n) * max |V_r[i,j]|, in [1, sqrt(n)] for orthonormal V_r.
struct CoherenceReport {
  double mu;
  std::size_t r;
  std::size_t n;
  std::size_t argmax_row;
  std::size_t argmax_col;
};

// Deviation of V^T V from the identity, max-norm.
inline double orthonormality_defect(const Matrix& v) {
  const std::size_t n = v.rows(), r = v.cols();
  double worst = 0.0;
  for (std::size_t a = 0; a < r; ++a) {
    for (std::size_t b = a; b < r; ++b) {
      double dot = 0.0;
      for (std::size_t i = 0; i < n; ++i) dot += v(i, a) * v(i, b);
      const double target = (a == b) ? 1.0 : 0.0;
      worst = std::max(worst, std::abs(dot - target));
    }
  }
  return worst;
}

inline CoherenceReport coherence_of(const Matrix& v_r) {
  const std::size_t n = v_r.rows(), r = v_r.cols();
  const double defect = orthonormality_defect(v_r);
  if (defect > 1e-8)
    throw std::invalid_argument("coherence_of: columns not orthonormal, deviation " +
                                std::to_string(defect));
  double best = -1.0;
  std::size_t bi = 0, bj = 0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < r; ++j)
      if (std::abs(v_r(i, j)) > best) {  // ties resolved to smallest (i,j)
        best = std::abs(v_r(i, j));
        bi = i;
        bj = j;
      }
  return CoherenceReport{std::sqrt(static_cast<double>(n)) * best, r, n, bi, bj};
}

// Coherence of the top-r eigenvectors of G.
inline CoherenceReport coherence_of_matrix(const SymMatrix& g, std::size_t r,
                                           const RankTolerance& tol) {
  const EigenDecomp e = eig_sym(g);
  if (r > rank_numeric(e.values, tol))
    throw std::invalid_argument("coherence_of_matrix: r exceeds numerical rank");
  Matrix top(g.size(), r);
  for (std::size_t i = 0; i < g.size(); ++i)
    for (std::size_t j = 0; j < r; ++j) top(i, j) = e.vectors(i, j);
  return coherence_of(top);
}

inline CoherenceReport coherence_of_matrix(const SymMatrix& g, std::size_t r) {
  return coherence_of_matrix(g, r, RankTolerance::for_size(g.size()));
}

struct GrowthPoint {
  std::size_t size;
  std::size_t rank_used;
  std::size_t trials;   // 0 means the size was skipped (size < 2)
  double mean_mu;
  std::vector<double> per_trial;
};

// Coherence under repeated uniform subsampling: for each requested size,
// draw a principal submatrix (same index set for rows and columns, keeping
// the result SPSD), take the coherence of its top-r eigenvectors, and
// average over trials. Requested rank is reduced to min(r, size/2) when the
// submatrix is too small to support it.
inline std::vector<GrowthPoint> coherence_growth(const SymMatrix& g,
                                                 const std::vector<std::size_t>& sizes,
                                                 std::size_t r, std::size_t trials,
                                                 std::uint64_t seed) {
  std::vector<GrowthPoint> out;
  for (std::size_t s : sizes) {
    if (s > g.size())
      throw std::invalid_argument("coherence_growth: size exceeds source dimension");
    GrowthPoint pt{s, 0, 0, 0.0, {}};
    if (s < 2) {
      out.push_back(pt);
      continue;
    }
    const std::size_t r_used = std::min(r, std::max<std::size_t>(1, s / 2));
    pt.rank_used = r_used;
    double sum = 0.0;
    for (std::size_t t = 0; t < trials; ++t) {
      std::uint64_t sub_seed = hash64(hash64(seed, s), t);
      SampleScheme scheme{s, false, sub_seed};
      auto idx = sample_columns(g.size(), scheme);
      SymMatrix sub = submatrix(g, idx);
      const double mu = coherence_of_matrix(sub, r_used).mu;
      pt.per_trial.push_back(mu);
      sum += mu;
    }
    pt.trials = trials;
    pt.mean_mu = sum / static_cast<double>(trials);
    out.push_back(pt);
  }
  return out;
}

// Inputs to the sample-size bound l >= r mu^2 max(C1 log r, C2 log(3/delta)).
// The constants are uncalibrated in general; C1 = C2 = 1 are documented
// defaults and the result is qualitative unless they are calibrated.
struct SamplingBoundParams {
  std::size_t r;
  double mu;
  double delta;
  double c1 = 1.0;
  double c2 = 1.0;
};

inline std::size_t min_samples(const SamplingBoundParams& p) {
  // delta is a failure probability, normally in (0,1); values up to 3 are
  // tolerated so the log(3/delta) branch stays nonnegative at the boundary
  if (p.delta <= 0.0 || p.delta >= 3.0)
    throw std::invalid_argument("min_samples: delta must be in (0,3)");
  if (p.c1 <= 0.0 || p.c2 <= 0.0)
    throw std::invalid_argument("min_samples: constants must be positive");
  if (p.r < 1) throw std::invalid_argument("min_samples: r must be >= 1");
  const double log_r = std::log(static_cast<double>(p.r));  // 0 when r = 1
  const double log_d = std::log(3.0 / p.delta);
  const double bound =
      static_cast<double>(p.r) * p.mu * p.mu * std::max(p.c1 * log_r, p.c2 * log_d);
  return static_cast<std::size_t>(std::ceil(bound));
}

// Row sample of V_r. Without replacement needs l <= n and is an exact
// isometry at l = n; with replacement matches the i.i.d. sampling of the
// underlying concentration result and allows l > n.
struct SampledRows {
  Matrix matrix;  // l x r, verbatim rows of the source
};

inline SampledRows sample_rows(const Matrix& v_r, std::size_t l, bool replacement,
                               std::uint64_t seed) {
  const std::size_t n = v_r.rows(), r = v_r.cols();
  SampleScheme scheme{l, replacement, seed};
  auto idx = sample_columns(n, scheme);
  Matrix s(idx.size(), r);
  for (std::size_t a = 0; a < idx.size(); ++a)
    for (std::size_t j = 0; j < r; ++j) s(a, j) = v_r(idx[a], j);
  return SampledRows{std::move(s)};
}

inline SampledRows sample_rows(const Matrix& v_r, std::size_t l, std::uint64_t seed) {
  return sample_rows(v_r, l, false, seed);
}

// Spectral norm of (n/l) S^T S - I, via eigendecomposition of the small r x r
// symmetric matrix. Small values mean the sampled rows act as a near-isometry.
inline double check_isometry(const SampledRows& s, std::size_t n, std::size_t l) {
  const std::size_t r = s.matrix.cols();
  const double scale = static_cast<double>(n) / static_cast<double>(l);
  Matrix m(r, r);
  for (std::size_t a = 0; a < r; ++a) {
    for (std::size_t b = a; b < r; ++b) {
      double dot = 0.0;
      for (std::size_t i = 0; i < s.matrix.rows(); ++i) dot += s.matrix(i, a) * s.matrix(i, b);
      double v = scale * dot - (a == b ? 1.0 : 0.0);
      m(a, b) = v;
      m(b, a) = v;
    }
  }
  const EigenDecomp e = eig_sym(SymMatrix(std::move(m)));
  double norm = 0.0;
  for (double v : e.values) norm = std::max(norm, std::abs(v));
  return norm;
}

}  // namespace nyco
