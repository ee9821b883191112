#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <vector>

#include "nyco/coherence.hpp"
#include "nyco/matrix.hpp"
#include "nyco/qr.hpp"
#include "nyco/rng.hpp"

namespace nyco {

// Recipe for a controlled SPSD matrix.
//   rank set:   exact rank r; flat unit spectrum when eta == 0, otherwise
//               sigma_i = exp(-i*eta) over the top r.
//   rank unset: full rank with sigma_i = exp(-i*eta), i = 1..n.
// mu_target steers the first eigenvector's coherence; the realized coherence
// is measured and reported, never assumed.
struct SyntheticSpec {
  std::size_t n;
  std::optional<std::size_t> rank;
  double eta = 0.0;
  double mu_target = 1.0;
  std::uint64_t seed = 0;
};

// The adversarial diagonal case: Gram matrix of [e_1 ... e_r 0 ... 0], i.e.
// diag(1,...,1,0,...,0) with r ones. Rank r, coherence sqrt(n), and uniform
// column sampling recovers it only if every e-column is drawn.
inline SymMatrix pathological(std::size_t n, std::size_t r) {
  if (r > n) throw std::invalid_argument("pathological: r > n");
  std::vector<double> d(n, 0.0);
  for (std::size_t i = 0; i < r; ++i) d[i] = 1.0;
  return SymMatrix::diagonal(d);
}

struct TargetedBasis {
  Matrix q;            // n x m, column-orthonormal
  double mu_realized;  // sqrt(n) * max |q_ij| over the generated columns
};

// Orthonormal columns whose first vector hits a prescribed coherence:
// v1[0] = mu_target / sqrt(n), remaining entries equal and positive so that
// ||v1|| = 1; the rest of the basis completes [v1 | Gaussian block] by QR,
// preserving v1. The completion columns can push the realized coherence above
// the target when mu_target is near 1, so the realized value is returned.
inline TargetedBasis targeted_basis_cols(std::size_t n, std::size_t m, double mu_target,
                                         std::uint64_t seed) {
  const double sqrt_n = std::sqrt(static_cast<double>(n));
  if (mu_target < 1.0 - 1e-12 || mu_target > sqrt_n + 1e-12)
    throw std::invalid_argument("targeted_basis: mu_target must lie in [1, sqrt(n)]");
  if (m < 1 || m > n) throw std::invalid_argument("targeted_basis: bad column count");

  Matrix block(n, m);
  const double head = mu_target / sqrt_n;
  const double rest2 = std::max(0.0, 1.0 - head * head);
  const double b = (n > 1) ? std::sqrt(rest2 / static_cast<double>(n - 1)) : 0.0;
  block(0, 0) = head;
  for (std::size_t i = 1; i < n; ++i) block(i, 0) = b;

  Rng rng(seed);
  for (std::size_t j = 1; j < m; ++j)
    for (std::size_t i = 0; i < n; ++i) block(i, j) = rng.normal();

  Matrix q = qr_orthonormalize(block);
  const double mu = sqrt_n * max_abs(q);
  return TargetedBasis{std::move(q), mu};
}

inline TargetedBasis targeted_basis(std::size_t n, double mu_target, std::uint64_t seed) {
  return targeted_basis_cols(n, n, mu_target, seed);
}

// Eigenvalues prescribed by the recipe, descending.
inline std::vector<double> synth_spectrum(const SyntheticSpec& spec) {
  std::vector<double> sigma;
  if (spec.rank) {
    if (*spec.rank < 1 || *spec.rank > spec.n)
      throw std::invalid_argument("synth_spsd: rank out of range");
    sigma.resize(*spec.rank);
    for (std::size_t i = 0; i < sigma.size(); ++i)
      sigma[i] = std::exp(-static_cast<double>(i + 1) * spec.eta);
  } else {
    sigma.resize(spec.n);
    for (std::size_t i = 0; i < spec.n; ++i)
      sigma[i] = std::exp(-static_cast<double>(i + 1) * spec.eta);
  }
  return sigma;
}

struct SynthResult {
  SymMatrix g;
  Matrix basis;         // the eigenvectors actually used (n x #sigma)
  std::vector<double> spectrum;
  double mu_realized;   // coherence of the generated basis columns
};

// G = V Sigma V^T with V from targeted_basis. Only as many basis columns as
// nonzero spectrum entries are generated.
inline SynthResult synth_spsd_full(const SyntheticSpec& spec) {
  if (spec.eta < 0.0) throw std::invalid_argument("synth_spsd: eta must be >= 0");
  auto sigma = synth_spectrum(spec);
  TargetedBasis basis = targeted_basis_cols(spec.n, sigma.size(), spec.mu_target, spec.seed);

  Matrix scaled(spec.n, sigma.size());
  for (std::size_t j = 0; j < sigma.size(); ++j) {
    const double s = std::sqrt(sigma[j]);
    for (std::size_t i = 0; i < spec.n; ++i) scaled(i, j) = basis.q(i, j) * s;
  }
  SymMatrix g(multiply_aat(scaled));
  return SynthResult{std::move(g), std::move(basis.q), std::move(sigma), basis.mu_realized};
}

inline SymMatrix synth_spsd(const SyntheticSpec& spec) { return synth_spsd_full(spec).g; }

// Share of the total spectrum mass held by the top k values.
struct SpectrumReport {
  std::size_t k;
  double fraction;
};

inline SpectrumReport spectrum_fraction(const std::vector<double>& values, std::size_t k) {
  if (k < 1 || k > values.size())
    throw std::invalid_argument("spectrum_fraction: k out of range");
  double top = 0.0, total = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (values[i] < 0.0) throw std::invalid_argument("spectrum_fraction: negative value");
    if (i + 1 < values.size() && values[i] < values[i + 1] - 1e-15)
      throw std::invalid_argument("spectrum_fraction: values not descending");
    total += values[i];
    if (i < k) top += values[i];
  }
  if (total == 0.0) throw std::invalid_argument("spectrum_fraction: all-zero spectrum");
  return SpectrumReport{k, top / total};
}

// Fraction captured by the top k of sigma_i = exp(-i*eta): geometric closed
// form (1 - e^{-k eta}) / (1 - e^{-n eta}), with the eta -> 0 limit k/n.
inline double decay_fraction(std::size_t n, std::size_t k, double eta) {
  if (eta <= 0.0) return static_cast<double>(k) / static_cast<double>(n);
  const double num = -std::expm1(-static_cast<double>(k) * eta);
  const double den = -std::expm1(-static_cast<double>(n) * eta);
  return num / den;
}

// Invert decay_fraction in eta by bisection (interval width 1e-10; the
// returned eta reproduces the target within 1e-8). The fraction is strictly
// increasing in eta with range (k/n, 1), so targets outside that range raise.
inline double solve_eta_for_fraction(std::size_t n, std::size_t k, double target_fraction) {
  if (k < 1 || k > n) throw std::invalid_argument("solve_eta_for_fraction: k out of range");
  const double floor = static_cast<double>(k) / static_cast<double>(n);
  if (target_fraction <= floor || target_fraction >= 1.0)
    throw std::invalid_argument("solve_eta_for_fraction: target must lie in (k/n, 1)");
  double lo = 0.0, hi = 1.0;
  while (decay_fraction(n, k, hi) < target_fraction) {
    hi *= 2.0;
    if (hi > 1e6) break;  // fraction saturates at 1 long before this
  }
  for (int iter = 0; iter < 200 && hi - lo > 1e-10; ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (decay_fraction(n, k, mid) < target_fraction)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace nyco
