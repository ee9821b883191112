#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "nyco/matrix.hpp"
#include "nyco/rng.hpp"

namespace nyco {

// A table of data points: n rows of d features each.
struct DataTable {
  Matrix rows;  // n x d
  std::size_t n() const { return rows.rows(); }
  std::size_t d() const { return rows.cols(); }
};

enum class KernelKind { Linear, Rbf };

struct KernelSpec {
  KernelKind kind = KernelKind::Linear;
  // Explicit RBF width; empty means "use the median heuristic".
  std::optional<double> rbf_gamma;
};

class CsvParseError : public std::runtime_error {
 public:
  CsvParseError(std::size_t line, std::size_t column, const std::string& what)
      : std::runtime_error("CSV parse error at line " + std::to_string(line) +
                           ", column " + std::to_string(column) + ": " + what),
        line(line),
        column(column) {}
  std::size_t line, column;
};

namespace detail {

inline std::vector<double> parse_csv_line(const std::string& raw, std::size_t line_no) {
  std::string line = raw;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  std::vector<double> out;
  std::size_t start = 0, col = 1;
  while (true) {
    std::size_t comma = line.find(',', start);
    std::string cell = line.substr(start, comma == std::string::npos ? std::string::npos
                                                                     : comma - start);
    // trim surrounding spaces
    const auto b = cell.find_first_not_of(" \t");
    const auto e = cell.find_last_not_of(" \t");
    cell = (b == std::string::npos) ? std::string() : cell.substr(b, e - b + 1);
    if (cell.empty()) throw CsvParseError(line_no, col, "empty cell");
    std::size_t pos = 0;
    double v;
    try {
      v = std::stod(cell, &pos);
    } catch (const std::exception&) {
      throw CsvParseError(line_no, col, "non-numeric cell '" + cell + "'");
    }
    if (pos != cell.size())
      throw CsvParseError(line_no, col, "non-numeric cell '" + cell + "'");
    if (!std::isfinite(v)) throw CsvParseError(line_no, col, "non-finite value");
    out.push_back(v);
    if (comma == std::string::npos) break;
    start = comma + 1;
    ++col;
  }
  return out;
}

}  // namespace detail

// Comma-separated numeric file, '.' decimal point, optional single header
// line, '\n' or '\r\n' line endings. Ragged or non-numeric rows raise with
// (line, column) coordinates.
inline DataTable load_csv(const std::string& path, bool has_header = false) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open file: " + path);
  std::vector<std::vector<double>> parsed;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line_no == 1 && has_header) continue;
    if (line.empty() || line == "\r") continue;
    auto row = detail::parse_csv_line(line, line_no);
    if (!parsed.empty() && row.size() != parsed.front().size())
      throw CsvParseError(line_no, row.size(),
                          "ragged row: expected " + std::to_string(parsed.front().size()) +
                              " cells, got " + std::to_string(row.size()));
    parsed.push_back(std::move(row));
  }
  if (parsed.empty()) throw std::runtime_error("empty CSV file: " + path);
  DataTable t;
  t.rows = Matrix(parsed.size(), parsed.front().size());
  for (std::size_t i = 0; i < parsed.size(); ++i)
    for (std::size_t j = 0; j < parsed.front().size(); ++j) t.rows(i, j) = parsed[i][j];
  return t;
}

// Square numeric grid, no header; the interchange format for raw SPSD input.
inline SymMatrix load_matrix_csv(const std::string& path) {
  DataTable t = load_csv(path, false);
  if (t.n() != t.d())
    throw std::runtime_error("matrix CSV is not square: " + std::to_string(t.n()) + "x" +
                             std::to_string(t.d()));
  return SymMatrix(t.rows);
}

inline void write_matrix_csv(const std::string& path, const Matrix& m) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write file: " + path);
  out.precision(17);
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) {
      if (j) out << ',';
      out << m(i, j);
    }
    out << '\n';
  }
}

inline void write_matrix_csv(const std::string& path, const SymMatrix& m) {
  write_matrix_csv(path, m.mat());
}

// Optional z-scoring of features. Off by default; constant columns are left
// untouched.
inline DataTable standardize(const DataTable& t) {
  DataTable out = t;
  const std::size_t n = t.n(), d = t.d();
  for (std::size_t j = 0; j < d; ++j) {
    double mean = 0.0;
    for (std::size_t i = 0; i < n; ++i) mean += t.rows(i, j);
    mean /= static_cast<double>(n);
    double var = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double c = t.rows(i, j) - mean;
      var += c * c;
    }
    var /= static_cast<double>(n);
    const double sd = std::sqrt(var);
    if (sd == 0.0) continue;
    for (std::size_t i = 0; i < n; ++i) out.rows(i, j) = (t.rows(i, j) - mean) / sd;
  }
  return out;
}

// gamma = 1 / (2 m^2) with m the median pairwise Euclidean distance over a
// seeded sample of at most sample_cap points.
inline double median_heuristic_gamma(const DataTable& data, std::size_t sample_cap = 256,
                                     std::uint64_t seed = 0x6d656469616eULL) {
  const std::size_t n = data.n();
  if (n < 2) throw std::invalid_argument("median heuristic needs at least 2 points");
  std::vector<std::size_t> idx(n);
  for (std::size_t i = 0; i < n; ++i) idx[i] = i;
  const std::size_t m = std::min(n, sample_cap);
  if (m < n) {
    Rng rng(seed);
    for (std::size_t i = 0; i < m; ++i) {
      const std::size_t j = i + rng.index(n - i);
      std::swap(idx[i], idx[j]);
    }
  }
  std::vector<double> dists;
  dists.reserve(m * (m - 1) / 2);
  for (std::size_t a = 0; a < m; ++a) {
    for (std::size_t b = a + 1; b < m; ++b) {
      double s = 0.0;
      for (std::size_t f = 0; f < data.d(); ++f) {
        const double diff = data.rows(idx[a], f) - data.rows(idx[b], f);
        s += diff * diff;
      }
      dists.push_back(std::sqrt(s));
    }
  }
  std::sort(dists.begin(), dists.end());
  const std::size_t c = dists.size();
  const double median = (c % 2 == 1) ? dists[c / 2] : 0.5 * (dists[c / 2 - 1] + dists[c / 2]);
  if (median == 0.0)
    throw std::runtime_error("median heuristic: all sampled points are identical");
  return 1.0 / (2.0 * median * median);
}

// Gram matrix under the requested kernel.
//   linear: G_ij = <x_i, x_j>
//   rbf:    G_ij = exp(-gamma ||x_i - x_j||^2), squared distances computed as
//           ||x||^2 + ||y||^2 - 2<x,y> and clamped at 0.
// Only the upper triangle is evaluated and mirrored, so the result is exactly
// symmetric; the RBF diagonal is exactly 1.
inline SymMatrix gram(const DataTable& data, const KernelSpec& spec) {
  const std::size_t n = data.n(), d = data.d();
  Matrix g(n, n);
  if (spec.kind == KernelKind::Linear) {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i; j < n; ++j) {
        double s = 0.0;
        for (std::size_t f = 0; f < d; ++f) s += data.rows(i, f) * data.rows(j, f);
        if (!std::isfinite(s))
          throw std::runtime_error("kernel evaluation overflow at pair (" +
                                   std::to_string(i) + ", " + std::to_string(j) + ")");
        g(i, j) = s;
        g(j, i) = s;
      }
    }
  } else {
    const double gamma =
        spec.rbf_gamma ? *spec.rbf_gamma : median_heuristic_gamma(data);
    if (gamma <= 0.0) throw std::invalid_argument("rbf gamma must be positive");
    std::vector<double> sqnorm(n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t f = 0; f < d; ++f) sqnorm[i] += data.rows(i, f) * data.rows(i, f);
    for (std::size_t i = 0; i < n; ++i) {
      g(i, i) = 1.0;
      for (std::size_t j = i + 1; j < n; ++j) {
        double dot = 0.0;
        for (std::size_t f = 0; f < d; ++f) dot += data.rows(i, f) * data.rows(j, f);
        const double dist2 = std::max(0.0, sqnorm[i] + sqnorm[j] - 2.0 * dot);
        const double v = std::exp(-gamma * dist2);
        if (!std::isfinite(v))
          throw std::runtime_error("kernel evaluation overflow at pair (" +
                                   std::to_string(i) + ", " + std::to_string(j) + ")");
        g(i, j) = v;
        g(j, i) = v;
      }
    }
  }
  return SymMatrix(std::move(g));
}

}  // namespace nyco
