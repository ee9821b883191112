#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "nyco/coherence.hpp"
#include "nyco/eig.hpp"
#include "nyco/kernel.hpp"
#include "nyco/matrix.hpp"
#include "nyco/nystrom.hpp"
#include "nyco/rng.hpp"
#include "nyco/synth.hpp"

namespace nyco {

// One output row. Fixed schema:
//   experiment,metric,value,n,r,k,l,eta,mu_target,mu_realized,kernel,seed,trial
// Inapplicable fields stay empty in the CSV. Every record carries the seed
// that reproduces it.
struct ExperimentRecord {
  std::string experiment;
  std::string metric;
  double value = 0.0;
  std::optional<std::size_t> n, r, k, l;
  std::optional<double> eta, mu_target, mu_realized;
  std::string kernel;  // empty when inapplicable
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> trial;
};

inline const char* record_csv_header() {
  return "experiment,metric,value,n,r,k,l,eta,mu_target,mu_realized,kernel,seed,trial";
}

namespace detail {

inline std::string fmt(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

template <typename T>
std::string opt_str(const std::optional<T>& o) {
  if (!o) return {};
  if constexpr (std::is_floating_point_v<T>)
    return fmt(*o);
  else
    return std::to_string(*o);
}

}  // namespace detail

inline std::string to_csv_row(const ExperimentRecord& r) {
  std::ostringstream os;
  os << r.experiment << ',' << r.metric << ',' << detail::fmt(r.value) << ','
     << detail::opt_str(r.n) << ',' << detail::opt_str(r.r) << ',' << detail::opt_str(r.k)
     << ',' << detail::opt_str(r.l) << ',' << detail::opt_str(r.eta) << ','
     << detail::opt_str(r.mu_target) << ',' << detail::opt_str(r.mu_realized) << ','
     << r.kernel << ',' << detail::opt_str(r.seed) << ',' << detail::opt_str(r.trial);
  return os.str();
}

inline nlohmann::json to_json(const ExperimentRecord& r) {
  nlohmann::json j;
  j["experiment"] = r.experiment;
  j["metric"] = r.metric;
  j["value"] = r.value;
  auto put = [&](const char* key, const auto& opt) {
    if (opt) j[key] = *opt;
  };
  put("n", r.n);
  put("r", r.r);
  put("k", r.k);
  put("l", r.l);
  put("eta", r.eta);
  put("mu_target", r.mu_target);
  put("mu_realized", r.mu_realized);
  if (!r.kernel.empty()) j["kernel"] = r.kernel;
  put("seed", r.seed);
  put("trial", r.trial);
  return j;
}

enum class OutputFormat { Csv, Jsonl };

// Schema-stable writer: CSV gets the fixed header only when starting a new
// file, so appended runs concatenate cleanly.
inline void write_records(const std::string& path, const std::vector<ExperimentRecord>& recs,
                          OutputFormat format, bool append = false) {
  const bool need_header = [&] {
    if (format != OutputFormat::Csv) return false;
    if (!append) return true;
    std::ifstream probe(path);
    return !probe.good() || probe.peek() == std::ifstream::traits_type::eof();
  }();
  std::ofstream out(path, append ? std::ios::app : std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write file: " + path);
  if (need_header) out << record_csv_header() << '\n';
  for (const auto& r : recs) {
    if (format == OutputFormat::Csv)
      out << to_csv_row(r) << '\n';
    else
      out << to_json(r).dump() << '\n';
  }
}

// Cell seed = hash64 chain over (base seed, experiment name, sorted params,
// trial index). Third parties can reproduce any single cell from its record.
inline std::uint64_t cell_seed(std::uint64_t base, const std::string& experiment,
                               const std::map<std::string, double>& params,
                               std::size_t trial) {
  std::uint64_t h = hash64(base, experiment);
  for (const auto& [key, val] : params) {  // std::map iterates in sorted key order
    h = hash64(h, key);
    h = hash64(h, detail::fmt(val));
  }
  return hash64(h, trial);
}

// ----- matrix sources ------------------------------------------------------

// Where an experiment gets its SPSD matrix from. Exactly one of these is set.
struct MatrixSource {
  std::optional<SyntheticSpec> synthetic;
  std::optional<std::pair<std::size_t, std::size_t>> pathological_nr;  // (n, r)
  std::string data_csv;     // point data; gram applied with `kernel`
  std::string matrix_csv;   // raw square SPSD grid
  KernelSpec kernel;
  bool csv_has_header = false;
  bool standardize_features = false;

  bool is_pathological() const { return pathological_nr.has_value(); }
};

inline SymMatrix load_source(const MatrixSource& src) {
  if (src.synthetic) return synth_spsd(*src.synthetic);
  if (src.pathological_nr)
    return pathological(src.pathological_nr->first, src.pathological_nr->second);
  if (!src.matrix_csv.empty()) return load_matrix_csv(src.matrix_csv);
  if (!src.data_csv.empty()) {
    DataTable t = load_csv(src.data_csv, src.csv_has_header);
    if (src.standardize_features) t = standardize(t);
    return gram(t, src.kernel);
  }
  throw std::invalid_argument("no matrix source configured");
}

inline std::string kernel_label(const MatrixSource& src) {
  if (!src.data_csv.empty()) return src.kernel.kind == KernelKind::Rbf ? "rbf" : "linear";
  return {};
}

// ----- recon: rank-r truncation + Nystrom sweep over l ---------------------

struct ReconConfig {
  MatrixSource source;
  std::size_t rank = 100;          // truncation rank r
  std::vector<std::size_t> l_grid; // default 5..200 step 5
  std::size_t trials = 10;
  bool with_replacement = false;
  std::uint64_t base_seed = 0;
  RankTolerance tol = RankTolerance{1e-12, 0.0};  // scaled per matrix below
};

inline std::vector<std::size_t> default_l_grid(std::size_t lo = 5, std::size_t hi = 200,
                                               std::size_t step = 5) {
  std::vector<std::size_t> g;
  for (std::size_t l = lo; l <= hi; l += step) g.push_back(l);
  return g;
}

// Truncate G to its best rank-r approximation via the top eigenpairs
// (the preprocessing step for the low-rank reconstruction experiment).
inline SymMatrix truncate_to_rank(const SymMatrix& g, std::size_t r) {
  EigenDecomp e = eig_sym(g);
  clamp_spsd(e);
  return truncate_rank(e, std::min(r, g.size()));
}

inline std::vector<ExperimentRecord> cmd_recon(const ReconConfig& cfg) {
  SymMatrix g0 = load_source(cfg.source);
  const std::size_t n = g0.size();
  auto l_grid = cfg.l_grid.empty() ? default_l_grid() : cfg.l_grid;
  for (std::size_t l : l_grid)
    if (!cfg.with_replacement && l > n)
      throw std::invalid_argument("recon: l = " + std::to_string(l) +
                                  " exceeds matrix size " + std::to_string(n));

  // Synthetic exact-rank sources are already rank r; everything else is
  // truncated to the experiment rank first.
  const bool already_low_rank =
      (cfg.source.synthetic && cfg.source.synthetic->rank &&
       *cfg.source.synthetic->rank == cfg.rank) ||
      (cfg.source.pathological_nr && cfg.source.pathological_nr->second == cfg.rank);
  SymMatrix g = already_low_rank ? std::move(g0) : truncate_to_rank(g0, cfg.rank);

  const std::string kern = kernel_label(cfg.source);
  std::vector<ExperimentRecord> out;
  for (std::size_t l : l_grid) {
    const std::size_t k = l;  // k = l in this experiment
    double sum = 0.0;
    for (std::size_t t = 0; t < cfg.trials; ++t) {
      const std::uint64_t seed =
          cell_seed(cfg.base_seed, "recon", {{"l", double(l)}, {"n", double(n)}}, t);
      SampleScheme scheme{l, cfg.with_replacement, seed};
      RankTolerance tol{cfg.tol.relative_cutoff * double(l), cfg.tol.absolute_floor};
      NystromModel model = fit(g, scheme, k, tol);
      const double err = percent_error(g, model);
      sum += err;
      ExperimentRecord rec;
      rec.experiment = "recon";
      rec.metric = "percent_error";
      rec.value = err;
      rec.n = n;
      rec.r = cfg.rank;
      rec.k = k;
      rec.l = l;
      rec.kernel = kern;
      rec.seed = seed;
      rec.trial = t;
      out.push_back(rec);
    }
    ExperimentRecord mean;
    mean.experiment = "recon";
    mean.metric = "mean_percent_error";
    mean.value = sum / double(cfg.trials);
    mean.n = n;
    mean.r = cfg.rank;
    mean.k = l;
    mean.l = l;
    mean.kernel = kern;
    mean.seed = cfg.base_seed;
    out.push_back(mean);
  }
  return out;
}

// ----- coherence growth -----------------------------------------------------

struct CoherenceGrowthConfig {
  MatrixSource source;
  std::vector<std::size_t> sizes;
  std::size_t rank = 100;
  std::size_t trials = 10;
  std::uint64_t base_seed = 0;
};

inline std::vector<ExperimentRecord> cmd_coherence_growth(const CoherenceGrowthConfig& cfg) {
  SymMatrix g = load_source(cfg.source);
  auto points = coherence_growth(g, cfg.sizes, cfg.rank, cfg.trials, cfg.base_seed);
  const std::string kern = kernel_label(cfg.source);
  std::vector<ExperimentRecord> out;
  for (const auto& pt : points) {
    if (pt.trials == 0) continue;  // skipped size
    for (std::size_t t = 0; t < pt.per_trial.size(); ++t) {
      ExperimentRecord rec;
      rec.experiment = "coherence_growth";
      rec.metric = "coherence";
      rec.value = pt.per_trial[t];
      rec.n = pt.size;
      rec.r = pt.rank_used;
      rec.kernel = kern;
      rec.seed = cfg.base_seed;
      rec.trial = t;
      out.push_back(rec);
    }
    ExperimentRecord mean;
    mean.experiment = "coherence_growth";
    mean.metric = "mean_coherence";
    mean.value = pt.mean_mu;
    mean.n = pt.size;
    mean.r = pt.rank_used;
    mean.kernel = kern;
    mean.seed = cfg.base_seed;
    out.push_back(mean);
  }
  return out;
}

// ----- full-rank grid --------------------------------------------------------

struct FullRankConfig {
  std::size_t n = 2000;
  std::size_t k = 50;
  std::vector<double> spectrum_fractions = {0.5, 0.75, 0.9, 0.99};
  std::vector<double> mu_targets;     // default: {1, sqrt(n)/4, sqrt(n)}
  std::vector<double> percent_sampled = {5, 10, 20};
  std::size_t matrices_per_cell = 10;
  std::size_t subsets_per_matrix = 5;
  bool with_replacement = false;
  std::uint64_t base_seed = 0;
};

struct FullRankCell {
  double fraction_target;
  double eta;
  double mu_target;
  double mean_mu_realized;
  double percent_sampled;
  std::size_t l;
  double mean_error;
};

struct FullRankResult {
  std::vector<ExperimentRecord> records;
  std::vector<FullRankCell> cells;  // aggregated means, canonical order
};

inline FullRankResult run_full_rank(const FullRankConfig& cfg) {
  const std::size_t n = cfg.n;
  std::vector<double> mus = cfg.mu_targets;
  if (mus.empty())
    mus = {1.0, std::sqrt(double(n)) / 4.0, std::sqrt(double(n))};

  FullRankResult result;
  for (double frac : cfg.spectrum_fractions) {
    const double eta = solve_eta_for_fraction(n, cfg.k, frac);
    for (double mu : mus) {
      // error sums per sampling percentage, accumulated across matrices
      std::vector<double> err_sum(cfg.percent_sampled.size(), 0.0);
      double mu_realized_sum = 0.0;
      for (std::size_t m = 0; m < cfg.matrices_per_cell; ++m) {
        const std::uint64_t mat_seed = cell_seed(
            cfg.base_seed, "full_rank",
            {{"frac", frac}, {"mu", mu}, {"n", double(n)}, {"role", 0.0}}, m);
        SyntheticSpec spec{n, std::nullopt, eta, mu, mat_seed};
        SynthResult synth = synth_spsd_full(spec);
        // coherence level of this matrix: top-k eigenvector block
        Matrix top(n, cfg.k);
        for (std::size_t i = 0; i < n; ++i)
          for (std::size_t j = 0; j < cfg.k; ++j) top(i, j) = synth.basis(i, j);
        const double mu_real = coherence_of(top).mu;
        mu_realized_sum += mu_real;

        for (std::size_t pi = 0; pi < cfg.percent_sampled.size(); ++pi) {
          const double pct = cfg.percent_sampled[pi];
          const std::size_t l = std::max<std::size_t>(
              cfg.k, static_cast<std::size_t>(std::llround(pct * double(n) / 100.0)));
          for (std::size_t s = 0; s < cfg.subsets_per_matrix; ++s) {
            const std::uint64_t sub_seed = cell_seed(
                cfg.base_seed, "full_rank",
                {{"frac", frac}, {"mu", mu}, {"n", double(n)}, {"pct", pct},
                 {"mat", double(m)}},
                s);
            SampleScheme scheme{l, cfg.with_replacement, sub_seed};
            NystromModel model =
                fit(synth.g, scheme, std::min(cfg.k, l), RankTolerance::for_size(l));
            const double err = percent_error(synth.g, model);
            err_sum[pi] += err;
            ExperimentRecord rec;
            rec.experiment = "full_rank";
            rec.metric = "percent_error";
            rec.value = err;
            rec.n = n;
            rec.k = cfg.k;
            rec.l = l;
            rec.eta = eta;
            rec.mu_target = mu;
            rec.mu_realized = mu_real;
            rec.seed = sub_seed;
            rec.trial = m * cfg.subsets_per_matrix + s;
            result.records.push_back(rec);
          }
        }
      }
      const double mean_mu = mu_realized_sum / double(cfg.matrices_per_cell);
      for (std::size_t pi = 0; pi < cfg.percent_sampled.size(); ++pi) {
        const double pct = cfg.percent_sampled[pi];
        const std::size_t l = std::max<std::size_t>(
            cfg.k, static_cast<std::size_t>(std::llround(pct * double(n) / 100.0)));
        const double mean_err =
            err_sum[pi] / double(cfg.matrices_per_cell * cfg.subsets_per_matrix);
        ExperimentRecord rec;
        rec.experiment = "full_rank";
        rec.metric = "mean_percent_error";
        rec.value = mean_err;
        rec.n = n;
        rec.k = cfg.k;
        rec.l = l;
        rec.eta = eta;
        rec.mu_target = mu;
        rec.mu_realized = mean_mu;
        rec.seed = cfg.base_seed;
        result.records.push_back(rec);
        result.cells.push_back(
            FullRankCell{frac, eta, mu, mean_mu, pct, l, mean_err});
      }
    }
  }
  return result;
}

inline std::vector<ExperimentRecord> cmd_full_rank(const FullRankConfig& cfg) {
  return run_full_rank(cfg).records;
}

// ----- recovery probability + bound -----------------------------------------

struct RecoveryConfig {
  MatrixSource source;
  std::optional<std::size_t> rank;  // default: numerical rank of the source
  std::size_t l;
  std::size_t trials = 500;
  bool with_replacement = false;
  std::uint64_t base_seed = 0;
};

inline std::vector<ExperimentRecord> cmd_recovery(const RecoveryConfig& cfg) {
  SymMatrix g = load_source(cfg.source);
  const std::size_t n = g.size();
  const RankTolerance tol = RankTolerance::for_size(n);
  const std::size_t r = cfg.rank ? *cfg.rank : rank_numeric(g, tol);
  const std::uint64_t seed = cell_seed(cfg.base_seed, "recovery_prob",
                                       {{"l", double(cfg.l)}, {"n", double(n)}}, 0);
  const double est = estimate_recovery_prob(g, r, cfg.l, cfg.with_replacement, cfg.trials,
                                            seed, RankTolerance::for_size(cfg.l));
  std::vector<ExperimentRecord> out;
  ExperimentRecord rec;
  rec.experiment = "recovery_prob";
  rec.metric = "estimate";
  rec.value = est;
  rec.n = n;
  rec.r = r;
  rec.l = cfg.l;
  rec.kernel = kernel_label(cfg.source);
  rec.seed = seed;
  out.push_back(rec);
  if (cfg.source.is_pathological() && !cfg.with_replacement) {
    ExperimentRecord exact = rec;
    exact.metric = "hypergeometric_exact";
    exact.value = hypergeometric_all_captured(n, cfg.source.pathological_nr->second, cfg.l);
    out.push_back(exact);
  }
  return out;
}

inline ExperimentRecord cmd_bound(const SamplingBoundParams& p,
                                  std::optional<std::size_t> n = std::nullopt) {
  const std::size_t l = min_samples(p);
  ExperimentRecord rec;
  rec.experiment = "bound";
  rec.metric = (n && l > *n) ? "min_samples_vacuous" : "min_samples";
  rec.value = static_cast<double>(l);
  rec.r = p.r;
  rec.n = n;
  rec.mu_target = p.mu;
  return rec;
}

}  // namespace nyco
