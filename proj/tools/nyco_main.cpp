// nyco command line: Nystrom approximation and coherence experiments.
//
// Subcommands mirror the experiment families: recon, coherence-growth,
// full-rank, recovery-prob, bound, plus gen/gram for producing matrices.
// All experiment output goes to CSV (or JSON lines) with a fixed schema;
// every row carries the seed that reproduces it.

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "nyco/nyco.hpp"

namespace {

struct CommonOpts {
  std::uint64_t seed = 0;
  std::size_t trials = 10;
  std::string out;
  std::string format = "csv";
  double tol = 1e-12;
  bool with_replacement = false;
  bool append = false;
};

void add_common(CLI::App* cmd, CommonOpts& o) {
  cmd->add_option("--seed", o.seed, "base seed (default 0)");
  cmd->add_option("--trials", o.trials, "trials per grid cell");
  cmd->add_option("--out", o.out, "output path (default stdout)");
  cmd->add_option("--format", o.format, "csv or jsonl")
      ->check(CLI::IsMember({"csv", "jsonl"}));
  cmd->add_option("--tol", o.tol, "relative rank cutoff (scaled by dimension)");
  cmd->add_flag("--with-replacement", o.with_replacement,
                "sample columns with replacement");
  cmd->add_flag("--append", o.append, "append to the output file");
}

struct SourceOpts {
  std::string data_csv;
  std::string matrix_csv;
  std::string kernel = "linear";
  double gamma = 0.0;  // 0 means median heuristic
  bool header = false;
  bool standardize = false;
  // synthetic
  std::size_t synth_n = 0;
  std::int64_t synth_rank = -1;  // -1 = full
  double eta = 0.0;
  double mu = 1.0;
  // pathological
  std::size_t path_n = 0, path_r = 0;
};

void add_source(CLI::App* cmd, SourceOpts& s) {
  cmd->add_option("--data", s.data_csv, "CSV of data points (rows = points)");
  cmd->add_option("--matrix", s.matrix_csv, "CSV of a raw square SPSD matrix");
  cmd->add_option("--kernel", s.kernel, "kernel for --data: linear or rbf")
      ->check(CLI::IsMember({"linear", "rbf"}));
  cmd->add_option("--gamma", s.gamma, "explicit RBF width (default: median heuristic)");
  cmd->add_flag("--header", s.header, "data CSV has a header line");
  cmd->add_flag("--standardize", s.standardize, "z-score features before the kernel");
  cmd->add_option("--synth-n", s.synth_n, "synthetic matrix dimension");
  cmd->add_option("--synth-rank", s.synth_rank, "synthetic exact rank (-1 = full rank)");
  cmd->add_option("--eta", s.eta, "eigenvalue decay rate");
  cmd->add_option("--mu", s.mu, "target coherence of the synthetic basis");
  cmd->add_option("--pathological-n", s.path_n, "pathological matrix dimension");
  cmd->add_option("--pathological-r", s.path_r, "pathological matrix rank");
}

nyco::MatrixSource make_source(const SourceOpts& s, std::uint64_t seed) {
  nyco::MatrixSource src;
  if (s.path_n > 0) {
    src.pathological_nr = {s.path_n, s.path_r};
  } else if (s.synth_n > 0) {
    nyco::SyntheticSpec spec;
    spec.n = s.synth_n;
    if (s.synth_rank >= 0) spec.rank = static_cast<std::size_t>(s.synth_rank);
    spec.eta = s.eta;
    spec.mu_target = s.mu;
    spec.seed = seed;
    src.synthetic = spec;
  } else if (!s.matrix_csv.empty()) {
    src.matrix_csv = s.matrix_csv;
  } else if (!s.data_csv.empty()) {
    src.data_csv = s.data_csv;
    src.csv_has_header = s.header;
    src.standardize_features = s.standardize;
    src.kernel.kind = s.kernel == "rbf" ? nyco::KernelKind::Rbf : nyco::KernelKind::Linear;
    if (s.gamma > 0.0) src.kernel.rbf_gamma = s.gamma;
  } else {
    throw CLI::ValidationError("source", "one of --data/--matrix/--synth-n/--pathological-n is required");
  }
  return src;
}

void emit(const std::vector<nyco::ExperimentRecord>& recs, const CommonOpts& o) {
  const auto format = o.format == "jsonl" ? nyco::OutputFormat::Jsonl : nyco::OutputFormat::Csv;
  if (o.out.empty()) {
    if (format == nyco::OutputFormat::Csv) std::cout << nyco::record_csv_header() << '\n';
    for (const auto& r : recs) {
      if (format == nyco::OutputFormat::Csv)
        std::cout << nyco::to_csv_row(r) << '\n';
      else
        std::cout << nyco::to_json(r).dump() << '\n';
    }
  } else {
    nyco::write_records(o.out, recs, format, o.append);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Nystrom low-rank approximation and matrix coherence toolkit"};
  app.require_subcommand(1);

  // recon
  auto* recon = app.add_subcommand("recon", "rank-r reconstruction error sweep over l");
  CommonOpts recon_common;
  SourceOpts recon_src;
  std::size_t recon_rank = 100;
  std::size_t l_min = 5, l_max = 200, l_step = 5;
  add_common(recon, recon_common);
  add_source(recon, recon_src);
  recon->add_option("--rank", recon_rank, "truncation rank r (default 100)");
  recon->add_option("--l-min", l_min, "smallest sample count");
  recon->add_option("--l-max", l_max, "largest sample count");
  recon->add_option("--l-step", l_step, "sample count step");

  // coherence-growth
  auto* growth = app.add_subcommand("coherence-growth", "coherence under subsampling");
  CommonOpts growth_common;
  SourceOpts growth_src;
  std::size_t growth_rank = 100;
  std::vector<std::size_t> growth_sizes;
  add_common(growth, growth_common);
  add_source(growth, growth_src);
  growth->add_option("--rank", growth_rank, "eigenvector count for coherence");
  growth->add_option("--sizes", growth_sizes, "submatrix sizes")->required();

  // full-rank
  auto* full = app.add_subcommand("full-rank", "decay x coherence x sampling grid");
  CommonOpts full_common;
  std::size_t full_n = 2000, full_k = 50, full_mats = 10, full_subsets = 5;
  std::vector<double> full_fracs = {0.5, 0.75, 0.9, 0.99};
  std::vector<double> full_mus;
  std::vector<double> full_pcts = {5, 10, 20};
  add_common(full, full_common);
  full->add_option("--n", full_n, "matrix dimension (default 2000)");
  full->add_option("--k", full_k, "truncation rank (default 50)");
  full->add_option("--fractions", full_fracs, "target spectrum fractions");
  full->add_option("--mus", full_mus, "target coherences (default 1, sqrt(n)/4, sqrt(n))");
  full->add_option("--percents", full_pcts, "percent of columns sampled");
  full->add_option("--matrices", full_mats, "matrices per (fraction, mu) cell");
  full->add_option("--subsets", full_subsets, "column subsets per matrix");

  // recovery-prob
  auto* recov = app.add_subcommand("recovery-prob", "Monte Carlo Pr[rank(W) = r]");
  CommonOpts recov_common;
  SourceOpts recov_src;
  std::size_t recov_l = 0;
  std::int64_t recov_rank = -1;
  add_common(recov, recov_common);
  add_source(recov, recov_src);
  recov->add_option("--l", recov_l, "columns per trial")->required();
  recov->add_option("--rank", recov_rank, "target rank (default: numerical rank)");

  // bound
  auto* bound = app.add_subcommand("bound", "sample-size bound calculator");
  std::size_t bound_r = 0;
  double bound_mu = 1.0, bound_delta = 0.05, bound_c1 = 1.0, bound_c2 = 1.0;
  std::size_t bound_n = 0;
  CommonOpts bound_common;
  bound->add_option("--r", bound_r, "matrix rank")->required();
  bound->add_option("--mu", bound_mu, "coherence of the top-r eigenvectors")->required();
  bound->add_option("--delta", bound_delta, "failure probability (default 0.05)");
  bound->add_option("--c1", bound_c1, "constant on the log(r) branch");
  bound->add_option("--c2", bound_c2, "constant on the log(3/delta) branch");
  bound->add_option("--n", bound_n, "matrix dimension, to flag vacuous bounds");
  bound->add_option("--out", bound_common.out, "output path (default stdout)");
  bound->add_option("--format", bound_common.format, "csv or jsonl")
      ->check(CLI::IsMember({"csv", "jsonl"}));
  bound->add_flag("--append", bound_common.append, "append to the output file");

  // gen
  auto* gen = app.add_subcommand("gen", "export a synthetic SPSD matrix as CSV");
  SourceOpts gen_src;
  std::uint64_t gen_seed = 0;
  std::string gen_out;
  add_source(gen, gen_src);
  gen->add_option("--seed", gen_seed, "generation seed");
  gen->add_option("--out", gen_out, "output CSV path")->required();

  // gram
  auto* gram_cmd = app.add_subcommand("gram", "build a kernel Gram matrix from CSV data");
  SourceOpts gram_src;
  std::string gram_out;
  add_source(gram_cmd, gram_src);
  gram_cmd->add_option("--out", gram_out, "output CSV path")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*recon) {
      nyco::ReconConfig cfg;
      cfg.source = make_source(recon_src, recon_common.seed);
      cfg.rank = recon_rank;
      cfg.l_grid = nyco::default_l_grid(l_min, l_max, l_step);
      cfg.trials = recon_common.trials;
      cfg.with_replacement = recon_common.with_replacement;
      cfg.base_seed = recon_common.seed;
      cfg.tol = nyco::RankTolerance{recon_common.tol, 0.0};
      emit(nyco::cmd_recon(cfg), recon_common);
    } else if (*growth) {
      nyco::CoherenceGrowthConfig cfg;
      cfg.source = make_source(growth_src, growth_common.seed);
      cfg.sizes = growth_sizes;
      cfg.rank = growth_rank;
      cfg.trials = growth_common.trials;
      cfg.base_seed = growth_common.seed;
      emit(nyco::cmd_coherence_growth(cfg), growth_common);
    } else if (*full) {
      nyco::FullRankConfig cfg;
      cfg.n = full_n;
      cfg.k = full_k;
      cfg.spectrum_fractions = full_fracs;
      cfg.mu_targets = full_mus;
      cfg.percent_sampled = full_pcts;
      cfg.matrices_per_cell = full_mats;
      cfg.subsets_per_matrix = full_subsets;
      cfg.with_replacement = full_common.with_replacement;
      cfg.base_seed = full_common.seed;
      emit(nyco::cmd_full_rank(cfg), full_common);
    } else if (*recov) {
      nyco::RecoveryConfig cfg;
      cfg.source = make_source(recov_src, recov_common.seed);
      if (recov_rank >= 0) cfg.rank = static_cast<std::size_t>(recov_rank);
      cfg.l = recov_l;
      cfg.trials = recov_common.trials;
      cfg.with_replacement = recov_common.with_replacement;
      cfg.base_seed = recov_common.seed;
      emit(nyco::cmd_recovery(cfg), recov_common);
    } else if (*bound) {
      nyco::SamplingBoundParams p{bound_r, bound_mu, bound_delta, bound_c1, bound_c2};
      std::optional<std::size_t> n;
      if (bound_n > 0) n = bound_n;
      auto rec = nyco::cmd_bound(p, n);
      if (rec.metric == "min_samples_vacuous")
        std::cerr << "warning: bound " << rec.value << " exceeds n = " << bound_n
                  << "; vacuous at this coherence\n";
      emit({rec}, bound_common);
    } else if (*gen) {
      auto src = make_source(gen_src, gen_seed);
      nyco::write_matrix_csv(gen_out, nyco::load_source(src));
    } else if (*gram_cmd) {
      gram_src.synth_n = 0;
      gram_src.path_n = 0;
      auto src = make_source(gram_src, 0);
      nyco::write_matrix_csv(gram_out, nyco::load_source(src));
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
