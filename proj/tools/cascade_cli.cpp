// Command-line front end: subcommands simulate | phi | spectrum | verify.
// The CLI stays single-threaded; ensemble work inside the library fans out
// over --threads (or CASCADE_THREADS) workers.

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cascade/analysis.hpp"
#include "cascade/config.hpp"
#include "cascade/convergence.hpp"
#include "cascade/numeric.hpp"
#include "cascade/report.hpp"
#include "cascade/rng.hpp"
#include "cascade/simulate.hpp"

namespace fs = std::filesystem;
using namespace cascade;

namespace {

struct CommonArgs {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  std::optional<int> threads;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
  cmd->add_option("--config", args.config_path, "run config JSON")
      ->required()
      ->check(CLI::ExistingFile);
  cmd->add_option("--seed", args.seed, "override the config seed");
  cmd->add_option("--out", args.out, "override the output directory");
  cmd->add_option("--threads", args.threads, "worker threads (0: CASCADE_THREADS env)");
}

// Overrides change the effective config, so the hash is recomputed.
RunConfig load_with_overrides(const CommonArgs& args) {
  RunConfig cfg = load_run_config(args.config_path);
  if (args.seed) cfg.seed = *args.seed;
  if (args.out) cfg.out_dir = *args.out;
  if (args.threads) cfg.threads = *args.threads;
  if (args.seed || args.out || args.threads) {
    cfg.canonical_text = effective_config_text(cfg);
    cfg.config_hash = hash_hex(fnv1a64(cfg.canonical_text));
  }
  return cfg;
}

fs::path ensure_out_dir(const RunConfig& cfg) {
  fs::path dir(cfg.out_dir);
  fs::create_directories(dir);
  return dir;
}

void write_manifest(const fs::path& dir, const RunConfig& cfg, const std::string& subcommand,
                    int threads, std::vector<std::string> outputs,
                    std::vector<std::string> notes) {
  RunManifest m;
  m.subcommand = subcommand;
  m.config_hash = cfg.config_hash;
  m.seed = cfg.seed;
  m.threads = threads;
  m.config_text = cfg.canonical_text;
  m.outputs = std::move(outputs);
  m.notes = std::move(notes);
  write_text_file(dir / "run_manifest.json", manifest_json(m));
}

int cmd_simulate(const RunConfig& cfg) {
  const int threads = resolve_threads(cfg.threads);
  const fs::path dir = ensure_out_dir(cfg);
  const PathSample path = build_paths(cfg.model, cfg.measure, cfg.seed, cfg.n_max,
                                      cfg.m_sub, cfg.n_min, cfg.config_hash);
  std::vector<std::string> outputs;
  for (int n : cfg.generations) {
    const std::string name = path_csv_name(n);
    write_text_file(dir / name, path_csv(path, n, cfg.config_hash));
    outputs.push_back(name);
  }
  write_manifest(dir, cfg, "simulate", threads, outputs, cfg.notes);
  std::cout << "simulate: wrote " << outputs.size() << " path file(s) to " << dir.string()
            << " (config " << cfg.config_hash << ", seed " << cfg.seed << ")\n";
  return 0;
}

int cmd_phi(const RunConfig& cfg) {
  const int threads = resolve_threads(cfg.threads);
  const fs::path dir = ensure_out_dir(cfg);

  PhiDoc doc;
  doc.config_hash = cfg.config_hash;
  doc.seed = cfg.seed;
  doc.notes = cfg.notes;

  for (double p : cfg.p_grid) {
    PhiGridEntry e;
    e.p = p;
    try {
      e.phi = phi_closed(cfg.model, cfg.measure, p);
    } catch (const std::domain_error&) {
      e.phi.value = -std::numeric_limits<double>::infinity();  // infinite moment
    }
    doc.closed.push_back(e);
  }

  for (double p : cfg.p_empirical) {
    PhiDoc::EmpiricalEntry e;
    e.p = p;
    e.replicas = cfg.replicas;
    e.fit = phi_empirical(cfg.model, cfg.measure, p, cfg.n_lo, cfg.n_max, cfg.replicas,
                          cfg.seed, cfg.m_sub, threads);
    doc.empirical.push_back(e);
  }

  VerdictOptions vo;
  vo.seed = cfg.seed;
  doc.report = convergence_verdict(cfg.model, cfg.measure, vo);

  write_text_file(dir / "phi_report.json", phi_report_json(doc));
  write_manifest(dir, cfg, "phi", threads, {"phi_report.json"}, cfg.notes);
  std::cout << "phi: verdict " << to_string(doc.report.verdict) << ", report in "
            << dir.string() << " (config " << cfg.config_hash << ", seed " << cfg.seed
            << ")\n";
  return 0;
}

int cmd_spectrum(const RunConfig& cfg) {
  const int threads = resolve_threads(cfg.threads);
  const fs::path dir = ensure_out_dir(cfg);

  const PathSample path = build_paths(cfg.model, cfg.measure, cfg.seed, cfg.n_max,
                                      cfg.m_sub, cfg.n_min, cfg.config_hash);
  const SampledPath sp = path_generation(path, cfg.n_max);

  SpectrumOptions so;
  so.eps_schedule = cfg.eps_schedule;
  so.h_min = cfg.h_grid.min;
  so.h_max = cfg.h_grid.max;
  so.h_step = cfg.h_grid.step;

  SpectrumDoc doc;
  doc.config_hash = cfg.config_hash;
  doc.seed = cfg.seed;
  doc.notes = cfg.notes;
  doc.spectrum = large_deviation_spectrum(sp, cfg.n_lo, cfg.n_max, so);
  try {
    doc.structure = structure_exponents(sp, cfg.q_list, cfg.n_lo, cfg.n_max);
  } catch (const std::domain_error& e) {
    doc.notes.push_back(std::string("structure exponents unavailable: ") + e.what());
  }

  std::vector<std::string> outputs;
  for (const auto& hist : doc.spectrum.histograms) {
    const std::string name = histogram_csv_name(hist.n);
    write_text_file(dir / name, histogram_csv(hist, cfg.config_hash, cfg.seed));
    doc.histogram_files.push_back(name);
    outputs.push_back(name);
  }
  write_text_file(dir / "spectrum_report.json", spectrum_report_json(doc));
  outputs.push_back("spectrum_report.json");
  write_manifest(dir, cfg, "spectrum", threads, outputs, doc.notes);
  std::cout << "spectrum: generations " << cfg.n_lo << ".." << cfg.n_max << ", report in "
            << dir.string() << " (config " << cfg.config_hash << ", seed " << cfg.seed
            << ")\n";
  return 0;
}

// smallest n with enough level-n cells to place decorrelated probes
int decorrelation_level(const RunConfig& cfg) {
  const int b = base_of(cfg.model);
  const int sep = decorrelation_separation(cfg.model);
  int n = 1;
  std::int64_t cells = b;
  while (cells < sep + 3 && n < cfg.n_max) {
    ++n;
    cells *= b;
  }
  if (cells < sep + 3) {
    throw std::invalid_argument(
        "n_max too small for the decorrelation check: need base^n >= " +
        std::to_string(sep + 3));
  }
  return std::min(std::max(n, std::min(3, cfg.n_max)), cfg.n_max);
}

int cmd_verify(const RunConfig& cfg) {
  const int threads = resolve_threads(cfg.threads);
  const fs::path dir = ensure_out_dir(cfg);

  VerifyDoc doc;
  doc.config_hash = cfg.config_hash;
  doc.seed = cfg.seed;
  doc.notes = cfg.notes;

  // heavy-tailed weight laws starve deep-generation ensembles of tail
  // events; probe the martingale and moment statistics where they resolve
  const int n_cap = martingale_informative_level(cfg.model, cfg.replicas, cfg.n_max);
  if (n_cap < cfg.n_max) {
    doc.notes.push_back("second-moment growth caps informative checks at generation " +
                        std::to_string(n_cap));
  }

  doc.martingale =
      martingale_check(cfg.model, cfg.t_list, n_cap, cfg.replicas, cfg.seed, threads);
  doc.decorrelation = decorrelation_check(cfg.model, decorrelation_level(cfg),
                                          cfg.replicas, cfg.seed, threads);
  doc.self_sim_applicable = statistically_self_similar(cfg.model);
  if (doc.self_sim_applicable) {
    doc.self_similarity = self_similarity_check(cfg.model, std::min({4, cfg.n_max, n_cap}),
                                                cfg.replicas, cfg.seed, threads);
  }

  // shared replica ensemble for the ratio and trend checks
  const int n_lo = std::max(2, std::min(cfg.n_lo, cfg.n_max));
  const int n_hi = cfg.n_max;
  const int n_hi_capped = std::max(n_lo, std::min(n_hi, n_cap));
  const int window = n_hi - n_lo + 1;
  std::vector<std::vector<double>> cauchy_rows(static_cast<std::size_t>(cfg.replicas));
  std::vector<std::vector<double>> sup_rows(static_cast<std::size_t>(cfg.replicas));
  parallel_for(static_cast<std::size_t>(cfg.replicas), threads, [&](std::size_t r) {
    const std::uint64_t s = derive_seed(cfg.seed, r, 7);
    const PathSample path =
        build_paths(cfg.model, cfg.measure, s, n_hi, 1, std::max(1, n_lo - 1));
    auto& cr = cauchy_rows[r];
    auto& sr = sup_rows[r];
    cr.resize(static_cast<std::size_t>(window));
    sr.resize(static_cast<std::size_t>(window));
    const auto sups = sup_norm_trajectory(path);
    for (int n = n_lo; n <= n_hi; ++n) {
      cr[static_cast<std::size_t>(n - n_lo)] = cauchy_increment(path, n);
      sr[static_cast<std::size_t>(n - n_lo)] =
          sups[static_cast<std::size_t>(n - path.n_min)];
    }
  });

  doc.ratio.p = cfg.p;
  doc.ratio.n_lo = n_lo;
  doc.ratio.n_hi = n_hi_capped;
  std::vector<double> scratch(static_cast<std::size_t>(cfg.replicas));
  for (int n = n_lo; n <= n_hi_capped; ++n) {
    for (std::size_t r = 0; r < scratch.size(); ++r) {
      scratch[r] = std::pow(cauchy_rows[r][static_cast<std::size_t>(n - n_lo)], cfg.p);
    }
    const MeanSe num = mean_se(scratch);
    double den, den_se = 0.0;
    if (const auto* b = std::get_if<BadicIndependentModel>(&cfg.model)) {
      den = level_moment_sum_closed(*b, cfg.measure, n, cfg.p);
    } else {
      const McEstimate mc = level_moment_sum_mc(cfg.model, cfg.measure, n, cfg.p,
                                                cfg.replicas, cfg.seed,
                                                std::max(2, cfg.m_sub), threads);
      den = mc.value;
      den_se = mc.std_error;
    }
    const double ratio = num.mean / den;
    doc.ratio.ratios.push_back(ratio);
    doc.ratio.ratio_ses.push_back(
        std::abs(ratio) * std::sqrt(std::pow(num.std_error / std::max(num.mean, 1e-300), 2) +
                                    std::pow(den_se / den, 2)));
  }
  {
    double rmin = doc.ratio.ratios.front(), rmax = rmin;
    for (double x : doc.ratio.ratios) {
      rmin = std::min(rmin, x);
      rmax = std::max(rmax, x);
    }
    if (rmax == 0.0) {
      doc.ratio.max_over_min = 0.0;  // increments vanish identically
      doc.ratio.ok = true;
    } else {
      doc.ratio.max_over_min = rmax / rmin;
      doc.ratio.ok = rmin > 0.0 && rmax / rmin <= 10.0;
    }
  }

  doc.trend.n_lo = n_lo;
  doc.trend.n_hi = n_hi;
  for (int n = n_lo; n <= n_hi; ++n) {
    for (std::size_t r = 0; r < scratch.size(); ++r) {
      scratch[r] = std::sqrt(cauchy_rows[r][static_cast<std::size_t>(n - n_lo)]);
    }
    doc.trend.mean_sqrt_cauchy.push_back(mean_se(scratch).mean);
    for (std::size_t r = 0; r < scratch.size(); ++r) {
      scratch[r] = std::sqrt(sup_rows[r][static_cast<std::size_t>(n - n_lo)]);
    }
    doc.trend.mean_sqrt_sup.push_back(mean_se(scratch).mean);
  }
  {
    VerdictOptions vo;
    vo.seed = cfg.seed;
    const ConvergenceReport rep = convergence_verdict(cfg.model, cfg.measure, vo);
    doc.trend.verdict = to_string(rep.verdict);
    const double ln_b = std::log(static_cast<double>(base_of(cfg.model)));
    const auto fit_log = [&](const std::vector<double>& series, int hi) {
      std::vector<double> xs, ys;
      for (int n = n_lo; n <= hi; ++n) {
        const double v = series[static_cast<std::size_t>(n - n_lo)];
        if (v > 0.0) {
          xs.push_back(n);
          ys.push_back(std::log(v) / ln_b);
        }
      }
      return xs.size() >= 2 ? std::optional<LineFit>(least_squares(xs, ys)) : std::nullopt;
    };
    if (rep.verdict == Verdict::kConvergesUniformly) {
      // Cauchy increments may decay arbitrarily slowly when phi barely
      // clears zero, so only significant growth is a failure.
      doc.trend.checked = true;
      bool all_zero = true;
      for (double v : doc.trend.mean_sqrt_cauchy) all_zero = all_zero && v == 0.0;
      if (all_zero) {
        doc.trend.ok = true;  // exact limit already reached
      } else if (const auto fit = fit_log(doc.trend.mean_sqrt_cauchy, n_hi_capped)) {
        doc.trend.slope = fit->slope;
        doc.trend.slope_se = fit->slope_se;
        doc.trend.ok = fit->slope - 2.0 * fit->slope_se <= 0.0;
      } else {
        doc.trend.ok = true;
        doc.notes.push_back("trend window too short for a slope fit");
      }
    } else if (rep.verdict == Verdict::kDegeneratesToZero) {
      // degeneracy predicts decay at a concrete positive rate; demand it
      doc.trend.checked = true;
      if (const auto fit = fit_log(doc.trend.mean_sqrt_sup, n_hi)) {
        doc.trend.slope = fit->slope;
        doc.trend.slope_se = fit->slope_se;
        doc.trend.ok = fit->slope + 2.0 * fit->slope_se < 0.0;
      }
    }
  }

  doc.all_pass = doc.martingale.all_ok && doc.decorrelation.ok &&
                 (!doc.self_sim_applicable || doc.self_similarity.ok) && doc.ratio.ok &&
                 (!doc.trend.checked || doc.trend.ok);

  write_text_file(dir / "verify_report.json", verify_report_json(doc));
  write_manifest(dir, cfg, "verify", threads, {"verify_report.json"}, doc.notes);
  std::cout << "verify: " << (doc.all_pass ? "all checks passed" : "CHECKS FAILED")
            << ", report in " << dir.string() << " (config " << cfg.config_hash
            << ", seed " << cfg.seed << ")\n";
  return doc.all_pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"complex multiplicative cascades on [0,1]"};
  app.require_subcommand(1);

  CommonArgs args;
  CLI::App* sim = app.add_subcommand("simulate", "sample F_n and write path CSVs");
  CLI::App* phi = app.add_subcommand("phi", "moment-sum exponent grid and verdict");
  CLI::App* spec = app.add_subcommand("spectrum", "large-deviation spectrum of one path");
  CLI::App* verify = app.add_subcommand("verify", "statistical property checks");
  for (CLI::App* cmd : {sim, phi, spec, verify}) add_common(cmd, args);

  CLI11_PARSE(app, argc, argv);

  try {
    const RunConfig cfg = load_with_overrides(args);
    if (sim->parsed()) return cmd_simulate(cfg);
    if (phi->parsed()) return cmd_phi(cfg);
    if (spec->parsed()) return cmd_spectrum(cfg);
    return cmd_verify(cfg);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
