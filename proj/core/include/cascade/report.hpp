#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "cascade/analysis.hpp"
#include "cascade/convergence.hpp"
#include "cascade/simulate.hpp"

namespace cascade {

inline constexpr const char* kToolName = "cascade";
inline constexpr const char* kToolVersion = "0.1.0";

// Everything here is deterministic text: no timestamps, no hostnames, no
// environment state beyond what the manifest lists, so (config, seed) reruns
// are byte-identical.

struct RunManifest {
  std::string subcommand;
  std::string config_hash;
  std::uint64_t seed = 0;
  int threads = 1;
  std::string config_text;  // canonical effective config, embedded verbatim
  std::vector<std::string> outputs;
  std::vector<std::string> notes;
};

std::string manifest_json(const RunManifest& m);

struct PhiDoc {
  std::string config_hash;
  std::uint64_t seed = 0;

  std::vector<PhiGridEntry> closed;  // phi on the configured p grid

  struct EmpiricalEntry {
    double p = 0.0;
    int replicas = 0;
    SlopeFit fit;
  };
  std::vector<EmpiricalEntry> empirical;

  ConvergenceReport report;  // verdict, p_star, gamma_star, beta, distortion
  std::vector<std::string> notes;
};

std::string phi_report_json(const PhiDoc& doc);

struct SpectrumDoc {
  std::string config_hash;
  std::uint64_t seed = 0;
  SpectrumReport spectrum;
  std::vector<StructureExponent> structure;
  std::vector<std::string> histogram_files;
  std::vector<std::string> notes;
};

std::string spectrum_report_json(const SpectrumDoc& doc);

struct VerifyDoc {
  std::string config_hash;
  std::uint64_t seed = 0;

  MartingaleReport martingale;
  DecorrelationReport decorrelation;

  bool self_sim_applicable = true;
  SelfSimilarityReport self_similarity;  // meaningful only when applicable

  // E(max_{T_n} |F_n - F_{n-1}|^p) / S(n, p) across a window of n; bounded
  // ratios are the statistical signature of the moment inequality.
  struct RatioCheck {
    double p = 2.0;
    int n_lo = 2, n_hi = 2;
    std::vector<double> ratios;
    std::vector<double> ratio_ses;
    double max_over_min = 0.0;
    bool ok = false;
  } ratio;

  // Trend of the ensemble sup norm against the closed-form verdict, measured
  // through square roots (the raw sup norm of a degenerate nonnegative
  // cascade never decays in mean; fractional moments do). Degeneracy demands
  // significant decay of E sup^{1/2}; uniform convergence forbids significant
  // growth of the Cauchy increments, whose decay rate can sit below any
  // fixed detection threshold.
  struct TrendCheck {
    std::string verdict;
    int n_lo = 2, n_hi = 2;
    std::vector<double> mean_sqrt_sup;
    std::vector<double> mean_sqrt_cauchy;
    double slope = 0.0;  // fitted log_b slope of the tested series
    double slope_se = 0.0;
    bool checked = false;  // false: verdict inconclusive, check skipped
    bool ok = false;
  } trend;

  bool all_pass = false;
  std::vector<std::string> notes;
};

std::string verify_report_json(const VerifyDoc& doc);

// CSV emission. Shortest round-trip decimals; a single comment line with the
// config hash and seed precedes the header.
std::string format_double(double v);
std::string path_csv(const PathSample& path, int n, const std::string& config_hash);
std::string histogram_csv(const GenerationHistogram& hist, const std::string& config_hash,
                          std::uint64_t seed);

// "path_gen07.csv" / "hist_gen12.csv"
std::string path_csv_name(int n);
std::string histogram_csv_name(int n);

void write_text_file(const std::filesystem::path& file, const std::string& content);

}  // namespace cascade
