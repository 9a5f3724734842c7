#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "cascade/measure.hpp"
#include "cascade/models.hpp"

namespace cascade {

struct HGrid {
  double min = 0.0;
  double max = 2.0;
  double step = 0.05;
};

// One run, fully specified. Every field has a default except the model, so a
// minimal config is {"model": {...}}. Parsing is strict: unknown keys are
// rejected at every nesting level, with a /path/to/key in the message.
struct RunConfig {
  CascadeModel model;
  ReferenceMeasure measure;
  std::uint64_t seed = 1;
  int n_min = 1;
  int n_max = 8;
  int m_sub = 1;
  int replicas = 400;
  int threads = 0;  // 0: CASCADE_THREADS env, else 1
  std::vector<int> generations;  // defaults to {n_max}
  std::vector<double> t_list{0.15, 0.5, 0.85};
  double p = 2.0;
  std::vector<double> p_grid;               // defaults to 1/16 .. 2 step 1/16
  std::vector<double> p_empirical{0.5, 1.0, 1.5, 2.0};
  int n_lo = 2;
  std::vector<double> eps_schedule{0.2, 0.1, 0.05};
  HGrid h_grid;
  std::vector<double> q_list;  // defaults to 0 .. 2 step 1/4
  std::string out_dir = "out";

  // Derived at parse time from the effective (defaults applied) document.
  std::string canonical_text;  // sorted-key JSON of the effective config
  std::string config_hash;     // 16 hex digits, FNV-1a over canonical_text
  std::vector<std::string> notes;  // soft warnings, e.g. weight mean != 1
};

RunConfig parse_run_config(const std::string& json_text);
RunConfig load_run_config(const std::filesystem::path& file);

// Effective config as canonical JSON (object keys sorted, defaults filled).
// parse(effective_config_text(c)) reproduces c, hash included.
std::string effective_config_text(const RunConfig& config);

std::uint64_t fnv1a64(std::string_view bytes);
std::string hash_hex(std::uint64_t h);

}  // namespace cascade
