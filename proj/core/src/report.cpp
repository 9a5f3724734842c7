#include "cascade/report.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace cascade {

using Json = nlohmann::json;

namespace {

// non-finite values have no JSON literal; emit null and keep a flag nearby
Json num_or_null(double v) {
  if (std::isfinite(v)) return v;
  return nullptr;
}

const char* method_name(MomentMethod m) {
  switch (m) {
    case MomentMethod::kExact: return "exact";
    case MomentMethod::kQuadrature: return "quadrature";
    case MomentMethod::kMonteCarlo: return "monte_carlo";
  }
  return "unknown";
}

Json phi_value_json(const PhiValue& v) {
  return Json{{"value", num_or_null(v.value)},
              {"std_error", v.std_error},
              {"method", method_name(v.method)},
              {"windowed_rate", v.windowed_rate}};
}

Json slope_fit_json(const SlopeFit& f) {
  Json j;
  j["slope"] = f.slope;
  j["std_error"] = f.std_error;
  j["intercept"] = f.intercept;
  j["n_lo"] = f.n_lo;
  j["n_hi"] = f.n_hi;
  j["log_sums"] = f.log_sums;
  j["log_sigmas"] = f.log_sigmas;
  return j;
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

}  // namespace

std::string manifest_json(const RunManifest& m) {
  Json j;
  j["tool"] = kToolName;
  j["version"] = kToolVersion;
  j["subcommand"] = m.subcommand;
  j["config_hash"] = m.config_hash;
  j["seed"] = m.seed;
  j["threads"] = m.threads;
  j["config"] = Json::parse(m.config_text);
  j["outputs"] = m.outputs;
  j["notes"] = m.notes;
  return dump(j);
}

std::string phi_report_json(const PhiDoc& doc) {
  Json j;
  j["report"] = "phi";
  j["config_hash"] = doc.config_hash;
  j["seed"] = doc.seed;

  j["grid"] = Json::array();
  for (const auto& e : doc.closed) {
    Json row = phi_value_json(e.phi);
    row["p"] = e.p;
    j["grid"].push_back(std::move(row));
  }

  j["empirical"] = Json::array();
  for (const auto& e : doc.empirical) {
    Json row = slope_fit_json(e.fit);
    row["p"] = e.p;
    row["replicas"] = e.replicas;
    j["empirical"].push_back(std::move(row));
  }

  const auto& r = doc.report;
  j["verdict"] = to_string(r.verdict);
  j["p_star"] = r.p_star;
  j["gamma_star"] = r.gamma_star;
  j["beta_critical"] = r.beta ? Json(*r.beta) : Json(nullptr);
  j["distortion"] = Json{{"structural_zero", r.distortion_structural_zero},
                         {"checked", r.distortion_checked},
                         {"ok", r.distortion_ok}};
  j["notes"] = doc.notes;
  if (!r.note.empty()) j["notes"].push_back(r.note);
  return dump(j);
}

std::string spectrum_report_json(const SpectrumDoc& doc) {
  const auto& s = doc.spectrum;
  Json j;
  j["report"] = "spectrum";
  j["config_hash"] = doc.config_hash;
  j["seed"] = doc.seed;
  j["n_lo"] = s.n_lo;
  j["n_hi"] = s.n_hi;
  j["eps_schedule"] = s.eps_schedule;
  j["h_grid"] = s.h_grid;

  j["by_eps"] = Json::array();
  for (std::size_t ie = 0; ie < s.by_eps.size(); ++ie) {
    Json row;
    row["eps"] = s.eps_schedule[ie];
    row["L"] = Json::array();
    for (std::size_t ih = 0; ih < s.by_eps[ie].size(); ++ih) {
      row["L"].push_back(s.by_eps_finite[ie][ih] ? Json(s.by_eps[ie][ih]) : Json(nullptr));
    }
    j["by_eps"].push_back(std::move(row));
  }

  j["headline"] = Json::array();
  for (std::size_t ih = 0; ih < s.headline.size(); ++ih) {
    j["headline"].push_back(
        Json{{"h", s.h_grid[ih]},
             {"L", s.headline_finite[ih] ? Json(s.headline[ih]) : Json(nullptr)},
             {"finite", static_cast<bool>(s.headline_finite[ih])}});
  }

  if (std::isfinite(s.support_lo) && std::isfinite(s.support_hi)) {
    j["support"] = Json{{"lo", s.support_lo}, {"hi", s.support_hi}};
  } else {
    j["support"] = nullptr;
  }
  j["gamma_estimate"] = num_or_null(s.gamma_estimate);

  j["structure_exponents"] = Json::array();
  for (const auto& e : doc.structure) {
    j["structure_exponents"].push_back(
        Json{{"q", e.q}, {"tau", e.tau}, {"std_error", e.std_error}});
  }

  j["histograms"] = Json::array();
  for (std::size_t i = 0; i < s.histograms.size(); ++i) {
    const auto& h = s.histograms[i];
    Json row;
    row["n"] = h.n;
    row["zero_oscillation"] = h.zero_oscillation;
    row["file"] = i < doc.histogram_files.size() ? Json(doc.histogram_files[i]) : Json(nullptr);
    j["histograms"].push_back(std::move(row));
  }
  j["notes"] = doc.notes;
  return dump(j);
}

std::string verify_report_json(const VerifyDoc& doc) {
  Json j;
  j["report"] = "verify";
  j["config_hash"] = doc.config_hash;
  j["seed"] = doc.seed;
  Json checks = Json::array();

  {
    const auto& m = doc.martingale;
    Json rows = Json::array();
    for (const auto& r : m.rows) {
      rows.push_back(Json{{"t", r.t},
                          {"mean_re", r.mean_q.real()},
                          {"mean_im", r.mean_q.imag()},
                          {"se_re", r.se_re},
                          {"se_im", r.se_im},
                          {"ok", r.ok}});
    }
    checks.push_back(Json{{"name", "martingale_mean"},
                          {"status", m.all_ok ? "pass" : "fail"},
                          {"n", m.n},
                          {"replicas", m.replicas},
                          {"rows", std::move(rows)}});
  }

  {
    const auto& d = doc.decorrelation;
    checks.push_back(Json{{"name", "decorrelation"},
                          {"status", d.ok ? "pass" : "fail"},
                          {"n", d.n},
                          {"separation_cells", d.separation_cells},
                          {"t", d.t},
                          {"s", d.s},
                          {"cov_re", d.covariance.real()},
                          {"cov_im", d.covariance.imag()},
                          {"se", d.se}});
  }

  if (doc.self_sim_applicable) {
    const auto& s = doc.self_similarity;
    checks.push_back(Json{{"name", "self_similarity_moment"},
                          {"status", s.ok ? "pass" : "fail"},
                          {"n", s.n},
                          {"moment_left", s.moment_left},
                          {"moment_right", s.moment_right},
                          {"se_left", s.se_left},
                          {"se_right", s.se_right}});
  } else {
    checks.push_back(Json{{"name", "self_similarity_moment"},
                          {"status", "skipped"},
                          {"reason", "model is not statistically self-similar"}});
  }

  {
    const auto& r = doc.ratio;
    Json ratios = Json::array();
    for (double x : r.ratios) ratios.push_back(num_or_null(x));
    Json ses = Json::array();
    for (double x : r.ratio_ses) ses.push_back(num_or_null(x));
    checks.push_back(Json{{"name", "moment_sum_ratio"},
                          {"status", r.ok ? "pass" : "fail"},
                          {"p", r.p},
                          {"n_lo", r.n_lo},
                          {"n_hi", r.n_hi},
                          {"ratios", std::move(ratios)},
                          {"ratio_ses", std::move(ses)},
                          {"max_over_min", num_or_null(r.max_over_min)}});
  }

  {
    const auto& t = doc.trend;
    Json sup = Json::array();
    for (double x : t.mean_sqrt_sup) sup.push_back(num_or_null(x));
    Json cau = Json::array();
    for (double x : t.mean_sqrt_cauchy) cau.push_back(num_or_null(x));
    Json row{{"name", "sup_norm_trend"},
             {"verdict", t.verdict},
             {"n_lo", t.n_lo},
             {"n_hi", t.n_hi},
             {"mean_sqrt_sup", std::move(sup)},
             {"mean_sqrt_cauchy", std::move(cau)}};
    if (t.checked) {
      row["status"] = t.ok ? "pass" : "fail";
      row["slope"] = t.slope;
      row["slope_se"] = t.slope_se;
    } else {
      row["status"] = "skipped";
      row["reason"] = "verdict inconclusive; no predicted trend";
    }
    checks.push_back(std::move(row));
  }

  j["checks"] = std::move(checks);
  j["all_pass"] = doc.all_pass;
  j["notes"] = doc.notes;
  return dump(j);
}

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  if (res.ec != std::errc()) throw std::logic_error("number formatting failed");
  return std::string(buf, res.ptr);
}

namespace {

std::string csv_comment(const std::string& config_hash, std::uint64_t seed) {
  return "# config_hash=" + config_hash + " seed=" + std::to_string(seed) + "\n";
}

}  // namespace

std::string path_csv(const PathSample& path, int n, const std::string& config_hash) {
  const auto& vals = path.gen(n);
  std::string out = csv_comment(config_hash, path.seed);
  out += "t,re_F,im_F,n\n";
  const std::string suffix = "," + std::to_string(n) + "\n";
  for (std::size_t j = 0; j < path.grid.size(); ++j) {
    out += format_double(path.grid[j]);
    out += ',';
    out += format_double(vals[j].real());
    out += ',';
    out += format_double(vals[j].imag());
    out += suffix;
  }
  return out;
}

std::string histogram_csv(const GenerationHistogram& hist, const std::string& config_hash,
                          std::uint64_t seed) {
  std::string out = csv_comment(config_hash, seed);
  out += "n,h_bin,count\n";
  const std::string prefix = std::to_string(hist.n) + ",";
  for (const auto& [h, count] : hist.bins) {
    out += prefix;
    out += format_double(h);
    out += ',';
    out += std::to_string(count);
    out += '\n';
  }
  if (hist.zero_oscillation > 0) {
    out += prefix;
    out += "inf,";
    out += std::to_string(hist.zero_oscillation);
    out += '\n';
  }
  return out;
}

namespace {

std::string two_digits(int n) {
  std::string s = std::to_string(n);
  return s.size() < 2 ? "0" + s : s;
}

}  // namespace

std::string path_csv_name(int n) { return "path_gen" + two_digits(n) + ".csv"; }
std::string histogram_csv_name(int n) { return "hist_gen" + two_digits(n) + ".csv"; }

void write_text_file(const std::filesystem::path& file, const std::string& content) {
  std::ofstream out(file, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + file.string());
  out << content;
  if (!out) throw std::runtime_error("write failed: " + file.string());
}

}  // namespace cascade
