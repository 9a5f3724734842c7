#include "cascade/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace cascade {

using Json = nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& msg) {
  throw std::invalid_argument("config error at " + (path.empty() ? "/" : path) + ": " + msg);
}

void check_keys(const Json& j, const std::string& path,
                std::initializer_list<const char*> allowed) {
  if (!j.is_object()) fail(path, "expected an object");
  for (const auto& item : j.items()) {
    bool known = false;
    for (const char* k : allowed) {
      if (item.key() == k) {
        known = true;
        break;
      }
    }
    if (!known) fail(path + "/" + item.key(), "unknown key");
  }
}

double get_double(const Json& j, const std::string& path) {
  if (!j.is_number()) fail(path, "expected a number");
  return j.get<double>();
}

int get_int(const Json& j, const std::string& path) {
  if (!j.is_number_integer()) fail(path, "expected an integer");
  const auto v = j.get<std::int64_t>();
  if (v < -(1ll << 31) || v > (1ll << 31)) fail(path, "integer out of range");
  return static_cast<int>(v);
}

std::uint64_t get_u64(const Json& j, const std::string& path) {
  if (j.is_number_unsigned()) return j.get<std::uint64_t>();
  if (j.is_number_integer() && j.get<std::int64_t>() >= 0) {
    return static_cast<std::uint64_t>(j.get<std::int64_t>());
  }
  fail(path, "expected a nonnegative integer");
}

bool get_bool(const Json& j, const std::string& path) {
  if (!j.is_boolean()) fail(path, "expected a boolean");
  return j.get<bool>();
}

std::string get_string(const Json& j, const std::string& path) {
  if (!j.is_string()) fail(path, "expected a string");
  return j.get<std::string>();
}

std::vector<double> get_double_array(const Json& j, const std::string& path) {
  if (!j.is_array()) fail(path, "expected an array of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    out.push_back(get_double(j[i], path + "/" + std::to_string(i)));
  }
  return out;
}

// complex scalar: a number (real) or [re, im]
Complex get_complex(const Json& j, const std::string& path) {
  if (j.is_number()) return Complex(j.get<double>(), 0.0);
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number()) {
    return Complex(j[0].get<double>(), j[1].get<double>());
  }
  fail(path, "expected a number or [re, im]");
}

WeightLaw parse_law(const Json& j, const std::string& path) {
  if (!j.is_object()) fail(path, "expected a law object");
  if (!j.contains("type")) fail(path, "law needs a \"type\"");
  const std::string type = get_string(j["type"], path + "/type");
  try {
    if (type == "deterministic") {
      check_keys(j, path, {"type", "value"});
      if (!j.contains("value")) fail(path, "deterministic law needs \"value\"");
      return WeightLaw(DeterministicLaw{get_complex(j["value"], path + "/value")});
    }
    if (type == "finite_atomic") {
      check_keys(j, path, {"type", "atoms"});
      if (!j.contains("atoms") || !j["atoms"].is_array()) {
        fail(path, "finite_atomic law needs an \"atoms\" array");
      }
      FiniteAtomicLaw law;
      const auto& atoms = j["atoms"];
      for (std::size_t i = 0; i < atoms.size(); ++i) {
        const std::string ap = path + "/atoms/" + std::to_string(i);
        check_keys(atoms[i], ap, {"value", "prob"});
        if (!atoms[i].contains("value") || !atoms[i].contains("prob")) {
          fail(ap, "atom needs \"value\" and \"prob\"");
        }
        law.atoms.push_back({get_complex(atoms[i]["value"], ap + "/value"),
                             get_double(atoms[i]["prob"], ap + "/prob")});
      }
      return WeightLaw(std::move(law));
    }
    if (type == "gaussian_perturbed") {
      check_keys(j, path, {"type", "sigma"});
      if (!j.contains("sigma")) fail(path, "gaussian_perturbed law needs \"sigma\"");
      return WeightLaw(GaussianPerturbedLaw{get_double(j["sigma"], path + "/sigma")});
    }
    if (type == "log_normal_phase") {
      check_keys(j, path, {"type", "sigma", "tau"});
      if (!j.contains("sigma") || !j.contains("tau")) {
        fail(path, "log_normal_phase law needs \"sigma\" and \"tau\"");
      }
      return WeightLaw(log_normal_phase(get_double(j["sigma"], path + "/sigma"),
                                        get_double(j["tau"], path + "/tau")));
    }
    if (type == "unit_mean_scaled") {
      check_keys(j, path, {"type", "base", "mode"});
      if (!j.contains("base")) fail(path, "unit_mean_scaled law needs \"base\"");
      WeightLaw base = parse_law(j["base"], path + "/base");
      const std::string mode =
          j.contains("mode") ? get_string(j["mode"], path + "/mode") : "scale";
      if (mode == "scale") return WeightLaw(unit_mean_by_scaling(std::move(base)));
      if (mode == "shift") return WeightLaw(unit_mean_by_shifting(std::move(base)));
      fail(path + "/mode", "expected \"scale\" or \"shift\"");
    }
  } catch (const std::invalid_argument& e) {
    // re-tag law validation errors with the config location
    const std::string what = e.what();
    if (what.rfind("config error", 0) == 0) throw;
    fail(path, what);
  }
  fail(path + "/type", "unknown law type \"" + type + "\"");
}

Json law_to_json(const WeightLaw& law);

Json complex_to_json(const Complex& z) { return Json::array({z.real(), z.imag()}); }

Json law_to_json(const WeightLaw& law) {
  return std::visit(
      [](const auto& l) -> Json {
        using T = std::decay_t<decltype(l)>;
        Json j;
        if constexpr (std::is_same_v<T, DeterministicLaw>) {
          j["type"] = "deterministic";
          j["value"] = complex_to_json(l.value);
        } else if constexpr (std::is_same_v<T, FiniteAtomicLaw>) {
          j["type"] = "finite_atomic";
          j["atoms"] = Json::array();
          for (const auto& a : l.atoms) {
            j["atoms"].push_back({{"value", complex_to_json(a.value)}, {"prob", a.prob}});
          }
        } else if constexpr (std::is_same_v<T, GaussianPerturbedLaw>) {
          j["type"] = "gaussian_perturbed";
          j["sigma"] = l.sigma;
        } else if constexpr (std::is_same_v<T, LogNormalPhaseLaw>) {
          j["type"] = "log_normal_phase";
          j["sigma"] = l.sigma;
          j["tau"] = l.tau;
        } else {
          j["type"] = "unit_mean_scaled";
          j["base"] = law_to_json(*l.base);
          j["mode"] = l.scale == Complex(1.0, 0.0) ? "shift" : "scale";
        }
        return j;
      },
      law.variant());
}

WeightVectorLaw parse_level(const Json& j, const std::string& path, int base) {
  if (j.is_object() && j.contains("components")) {
    check_keys(j, path, {"components"});
    const auto& comps = j["components"];
    if (!comps.is_array()) fail(path + "/components", "expected an array of laws");
    std::vector<WeightLaw> laws;
    for (std::size_t i = 0; i < comps.size(); ++i) {
      laws.push_back(parse_law(comps[i], path + "/components/" + std::to_string(i)));
    }
    try {
      return WeightVectorLaw(base, std::move(laws));
    } catch (const std::invalid_argument& e) {
      fail(path, e.what());
    }
  }
  return WeightVectorLaw(base, {parse_law(j, path)});
}

CascadeModel parse_model(const Json& j, const std::string& path) {
  if (!j.is_object()) fail(path, "expected a model object");
  if (!j.contains("family")) fail(path, "model needs a \"family\"");
  const std::string family = get_string(j["family"], path + "/family");

  if (family == "badic") {
    check_keys(j, path, {"family", "base", "weight", "levels", "cycle"});
    BadicIndependentModel m;
    m.base = j.contains("base") ? get_int(j["base"], path + "/base") : 2;
    if (j.contains("weight") == j.contains("levels")) {
      fail(path, "badic model needs exactly one of \"weight\" or \"levels\"");
    }
    if (j.contains("weight")) {
      m.levels.push_back(WeightVectorLaw(m.base, {parse_law(j["weight"], path + "/weight")}));
    } else {
      const auto& levels = j["levels"];
      if (!levels.is_array() || levels.empty()) {
        fail(path + "/levels", "expected a nonempty array");
      }
      for (std::size_t i = 0; i < levels.size(); ++i) {
        m.levels.push_back(
            parse_level(levels[i], path + "/levels/" + std::to_string(i), m.base));
      }
    }
    if (j.contains("cycle")) m.cycle = get_bool(j["cycle"], path + "/cycle");
    return m;
  }

  if (family == "compound_poisson") {
    check_keys(j, path, {"family", "base", "beta", "intensity", "mark"});
    CompoundPoissonModel m;
    m.base = j.contains("base") ? get_int(j["base"], path + "/base") : 2;
    if (j.contains("beta")) m.beta = get_double(j["beta"], path + "/beta");
    if (j.contains("intensity")) {
      const auto& in = j["intensity"];
      const std::string ip = path + "/intensity";
      if (!in.is_object() || !in.contains("type")) fail(ip, "intensity needs a \"type\"");
      const std::string type = get_string(in["type"], ip + "/type");
      try {
        if (type == "scale_invariant") {
          check_keys(in, ip, {"type", "delta"});
          const double delta =
              in.contains("delta") ? get_double(in["delta"], ip + "/delta") : 1.0;
          m.intensity = IntensityMeasure(IntensityMeasure::ScaleInvariant{delta});
        } else if (type == "power_law") {
          check_keys(in, ip, {"type", "coeff", "exponent"});
          IntensityMeasure::PowerLaw p;
          if (in.contains("coeff")) p.coeff = get_double(in["coeff"], ip + "/coeff");
          if (in.contains("exponent")) {
            p.exponent = get_double(in["exponent"], ip + "/exponent");
          }
          m.intensity = IntensityMeasure(p);
        } else if (type == "atoms") {
          check_keys(in, ip, {"type", "atoms"});
          if (!in.contains("atoms") || !in["atoms"].is_array()) {
            fail(ip, "atomic intensity needs an \"atoms\" array");
          }
          IntensityMeasure::Atoms a;
          for (std::size_t i = 0; i < in["atoms"].size(); ++i) {
            const std::string ap = ip + "/atoms/" + std::to_string(i);
            check_keys(in["atoms"][i], ap, {"r", "mass"});
            if (!in["atoms"][i].contains("r") || !in["atoms"][i].contains("mass")) {
              fail(ap, "atom needs \"r\" and \"mass\"");
            }
            a.atoms.push_back({get_double(in["atoms"][i]["r"], ap + "/r"),
                               get_double(in["atoms"][i]["mass"], ap + "/mass")});
          }
          m.intensity = IntensityMeasure(std::move(a));
        } else {
          fail(ip + "/type", "unknown intensity type \"" + type + "\"");
        }
      } catch (const std::invalid_argument& e) {
        const std::string what = e.what();
        if (what.rfind("config error", 0) == 0) throw;
        fail(ip, what);
      }
    }
    if (j.contains("mark")) m.mark = parse_law(j["mark"], path + "/mark");
    return m;
  }

  if (family == "log_infinitely_divisible") {
    check_keys(j, path, {"family", "base", "drift", "gaussian", "jumps", "m_cells"});
    LogInfDivisibleModel m;
    m.base = j.contains("base") ? get_int(j["base"], path + "/base") : 2;
    if (j.contains("drift")) {
      const auto d = get_double_array(j["drift"], path + "/drift");
      if (d.size() != 2) fail(path + "/drift", "expected [a1, a2]");
      m.drift = {d[0], d[1]};
    }
    if (j.contains("gaussian")) {
      const auto& g = j["gaussian"];
      const std::string gp = path + "/gaussian";
      if (!g.is_array() || g.size() != 2) fail(gp, "expected a 2x2 matrix");
      for (int r = 0; r < 2; ++r) {
        const auto row = get_double_array(g[r], gp + "/" + std::to_string(r));
        if (row.size() != 2) fail(gp, "expected a 2x2 matrix");
        m.gaussian[static_cast<std::size_t>(r)] = {row[0], row[1]};
      }
    }
    if (j.contains("jumps")) {
      const auto& jj = j["jumps"];
      if (!jj.is_array()) fail(path + "/jumps", "expected an array");
      for (std::size_t i = 0; i < jj.size(); ++i) {
        const std::string ap = path + "/jumps/" + std::to_string(i);
        check_keys(jj[i], ap, {"x", "mass"});
        if (!jj[i].contains("x") || !jj[i].contains("mass")) {
          fail(ap, "jump needs \"x\" and \"mass\"");
        }
        const auto x = get_double_array(jj[i]["x"], ap + "/x");
        if (x.size() != 2) fail(ap + "/x", "expected [x1, x2]");
        m.jumps.push_back({{x[0], x[1]}, get_double(jj[i]["mass"], ap + "/mass")});
      }
    }
    if (j.contains("m_cells")) m.m_cells = get_int(j["m_cells"], path + "/m_cells");
    return m;
  }

  fail(path + "/family", "unknown model family \"" + family + "\"");
}

Json model_to_json(const CascadeModel& model) {
  Json j;
  if (const auto* b = std::get_if<BadicIndependentModel>(&model)) {
    j["family"] = "badic";
    j["base"] = b->base;
    j["cycle"] = b->cycle;
    j["levels"] = Json::array();
    for (const auto& lvl : b->levels) {
      if (lvl.iid()) {
        j["levels"].push_back(law_to_json(lvl.components.front()));
      } else {
        Json comps = Json::array();
        for (const auto& c : lvl.components) comps.push_back(law_to_json(c));
        j["levels"].push_back({{"components", std::move(comps)}});
      }
    }
    return j;
  }
  if (const auto* c = std::get_if<CompoundPoissonModel>(&model)) {
    j["family"] = "compound_poisson";
    j["base"] = c->base;
    j["beta"] = c->beta;
    std::visit(
        [&](const auto& in) {
          using T = std::decay_t<decltype(in)>;
          if constexpr (std::is_same_v<T, IntensityMeasure::ScaleInvariant>) {
            j["intensity"] = {{"type", "scale_invariant"}, {"delta", in.delta}};
          } else if constexpr (std::is_same_v<T, IntensityMeasure::PowerLaw>) {
            j["intensity"] = {
                {"type", "power_law"}, {"coeff", in.coeff}, {"exponent", in.exponent}};
          } else {
            Json atoms = Json::array();
            for (const auto& a : in.atoms) {
              atoms.push_back({{"r", a.r}, {"mass", a.mass}});
            }
            j["intensity"] = {{"type", "atoms"}, {"atoms", std::move(atoms)}};
          }
        },
        c->intensity.variant());
    j["mark"] = law_to_json(c->mark);
    return j;
  }
  const auto& l = std::get<LogInfDivisibleModel>(model);
  j["family"] = "log_infinitely_divisible";
  j["base"] = l.base;
  j["drift"] = Json::array({l.drift[0], l.drift[1]});
  j["gaussian"] = Json::array({Json::array({l.gaussian[0][0], l.gaussian[0][1]}),
                               Json::array({l.gaussian[1][0], l.gaussian[1][1]})});
  j["jumps"] = Json::array();
  for (const auto& a : l.jumps) {
    j["jumps"].push_back({{"x", Json::array({a.x[0], a.x[1]})}, {"mass", a.mass}});
  }
  j["m_cells"] = l.m_cells;
  return j;
}

ReferenceMeasure parse_measure(const Json& j, const std::string& path) {
  if (!j.is_object() || !j.contains("type")) fail(path, "measure needs a \"type\"");
  const std::string type = get_string(j["type"], path + "/type");
  if (type == "lebesgue") {
    check_keys(j, path, {"type"});
    return ReferenceMeasure::lebesgue();
  }
  if (type == "bernoulli") {
    check_keys(j, path, {"type", "base", "levels", "cycle"});
    if (!j.contains("base") || !j.contains("levels")) {
      fail(path, "bernoulli measure needs \"base\" and \"levels\"");
    }
    const int base = get_int(j["base"], path + "/base");
    const auto& levels = j["levels"];
    if (!levels.is_array() || levels.empty()) {
      fail(path + "/levels", "expected a nonempty array of probability vectors");
    }
    std::vector<std::vector<double>> lv;
    for (std::size_t i = 0; i < levels.size(); ++i) {
      lv.push_back(get_double_array(levels[i], path + "/levels/" + std::to_string(i)));
    }
    const bool cycle = j.contains("cycle") ? get_bool(j["cycle"], path + "/cycle") : true;
    try {
      return ReferenceMeasure(base, std::move(lv), cycle);
    } catch (const std::invalid_argument& e) {
      fail(path, e.what());
    }
  }
  fail(path + "/type", "unknown measure type \"" + type + "\"");
}

Json measure_to_json(const ReferenceMeasure& m) {
  if (m.is_lebesgue()) return Json{{"type", "lebesgue"}};
  Json j;
  j["type"] = "bernoulli";
  j["base"] = m.base();
  j["cycle"] = m.cycle();
  j["levels"] = Json::array();
  for (int k = 0; k < m.level_count(); ++k) j["levels"].push_back(m.level(k));
  return j;
}

std::vector<double> default_p_grid() {
  std::vector<double> out;
  for (int i = 1; i <= 32; ++i) out.push_back(static_cast<double>(i) / 16.0);
  return out;
}

std::vector<double> default_q_list() {
  std::vector<double> out;
  for (int i = 0; i <= 8; ++i) out.push_back(static_cast<double>(i) / 4.0);
  return out;
}

}  // namespace

RunConfig parse_run_config(const std::string& json_text) {
  Json j;
  try {
    j = Json::parse(json_text);
  } catch (const Json::parse_error& e) {
    throw std::invalid_argument(std::string("config is not valid JSON: ") + e.what());
  }
  check_keys(j, "", {"model", "measure", "seed", "n_min", "n_max", "m_sub", "replicas",
                     "threads", "generations", "t_list", "p", "p_grid", "p_empirical",
                     "n_lo", "eps_schedule", "h_grid", "q_list", "out_dir"});
  if (!j.contains("model")) fail("", "config needs a \"model\"");

  RunConfig c;
  c.model = parse_model(j["model"], "/model");
  if (j.contains("measure")) c.measure = parse_measure(j["measure"], "/measure");
  if (j.contains("seed")) c.seed = get_u64(j["seed"], "/seed");
  if (j.contains("n_min")) c.n_min = get_int(j["n_min"], "/n_min");
  if (j.contains("n_max")) c.n_max = get_int(j["n_max"], "/n_max");
  if (j.contains("m_sub")) c.m_sub = get_int(j["m_sub"], "/m_sub");
  if (j.contains("replicas")) c.replicas = get_int(j["replicas"], "/replicas");
  if (j.contains("threads")) c.threads = get_int(j["threads"], "/threads");
  if (j.contains("generations")) {
    const auto& g = j["generations"];
    if (!g.is_array() || g.empty()) fail("/generations", "expected a nonempty array");
    for (std::size_t i = 0; i < g.size(); ++i) {
      c.generations.push_back(get_int(g[i], "/generations/" + std::to_string(i)));
    }
  }
  if (j.contains("t_list")) c.t_list = get_double_array(j["t_list"], "/t_list");
  if (j.contains("p")) c.p = get_double(j["p"], "/p");
  if (j.contains("p_grid")) c.p_grid = get_double_array(j["p_grid"], "/p_grid");
  if (j.contains("p_empirical")) {
    c.p_empirical = get_double_array(j["p_empirical"], "/p_empirical");
  }
  if (j.contains("n_lo")) c.n_lo = get_int(j["n_lo"], "/n_lo");
  if (j.contains("eps_schedule")) {
    c.eps_schedule = get_double_array(j["eps_schedule"], "/eps_schedule");
  }
  if (j.contains("h_grid")) {
    const auto& h = j["h_grid"];
    check_keys(h, "/h_grid", {"min", "max", "step"});
    if (h.contains("min")) c.h_grid.min = get_double(h["min"], "/h_grid/min");
    if (h.contains("max")) c.h_grid.max = get_double(h["max"], "/h_grid/max");
    if (h.contains("step")) c.h_grid.step = get_double(h["step"], "/h_grid/step");
  }
  if (j.contains("q_list")) c.q_list = get_double_array(j["q_list"], "/q_list");
  if (j.contains("out_dir")) c.out_dir = get_string(j["out_dir"], "/out_dir");

  if (c.p_grid.empty()) c.p_grid = default_p_grid();
  if (c.q_list.empty()) c.q_list = default_q_list();
  if (c.generations.empty()) c.generations = {c.n_max};

  // range checks before any sampling
  if (c.n_min < 1) fail("/n_min", "must be >= 1");
  if (c.n_max < c.n_min) fail("/n_max", "must be >= n_min");
  if (c.n_max > 30) fail("/n_max", "must be <= 30");
  if (c.m_sub < 1 || c.m_sub > 4096) fail("/m_sub", "must be in [1, 4096]");
  if (c.replicas < 1) fail("/replicas", "must be >= 1");
  if (c.threads < 0) fail("/threads", "must be >= 0");
  if (c.n_lo < 1) fail("/n_lo", "must be >= 1");
  if (c.n_lo > c.n_max) fail("/n_lo", "must be <= n_max");
  for (std::size_t i = 0; i < c.generations.size(); ++i) {
    if (c.generations[i] < c.n_min || c.generations[i] > c.n_max) {
      fail("/generations/" + std::to_string(i), "must lie in [n_min, n_max]");
    }
  }
  for (std::size_t i = 0; i < c.t_list.size(); ++i) {
    if (!(c.t_list[i] >= 0.0) || c.t_list[i] >= 1.0) {
      fail("/t_list/" + std::to_string(i), "must lie in [0, 1)");
    }
  }
  for (std::size_t i = 0; i < c.p_grid.size(); ++i) {
    if (!(c.p_grid[i] > 0.0)) fail("/p_grid/" + std::to_string(i), "must be > 0");
  }
  for (std::size_t i = 0; i < c.p_empirical.size(); ++i) {
    if (!(c.p_empirical[i] > 0.0)) {
      fail("/p_empirical/" + std::to_string(i), "must be > 0");
    }
  }
  if (!(c.p > 0.0)) fail("/p", "must be > 0");
  for (std::size_t i = 0; i < c.eps_schedule.size(); ++i) {
    if (!(c.eps_schedule[i] > 0.0)) {
      fail("/eps_schedule/" + std::to_string(i), "must be > 0");
    }
  }
  if (c.eps_schedule.empty()) fail("/eps_schedule", "must be nonempty");
  if (!(c.h_grid.step > 0.0)) fail("/h_grid/step", "must be > 0");
  if (!(c.h_grid.max > c.h_grid.min)) fail("/h_grid/max", "must exceed min");
  if (c.out_dir.empty()) fail("/out_dir", "must be nonempty");

  try {
    validate_pairing(c.model, c.measure);
  } catch (const std::invalid_argument& e) {
    fail("/model", e.what());
  }

  if (const auto mean = closed_form_weight_mean(c.model)) {
    if (std::holds_alternative<BadicIndependentModel>(c.model) &&
        std::abs(*mean - Complex(1.0, 0.0)) > 1e-9) {
      c.notes.push_back("weight mean differs from 1; the martingale property fails");
    }
  }

  c.canonical_text = effective_config_text(c);
  c.config_hash = hash_hex(fnv1a64(c.canonical_text));
  return c;
}

RunConfig load_run_config(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw std::invalid_argument("cannot open config file: " + file.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_run_config(ss.str());
}

std::string effective_config_text(const RunConfig& c) {
  // out_dir and threads are execution details: they change no computed
  // number, so they stay out of the canonical payload and the hash
  Json j;
  j["model"] = model_to_json(c.model);
  j["measure"] = measure_to_json(c.measure);
  j["seed"] = c.seed;
  j["n_min"] = c.n_min;
  j["n_max"] = c.n_max;
  j["m_sub"] = c.m_sub;
  j["replicas"] = c.replicas;
  j["generations"] = c.generations;
  j["t_list"] = c.t_list;
  j["p"] = c.p;
  j["p_grid"] = c.p_grid;
  j["p_empirical"] = c.p_empirical;
  j["n_lo"] = c.n_lo;
  j["eps_schedule"] = c.eps_schedule;
  j["h_grid"] = {{"min", c.h_grid.min}, {"max", c.h_grid.max}, {"step", c.h_grid.step}};
  j["q_list"] = c.q_list;
  return j.dump();  // object keys already sorted by the container
}

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char b : bytes) {
    h ^= b;
    h *= 0x100000001b3ull;
  }
  return h;
}

std::string hash_hex(std::uint64_t h) {
  static const char* digits = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[static_cast<std::size_t>(i)] = digits[h & 0xF];
    h >>= 4;
  }
  return out;
}

}  // namespace cascade
