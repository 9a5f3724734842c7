#include "cascade/models.hpp"

#include <cmath>
#include <stdexcept>

namespace cascade {

const WeightVectorLaw& BadicIndependentModel::level(int k) const {
  if (levels.empty()) throw std::logic_error("model has no levels");
  if (k < 0) throw std::out_of_range("negative level");
  const std::size_t n = levels.size();
  const std::size_t idx = cycle ? static_cast<std::size_t>(k) % n
                                : std::min(static_cast<std::size_t>(k), n - 1);
  return levels[idx];
}

BadicIndependentModel badic_iid(int base, WeightLaw w) {
  BadicIndependentModel m;
  m.base = base;
  m.levels.push_back(WeightVectorLaw(base, {std::move(w)}));
  return m;
}

IntensityMeasure::IntensityMeasure(ScaleInvariant s) : v_(s) {
  if (!(s.delta > 0.0)) throw std::invalid_argument("delta must be > 0");
}

IntensityMeasure::IntensityMeasure(PowerLaw p) : v_(p) {
  if (!(p.coeff > 0.0)) throw std::invalid_argument("intensity coeff must be > 0");
  if (!std::isfinite(p.exponent)) throw std::invalid_argument("intensity exponent invalid");
}

IntensityMeasure::IntensityMeasure(Atoms a) : v_(std::move(a)) {
  const auto& atoms = std::get<Atoms>(v_).atoms;
  if (atoms.empty()) throw std::invalid_argument("atomic intensity needs atoms");
  for (const auto& at : atoms) {
    if (!(at.r > 0.0) || at.r > 1.0) throw std::invalid_argument("atom scale must lie in (0,1]");
    if (!(at.mass > 0.0)) throw std::invalid_argument("atom mass must be > 0");
  }
}

bool IntensityMeasure::is_scale_invariant() const {
  return std::holds_alternative<ScaleInvariant>(v_);
}

double IntensityMeasure::delta() const {
  return std::get<ScaleInvariant>(v_).delta;
}

namespace {

void check_band(double r_lo, double r_hi) {
  if (!(r_lo > 0.0) || !(r_lo < r_hi) || r_hi > 1.0 + 1e-12) {
    throw std::invalid_argument("band must satisfy 0 < r_lo < r_hi <= 1");
  }
}

// integral of coeff * r^(k - exponent) dr over (lo, hi]
double power_integral(double coeff, double exponent, int k, double lo, double hi) {
  const double e = static_cast<double>(k) - exponent;
  if (std::abs(e + 1.0) < 1e-14) {
    return coeff * std::log(hi / lo);
  }
  return coeff * (std::pow(hi, e + 1.0) - std::pow(lo, e + 1.0)) / (e + 1.0);
}

}  // namespace

double IntensityMeasure::band_mass(double r_lo, double r_hi) const {
  check_band(r_lo, r_hi);
  return std::visit(
      [&](const auto& m) -> double {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, ScaleInvariant>) {
          return m.delta * (1.0 / r_lo - 1.0 / r_hi);
        } else if constexpr (std::is_same_v<T, PowerLaw>) {
          return power_integral(m.coeff, m.exponent, 0, r_lo, r_hi);
        } else {
          double s = 0.0;
          for (const auto& a : m.atoms) {
            if (a.r > r_lo && a.r <= r_hi) s += a.mass;
          }
          return s;
        }
      },
      v_);
}

double IntensityMeasure::band_cone_mass(double r_lo, double r_hi) const {
  check_band(r_lo, r_hi);
  return std::visit(
      [&](const auto& m) -> double {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, ScaleInvariant>) {
          return m.delta * std::log(r_hi / r_lo);
        } else if constexpr (std::is_same_v<T, PowerLaw>) {
          return power_integral(m.coeff, m.exponent, 1, r_lo, r_hi);
        } else {
          double s = 0.0;
          for (const auto& a : m.atoms) {
            if (a.r > r_lo && a.r <= r_hi) s += a.mass * a.r;
          }
          return s;
        }
      },
      v_);
}

double IntensityMeasure::sample_r(double r_lo, double r_hi, RngStream& rng) const {
  check_band(r_lo, r_hi);
  return std::visit(
      [&](const auto& m) -> double {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, ScaleInvariant>) {
          // CDF on the band: (1/r_lo - 1/r) / (1/r_lo - 1/r_hi)
          const double u = rng.uniform01();
          const double inv = 1.0 / r_lo - u * (1.0 / r_lo - 1.0 / r_hi);
          return 1.0 / inv;
        } else if constexpr (std::is_same_v<T, PowerLaw>) {
          const double u = rng.uniform01();
          const double e = 1.0 - m.exponent;  // integral exponent
          if (std::abs(e) < 1e-14) {
            // density ~ 1/r: log-uniform
            return r_lo * std::pow(r_hi / r_lo, u);
          }
          const double a = std::pow(r_lo, e);
          const double b = std::pow(r_hi, e);
          return std::pow(a + u * (b - a), 1.0 / e);
        } else {
          double total = 0.0;
          for (const auto& a : m.atoms) {
            if (a.r > r_lo && a.r <= r_hi) total += a.mass;
          }
          if (total <= 0.0) throw std::logic_error("sampling from empty band");
          double u = rng.uniform01() * total;
          for (const auto& a : m.atoms) {
            if (a.r > r_lo && a.r <= r_hi) {
              if (u < a.mass) return a.r;
              u -= a.mass;
            }
          }
          for (auto it = m.atoms.rbegin(); it != m.atoms.rend(); ++it) {
            if (it->r > r_lo && it->r <= r_hi) return it->r;
          }
          throw std::logic_error("unreachable");
        }
      },
      v_);
}

int base_of(const CascadeModel& model) {
  return std::visit([](const auto& m) { return m.base; }, model);
}

double cone_aperture(const CascadeModel& model) {
  if (const auto* cpc = std::get_if<CompoundPoissonModel>(&model)) return cpc->beta;
  if (std::holds_alternative<LogInfDivisibleModel>(model)) return 1.0;
  return 0.0;
}

namespace {

void validate(const BadicIndependentModel& m) {
  if (m.base < 2) throw std::invalid_argument("base must be >= 2");
  if (m.levels.empty()) throw std::invalid_argument("b-adic model needs weight levels");
  for (const auto& lvl : m.levels) {
    if (lvl.base != m.base) throw std::invalid_argument("level base mismatch");
  }
}

void validate(const CompoundPoissonModel& m) {
  if (m.base < 2) throw std::invalid_argument("base must be >= 2");
  if (!(m.beta > 0.0) || !std::isfinite(m.beta)) {
    throw std::invalid_argument("cone aperture beta must be finite and > 0");
  }
}

void validate(const LogInfDivisibleModel& m) {
  if (m.base < 2) throw std::invalid_argument("base must be >= 2");
  if (m.m_cells < 1 || m.m_cells > 4096) {
    throw std::invalid_argument("m_cells must be in [1, 4096]");
  }
  const auto& q = m.gaussian;
  if (std::abs(q[0][1] - q[1][0]) > 1e-12) {
    throw std::invalid_argument("Gaussian form must be symmetric");
  }
  const double det = q[0][0] * q[1][1] - q[0][1] * q[1][0];
  if (q[0][0] < -1e-12 || q[1][1] < -1e-12 || det < -1e-12) {
    throw std::invalid_argument("Gaussian form must be positive semidefinite");
  }
  for (const auto& j : m.jumps) {
    if (!(j.mass > 0.0) || !std::isfinite(j.mass)) {
      throw std::invalid_argument("jump mass must be finite and > 0");
    }
    if (!std::isfinite(j.x[0]) || !std::isfinite(j.x[1])) {
      throw std::invalid_argument("jump location must be finite");
    }
  }
  for (double d : m.drift) {
    if (!std::isfinite(d)) throw std::invalid_argument("drift must be finite");
  }
}

}  // namespace

void validate_model(const CascadeModel& model) {
  std::visit([](const auto& m) { validate(m); }, model);
}

void validate_pairing(const CascadeModel& model, const ReferenceMeasure& measure) {
  validate_model(model);
  if (measure.is_lebesgue()) return;
  if (!std::holds_alternative<BadicIndependentModel>(model)) {
    throw std::invalid_argument(
        "Bernoulli reference measures pair only with b-adic models");
  }
  if (measure.base() != base_of(model)) {
    throw std::invalid_argument("measure base must match model base");
  }
}

Complex levy_exponent(const LogInfDivisibleModel& m, Complex xi1, double xi2) {
  const Complex i(0.0, 1.0);
  const Complex lin = i * (xi1 * m.drift[0] + xi2 * m.drift[1]);
  const Complex quad = xi1 * xi1 * m.gaussian[0][0] +
                       2.0 * xi1 * xi2 * m.gaussian[0][1] +
                       xi2 * xi2 * m.gaussian[1][1];
  Complex jump(0.0, 0.0);
  for (const auto& j : m.jumps) {
    const Complex phase = i * (xi1 * j.x[0] + xi2 * j.x[1]);
    Complex term = std::exp(phase) - 1.0;
    const double norm2 = j.x[0] * j.x[0] + j.x[1] * j.x[1];
    if (norm2 <= 1.0) term -= phase;  // compensation inside the unit disc
    jump += j.mass * term;
  }
  return lin - 0.5 * quad + jump;
}

Complex levy_normalizer(const LogInfDivisibleModel& m) {
  return levy_exponent(m, Complex(0.0, -1.0), 1.0);
}

double levy_moment_exponent(const LogInfDivisibleModel& m, double p) {
  const Complex raw = levy_exponent(m, Complex(0.0, -p), 0.0);
  const Complex norm = levy_normalizer(m);
  // psi(-ip, 0) is real by construction (exponential moment of rho_1)
  return raw.real() - p * norm.real();
}

bool statistically_self_similar(const CascadeModel& model) {
  if (const auto* b = std::get_if<BadicIndependentModel>(&model)) {
    return b->levels.size() == 1;
  }
  if (const auto* c = std::get_if<CompoundPoissonModel>(&model)) {
    return c->intensity.is_scale_invariant();
  }
  return true;
}

std::optional<Complex> closed_form_weight_mean(const CascadeModel& model) {
  if (const auto* b = std::get_if<BadicIndependentModel>(&model)) {
    // meaningful martingale diagnostic: mean of the first level's components
    Complex acc(0.0, 0.0);
    const auto& lvl = b->level(0);
    for (int i = 0; i < lvl.base; ++i) acc += mean(lvl.component(i));
    return acc / static_cast<double>(lvl.base);
  }
  if (const auto* c = std::get_if<CompoundPoissonModel>(&model)) {
    return mean(c->mark);
  }
  return std::nullopt;
}

}  // namespace cascade
