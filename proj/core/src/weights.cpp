#include "cascade/weights.hpp"

#include <cmath>
#include <cstring>
#include <numbers>
#include <stdexcept>

#include "cascade/numeric.hpp"

namespace cascade {

namespace {

constexpr double kProbTol = 1e-12;

void validate(const FiniteAtomicLaw& l) {
  if (l.atoms.empty()) throw std::invalid_argument("atomic law needs at least one atom");
  double total = 0.0;
  for (const auto& a : l.atoms) {
    if (!(a.prob >= 0.0)) throw std::invalid_argument("atom probability must be >= 0");
    total += a.prob;
  }
  if (std::abs(total - 1.0) > kProbTol) {
    throw std::invalid_argument("atom probabilities must sum to 1");
  }
}

void validate(const GaussianPerturbedLaw& l) {
  if (!(l.sigma >= 0.0) || !std::isfinite(l.sigma)) {
    throw std::invalid_argument("sigma must be finite and >= 0");
  }
}

void validate(const LogNormalPhaseLaw& l) {
  if (!(l.sigma >= 0.0) || !(l.tau >= 0.0) || !std::isfinite(l.mu)) {
    throw std::invalid_argument("lognormal-phase parameters invalid");
  }
}

void validate(const UnitMeanScaledLaw& l) {
  if (!l.base) throw std::invalid_argument("scaled law needs a base law");
}

// |W|^p with the p = 0 convention |w|^0 = 1 even at w = 0.
double abs_pow(double a, double p) {
  if (p == 0.0) return 1.0;
  return std::pow(a, p);
}

std::uint64_t law_moment_stream_id(double p) {
  std::uint64_t bits;
  static_assert(sizeof(bits) == sizeof(p));
  std::memcpy(&bits, &p, sizeof(bits));
  return bits;
}

}  // namespace

LogNormalPhaseLaw log_normal_phase(double sigma, double tau) {
  LogNormalPhaseLaw l;
  l.sigma = sigma;
  l.tau = tau;
  l.mu = -0.5 * sigma * sigma + 0.5 * tau * tau;
  validate(l);
  return l;
}

WeightLaw::WeightLaw(DeterministicLaw l) : v_(std::move(l)) {}
WeightLaw::WeightLaw(FiniteAtomicLaw l) : v_(std::move(l)) { validate(std::get<FiniteAtomicLaw>(v_)); }
WeightLaw::WeightLaw(GaussianPerturbedLaw l) : v_(l) { validate(std::get<GaussianPerturbedLaw>(v_)); }
WeightLaw::WeightLaw(LogNormalPhaseLaw l) : v_(l) { validate(std::get<LogNormalPhaseLaw>(v_)); }
WeightLaw::WeightLaw(UnitMeanScaledLaw l) : v_(std::move(l)) { validate(std::get<UnitMeanScaledLaw>(v_)); }

UnitMeanScaledLaw unit_mean_by_scaling(WeightLaw base) {
  const Complex m = mean(base);
  if (std::abs(m) < 1e-14) throw std::invalid_argument("base law has mean 0; cannot rescale");
  UnitMeanScaledLaw l;
  l.base = std::make_shared<const WeightLaw>(std::move(base));
  l.scale = 1.0 / m;
  l.shift = 0.0;
  return l;
}

UnitMeanScaledLaw unit_mean_by_shifting(WeightLaw base) {
  const Complex m = mean(base);
  UnitMeanScaledLaw l;
  l.base = std::make_shared<const WeightLaw>(std::move(base));
  l.scale = 1.0;
  l.shift = Complex(1.0, 0.0) - m;
  return l;
}

Complex sample(const WeightLaw& law, RngStream& rng) {
  return std::visit(
      [&rng](const auto& l) -> Complex {
        using T = std::decay_t<decltype(l)>;
        if constexpr (std::is_same_v<T, DeterministicLaw>) {
          return l.value;
        } else if constexpr (std::is_same_v<T, FiniteAtomicLaw>) {
          double u = rng.uniform01();
          for (const auto& a : l.atoms) {
            if (u < a.prob) return a.value;
            u -= a.prob;
          }
          return l.atoms.back().value;  // guard against fp residue
        } else if constexpr (std::is_same_v<T, GaussianPerturbedLaw>) {
          return Complex(1.0, l.sigma * rng.normal());
        } else if constexpr (std::is_same_v<T, LogNormalPhaseLaw>) {
          const double g = rng.normal();
          const double h = rng.normal();
          const double mod = std::exp(l.mu + l.sigma * g);
          const double arg = l.tau * h;
          return Complex(mod * std::cos(arg), mod * std::sin(arg));
        } else {
          static_assert(std::is_same_v<T, UnitMeanScaledLaw>);
          return l.scale * sample(*l.base, rng) + l.shift;
        }
      },
      law.variant());
}

Complex mean(const WeightLaw& law) {
  return std::visit(
      [](const auto& l) -> Complex {
        using T = std::decay_t<decltype(l)>;
        if constexpr (std::is_same_v<T, DeterministicLaw>) {
          return l.value;
        } else if constexpr (std::is_same_v<T, FiniteAtomicLaw>) {
          Complex m = 0.0;
          for (const auto& a : l.atoms) m += a.prob * a.value;
          return m;
        } else if constexpr (std::is_same_v<T, GaussianPerturbedLaw>) {
          return Complex(1.0, 0.0);
        } else if constexpr (std::is_same_v<T, LogNormalPhaseLaw>) {
          // E e^{mu + sigma N} = e^{mu + sigma^2/2}; E e^{i tau N'} = e^{-tau^2/2}
          return Complex(std::exp(l.mu + 0.5 * l.sigma * l.sigma - 0.5 * l.tau * l.tau), 0.0);
        } else {
          static_assert(std::is_same_v<T, UnitMeanScaledLaw>);
          return l.scale * mean(*l.base) + l.shift;
        }
      },
      law.variant());
}

double mean_real_part(const WeightLaw& law) { return mean(law).real(); }

namespace {

MomentEstimate exact_moment(double value) {
  return MomentEstimate{value, 0.0, MomentMethod::kExact, false};
}

MomentEstimate monte_carlo_moment(const WeightLaw& law, double p) {
  constexpr std::size_t kDraws = 200000;
  RngStream rng(0x9e3779b97f4a7c15ull, StreamDomain::kMomentMc, law_moment_stream_id(p));
  std::vector<double> vals(kDraws);
  for (std::size_t i = 0; i < kDraws; ++i) {
    vals[i] = abs_pow(std::abs(sample(law, rng)), p);
  }
  const MeanSe ms = mean_se(vals);
  return MomentEstimate{ms.mean, ms.std_error, MomentMethod::kMonteCarlo, false};
}

}  // namespace

MomentEstimate abs_moment(const WeightLaw& law, double p) {
  if (!(p >= 0.0) || !std::isfinite(p)) {
    throw std::domain_error("abs_moment requires finite p >= 0");
  }
  if (p == 0.0) return exact_moment(1.0);
  return std::visit(
      [&law, p](const auto& l) -> MomentEstimate {
        using T = std::decay_t<decltype(l)>;
        if constexpr (std::is_same_v<T, DeterministicLaw>) {
          return exact_moment(std::pow(std::abs(l.value), p));
        } else if constexpr (std::is_same_v<T, FiniteAtomicLaw>) {
          double m = 0.0;
          for (const auto& a : l.atoms) m += a.prob * std::pow(std::abs(a.value), p);
          return exact_moment(m);
        } else if constexpr (std::is_same_v<T, GaussianPerturbedLaw>) {
          // |W|^p = (1 + sigma^2 N^2)^{p/2}
          const double s2 = l.sigma * l.sigma;
          if (p == 2.0) return exact_moment(1.0 + s2);
          if (p == 4.0) return exact_moment(1.0 + 2.0 * s2 + 3.0 * s2 * s2);
          const auto integrand = [s2, p](double x) {
            return std::pow(1.0 + s2 * x * x, 0.5 * p) *
                   std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi);
          };
          const double v = 2.0 * adaptive_simpson(integrand, 0.0, 12.0, 1e-13);
          return MomentEstimate{v, 0.0, MomentMethod::kQuadrature, false};
        } else if constexpr (std::is_same_v<T, LogNormalPhaseLaw>) {
          // |W|^p = e^{p mu + p sigma N}
          return exact_moment(std::exp(p * l.mu + 0.5 * p * p * l.sigma * l.sigma));
        } else {
          static_assert(std::is_same_v<T, UnitMeanScaledLaw>);
          if (p == 2.0) {
            // E|aB + c|^2 = |a|^2 E|B|^2 + 2 Re(a conj(c) E B) + |c|^2
            const MomentEstimate base2 = abs_moment(*l.base, 2.0);
            if (base2.method != MomentMethod::kMonteCarlo && !base2.is_infinite) {
              const Complex bm = mean(*l.base);
              const double v = std::norm(l.scale) * base2.value +
                               2.0 * (l.scale * std::conj(l.shift) * bm).real() +
                               std::norm(l.shift);
              return MomentEstimate{v, std::norm(l.scale) * base2.std_error, base2.method, false};
            }
          }
          return monte_carlo_moment(law, p);
        }
      },
      law.variant());
}

WeightVectorLaw::WeightVectorLaw(int b, std::vector<WeightLaw> comps)
    : base(b), components(std::move(comps)) {
  if (b < 2) throw std::invalid_argument("vector law base must be >= 2");
  if (components.size() != 1 && components.size() != static_cast<std::size_t>(b)) {
    throw std::invalid_argument("vector law needs 1 (iid) or b component laws");
  }
}

std::vector<Complex> sample_vector(const WeightVectorLaw& law, RngStream& rng) {
  std::vector<Complex> out(static_cast<std::size_t>(law.base));
  for (int i = 0; i < law.base; ++i) {
    out[static_cast<std::size_t>(i)] = sample(law.component(i), rng);
  }
  return out;
}

}  // namespace cascade
