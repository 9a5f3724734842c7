#pragma once

#include <complex>
#include <memory>
#include <variant>
#include <vector>

#include "cascade/rng.hpp"

namespace cascade {

using Complex = std::complex<double>;

class WeightLaw;

// W = value almost surely.
struct DeterministicLaw {
  Complex value{1.0, 0.0};
};

// Finitely many complex atoms with probabilities summing to 1.
struct FiniteAtomicLaw {
  struct Atom {
    Complex value;
    double prob;
  };
  std::vector<Atom> atoms;
};

// W = 1 + i*sigma*N with N standard normal; E(W) = 1 for every sigma.
struct GaussianPerturbedLaw {
  double sigma = 0.0;
};

// W = exp(mu + sigma*N + i*tau*N') with independent standard normals.
// mu = -sigma^2/2 + tau^2/2 makes E(W) = e^{mu + sigma^2/2 - tau^2/2} = 1.
struct LogNormalPhaseLaw {
  double sigma = 0.0;
  double tau = 0.0;
  double mu = 0.0;
};

LogNormalPhaseLaw log_normal_phase(double sigma, double tau);

// W = scale*B + shift for a base law B; the factory picks the affine part so
// that E(W) = 1 again after deforming the base.
struct UnitMeanScaledLaw {
  std::shared_ptr<const WeightLaw> base;
  Complex scale{1.0, 0.0};
  Complex shift{0.0, 0.0};
};

// scale = 1/E(B), shift = 0; requires E(B) != 0
UnitMeanScaledLaw unit_mean_by_scaling(WeightLaw base);
// scale = 1, shift = 1 - E(B)
UnitMeanScaledLaw unit_mean_by_shifting(WeightLaw base);

class WeightLaw {
 public:
  using Variant = std::variant<DeterministicLaw, FiniteAtomicLaw, GaussianPerturbedLaw,
                               LogNormalPhaseLaw, UnitMeanScaledLaw>;

  WeightLaw() : v_(DeterministicLaw{}) {}
  WeightLaw(DeterministicLaw l);
  WeightLaw(FiniteAtomicLaw l);
  WeightLaw(GaussianPerturbedLaw l);
  WeightLaw(LogNormalPhaseLaw l);
  WeightLaw(UnitMeanScaledLaw l);

  const Variant& variant() const { return v_; }

 private:
  Variant v_;  // validated on construction, immutable afterwards
};

Complex sample(const WeightLaw& law, RngStream& rng);

// Exact E(W); closed form exists for every law in the catalog.
Complex mean(const WeightLaw& law);
double mean_real_part(const WeightLaw& law);

enum class MomentMethod { kExact, kQuadrature, kMonteCarlo };

struct MomentEstimate {
  double value = 0.0;
  double std_error = 0.0;  // 0 for exact and quadrature results
  MomentMethod method = MomentMethod::kExact;
  bool is_infinite = false;
};

// E|W|^p for p >= 0, with abs_moment(law, 0) == 1 by convention for every
// law (including atoms at zero). Dispatches exact -> quadrature -> Monte
// Carlo; the Monte Carlo fallback uses a fixed internal stream so results
// are deterministic, with the standard error reported.
MomentEstimate abs_moment(const WeightLaw& law, double p);

// Per-level vector of b weight components. One entry means i.i.d. components
// from that law; b entries mean independent per-digit laws.
struct WeightVectorLaw {
  int base = 2;
  std::vector<WeightLaw> components;

  WeightVectorLaw() = default;
  WeightVectorLaw(int b, std::vector<WeightLaw> comps);

  bool iid() const { return components.size() == 1; }
  const WeightLaw& component(int digit) const {
    return iid() ? components.front() : components[static_cast<std::size_t>(digit)];
  }
};

std::vector<Complex> sample_vector(const WeightVectorLaw& law, RngStream& rng);

}  // namespace cascade
