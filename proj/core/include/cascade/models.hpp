#pragma once

#include <array>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "cascade/measure.hpp"
#include "cascade/weights.hpp"

namespace cascade {

// Multiplicative family on the b-adic tree: at generation k each node w in
// A^k draws an independent weight vector; P_{k+1}(t) multiplies the
// component picked by digit k+1 of t.
struct BadicIndependentModel {
  int base = 2;
  std::vector<WeightVectorLaw> levels;  // per-level vector laws
  bool cycle = true;                    // repeat levels, else clamp to last

  const WeightVectorLaw& level(int k) const;  // 0-based generation index
};

BadicIndependentModel badic_iid(int base, WeightLaw w);

// Radon intensity on (0,1] for the point-field families. Catalog:
// scale-invariant delta*dr/r^2, power densities c*r^-alpha dr, and finite
// atom lists.
class IntensityMeasure {
 public:
  struct ScaleInvariant {
    double delta = 1.0;
  };
  struct PowerLaw {
    double coeff = 1.0;
    double exponent = 2.0;  // nu(dr) = coeff * r^-exponent dr
  };
  struct Atoms {
    struct Atom {
      double r;
      double mass;
    };
    std::vector<Atom> atoms;
  };

  IntensityMeasure() : v_(ScaleInvariant{}) {}
  IntensityMeasure(ScaleInvariant s);
  IntensityMeasure(PowerLaw p);
  IntensityMeasure(Atoms a);

  static IntensityMeasure scale_invariant(double delta) {
    return IntensityMeasure(ScaleInvariant{delta});
  }

  bool is_scale_invariant() const;
  double delta() const;  // only for scale-invariant

  // nu((r_lo, r_hi]) with 0 < r_lo < r_hi <= 1
  double band_mass(double r_lo, double r_hi) const;
  // integral of r d nu over (r_lo, r_hi]; the per-unit-width cone mass
  double band_cone_mass(double r_lo, double r_hi) const;
  // draw from nu restricted to (r_lo, r_hi], normalized
  double sample_r(double r_lo, double r_hi, RngStream& rng) const;

  const std::variant<ScaleInvariant, PowerLaw, Atoms>& variant() const { return v_; }

 private:
  std::variant<ScaleInvariant, PowerLaw, Atoms> v_;
};

// Poisson point field S in the strip [−width/2, 1+width/2] x (0,1] with
// intensity lambda x nu; P_n multiplies marks of points whose truncated cone
// at t contains them, times the exp normalizer that restores E P_n = 1.
struct CompoundPoissonModel {
  int base = 2;
  double beta = 1.0;  // cone aperture
  IntensityMeasure intensity;
  WeightLaw mark;
};

// Infinitely divisible independently scattered field on the strip; P_n(t) =
// exp(rho_1(cone) + i rho_2(cone)). Aperture and intensity are pinned to
// beta = delta = 1. The planar Levy triplet is (drift a, Gaussian form Q,
// finite jump measure pi); jumps with |x| <= 1 are compensated.
struct LogInfDivisibleModel {
  struct JumpAtom {
    std::array<double, 2> x;
    double mass;
  };

  int base = 2;
  std::array<double, 2> drift{0.0, 0.0};
  std::array<std::array<double, 2>, 2> gaussian{{{0.0, 0.0}, {0.0, 0.0}}};  // PSD
  std::vector<JumpAtom> jumps;
  int m_cells = 8;  // cells per b-adic width in the band discretization
};

using CascadeModel =
    std::variant<BadicIndependentModel, CompoundPoissonModel, LogInfDivisibleModel>;

int base_of(const CascadeModel& model);
double cone_aperture(const CascadeModel& model);  // beta; 0 for b-adic

// Structural validation; throws std::invalid_argument with a reason. Unit
// mean is deliberately not enforced here: the martingale check is the
// runtime detector, and cone marks never require it.
void validate_model(const CascadeModel& model);

// Ensures the model/measure combination is simulable: Bernoulli measures
// pair only with b-adic models of the same base.
void validate_pairing(const CascadeModel& model, const ReferenceMeasure& measure);

// Raw Levy exponent psi(xi) of the planar triplet, analytically continued:
// the Gaussian form enters bilinearly as xi^T Q xi (no conjugation), so
// psi(-ip, 0) recovers real exponential moments.
Complex levy_exponent(const LogInfDivisibleModel& m, Complex xi1, double xi2);

// psi(xi0) with xi0 = (-i, 1); the normalization subtracts this via the
// equivalent drift shift a -> a - (Re psi0, Im psi0).
Complex levy_normalizer(const LogInfDivisibleModel& m);

// Normalized real moment exponent: log E|P|^p per unit of cone mass,
// i.e. psi_eff(-ip, 0) = psi(-ip, 0) - p * Re psi(xi0).
double levy_moment_exponent(const LogInfDivisibleModel& m, double p);

// Mean weight across the shipped families where a closed form exists;
// used for the martingale warning at config time.
std::optional<Complex> closed_form_weight_mean(const CascadeModel& model);

// Whether the law of P_{k+n}/P_k on a b-adic cell matches generation n on
// [0,1] up to rescaling. Holds for single-level b-adic families, scale
// invariant point-field intensities, and always for the log-ID family,
// whose aperture and intensity are pinned. Checks that assume it are
// skipped when this is false.
bool statistically_self_similar(const CascadeModel& model);

}  // namespace cascade
