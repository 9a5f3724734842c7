#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "cascade/numeric.hpp"
#include "cascade/weights.hpp"

using namespace cascade;

namespace {

WeightLaw canonical_atoms() {
  FiniteAtomicLaw law;
  law.atoms = {{Complex(0.5, 0.0), 0.5}, {Complex(1.5, 0.0), 0.5}};
  return WeightLaw(law);
}

WeightLaw degenerate_atoms() {
  FiniteAtomicLaw law;
  law.atoms = {{Complex(0.0, 0.0), 0.75}, {Complex(4.0, 0.0), 0.25}};
  return WeightLaw(law);
}

}  // namespace

TEST_CASE("closed-form means") {
  CHECK(mean(WeightLaw(DeterministicLaw{Complex(2.0, -1.0)})) == Complex(2.0, -1.0));
  CHECK(mean(canonical_atoms()) == Complex(1.0, 0.0));
  CHECK(mean(degenerate_atoms()) == Complex(1.0, 0.0));
  CHECK(mean(WeightLaw(GaussianPerturbedLaw{0.7})) == Complex(1.0, 0.0));

  const LogNormalPhaseLaw ln = log_normal_phase(0.3, 0.4);
  CHECK(ln.mu == doctest::Approx((0.4 * 0.4 - 0.3 * 0.3) / 2.0).epsilon(1e-15));
  CHECK(mean(WeightLaw(ln)).real() == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(mean(WeightLaw(ln)).imag() == doctest::Approx(0.0).epsilon(1e-14));
}

TEST_CASE("unit-mean factories renormalize a skewed base") {
  FiniteAtomicLaw base;
  base.atoms = {{Complex(1.0, 1.0), 0.5}, {Complex(3.0, -1.0), 0.5}};  // mean 2
  const WeightLaw scaled(unit_mean_by_scaling(WeightLaw(base)));
  CHECK(std::abs(mean(scaled) - Complex(1.0, 0.0)) < 1e-14);
  const WeightLaw shifted(unit_mean_by_shifting(WeightLaw(base)));
  CHECK(std::abs(mean(shifted) - Complex(1.0, 0.0)) < 1e-14);

  const WeightLaw zero_mean(FiniteAtomicLaw{{{Complex(1, 0), 0.5}, {Complex(-1, 0), 0.5}}});
  CHECK_THROWS_AS(unit_mean_by_scaling(zero_mean), std::invalid_argument);
}

TEST_CASE("abs_moment closed forms and the p = 0 convention") {
  // E|W|^0 = 1 for every law, including mass at zero
  CHECK(abs_moment(degenerate_atoms(), 0.0).value == 1.0);
  CHECK(abs_moment(WeightLaw(DeterministicLaw{Complex(0.0, 0.0)}), 0.0).value == 1.0);

  const MomentEstimate m2 = abs_moment(canonical_atoms(), 2.0);
  CHECK(m2.value == doctest::Approx(1.25).epsilon(1e-15));
  CHECK(m2.method == MomentMethod::kExact);
  CHECK(m2.std_error == 0.0);

  // degenerate atoms: E|W|^p = 4^(p-1)
  for (double p : {0.5, 1.0, 2.0, 3.0}) {
    CHECK(abs_moment(degenerate_atoms(), p).value ==
          doctest::Approx(std::pow(4.0, p - 1.0)).epsilon(1e-14));
  }

  CHECK(abs_moment(WeightLaw(GaussianPerturbedLaw{0.5}), 2.0).value ==
        doctest::Approx(1.25).epsilon(1e-15));
  const double s2 = 0.25;
  CHECK(abs_moment(WeightLaw(GaussianPerturbedLaw{0.5}), 4.0).value ==
        doctest::Approx(1.0 + 2.0 * s2 + 3.0 * s2 * s2).epsilon(1e-15));

  // log-normal modulus: E|W|^p = exp(p mu + p^2 sigma^2 / 2)
  const WeightLaw ln(log_normal_phase(0.3, 0.4));
  const double mu = (0.16 - 0.09) / 2.0;
  CHECK(abs_moment(ln, 2.0).value ==
        doctest::Approx(std::exp(2.0 * mu + 2.0 * 0.09)).epsilon(1e-14));

  CHECK_THROWS_AS(abs_moment(canonical_atoms(), -1.0), std::domain_error);
}

TEST_CASE("gaussian-perturbed fractional moments fall back to quadrature") {
  // E(1 + s^2 N^2)^{p/2} at p = 1, s = 1: quadrature vs dense Monte Carlo
  const WeightLaw law(GaussianPerturbedLaw{1.0});
  const MomentEstimate m = abs_moment(law, 1.0);
  CHECK(m.method == MomentMethod::kQuadrature);
  RngStream rng(321, StreamDomain::kScratch, 5);
  std::vector<double> draws(400000);
  for (auto& d : draws) {
    const double x = rng.normal();
    d = std::sqrt(1.0 + x * x);
  }
  const MeanSe ms = mean_se(draws);
  CHECK(std::abs(m.value - ms.mean) < 5.0 * ms.std_error);
}

TEST_CASE("monte carlo moments are deterministic and consistent") {
  FiniteAtomicLaw base;
  base.atoms = {{Complex(1.0, 0.0), 0.5}, {Complex(3.0, 0.0), 0.5}};  // mean 2
  const WeightLaw law(unit_mean_by_scaling(WeightLaw(base)));

  const MomentEstimate a = abs_moment(law, 1.3);
  const MomentEstimate b = abs_moment(law, 1.3);
  CHECK(a.value == b.value);  // fixed internal stream
  CHECK(a.method == MomentMethod::kMonteCarlo);
  CHECK(a.std_error > 0.0);

  // exact value: atoms scale to 1/2 and 3/2
  const double exact = 0.5 * std::pow(0.5, 1.3) + 0.5 * std::pow(1.5, 1.3);
  CHECK(std::abs(a.value - exact) < 5.0 * a.std_error);
}

TEST_CASE("sampling matches the stated laws") {
  RngStream rng(8, StreamDomain::kScratch, 6);
  const int n = 100000;

  std::vector<Complex> atom_draws(n);
  for (auto& z : atom_draws) z = sample(canonical_atoms(), rng);
  int lo = 0;
  for (const Complex& z : atom_draws) {
    const bool is_lo = std::abs(z - Complex(0.5, 0.0)) < 1e-15;
    const bool is_hi = std::abs(z - Complex(1.5, 0.0)) < 1e-15;
    REQUIRE((is_lo || is_hi));
    lo += is_lo ? 1 : 0;
  }
  CHECK(std::abs(lo / static_cast<double>(n) - 0.5) < 4.0 * 0.5 / std::sqrt(n));

  std::vector<Complex> gp(n);
  for (auto& z : gp) z = sample(WeightLaw(GaussianPerturbedLaw{0.5}), rng);
  const ComplexMeanSe gms = mean_se(gp);
  CHECK(std::abs(gms.mean.real() - 1.0) < 4.0 * gms.se_re + 1e-12);
  CHECK(std::abs(gms.mean.imag()) < 4.0 * gms.se_im);
  for (const Complex& z : gp) REQUIRE(z.real() == 1.0);  // perturbation is imaginary

  std::vector<Complex> lns(n);
  for (auto& z : lns) z = sample(WeightLaw(log_normal_phase(0.3, 0.4)), rng);
  const ComplexMeanSe lms = mean_se(lns);
  CHECK(std::abs(lms.mean.real() - 1.0) < 4.0 * lms.se_re);
  CHECK(std::abs(lms.mean.imag()) < 4.0 * lms.se_im);
}

TEST_CASE("weight vectors honor per-digit component laws") {
  const WeightVectorLaw iid(2, {canonical_atoms()});
  CHECK(iid.iid());
  CHECK(&iid.component(0) == &iid.component(1));

  const WeightVectorLaw per_digit(
      2, {WeightLaw(DeterministicLaw{Complex(2.0, 0.0)}),
          WeightLaw(DeterministicLaw{Complex(0.0, 0.0)})});
  CHECK_FALSE(per_digit.iid());
  RngStream rng(4, StreamDomain::kScratch, 9);
  const std::vector<Complex> v = sample_vector(per_digit, rng);
  REQUIRE(v.size() == 2);
  CHECK(v[0] == Complex(2.0, 0.0));
  CHECK(v[1] == Complex(0.0, 0.0));

  CHECK_THROWS_AS(WeightVectorLaw(2, {canonical_atoms(), canonical_atoms(),
                                      canonical_atoms()}),
                  std::invalid_argument);
}
