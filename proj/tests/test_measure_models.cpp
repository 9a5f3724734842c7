#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "cascade/measure.hpp"
#include "cascade/models.hpp"
#include "cascade/numeric.hpp"

using namespace cascade;

TEST_CASE("lebesgue cell masses are b^-n") {
  const ReferenceMeasure leb = ReferenceMeasure::lebesgue();
  CHECK(leb.is_lebesgue());
  CHECK(leb.cell_mass(Word(2, {1, 0, 1})) == 0.125);
  CHECK(leb.cell_mass(Word(3, {2})) == doctest::Approx(1.0 / 3.0).epsilon(1e-16));
}

TEST_CASE("bernoulli product measures multiply per-level splits") {
  const ReferenceMeasure m(2, {{0.3, 0.7}, {0.5, 0.5}}, true);
  CHECK_FALSE(m.is_lebesgue());
  CHECK(m.cell_mass(Word(2, {0})) == doctest::Approx(0.3).epsilon(1e-15));
  CHECK(m.cell_mass(Word(2, {0, 1})) == doctest::Approx(0.3 * 0.5).epsilon(1e-15));
  // cycling: level 2 reuses the first split
  CHECK(m.cell_mass(Word(2, {0, 1, 1})) == doctest::Approx(0.3 * 0.5 * 0.7).epsilon(1e-15));

  const ReferenceMeasure clamped(2, {{0.3, 0.7}, {0.5, 0.5}}, false);
  CHECK(clamped.cell_mass(Word(2, {0, 1, 1})) ==
        doctest::Approx(0.3 * 0.5 * 0.5).epsilon(1e-15));

  CHECK_THROWS_AS(ReferenceMeasure(2, {{0.3, 0.6}}, true), std::invalid_argument);
  CHECK_THROWS_AS(ReferenceMeasure(2, {{-0.1, 1.1}}, true), std::invalid_argument);
  CHECK_THROWS_AS(ReferenceMeasure(2, {{0.5, 0.25, 0.25}}, true), std::invalid_argument);
}

TEST_CASE("badic level laws cycle or clamp") {
  const WeightVectorLaw a(2, {WeightLaw(DeterministicLaw{Complex(2.0, 0.0)})});
  const WeightVectorLaw b(2, {WeightLaw(DeterministicLaw{Complex(3.0, 0.0)})});
  BadicIndependentModel m;
  m.base = 2;
  m.levels = {a, b};
  m.cycle = true;
  CHECK(std::get<DeterministicLaw>(m.level(2).component(0).variant()).value ==
        Complex(2.0, 0.0));
  m.cycle = false;
  CHECK(std::get<DeterministicLaw>(m.level(2).component(0).variant()).value ==
        Complex(3.0, 0.0));
}

TEST_CASE("intensity band masses match closed integrals") {
  const IntensityMeasure si = IntensityMeasure::scale_invariant(2.0);
  // delta dr / r^2 over (lo, hi]
  CHECK(si.band_mass(0.25, 0.5) == doctest::Approx(2.0 * (4.0 - 2.0)).epsilon(1e-12));
  CHECK(si.band_cone_mass(0.25, 0.5) == doctest::Approx(2.0 * std::log(2.0)).epsilon(1e-12));
  CHECK(si.is_scale_invariant());
  CHECK(si.delta() == 2.0);

  const IntensityMeasure pl(IntensityMeasure::PowerLaw{3.0, 1.5});
  // 3 r^-1.5 dr over (a, b] = 6 (sqrt(b)... ) -> 3 * [ -2 r^-0.5 ]
  const double expect = 3.0 * 2.0 * (1.0 / std::sqrt(0.25) - 1.0 / std::sqrt(0.5));
  CHECK(pl.band_mass(0.25, 0.5) == doctest::Approx(expect).epsilon(1e-12));
  CHECK_FALSE(pl.is_scale_invariant());

  IntensityMeasure::Atoms atoms;
  atoms.atoms = {{0.3, 1.5}, {0.6, 2.0}};
  const IntensityMeasure am(atoms);
  CHECK(am.band_mass(0.25, 0.5) == doctest::Approx(1.5).epsilon(1e-15));
  CHECK(am.band_mass(0.25, 0.61) == doctest::Approx(3.5).epsilon(1e-15));
  CHECK(am.band_cone_mass(0.25, 0.61) == doctest::Approx(0.3 * 1.5 + 0.6 * 2.0).epsilon(1e-15));

  CHECK_THROWS_AS(si.band_mass(0.0, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(si.band_mass(0.5, 0.25), std::invalid_argument);
}

TEST_CASE("sample_r draws from the restricted band") {
  const IntensityMeasure si = IntensityMeasure::scale_invariant(1.0);
  RngStream rng(31, StreamDomain::kScratch, 10);
  const int n = 50000;
  std::vector<double> rs(n);
  for (auto& r : rs) {
    r = si.sample_r(0.25, 0.5, rng);
    REQUIRE(r > 0.25);
    REQUIRE(r <= 0.5);
  }
  // conditional mean of r under dr/r^2 on (a, b]: ln(b/a) / (1/a - 1/b)
  const double expect = std::log(2.0) / (4.0 - 2.0);
  const MeanSe ms = mean_se(rs);
  CHECK(std::abs(ms.mean - expect) < 4.0 * ms.std_error);
}

TEST_CASE("model validation rejects malformed structures") {
  CompoundPoissonModel cpc;
  cpc.base = 2;
  cpc.beta = 0.0;
  CHECK_THROWS_AS(validate_model(CascadeModel(cpc)), std::invalid_argument);

  LogInfDivisibleModel bad_gauss;
  bad_gauss.gaussian = {{{1.0, 2.0}, {2.0, 1.0}}};  // not PSD
  CHECK_THROWS_AS(validate_model(CascadeModel(bad_gauss)), std::invalid_argument);

  LogInfDivisibleModel bad_cells;
  bad_cells.m_cells = 0;
  CHECK_THROWS_AS(validate_model(CascadeModel(bad_cells)), std::invalid_argument);

  BadicIndependentModel no_levels;
  no_levels.base = 2;
  CHECK_THROWS_AS(validate_model(CascadeModel(no_levels)), std::invalid_argument);
}

TEST_CASE("pairing rules: bernoulli measures need a matching badic base") {
  const auto badic = badic_iid(2, WeightLaw(DeterministicLaw{}));
  const ReferenceMeasure bern(2, {{0.3, 0.7}}, true);
  CHECK_NOTHROW(validate_pairing(CascadeModel(badic), bern));
  CHECK_NOTHROW(validate_pairing(CascadeModel(badic), ReferenceMeasure::lebesgue()));

  const auto badic3 = badic_iid(3, WeightLaw(DeterministicLaw{}));
  CHECK_THROWS_AS(validate_pairing(CascadeModel(badic3), bern), std::invalid_argument);

  CompoundPoissonModel cpc;
  cpc.base = 2;
  cpc.beta = 1.0;
  cpc.mark = WeightLaw(DeterministicLaw{});
  CHECK_THROWS_AS(validate_pairing(CascadeModel(cpc), bern), std::invalid_argument);
  CHECK_NOTHROW(validate_pairing(CascadeModel(cpc), ReferenceMeasure::lebesgue()));
}

TEST_CASE("levy exponents reproduce hand-computed gaussian and jump cases") {
  LogInfDivisibleModel g;
  g.base = 2;
  g.drift = {-0.25, 0.0};
  g.gaussian = {{{0.5, 0.0}, {0.0, 0.0}}};
  // psi(-ip, 0) = a1 p + s1^2 p^2 / 2; normalizer Re psi(-i, 1) = a1 + s1^2/2
  for (double p : {0.5, 1.0, 2.0, 3.0}) {
    const double expect = 0.5 * 0.5 * (p * p - p);
    CHECK(levy_moment_exponent(g, p) == doctest::Approx(expect).epsilon(1e-13));
  }
  CHECK(levy_moment_exponent(g, 1.0) == doctest::Approx(0.0).epsilon(1e-14));

  LogInfDivisibleModel j;
  j.base = 2;
  j.jumps = {{{0.2, -0.1}, 1.2}};
  // small jump (|x| <= 1): compensated
  const double x1 = 0.2, x2 = -0.1, mass = 1.2;
  const auto raw = [&](double p) { return mass * (std::exp(p * x1) - 1.0 - p * x1); };
  const double re_psi0 = mass * (std::exp(x1) * std::cos(x2) - 1.0 - x1);
  for (double p : {0.5, 2.0}) {
    CHECK(levy_moment_exponent(j, p) ==
          doctest::Approx(raw(p) - p * re_psi0).epsilon(1e-12));
  }
}

TEST_CASE("closed-form weight means flag mis-normalized families") {
  FiniteAtomicLaw skew;
  skew.atoms = {{Complex(0.6, 0.0), 0.5}, {Complex(1.6, 0.0), 0.5}};  // mean 1.1
  const auto model = badic_iid(2, WeightLaw(skew));
  const auto m = closed_form_weight_mean(CascadeModel(model));
  REQUIRE(m.has_value());
  CHECK(m->real() == doctest::Approx(1.1).epsilon(1e-15));
}

TEST_CASE("statistical self-similarity reflects the construction") {
  CHECK(statistically_self_similar(CascadeModel(badic_iid(2, WeightLaw(DeterministicLaw{})))));

  BadicIndependentModel two_levels;
  two_levels.base = 2;
  two_levels.levels = {WeightVectorLaw(2, {WeightLaw(DeterministicLaw{})}),
                       WeightVectorLaw(2, {WeightLaw(GaussianPerturbedLaw{0.1})})};
  CHECK_FALSE(statistically_self_similar(CascadeModel(two_levels)));

  CompoundPoissonModel cpc;
  cpc.base = 2;
  cpc.beta = 1.0;
  cpc.mark = WeightLaw(DeterministicLaw{});
  cpc.intensity = IntensityMeasure::scale_invariant(1.0);
  CHECK(statistically_self_similar(CascadeModel(cpc)));
  cpc.intensity = IntensityMeasure(IntensityMeasure::PowerLaw{1.0, 1.5});
  CHECK_FALSE(statistically_self_similar(CascadeModel(cpc)));

  CHECK(statistically_self_similar(CascadeModel(LogInfDivisibleModel{})));
}
