#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>
#include <vector>

#include "cascade/analysis.hpp"
#include "cascade/rng.hpp"
#include "support/synthetic.hpp"

using namespace cascade;
using cascade::testing::constant_path;
using cascade::testing::identity_path;
using cascade::testing::chord_split_path;

namespace {

BadicIndependentModel canonical() {
  FiniteAtomicLaw law;
  law.atoms = {{Complex(0.5, 0.0), 0.5}, {Complex(1.5, 0.0), 0.5}};
  return badic_iid(2, WeightLaw(law));
}

double brute_diameter(const std::vector<Complex>& pts) {
  double best = 0.0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    for (std::size_t j = i + 1; j < pts.size(); ++j) {
      best = std::max(best, std::abs(pts[i] - pts[j]));
    }
  }
  return best;
}

}  // namespace

TEST_CASE("planar diameter: degenerate and tiny inputs") {
  CHECK(planar_diameter(std::vector<Complex>{}) == 0.0);
  CHECK(planar_diameter(std::vector<Complex>{{2.0, 3.0}}) == 0.0);
  CHECK(planar_diameter(std::vector<Complex>{{0.0, 0.0}, {3.0, 4.0}}) ==
        doctest::Approx(5.0).epsilon(1e-15));
  // coincident points
  const std::vector<Complex> same(60, Complex(1.0, -2.0));
  CHECK(planar_diameter(same) == 0.0);
  // collinear cloud large enough to take the convex-hull route
  std::vector<Complex> line;
  for (int i = 0; i < 200; ++i) line.push_back(Complex(i * 0.01, i * 0.02));
  CHECK(planar_diameter(line) ==
        doctest::Approx(std::abs(line.front() - line.back())).epsilon(1e-13));
}

TEST_CASE("planar diameter matches brute force on random clouds") {
  RngStream rng(2024, StreamDomain::kScratch, 30);
  for (int rep = 0; rep < 40; ++rep) {
    const std::size_t count = 3 + static_cast<std::size_t>(rng.uniform01() * 300);
    std::vector<Complex> pts(count);
    for (auto& p : pts) {
      p = Complex(rng.normal(), rng.normal());
      if (rng.uniform01() < 0.2 && &p != pts.data()) p = pts.front();  // duplicates
    }
    const double hull = planar_diameter(pts);
    const double brute = brute_diameter(pts);
    CHECK(hull == doctest::Approx(brute).epsilon(1e-12));
  }
}

TEST_CASE("path_generation extracts one stored row") {
  const PathSample path =
      build_paths(canonical(), ReferenceMeasure::lebesgue(), 3, 5);
  const SampledPath sp = path_generation(path, 4);
  CHECK(sp.base == 2);
  CHECK(sp.grid == path.grid);
  CHECK(sp.values == path.gen(4));
}

TEST_CASE("oscillation is the image diameter over the window") {
  const SampledPath ident = identity_path(2, 4);
  CHECK(oscillation(ident, 0.25, 0.5) == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(oscillation(ident, 0.0, 1.0) == doctest::Approx(1.0).epsilon(1e-15));

  SampledPath z = identity_path(2, 1);  // three grid points
  z.values = {Complex(0.0, 0.0), Complex(0.0, 1.0), Complex(1.0, 1.0)};
  CHECK(oscillation(z, 0.0, 1.0) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));

  CHECK_THROWS_AS(oscillation(ident, 0.5, 0.25), std::invalid_argument);
  // a window narrower than one grid step holds fewer than two samples
  CHECK_THROWS_AS(oscillation(ident, 0.26, 0.28), std::invalid_argument);
}

TEST_CASE("coarse exponents: identity is 1, constants are +infinity") {
  const SampledPath ident = identity_path(2, 6);
  for (int n : {1, 3, 6}) {
    const std::vector<double> alphas = coarse_exponents(ident, n);
    REQUIRE(alphas.size() == static_cast<std::size_t>(1) << n);
    for (double a : alphas) CHECK(a == doctest::Approx(1.0).epsilon(1e-12));
  }

  const SampledPath flat = constant_path(2, 5, Complex(0.7, -0.1));
  for (double a : coarse_exponents(flat, 3)) {
    CHECK(a == std::numeric_limits<double>::infinity());
  }

  CHECK_THROWS_AS(coarse_exponents(ident, 9), std::invalid_argument);
}

TEST_CASE("oscillations are subadditive across the child split") {
  // diam(A union B) <= diam A + diam B when the closures share a point
  RngStream rng(8671, StreamDomain::kScratch, 31);
  SampledPath p = identity_path(2, 7);
  for (auto& v : p.values) v = Complex(rng.normal(), rng.normal());
  for (int n : {2, 4, 6}) {
    const auto parents = coarse_exponents(p, n);
    const auto kids = coarse_exponents(p, n + 1);
    for (std::size_t w = 0; w < parents.size(); ++w) {
      const double parent_osc = std::pow(2.0, -static_cast<double>(n) * parents[w]);
      const double kid_sum = std::pow(2.0, -(n + 1.0) * kids[2 * w]) +
                             std::pow(2.0, -(n + 1.0) * kids[2 * w + 1]);
      CHECK(parent_osc <= kid_sum + 1e-12);
    }
  }
}

TEST_CASE("large-deviation spectrum localizes the identity path at h = 1") {
  const SpectrumReport s = large_deviation_spectrum(identity_path(2, 9), 2, 9);
  REQUIRE(s.h_grid.size() == s.headline.size());
  bool saw_one = false;
  for (std::size_t i = 0; i < s.h_grid.size(); ++i) {
    if (std::abs(s.h_grid[i] - 1.0) < 1e-9) {
      saw_one = true;
      REQUIRE(s.headline_finite[i]);
      CHECK(s.headline[i] == doctest::Approx(1.0).epsilon(1e-12));
    } else if (std::abs(s.h_grid[i] - 1.0) > 0.1 + 1e-9) {
      CHECK_FALSE(s.headline_finite[i]);
    }
  }
  CHECK(saw_one);
  CHECK(s.gamma_estimate == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(s.support_lo >= 0.85);
  CHECK(s.support_hi <= 1.15);
  // epsilon rows are ordered: wider windows admit no smaller counts
  REQUIRE(s.by_eps.size() == 3);
  for (std::size_t i = 0; i < s.h_grid.size(); ++i) {
    if (s.by_eps_finite[2][i]) {
      REQUIRE(s.by_eps_finite[0][i]);
      CHECK(s.by_eps[0][i] >= s.by_eps[2][i] - 1e-12);
    }
  }
}

TEST_CASE("constant paths put all mass in the zero-oscillation bucket") {
  const SpectrumReport s =
      large_deviation_spectrum(constant_path(2, 6, Complex(0.0, 0.0)), 2, 6);
  for (const auto& h : s.histograms) {
    CHECK(h.zero_oscillation == std::int64_t{1} << h.n);
    CHECK(h.bins.empty());
  }
  for (std::size_t i = 0; i < s.h_grid.size(); ++i) CHECK_FALSE(s.headline_finite[i]);
}

TEST_CASE("chord-split path concentrates near its exponent") {
  const SpectrumReport s = large_deviation_spectrum(chord_split_path(12, 0.5), 6, 12);
  double best_h = -1.0, best_l = -1e300;
  for (std::size_t i = 0; i < s.h_grid.size(); ++i) {
    if (s.headline_finite[i] && s.headline[i] > best_l) {
      best_l = s.headline[i];
      best_h = s.h_grid[i];
    }
  }
  CHECK(best_h >= 0.4);
  CHECK(best_h <= 0.6);
  CHECK(best_l > 0.85);
}

TEST_CASE("structure exponents: identity gives tau(q) = q - 1 exactly") {
  const SampledPath ident = identity_path(2, 8);
  const std::vector<double> qs{0.0, 0.5, 1.0, 2.0};
  const auto taus = structure_exponents(ident, qs, 2, 8);
  REQUIRE(taus.size() == 4);
  for (std::size_t i = 0; i < qs.size(); ++i) {
    CHECK(taus[i].q == qs[i]);
    CHECK(taus[i].tau == doctest::Approx(qs[i] - 1.0).epsilon(1e-10));
    CHECK(taus[i].std_error == doctest::Approx(0.0).epsilon(1e-10));
  }

  CHECK_THROWS_AS(structure_exponents(ident, std::vector<double>{2.5}, 2, 8),
                  std::domain_error);
  CHECK_THROWS_AS(
      structure_exponents(constant_path(2, 6, Complex(1.0, 0.0)), qs, 2, 6),
      std::domain_error);
}

TEST_CASE("structure exponent at q = 2 tracks the closed moment rate") {
  const PathSample path =
      build_paths(canonical(), ReferenceMeasure::lebesgue(), 1, 10);
  const SampledPath sp = path_generation(path, 10);
  const auto taus = structure_exponents(sp, std::vector<double>{1.0, 2.0}, 4, 10);
  // total variation of a conservative cascade is constant: tau(1) ~ 0
  CHECK(std::abs(taus[0].tau) < 0.05);
  CHECK(std::abs(taus[1].tau - 0.6780719051126377) < 0.12);
}

TEST_CASE("pointwise exponent surrogate at interior points") {
  const SampledPath ident = identity_path(2, 8);
  for (double t : {0.1, 0.5, 0.9}) {
    CHECK(pointwise_holder(ident, t, 2, 8) == doctest::Approx(1.0).epsilon(1e-12));
  }
}
