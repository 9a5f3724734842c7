#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "cascade/numeric.hpp"
#include "cascade/simulate.hpp"

namespace cascade {

// One function t -> F(t) sampled on a sorted grid; the unit of multifractal
// analysis. Extract a generation from a PathSample or build synthetically.
struct SampledPath {
  int base = 2;
  std::vector<double> grid;
  std::vector<Complex> values;
};

SampledPath path_generation(const PathSample& path, int n);

// Planar diameter of a point set: all-pairs for small counts, convex hull +
// rotating calipers beyond. Exact for collinear/degenerate inputs.
double planar_diameter(std::span<const Complex> pts);

// Osc_F([a, b]) = sup_{s,t} |F(t) - F(s)| over grid points in [a, b];
// requires at least two grid points inside.
double oscillation(const SampledPath& path, double a, double b);

// alpha_w = log_b Osc_F(I_w) / (-n) per w in A^n (closures share endpoint
// samples); +infinity where the oscillation vanishes. Grid must refine T_n.
std::vector<double> coarse_exponents(const SampledPath& path, int n);

struct SpectrumOptions {
  std::vector<double> eps_schedule{0.2, 0.1, 0.05};  // decreasing
  double h_min = 0.0;
  double h_max = 2.0;
  double h_step = 0.05;
};

struct GenerationHistogram {
  int n = 0;
  std::vector<std::pair<double, std::int64_t>> bins;  // (lower edge, count)
  std::int64_t zero_oscillation = 0;                  // alpha = +infinity bucket
};

struct SpectrumReport {
  int n_lo = 0, n_hi = 0;
  std::vector<double> eps_schedule;
  std::vector<double> h_grid;
  // L(h) per epsilon: limsup-in-n surrogate (max over the top half of the
  // n-range) of log_b N(n, eps, h) / n; -infinity encoded by finite=false
  std::vector<std::vector<double>> by_eps;
  std::vector<std::vector<std::uint8_t>> by_eps_finite;
  std::vector<double> headline;               // smallest epsilon row
  std::vector<std::uint8_t> headline_finite;
  double support_lo = 0.0, support_hi = 0.0;  // finite support of the headline
  double gamma_estimate = 0.0;  // min finite coarse exponent at n_hi
  std::vector<GenerationHistogram> histograms;
};

// Large-deviation spectrum via the double-limit schedule: coarse-exponent
// counts N(n, eps, h) = #{w : b^{-n(h+eps)} <= Osc <= b^{-n(h-eps)}}.
SpectrumReport large_deviation_spectrum(const SampledPath& path, int n_lo, int n_hi,
                                        const SpectrumOptions& opts = {});

struct StructureExponent {
  double q = 0.0;
  double tau = 0.0;       // least-squares slope of log_b sum_w Osc^q vs -n
  double std_error = 0.0;
};

// Structure exponents tau(q) for q in [0, 2]; zero-oscillation intervals are
// excluded (q = 0 counts intervals with positive oscillation). Throws when a
// generation has no oscillating interval at all.
std::vector<StructureExponent> structure_exponents(const SampledPath& path,
                                                   std::span<const double> qs, int n_lo,
                                                   int n_hi);

// liminf surrogate of the pointwise exponent at t: min over the top half of
// [n_lo, n_hi] of the coarse exponent of the interval containing t.
double pointwise_holder(const SampledPath& path, double t, int n_lo, int n_hi);

}  // namespace cascade
