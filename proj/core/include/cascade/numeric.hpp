#pragma once

#include <complex>
#include <functional>
#include <span>
#include <vector>

namespace cascade {

using Complex = std::complex<double>;

// Pairwise (cascade) summation: deterministic association order independent
// of thread count, error O(log n) ulps.
double pairwise_sum(std::span<const double> xs);
Complex pairwise_sum(std::span<const Complex> xs);

struct MeanSe {
  double mean = 0.0;
  double std_error = 0.0;  // sample sd / sqrt(n)
};

MeanSe mean_se(std::span<const double> xs);

struct ComplexMeanSe {
  Complex mean;
  double se_re = 0.0;
  double se_im = 0.0;
};

ComplexMeanSe mean_se(std::span<const Complex> xs);

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double slope_se = 0.0;  // from per-point sigmas if given, else residual-based
};

// Ordinary least squares of y against x. If sigmas is nonempty it must match
// ys and the slope standard error propagates those; the fit itself stays
// unweighted (plain least squares).
LineFit least_squares(std::span<const double> xs, std::span<const double> ys,
                      std::span<const double> sigmas = {});

// Golden-section maximum of a unimodal f on [lo, hi]; falls back to the best
// scanned point of a pre-grid when f is not unimodal.
double golden_max(const std::function<double(double)>& f, double lo, double hi,
                  double tol = 1e-10);

// Bisection root of f on [lo, hi]; requires a sign change.
double bisect_root(const std::function<double(double)>& f, double lo, double hi,
                   double tol = 1e-12);

// Adaptive Simpson quadrature with absolute tolerance.
double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double tol = 1e-12);

// Runs fn(i) for i in [0, n); with threads > 1 the index space is split into
// contiguous chunks. fn must write only to slot i of shared output.
void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& fn);

// Effective worker count: explicit > 0 wins, else CASCADE_THREADS, else 1.
int resolve_threads(int requested);

}  // namespace cascade
