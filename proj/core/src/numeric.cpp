#include "cascade/numeric.hpp"

#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <thread>

namespace cascade {

namespace {

template <typename T>
T pairwise_impl(std::span<const T> xs) {
  const std::size_t n = xs.size();
  if (n == 0) return T{};
  if (n <= 8) {
    T s = xs[0];
    for (std::size_t i = 1; i < n; ++i) s += xs[i];
    return s;
  }
  const std::size_t half = n / 2;
  return pairwise_impl(xs.first(half)) + pairwise_impl(xs.subspan(half));
}

}  // namespace

double pairwise_sum(std::span<const double> xs) { return pairwise_impl(xs); }
Complex pairwise_sum(std::span<const Complex> xs) { return pairwise_impl(xs); }

MeanSe mean_se(std::span<const double> xs) {
  const std::size_t n = xs.size();
  if (n == 0) throw std::invalid_argument("mean_se of empty sample");
  MeanSe r;
  r.mean = pairwise_sum(xs) / static_cast<double>(n);
  if (n == 1) return r;
  std::vector<double> sq(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double d = xs[i] - r.mean;
    sq[i] = d * d;
  }
  const double var = pairwise_sum(sq) / static_cast<double>(n - 1);
  r.std_error = std::sqrt(var / static_cast<double>(n));
  return r;
}

ComplexMeanSe mean_se(std::span<const Complex> xs) {
  const std::size_t n = xs.size();
  if (n == 0) throw std::invalid_argument("mean_se of empty sample");
  ComplexMeanSe r;
  r.mean = pairwise_sum(xs) / static_cast<double>(n);
  if (n == 1) return r;
  std::vector<double> sq_re(n), sq_im(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double dr = xs[i].real() - r.mean.real();
    const double di = xs[i].imag() - r.mean.imag();
    sq_re[i] = dr * dr;
    sq_im[i] = di * di;
  }
  const double nm1 = static_cast<double>(n - 1);
  r.se_re = std::sqrt(pairwise_sum(std::span<const double>(sq_re)) / nm1 / static_cast<double>(n));
  r.se_im = std::sqrt(pairwise_sum(std::span<const double>(sq_im)) / nm1 / static_cast<double>(n));
  return r;
}

LineFit least_squares(std::span<const double> xs, std::span<const double> ys,
                      std::span<const double> sigmas) {
  const std::size_t n = xs.size();
  if (n != ys.size() || n < 2) throw std::invalid_argument("least_squares needs n >= 2 matching points");
  if (!sigmas.empty() && sigmas.size() != n) {
    throw std::invalid_argument("sigma vector size mismatch");
  }
  double sx = 0, sy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sx += xs[i];
    sy += ys[i];
  }
  const double mx = sx / static_cast<double>(n);
  const double my = sy / static_cast<double>(n);
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  if (sxx == 0.0) throw std::invalid_argument("least_squares with degenerate x");
  LineFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  if (!sigmas.empty()) {
    // Var(slope) = sum_i w_i^2 sigma_i^2 with w_i = (x_i - mx)/Sxx
    double v = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const double w = (xs[i] - mx) / sxx;
      v += w * w * sigmas[i] * sigmas[i];
    }
    fit.slope_se = std::sqrt(v);
  } else if (n > 2) {
    double rss = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const double e = ys[i] - fit.intercept - fit.slope * xs[i];
      rss += e * e;
    }
    fit.slope_se = std::sqrt(rss / static_cast<double>(n - 2) / sxx);
  }
  return fit;
}

double golden_max(const std::function<double(double)>& f, double lo, double hi,
                  double tol) {
  if (!(lo < hi)) throw std::invalid_argument("golden_max needs lo < hi");
  // pre-scan bracketing: unimodality is not guaranteed by callers
  constexpr int kScan = 65;
  double best_x = lo, best_f = f(lo);
  for (int i = 1; i < kScan; ++i) {
    const double x = lo + (hi - lo) * i / (kScan - 1);
    const double v = f(x);
    if (v > best_f) {
      best_f = v;
      best_x = x;
    }
  }
  const double step = (hi - lo) / (kScan - 1);
  double a = std::max(lo, best_x - step);
  double b = std::min(hi, best_x + step);
  constexpr double kInvPhi = 0.6180339887498949;
  double x1 = b - kInvPhi * (b - a);
  double x2 = a + kInvPhi * (b - a);
  double f1 = f(x1), f2 = f(x2);
  while (b - a > tol) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + kInvPhi * (b - a);
      f2 = f(x2);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - kInvPhi * (b - a);
      f1 = f(x1);
    }
  }
  const double xm = 0.5 * (a + b);
  return f(xm) >= best_f ? xm : best_x;
}

double bisect_root(const std::function<double(double)>& f, double lo, double hi,
                   double tol) {
  double flo = f(lo), fhi = f(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if ((flo > 0) == (fhi > 0)) throw std::invalid_argument("bisect_root needs a sign change");
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if (fm == 0.0) return mid;
    if ((fm > 0) == (flo > 0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

namespace {

double simpson(double a, double b, double fa, double fm, double fb) {
  return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double simpson_rec(const std::function<double(double)>& f, double a, double m, double b,
                   double fa, double fm, double fb, double whole, double tol, int depth) {
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = simpson(a, m, fa, flm, fm);
  const double right = simpson(m, b, fm, frm, fb);
  if (depth <= 0 || std::abs(left + right - whole) <= 15.0 * tol) {
    return left + right + (left + right - whole) / 15.0;
  }
  return simpson_rec(f, a, lm, m, fa, flm, fm, left, tol * 0.5, depth - 1) +
         simpson_rec(f, m, rm, b, fm, frm, fb, right, tol * 0.5, depth - 1);
}

}  // namespace

double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double tol) {
  const double m = 0.5 * (a + b);
  const double fa = f(a), fm = f(m), fb = f(b);
  const double whole = simpson(a, b, fa, fm, fb);
  return simpson_rec(f, a, m, b, fa, fm, fb, whole, tol, 48);
}

void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& fn) {
  if (n == 0) return;
  const std::size_t workers =
      std::min<std::size_t>(n, static_cast<std::size_t>(std::max(1, threads)));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  const std::size_t chunk = (n + workers - 1) / workers;
  for (std::size_t w = 0; w < workers; ++w) {
    const std::size_t lo = w * chunk;
    const std::size_t hi = std::min(n, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back([lo, hi, &fn] {
      for (std::size_t i = lo; i < hi; ++i) fn(i);
    });
  }
  for (auto& t : pool) t.join();
}

int resolve_threads(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("CASCADE_THREADS")) {
    const int v = std::atoi(env);
    if (v > 0) return v;
  }
  return 1;
}

}  // namespace cascade
