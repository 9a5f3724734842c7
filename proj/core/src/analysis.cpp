#include "cascade/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>

#include "cascade/badic.hpp"

namespace cascade {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double dist2(const Complex& a, const Complex& b) { return std::norm(a - b); }

double cross(const Complex& o, const Complex& a, const Complex& b) {
  return (a.real() - o.real()) * (b.imag() - o.imag()) -
         (a.imag() - o.imag()) * (b.real() - o.real());
}

// Andrew monotone chain, strict turns (collinear points dropped); CCW order.
std::vector<Complex> convex_hull(std::vector<Complex> pts) {
  std::sort(pts.begin(), pts.end(), [](const Complex& a, const Complex& b) {
    return a.real() < b.real() || (a.real() == b.real() && a.imag() < b.imag());
  });
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  const std::size_t n = pts.size();
  if (n <= 2) return pts;
  std::vector<Complex> hull(2 * n);
  std::size_t k = 0;
  for (std::size_t i = 0; i < n; ++i) {
    while (k >= 2 && cross(hull[k - 2], hull[k - 1], pts[i]) <= 0) --k;
    hull[k++] = pts[i];
  }
  const std::size_t lower = k + 1;
  for (std::size_t i = n - 1; i-- > 0;) {
    while (k >= lower && cross(hull[k - 2], hull[k - 1], pts[i]) <= 0) --k;
    hull[k++] = pts[i];
  }
  hull.resize(k - 1);
  return hull;
}

double hull_diameter(const std::vector<Complex>& h) {
  const std::size_t m = h.size();
  if (m <= 1) return 0.0;
  if (m == 2) return std::abs(h[1] - h[0]);
  // rotating calipers: antipodal vertex j chases edge i -> i+1
  double best2 = 0.0;
  std::size_t j = 1;
  for (std::size_t i = 0; i < m; ++i) {
    const Complex edge = h[(i + 1) % m] - h[i];
    for (;;) {
      const Complex next = h[(j + 1) % m] - h[j];
      // advance while the next vertex is still moving away from the edge
      const double turn = edge.real() * next.imag() - edge.imag() * next.real();
      if (turn > 0) {
        j = (j + 1) % m;
      } else {
        break;
      }
    }
    best2 = std::max(best2, std::max(dist2(h[i], h[j]), dist2(h[(i + 1) % m], h[j])));
  }
  return std::sqrt(best2);
}

}  // namespace

double planar_diameter(std::span<const Complex> pts) {
  if (pts.size() < 2) return 0.0;
  if (pts.size() <= 48) {
    double best2 = 0.0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
      for (std::size_t j = i + 1; j < pts.size(); ++j) {
        best2 = std::max(best2, dist2(pts[i], pts[j]));
      }
    }
    return std::sqrt(best2);
  }
  return hull_diameter(convex_hull(std::vector<Complex>(pts.begin(), pts.end())));
}

SampledPath path_generation(const PathSample& path, int n) {
  SampledPath sp;
  sp.base = path.base;
  sp.grid = path.grid;
  sp.values = path.gen(n);
  return sp;
}

double oscillation(const SampledPath& path, double a, double b) {
  if (!(a <= b)) throw std::invalid_argument("oscillation needs a <= b");
  const auto lo = std::lower_bound(path.grid.begin(), path.grid.end(), a);
  auto hi = std::upper_bound(path.grid.begin(), path.grid.end(), b);
  const std::size_t i0 = static_cast<std::size_t>(lo - path.grid.begin());
  const std::size_t i1 = static_cast<std::size_t>(hi - path.grid.begin());
  if (i1 - i0 < 2) throw std::invalid_argument("interval contains fewer than two samples");
  return planar_diameter(std::span<const Complex>(path.values).subspan(i0, i1 - i0));
}

std::vector<double> coarse_exponents(const SampledPath& path, int n) {
  const std::int64_t cells = ipow(path.base, n);
  const std::size_t grid_cells = path.grid.size() - 1;
  if (grid_cells % static_cast<std::size_t>(cells) != 0) {
    throw std::invalid_argument("grid does not refine the requested generation");
  }
  const std::size_t stride = grid_cells / static_cast<std::size_t>(cells);
  if (stride < 1) throw std::invalid_argument("generation finer than the grid");
  const double ln_b = std::log(static_cast<double>(path.base));
  std::vector<double> out(static_cast<std::size_t>(cells));
  for (std::size_t w = 0; w < static_cast<std::size_t>(cells); ++w) {
    const double osc = planar_diameter(
        std::span<const Complex>(path.values).subspan(w * stride, stride + 1));
    out[w] = osc > 0.0 ? std::log(osc) / (-static_cast<double>(n) * ln_b) : kInf;
  }
  return out;
}

SpectrumReport large_deviation_spectrum(const SampledPath& path, int n_lo, int n_hi,
                                        const SpectrumOptions& opts) {
  if (n_lo < 1 || n_hi < n_lo) throw std::invalid_argument("need 1 <= n_lo <= n_hi");
  if (opts.eps_schedule.empty()) throw std::invalid_argument("need an epsilon schedule");
  if (!(opts.h_step > 0.0) || !(opts.h_max > opts.h_min)) {
    throw std::invalid_argument("bad h grid");
  }

  SpectrumReport rep;
  rep.n_lo = n_lo;
  rep.n_hi = n_hi;
  rep.eps_schedule = opts.eps_schedule;
  const int h_count =
      static_cast<int>(std::floor((opts.h_max - opts.h_min) / opts.h_step + 1e-9)) + 1;
  for (int i = 0; i < h_count; ++i) {
    rep.h_grid.push_back(opts.h_min + static_cast<double>(i) * opts.h_step);
  }

  // coarse exponents per generation, shared across epsilons
  std::vector<std::vector<double>> alphas;
  for (int n = n_lo; n <= n_hi; ++n) {
    alphas.push_back(coarse_exponents(path, n));
  }

  // histograms and the regularity estimate
  const double ln_b = std::log(static_cast<double>(path.base));
  (void)ln_b;
  for (int n = n_lo; n <= n_hi; ++n) {
    const auto& a = alphas[static_cast<std::size_t>(n - n_lo)];
    GenerationHistogram hist;
    hist.n = n;
    std::map<std::int64_t, std::int64_t> counts;
    for (double x : a) {
      if (x == kInf) {
        ++hist.zero_oscillation;
      } else {
        ++counts[static_cast<std::int64_t>(std::floor(x / opts.h_step))];
      }
    }
    for (const auto& [bin, c] : counts) {
      hist.bins.emplace_back(static_cast<double>(bin) * opts.h_step, c);
    }
    rep.histograms.push_back(std::move(hist));
  }
  {
    const auto& last = alphas.back();
    double g = kInf;
    for (double x : last) g = std::min(g, x);
    rep.gamma_estimate = g;
  }

  const int n_mid = n_lo + (n_hi - n_lo) / 2;  // top half of the schedule
  for (double eps : opts.eps_schedule) {
    std::vector<double> row(rep.h_grid.size(), -kInf);
    std::vector<std::uint8_t> fin(rep.h_grid.size(), 0);
    for (std::size_t ih = 0; ih < rep.h_grid.size(); ++ih) {
      const double h = rep.h_grid[ih];
      double best = -kInf;
      bool any = false;
      for (int n = n_mid; n <= n_hi; ++n) {
        const auto& a = alphas[static_cast<std::size_t>(n - n_lo)];
        // Osc in [b^{-n(h+eps)}, b^{-n(h-eps)}]  <=>  alpha in [h-eps, h+eps]
        std::int64_t count = 0;
        for (double x : a) {
          if (x >= h - eps && x <= h + eps) ++count;
        }
        if (count > 0) {
          any = true;
          best = std::max(best, std::log(static_cast<double>(count)) /
                                    (static_cast<double>(n) *
                                     std::log(static_cast<double>(path.base))));
        }
      }
      row[ih] = any ? best : -kInf;
      fin[ih] = any ? 1 : 0;
    }
    rep.by_eps.push_back(std::move(row));
    rep.by_eps_finite.push_back(std::move(fin));
  }
  rep.headline = rep.by_eps.back();
  rep.headline_finite = rep.by_eps_finite.back();

  rep.support_lo = kInf;
  rep.support_hi = -kInf;
  for (std::size_t ih = 0; ih < rep.h_grid.size(); ++ih) {
    if (rep.headline_finite[ih]) {
      rep.support_lo = std::min(rep.support_lo, rep.h_grid[ih]);
      rep.support_hi = std::max(rep.support_hi, rep.h_grid[ih]);
    }
  }
  if (!(rep.support_lo <= rep.support_hi)) {
    rep.support_lo = rep.support_hi = std::numeric_limits<double>::quiet_NaN();
  }
  return rep;
}

std::vector<StructureExponent> structure_exponents(const SampledPath& path,
                                                   std::span<const double> qs, int n_lo,
                                                   int n_hi) {
  if (n_hi - n_lo < 1) throw std::invalid_argument("need at least two generations");
  for (double q : qs) {
    if (q < 0.0 || q > 2.0) throw std::domain_error("q must lie in [0, 2]");
  }
  std::vector<std::vector<double>> alphas_osc;  // oscillations per generation
  for (int n = n_lo; n <= n_hi; ++n) {
    const std::int64_t cells = ipow(path.base, n);
    const std::size_t grid_cells = path.grid.size() - 1;
    if (grid_cells % static_cast<std::size_t>(cells) != 0) {
      throw std::invalid_argument("grid does not refine the requested generation");
    }
    const std::size_t stride = grid_cells / static_cast<std::size_t>(cells);
    std::vector<double> osc(static_cast<std::size_t>(cells));
    for (std::size_t w = 0; w < static_cast<std::size_t>(cells); ++w) {
      osc[w] = planar_diameter(
          std::span<const Complex>(path.values).subspan(w * stride, stride + 1));
    }
    alphas_osc.push_back(std::move(osc));
  }

  const double ln_b = std::log(static_cast<double>(path.base));
  std::vector<StructureExponent> out;
  for (double q : qs) {
    std::vector<double> xs, ys;
    for (int n = n_lo; n <= n_hi; ++n) {
      const auto& osc = alphas_osc[static_cast<std::size_t>(n - n_lo)];
      double s = 0.0;
      std::int64_t nonzero = 0;
      for (double o : osc) {
        if (o > 0.0) {
          s += q == 0.0 ? 1.0 : std::pow(o, q);
          ++nonzero;
        }
      }
      if (nonzero == 0) {
        throw std::domain_error("all oscillations vanish at a generation; degenerate path");
      }
      xs.push_back(-static_cast<double>(n));
      ys.push_back(std::log(s) / ln_b);
    }
    const LineFit lf = least_squares(xs, ys);
    out.push_back(StructureExponent{q, lf.slope, lf.slope_se});
  }
  return out;
}

double pointwise_holder(const SampledPath& path, double t, int n_lo, int n_hi) {
  if (!(t >= 0.0) || t >= 1.0) throw std::domain_error("t must lie in [0, 1)");
  const int n_mid = n_lo + (n_hi - n_lo) / 2;
  double est = kInf;
  for (int n = n_mid; n <= n_hi; ++n) {
    const std::int64_t cells = ipow(path.base, n);
    const std::size_t w =
        static_cast<std::size_t>(locate(t, n, path.base).node_index());
    const std::size_t grid_cells = path.grid.size() - 1;
    const std::size_t stride = grid_cells / static_cast<std::size_t>(cells);
    const double osc = planar_diameter(
        std::span<const Complex>(path.values).subspan(w * stride, stride + 1));
    if (osc > 0.0) {
      est = std::min(est, std::log(osc) / (-static_cast<double>(n) *
                                           std::log(static_cast<double>(path.base))));
    }
  }
  return est;
}

}  // namespace cascade
