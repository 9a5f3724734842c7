#include "cascade/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "cascade/numeric.hpp"
#include "cascade/rng.hpp"

namespace cascade {

const std::vector<Complex>& PathSample::gen(int n) const {
  if (n < n_min || n > n_max) throw std::out_of_range("generation not stored");
  return values[static_cast<std::size_t>(n - n_min)];
}

PathSample build_paths(const CascadeModel& model, const ReferenceMeasure& measure,
                       std::uint64_t seed, int n_max, int m_sub, int n_min,
                       std::string model_id) {
  if (n_max < 1 || n_min < 1 || n_min > n_max) {
    throw std::invalid_argument("need 1 <= n_min <= n_max");
  }
  if (m_sub < 1) throw std::invalid_argument("m_sub must be >= 1");
  validate_pairing(model, measure);

  const int b = base_of(model);
  const bool is_badic = std::holds_alternative<BadicIndependentModel>(model);
  const bool lebesgue = measure.is_lebesgue();
  // Bernoulli masses have no closed sub-cell primitive; keep the exact grid
  const int m_eff = lebesgue ? m_sub : 1;

  const std::int64_t badic_cells = ipow(b, n_max);
  const std::int64_t cells64 = badic_cells * m_eff;
  if (cells64 > (std::int64_t(1) << 26)) throw std::invalid_argument("grid too large");
  const std::size_t cells = static_cast<std::size_t>(cells64);

  PathSample out;
  out.seed = seed;
  out.model_id = std::move(model_id);
  out.base = b;
  out.n_min = n_min;
  out.n_max = n_max;
  out.m_sub = m_eff;
  out.lebesgue = lebesgue;
  out.grid.resize(cells + 1);
  for (std::size_t j = 0; j <= cells; ++j) {
    out.grid[j] = static_cast<double>(j) / static_cast<double>(cells);
  }
  out.values.reserve(static_cast<std::size_t>(n_max - n_min + 1));

  if (is_badic) {
    const auto& bm = std::get<BadicIndependentModel>(model);
    BadicRealization real(bm, seed, n_max);
    std::vector<Complex> q{Complex(1.0, 0.0)};
    std::vector<double> mass{1.0};
    for (int n = 1; n <= n_max; ++n) {
      std::vector<Complex> q_next(q.size() * static_cast<std::size_t>(b));
      std::vector<double> m_next(mass.size() * static_cast<std::size_t>(b));
      for (std::size_t node = 0; node < q.size(); ++node) {
        for (int d = 0; d < b; ++d) {
          const std::size_t j = node * static_cast<std::size_t>(b) + static_cast<std::size_t>(d);
          q_next[j] = q[node] * real.component(n - 1, node, static_cast<std::uint32_t>(d));
          const double li = lebesgue ? 1.0 / static_cast<double>(b)
                                     : measure.level(n - 1)[static_cast<std::size_t>(d)];
          m_next[j] = mass[node] * li;
        }
      }
      q = std::move(q_next);
      mass = std::move(m_next);
      if (n < n_min) continue;
      // spread generation-n cell values onto the finest grid and accumulate
      std::vector<Complex> f(cells + 1);
      f[0] = Complex(0.0, 0.0);
      const std::size_t fine_per_cell = cells / q.size();
      Complex acc(0.0, 0.0);
      for (std::size_t j = 0; j < cells; ++j) {
        const std::size_t cell = j / fine_per_cell;
        // lambda of one fine slice: cell mass split evenly under Lebesgue
        const double slice = mass[cell] / static_cast<double>(fine_per_cell);
        acc += slice * q[cell];
        f[j + 1] = acc;
      }
      out.values.push_back(std::move(f));
    }
    return out;
  }

  CascadeRealization real(model, seed, n_max);
  std::vector<Complex> q(cells, Complex(1.0, 0.0));
  const double h = 1.0 / static_cast<double>(cells);
  for (int n = 1; n <= n_max; ++n) {
    for (std::size_t j = 0; j < cells; ++j) {
      q[j] *= real.eval_P(out.grid[j], n);
    }
    if (n < n_min) continue;
    std::vector<Complex> f(cells + 1);
    f[0] = Complex(0.0, 0.0);
    Complex acc(0.0, 0.0);
    for (std::size_t j = 0; j < cells; ++j) {
      acc += h * q[j];
      f[j + 1] = acc;
    }
    out.values.push_back(std::move(f));
  }
  return out;
}

double cauchy_increment(const PathSample& path, int n) {
  if (n <= path.n_min || n > path.n_max) {
    throw std::out_of_range("cauchy_increment needs generations n-1 and n stored");
  }
  const auto& fn = path.gen(n);
  const auto& fp = path.gen(n - 1);
  const std::size_t tn = static_cast<std::size_t>(ipow(path.base, n));
  const std::size_t stride = path.cells() / tn;
  double best = 0.0;
  for (std::size_t j = 0; j <= tn; ++j) {
    best = std::max(best, std::abs(fn[j * stride] - fp[j * stride]));
  }
  return best;
}

std::vector<double> sup_norm_trajectory(const PathSample& path) {
  std::vector<double> out;
  out.reserve(path.values.size());
  for (const auto& row : path.values) {
    double m = 0.0;
    for (const Complex& v : row) m = std::max(m, std::abs(v));
    out.push_back(m);
  }
  return out;
}

MartingaleReport martingale_check(const CascadeModel& model, std::span<const double> ts,
                                  int n, int replicas, std::uint64_t seed, int threads) {
  if (replicas < 2) throw std::invalid_argument("need >= 2 replicas");
  if (ts.empty()) throw std::invalid_argument("need at least one probe point");
  validate_model(model);
  MartingaleReport rep;
  rep.n = n;
  rep.replicas = replicas;

  std::vector<std::vector<Complex>> samples(ts.size(),
                                            std::vector<Complex>(static_cast<std::size_t>(replicas)));
  parallel_for(static_cast<std::size_t>(replicas), threads, [&](std::size_t r) {
    CascadeRealization real(model, derive_seed(seed, r, 3), n);
    for (std::size_t i = 0; i < ts.size(); ++i) {
      samples[i][r] = real.eval_Q(ts[i], n);
    }
  });

  rep.all_ok = true;
  constexpr double kExactTol = 1e-12;  // zero-variance families must hit 1 exactly
  for (std::size_t i = 0; i < ts.size(); ++i) {
    const ComplexMeanSe ms = mean_se(samples[i]);
    MartingaleRow row;
    row.t = ts[i];
    row.mean_q = ms.mean;
    row.se_re = ms.se_re;
    row.se_im = ms.se_im;
    row.ok = std::abs(ms.mean.real() - 1.0) <= 4.0 * ms.se_re + kExactTol &&
             std::abs(ms.mean.imag()) <= 4.0 * ms.se_im + kExactTol;
    rep.all_ok = rep.all_ok && row.ok;
    rep.rows.push_back(row);
  }
  return rep;
}

int martingale_informative_level(const CascadeModel& model, int replicas, int n_hi) {
  const double budget = static_cast<double>(replicas) / 16.0;
  const double ln_b = std::log(static_cast<double>(base_of(model)));
  // worst-case per-level growth of E|Q_n(t)|^2 over digit paths
  const auto level_factor = [&](int k) -> double {
    if (const auto* b = std::get_if<BadicIndependentModel>(&model)) {
      double worst = 0.0;
      const auto& lvl = b->level(k);
      const int digits = lvl.iid() ? 1 : lvl.base;
      for (int d = 0; d < digits; ++d) {
        const MomentEstimate m2 = abs_moment(lvl.component(d), 2.0);
        if (m2.is_infinite) return std::numeric_limits<double>::infinity();
        worst = std::max(worst, m2.value);
      }
      return worst;
    }
    if (const auto* c = std::get_if<CompoundPoissonModel>(&model)) {
      const MomentEstimate m2 = abs_moment(c->mark, 2.0);
      if (m2.is_infinite) return std::numeric_limits<double>::infinity();
      const double c2 = (m2.value - 1.0) - 2.0 * (mean_real_part(c->mark) - 1.0);
      const double bd = static_cast<double>(c->base);
      const double mass =
          c->beta * c->intensity.band_cone_mass(std::pow(bd, -(k + 1)), std::pow(bd, -k));
      return std::exp(std::max(c2, 0.0) * mass);
    }
    const auto& l = std::get<LogInfDivisibleModel>(model);
    return std::exp(std::max(levy_moment_exponent(l, 2.0), 0.0) * ln_b);
  };
  double growth = 1.0;
  for (int n = 1; n <= n_hi; ++n) {
    growth *= level_factor(n - 1);
    if (!(growth <= budget)) return std::max(1, n - 1);
  }
  return n_hi;
}

int decorrelation_separation(const CascadeModel& model) {
  const double beta = cone_aperture(model);
  if (beta == 0.0) return 1;
  return static_cast<int>(std::ceil(beta * base_of(model))) + 1;
}

DecorrelationReport decorrelation_check(const CascadeModel& model, int n, int replicas,
                                        std::uint64_t seed, int threads) {
  if (replicas < 2) throw std::invalid_argument("need >= 2 replicas");
  validate_model(model);
  const int b = base_of(model);
  const int sep = decorrelation_separation(model);
  const std::int64_t cells = ipow(b, n);
  if (cells < sep + 2) throw std::invalid_argument("generation too coarse for separation");

  DecorrelationReport rep;
  rep.n = n;
  rep.separation_cells = sep;
  const double w = 1.0 / static_cast<double>(cells);
  rep.t = 0.5 * w;                                   // midpoint of the first cell
  rep.s = (static_cast<double>(sep) + 1.5) * w;      // sep cells of gap

  std::vector<Complex> xs(static_cast<std::size_t>(replicas));
  std::vector<Complex> ys_v(static_cast<std::size_t>(replicas));
  parallel_for(static_cast<std::size_t>(replicas), threads, [&](std::size_t r) {
    CascadeRealization real(model, derive_seed(seed, r, 4), n);
    xs[r] = real.eval_P(rep.t, n);
    ys_v[r] = real.eval_P(rep.s, n);
  });

  const ComplexMeanSe mx = mean_se(xs);
  const ComplexMeanSe my = mean_se(ys_v);
  std::vector<Complex> prods(xs.size());
  for (std::size_t r = 0; r < xs.size(); ++r) {
    prods[r] = (xs[r] - mx.mean) * std::conj(ys_v[r] - my.mean);
  }
  const ComplexMeanSe mp = mean_se(prods);
  rep.covariance = mp.mean;
  rep.se = std::hypot(mp.se_re, mp.se_im);
  rep.ok = std::abs(rep.covariance.real()) <= 4.0 * mp.se_re + 1e-12 &&
           std::abs(rep.covariance.imag()) <= 4.0 * mp.se_im + 1e-12;
  return rep;
}

SelfSimilarityReport self_similarity_check(const CascadeModel& model, int n, int replicas,
                                           std::uint64_t seed, int threads) {
  if (replicas < 2) throw std::invalid_argument("need >= 2 replicas");
  validate_model(model);
  const int b = base_of(model);
  const std::vector<double> probes{1.0 / 7.0, 1.0 / 3.0, 0.55, 0.8};

  std::vector<double> left(static_cast<std::size_t>(replicas));
  std::vector<double> right(static_cast<std::size_t>(replicas));
  parallel_for(static_cast<std::size_t>(replicas), threads, [&](std::size_t r) {
    // independent ensembles for the two sides of the identity
    CascadeRealization deep(model, derive_seed(seed, r, 5), n + 1);
    CascadeRealization shallow(model, derive_seed(seed, r, 6), n);
    double acc_l = 0.0, acc_r = 0.0;
    for (double t : probes) {
      const double contracted = t / static_cast<double>(b);
      acc_l += std::norm(deep.eval_P(contracted, n + 1));
      acc_r += std::norm(shallow.eval_P(t, n));
    }
    left[r] = acc_l / static_cast<double>(probes.size());
    right[r] = acc_r / static_cast<double>(probes.size());
  });

  SelfSimilarityReport rep;
  rep.n = n;
  const MeanSe ml = mean_se(left);
  const MeanSe mr = mean_se(right);
  rep.moment_left = ml.mean;
  rep.moment_right = mr.mean;
  rep.se_left = ml.std_error;
  rep.se_right = mr.std_error;
  const double se = std::sqrt(ml.std_error * ml.std_error + mr.std_error * mr.std_error);
  rep.ok = std::abs(ml.mean - mr.mean) <= 4.0 * se + 1e-12;
  return rep;
}

}  // namespace cascade
