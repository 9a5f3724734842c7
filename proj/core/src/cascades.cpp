#include "cascade/cascades.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace cascade {

namespace {

void check_level(int n, int depth) {
  if (n < 1) throw std::invalid_argument("level must be >= 1");
  if (n > depth) {
    throw std::out_of_range("cone level exceeds realization depth; extend() first");
  }
}

void check_depth(int depth) {
  if (depth < 1 || depth > 30) throw std::invalid_argument("depth must be in [1, 30]");
}

double pow_int(double b, int e) { return std::pow(b, static_cast<double>(e)); }

}  // namespace

double TruncatedCone::r_lo() const { return pow_int(base, -level); }
double TruncatedCone::r_hi() const { return pow_int(base, 1 - level); }

bool TruncatedCone::contains(double tp, double r) const {
  if (!(r > r_lo()) || r > r_hi()) return false;
  const double half = 0.5 * beta * r;
  return tp >= t - half && tp < t + half;
}

TruncatedCone cone(double t, int n, int base, double beta) {
  if (n < 1) throw std::invalid_argument("cone level must be >= 1");
  if (base < 2) throw std::invalid_argument("base must be >= 2");
  if (!(beta > 0.0)) throw std::invalid_argument("beta must be > 0");
  return TruncatedCone{t, n, base, beta};
}

double cone_measure(const CompoundPoissonModel& m, int n) {
  if (n < 1) throw std::invalid_argument("level must be >= 1");
  const double r_lo = pow_int(m.base, -n);
  const double r_hi = pow_int(m.base, 1 - n);
  return m.beta * m.intensity.band_cone_mass(r_lo, r_hi);
}

double cone_measure(const LogInfDivisibleModel& m, int n) {
  if (n < 1) throw std::invalid_argument("level must be >= 1");
  // beta = delta = 1: integral of r * dr/r^2 over one band
  return std::log(static_cast<double>(m.base));
}

// ---------------------------------------------------------------------------
// b-adic

BadicRealization::BadicRealization(const BadicIndependentModel& model,
                                   std::uint64_t seed, int depth)
    : model_(model), seed_(seed) {
  validate_model(CascadeModel(model_));
  check_depth(depth);
  extend(depth);
}

void BadicRealization::extend(int new_depth) {
  check_depth(new_depth);
  for (int k = depth_; k < new_depth; ++k) sample_level(k);
  depth_ = std::max(depth_, new_depth);
}

void BadicRealization::sample_level(int k) {
  const int b = model_.base;
  const double nodes_d = std::pow(static_cast<double>(b), k);
  if (nodes_d > static_cast<double>(1ull << 26)) {
    throw std::invalid_argument("b-adic level too large to realize");
  }
  const std::uint64_t nodes = static_cast<std::uint64_t>(nodes_d + 0.5);
  const auto& law = model_.level(k);
  std::vector<Complex> row(nodes * static_cast<std::uint64_t>(b));
  for (std::uint64_t node = 0; node < nodes; ++node) {
    RngStream rng(seed_, StreamDomain::kBadicNode, node, static_cast<std::uint32_t>(k));
    for (int d = 0; d < b; ++d) {
      row[node * b + static_cast<std::uint64_t>(d)] = sample(law.component(d), rng);
    }
  }
  levels_.push_back(std::move(row));
}

Complex BadicRealization::component(int level, std::uint64_t node,
                                    std::uint32_t digit) const {
  if (level < 0 || level >= depth_) throw std::out_of_range("level outside realization");
  const auto& row = levels_[static_cast<std::size_t>(level)];
  const std::uint64_t idx = node * static_cast<std::uint64_t>(model_.base) + digit;
  if (idx >= row.size()) throw std::out_of_range("node outside realization");
  return row[idx];
}

Complex BadicRealization::eval_P(double t, int n) const {
  check_level(n, depth_);
  const Word w = locate(t, n, model_.base);
  return component(n - 1, w.prefix(n - 1).node_index(), w.digits.back());
}

Complex BadicRealization::eval_Q(double t, int n) const {
  check_level(n, depth_);
  const Word w = locate(t, n, model_.base);
  Complex q(1.0, 0.0);
  std::uint64_t node = 0;
  for (int k = 0; k < n; ++k) {
    const std::uint32_t d = w.digits[static_cast<std::size_t>(k)];
    q *= component(k, node, d);
    node = node * static_cast<std::uint64_t>(model_.base) + d;
  }
  return q;
}

std::vector<Complex> BadicRealization::cell_products(int n) const {
  check_level(n, depth_);
  const int b = model_.base;
  std::vector<Complex> q{Complex(1.0, 0.0)};
  for (int k = 0; k < n; ++k) {
    const auto& row = levels_[static_cast<std::size_t>(k)];
    std::vector<Complex> next(q.size() * static_cast<std::size_t>(b));
    for (std::size_t node = 0; node < q.size(); ++node) {
      for (int d = 0; d < b; ++d) {
        next[node * static_cast<std::size_t>(b) + static_cast<std::size_t>(d)] =
            q[node] * row[node * static_cast<std::size_t>(b) + static_cast<std::size_t>(d)];
      }
    }
    q = std::move(next);
  }
  return q;
}

// ---------------------------------------------------------------------------
// compound Poisson points

ConePointRealization::ConePointRealization(const CompoundPoissonModel& model,
                                           std::uint64_t seed, int depth)
    : model_(model), seed_(seed) {
  validate_model(CascadeModel(model_));
  check_depth(depth);
  mark_mean_ = mean(model_.mark);
  extend(depth);
}

void ConePointRealization::extend(int new_depth) {
  check_depth(new_depth);
  for (int k = depth_; k < new_depth; ++k) sample_band(k + 1);
  depth_ = std::max(depth_, new_depth);
}

void ConePointRealization::sample_band(int k) {
  const double r_lo = pow_int(model_.base, -k);
  const double r_hi = pow_int(model_.base, 1 - k);
  const double strip_lo = -0.5 * model_.beta;
  const double strip_hi = 1.0 + 0.5 * model_.beta;
  const double nu_band = model_.intensity.band_mass(r_lo, r_hi);
  const double lam = (strip_hi - strip_lo) * nu_band;

  RngStream rng(seed_, StreamDomain::kConeBand, static_cast<std::uint64_t>(k));
  std::vector<Point> pts;
  if (lam > 0.0) {
    const std::uint64_t count = rng.poisson(lam);
    pts.reserve(count);
    for (std::uint64_t i = 0; i < count; ++i) {
      Point p;
      p.tp = rng.uniform(strip_lo, strip_hi);
      p.r = model_.intensity.sample_r(r_lo, r_hi, rng);
      p.mark = sample(model_.mark, rng);
      pts.push_back(p);
    }
  }
  std::sort(pts.begin(), pts.end(),
            [](const Point& a, const Point& b) { return a.tp < b.tp; });
  bands_.push_back(std::move(pts));
}

const std::vector<ConePointRealization::Point>& ConePointRealization::band(int k) const {
  check_level(k, depth_);
  return bands_[static_cast<std::size_t>(k - 1)];
}

Complex ConePointRealization::eval_P(double t, int n) const {
  check_level(n, depth_);
  const TruncatedCone c = cone(t, n, model_.base, model_.beta);
  const auto& pts = bands_[static_cast<std::size_t>(n - 1)];
  // prefilter on tp with the widest possible half-width, then exact test
  const double half_max = 0.5 * model_.beta * c.r_hi();
  const auto lo = std::lower_bound(pts.begin(), pts.end(), t - half_max,
                                   [](const Point& p, double v) { return p.tp < v; });
  Complex prod(1.0, 0.0);
  for (auto it = lo; it != pts.end() && it->tp < t + half_max; ++it) {
    if (c.contains(it->tp, it->r)) prod *= it->mark;
  }
  const double lam_cone = cone_measure(model_, n);
  const Complex normalizer = std::exp(-lam_cone * (mark_mean_ - 1.0));
  return normalizer * prod;
}

Complex ConePointRealization::eval_Q(double t, int n) const {
  check_level(n, depth_);
  Complex q(1.0, 0.0);
  for (int k = 1; k <= n; ++k) q *= eval_P(t, k);
  return q;
}

std::size_t ConePointRealization::count_in_cone(double t, int n) const {
  check_level(n, depth_);
  const TruncatedCone c = cone(t, n, model_.base, model_.beta);
  const auto& pts = bands_[static_cast<std::size_t>(n - 1)];
  const double half_max = 0.5 * model_.beta * c.r_hi();
  const auto lo = std::lower_bound(pts.begin(), pts.end(), t - half_max,
                                   [](const Point& p, double v) { return p.tp < v; });
  std::size_t count = 0;
  for (auto it = lo; it != pts.end() && it->tp < t + half_max; ++it) {
    if (c.contains(it->tp, it->r)) ++count;
  }
  return count;
}

// ---------------------------------------------------------------------------
// log-infinitely-divisible cell field

CellFieldRealization::CellFieldRealization(const LogInfDivisibleModel& model,
                                           std::uint64_t seed, int depth)
    : model_(model), seed_(seed) {
  validate_model(CascadeModel(model_));
  check_depth(depth);

  const Complex psi0 = levy_normalizer(model_);
  // normalized drift, then jump compensation inside the unit disc
  drift_total_ = {model_.drift[0] - psi0.real(), model_.drift[1] - psi0.imag()};
  for (const auto& j : model_.jumps) {
    const double norm2 = j.x[0] * j.x[0] + j.x[1] * j.x[1];
    if (norm2 <= 1.0) {
      drift_total_[0] -= j.mass * j.x[0];
      drift_total_[1] -= j.mass * j.x[1];
    }
  }
  // lower Cholesky of the PSD form (pivot-free; guard the degenerate corner)
  const auto& q = model_.gaussian;
  const double l11 = std::sqrt(std::max(0.0, q[0][0]));
  chol_ = {l11, l11 > 0.0 ? q[0][1] / l11 : 0.0};
  chol22_ = std::sqrt(std::max(0.0, q[1][1] - chol_[1] * chol_[1]));

  extend(depth);
}

double CellFieldRealization::band_height(int k) const {
  // nu-mean height of (b^-k, b^{1-k}] under dr/r^2: ln b / (b^{k-1}(b-1))
  const double b = static_cast<double>(model_.base);
  return std::log(b) * pow_int(model_.base, 1 - k) / (b - 1.0);
}

double CellFieldRealization::cell_width(int k) const {
  return pow_int(model_.base, -k) / static_cast<double>(model_.m_cells);
}

double CellFieldRealization::cell_mass() const {
  // nu(band) * cell width = b^{k-1}(b-1) * b^-k / m = (b-1)/(b m), flat in k
  const double b = static_cast<double>(model_.base);
  return (b - 1.0) / (b * static_cast<double>(model_.m_cells));
}

std::size_t CellFieldRealization::band_cells(int k) const {
  // strip [-1/2, 3/2] of length 2 divided into width-b^-k/m cells
  return static_cast<std::size_t>(
      std::llround(2.0 / cell_width(k)));
}

void CellFieldRealization::sample_band(int k) {
  const std::size_t cells = band_cells(k);
  if (cells > (std::size_t(1) << 28)) throw std::invalid_argument("band too large");
  const double lam_cell = cell_mass();
  const double sqrt_lam = std::sqrt(lam_cell);

  RngStream rng(seed_, StreamDomain::kConeBand, static_cast<std::uint64_t>(k));
  std::vector<double> p1(cells + 1, 0.0), p2(cells + 1, 0.0);
  double acc1 = 0.0, acc2 = 0.0;
  for (std::size_t i = 0; i < cells; ++i) {
    const double z1 = rng.normal();
    const double z2 = rng.normal();
    double r1 = drift_total_[0] * lam_cell + sqrt_lam * (chol_[0] * z1);
    double r2 = drift_total_[1] * lam_cell + sqrt_lam * (chol_[1] * z1 + chol22_ * z2);
    for (const auto& j : model_.jumps) {
      const std::uint64_t cnt = rng.poisson(j.mass * lam_cell);
      if (cnt > 0) {
        r1 += static_cast<double>(cnt) * j.x[0];
        r2 += static_cast<double>(cnt) * j.x[1];
      }
    }
    acc1 += r1;
    acc2 += r2;
    p1[i + 1] = acc1;
    p2[i + 1] = acc2;
  }
  rho1_prefix_.push_back(std::move(p1));
  rho2_prefix_.push_back(std::move(p2));
}

void CellFieldRealization::extend(int new_depth) {
  check_depth(new_depth);
  for (int k = depth_; k < new_depth; ++k) sample_band(k + 1);
  depth_ = std::max(depth_, new_depth);
}

std::pair<std::size_t, std::size_t> CellFieldRealization::cell_range(double t,
                                                                     int n) const {
  if (t < 0.0 || t > 1.0) {
    throw std::domain_error("cone query outside [0, 1]");
  }
  const double rbar = band_height(n);
  const double h = cell_width(n);
  const double lo_t = t - 0.5 * rbar;  // beta = 1
  const double hi_t = t + 0.5 * rbar;
  // first cell whose center >= v; centers sit at -0.5 + (i + 0.5) h
  const auto first_center_ge = [h](double v) {
    const double raw = (v + 0.5) / h - 0.5;
    const double idx = std::ceil(raw);
    return idx < 0.0 ? std::size_t(0) : static_cast<std::size_t>(idx);
  };
  std::size_t lo = first_center_ge(lo_t);
  std::size_t hi = first_center_ge(hi_t);
  const std::size_t cells = rho1_prefix_[static_cast<std::size_t>(n - 1)].size() - 1;
  lo = std::min(lo, cells);
  hi = std::min(hi, cells);
  return {lo, hi};
}

Complex CellFieldRealization::eval_P(double t, int n) const {
  check_level(n, depth_);
  const auto [lo, hi] = cell_range(t, n);
  const auto& p1 = rho1_prefix_[static_cast<std::size_t>(n - 1)];
  const auto& p2 = rho2_prefix_[static_cast<std::size_t>(n - 1)];
  const double s1 = p1[hi] - p1[lo];
  const double s2 = p2[hi] - p2[lo];
  return std::exp(Complex(s1, s2));
}

Complex CellFieldRealization::eval_Q(double t, int n) const {
  check_level(n, depth_);
  double s1 = 0.0, s2 = 0.0;
  for (int k = 1; k <= n; ++k) {
    const auto [lo, hi] = cell_range(t, k);
    s1 += rho1_prefix_[static_cast<std::size_t>(k - 1)][hi] -
          rho1_prefix_[static_cast<std::size_t>(k - 1)][lo];
    s2 += rho2_prefix_[static_cast<std::size_t>(k - 1)][hi] -
          rho2_prefix_[static_cast<std::size_t>(k - 1)][lo];
  }
  return std::exp(Complex(s1, s2));
}

double CellFieldRealization::approx_cone_mass(double t, int n) const {
  check_level(n, depth_);
  const auto [lo, hi] = cell_range(t, n);
  return static_cast<double>(hi - lo) * cell_mass();
}

// ---------------------------------------------------------------------------
// erased handle

CascadeRealization::CascadeRealization(const CascadeModel& model, std::uint64_t seed,
                                       int depth)
    : impl_(std::visit(
          [&](const auto& m)
              -> std::variant<BadicRealization, ConePointRealization, CellFieldRealization> {
            using T = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<T, BadicIndependentModel>) {
              return BadicRealization(m, seed, depth);
            } else if constexpr (std::is_same_v<T, CompoundPoissonModel>) {
              return ConePointRealization(m, seed, depth);
            } else {
              return CellFieldRealization(m, seed, depth);
            }
          },
          model)) {}

int CascadeRealization::depth() const {
  return std::visit([](const auto& r) { return r.depth(); }, impl_);
}

void CascadeRealization::extend(int new_depth) {
  std::visit([new_depth](auto& r) { r.extend(new_depth); }, impl_);
}

Complex CascadeRealization::eval_P(double t, int n) const {
  return std::visit([t, n](const auto& r) { return r.eval_P(t, n); }, impl_);
}

Complex CascadeRealization::eval_Q(double t, int n) const {
  return std::visit([t, n](const auto& r) { return r.eval_Q(t, n); }, impl_);
}

const BadicRealization* CascadeRealization::badic() const {
  return std::get_if<BadicRealization>(&impl_);
}
const ConePointRealization* CascadeRealization::cone_points() const {
  return std::get_if<ConePointRealization>(&impl_);
}
const CellFieldRealization* CascadeRealization::cell_field() const {
  return std::get_if<CellFieldRealization>(&impl_);
}

}  // namespace cascade
