#pragma once

#include <cstdint>
#include <variant>
#include <vector>

#include "cascade/models.hpp"

namespace cascade {

// Truncated cone over t at level n: heights (b^-n, b^{1-n}], horizontal
// section [t - beta*r/2, t + beta*r/2) at height r.
struct TruncatedCone {
  double t = 0.0;
  int level = 1;
  int base = 2;
  double beta = 1.0;

  double r_lo() const;
  double r_hi() const;
  bool contains(double tp, double r) const;
};

TruncatedCone cone(double t, int n, int base, double beta);

// Lambda(cone at level n) for the point-field families; t-independent.
double cone_measure(const CompoundPoissonModel& m, int n);
double cone_measure(const LogInfDivisibleModel& m, int n);

// One realized b-adic weight family: independent per-(level, node) vectors,
// sampled eagerly level by level from counter-based streams, so extending
// the depth never perturbs existing levels. Immutable after construction
// apart from extend(); safe to share across threads between extends.
class BadicRealization {
 public:
  BadicRealization(const BadicIndependentModel& model, std::uint64_t seed, int depth);

  int depth() const { return depth_; }
  void extend(int new_depth);

  // Component picked by `digit` of the vector at tree node (level, node).
  Complex component(int level, std::uint64_t node, std::uint32_t digit) const;

  // P_{n}(t) = component for digit n of t's prefix node at level n-1.
  Complex eval_P(double t, int n) const;
  Complex eval_Q(double t, int n) const;

  // Q_n over all b^n generation-n cells, in cell-index order.
  std::vector<Complex> cell_products(int n) const;

  const BadicIndependentModel& model() const { return model_; }

 private:
  void sample_level(int k);

  BadicIndependentModel model_;
  std::uint64_t seed_ = 0;
  int depth_ = 0;
  std::vector<std::vector<Complex>> levels_;  // levels_[k]: b^k nodes * b comps
};

// Realized Poisson point field for the compound family, band by band.
class ConePointRealization {
 public:
  struct Point {
    double tp;     // horizontal position in [-beta/2, 1 + beta/2)
    double r;      // height in (b^-k, b^{1-k}]
    Complex mark;
  };

  ConePointRealization(const CompoundPoissonModel& model, std::uint64_t seed, int depth);

  int depth() const { return depth_; }
  void extend(int new_depth);

  const std::vector<Point>& band(int k) const;  // sorted by tp

  Complex eval_P(double t, int n) const;
  Complex eval_Q(double t, int n) const;

  // Number of realized points inside the cone at (t, n).
  std::size_t count_in_cone(double t, int n) const;

  const CompoundPoissonModel& model() const { return model_; }

 private:
  void sample_band(int k);

  CompoundPoissonModel model_;
  std::uint64_t seed_ = 0;
  int depth_ = 0;
  Complex mark_mean_;
  std::vector<std::vector<Point>> bands_;  // bands_[k-1]
};

// Realized infinitely divisible field for the log-ID family: each band is a
// row of cells carrying the field increment over cell x band; cone queries
// sum a contiguous cell range through prefix sums. Cell membership uses the
// band's nu-mean height, giving Lambda(approx cone) = ln b + O(1/m_cells).
class CellFieldRealization {
 public:
  CellFieldRealization(const LogInfDivisibleModel& model, std::uint64_t seed, int depth);

  int depth() const { return depth_; }
  void extend(int new_depth);

  double band_height(int k) const;      // representative (nu-mean) height
  double cell_width(int k) const;
  double cell_mass() const;             // Lambda(cell x band), band-independent
  std::size_t band_cells(int k) const;

  Complex eval_P(double t, int n) const;
  Complex eval_Q(double t, int n) const;

  // Lambda of the discretized cone actually summed at (t, n).
  double approx_cone_mass(double t, int n) const;

  const LogInfDivisibleModel& model() const { return model_; }

 private:
  void sample_band(int k);
  std::pair<std::size_t, std::size_t> cell_range(double t, int n) const;

  LogInfDivisibleModel model_;
  std::uint64_t seed_ = 0;
  int depth_ = 0;
  std::array<double, 2> drift_total_{0.0, 0.0};   // normalized drift minus compensator
  std::array<double, 2> chol_{0.0, 0.0};          // lower-triangular factors L11, L21
  double chol22_ = 0.0;
  // prefix sums over cells, one pair of rows per band
  std::vector<std::vector<double>> rho1_prefix_;
  std::vector<std::vector<double>> rho2_prefix_;
};

// Family-erased realization handle used by the simulation layer.
class CascadeRealization {
 public:
  CascadeRealization(const CascadeModel& model, std::uint64_t seed, int depth);

  int depth() const;
  void extend(int new_depth);

  Complex eval_P(double t, int n) const;
  Complex eval_Q(double t, int n) const;

  const BadicRealization* badic() const;
  const ConePointRealization* cone_points() const;
  const CellFieldRealization* cell_field() const;

 private:
  std::variant<BadicRealization, ConePointRealization, CellFieldRealization> impl_;
};

}  // namespace cascade
