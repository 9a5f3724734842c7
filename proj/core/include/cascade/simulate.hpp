#pragma once

#include <span>
#include <string>
#include <vector>

#include "cascade/cascades.hpp"
#include "cascade/convergence.hpp"
#include "cascade/measure.hpp"

namespace cascade {

// Coupled trajectory of F_n(t) = int_0^t Q_n dlambda for n in
// [n_min, n_max], sampled on a common grid. For b-adic models with product
// measures the increments are exact cell sums; for cone-geometry families
// F_n is a left-endpoint Riemann sum on the grid.
struct PathSample {
  std::uint64_t seed = 0;
  std::string model_id;
  int base = 2;
  int n_min = 1;
  int n_max = 1;
  int m_sub = 1;  // uniform subdivisions actually applied per finest cell
  bool lebesgue = true;
  std::vector<double> grid;                  // cells + 1 points, grid[0]=0, back()=1
  std::vector<std::vector<Complex>> values;  // one row per generation

  std::size_t cells() const { return grid.size() - 1; }
  const std::vector<Complex>& gen(int n) const;
};

// m_sub refines the evaluation grid below the finest b-adic cells; it is
// honored under Lebesgue lambda (where F_n is affine inside cells, so
// refinement stays exact for b-adic models) and coerced to 1 for Bernoulli
// measures. Rebuilding with a larger n_max reproduces coarser generations:
// exactly for b-adic models, to quadrature accuracy for cone families.
PathSample build_paths(const CascadeModel& model, const ReferenceMeasure& measure,
                       std::uint64_t seed, int n_max, int m_sub = 1, int n_min = 1,
                       std::string model_id = "");

// max over the b^n + 1 points of T_n of |F_n - F_{n-1}|; requires both
// generations stored (n_min < n <= n_max).
double cauchy_increment(const PathSample& path, int n);

// max_t |F_n(t)| over the sample grid, one entry per stored generation.
std::vector<double> sup_norm_trajectory(const PathSample& path);

struct MartingaleRow {
  double t = 0.0;
  Complex mean_q;
  double se_re = 0.0;
  double se_im = 0.0;
  bool ok = false;  // |E Q_n(t) - 1| within 4 SE componentwise
};

struct MartingaleReport {
  int n = 0;
  int replicas = 0;
  std::vector<MartingaleRow> rows;
  bool all_ok = false;
};

// Ensemble mean of Q_n(t) against the exact martingale value 1. Degenerate
// (zero-variance) cases must match exactly.
MartingaleReport martingale_check(const CascadeModel& model, std::span<const double> ts,
                                  int n, int replicas, std::uint64_t seed,
                                  int threads = 1);

// Largest generation <= n_hi at which a replicas-sized ensemble still
// resolves E Q_n = 1: the worst-case E|Q_n|^2 along any digit path must stay
// below replicas/16, otherwise the 4-SE band is driven by unobserved tail
// events. At least 1.
int martingale_informative_level(const CascadeModel& model, int replicas, int n_hi);

struct DecorrelationReport {
  int n = 0;
  int separation_cells = 0;  // gap in units of b^-n
  double t = 0.0, s = 0.0;
  Complex covariance;        // E[P(t) conj(P(s))] - E P(t) conj(E P(s))
  double se = 0.0;           // standard error of the covariance estimate
  bool ok = false;
};

// (P3): P_n over intervals separated by at least N cells are independent;
// N = 1 for b-adic models, ceil(beta*b) + 1 for cone geometries.
int decorrelation_separation(const CascadeModel& model);
DecorrelationReport decorrelation_check(const CascadeModel& model, int n, int replicas,
                                        std::uint64_t seed, int threads = 1);

struct SelfSimilarityReport {
  int n = 0;
  // second absolute moments of P_{1+n}(t/b) vs P_n(t), pooled over probe points
  double moment_left = 0.0, moment_right = 0.0;
  double se_left = 0.0, se_right = 0.0;
  bool ok = false;
};

// (P4) specialization: P_{1+n} composed with the contraction onto the first
// generation-1 interval matches P_n in distribution; compared through second
// absolute moments on independent ensembles.
SelfSimilarityReport self_similarity_check(const CascadeModel& model, int n, int replicas,
                                           std::uint64_t seed, int threads = 1);

}  // namespace cascade
