#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cascade/cascades.hpp"
#include "cascade/measure.hpp"
#include "cascade/models.hpp"

namespace cascade {

// S(n, p) = sum_w lambda(I_w)^{p-1} int_{I_w} E|Q_n|^p dlambda over w in A^n.
// Exact product formula; b-adic models only (Q_n is constant on each I_w).
double level_moment_sum_closed(const BadicIndependentModel& model,
                               const ReferenceMeasure& measure, int n, double p);

struct McEstimate {
  double value = 0.0;
  double std_error = 0.0;
};

// Monte Carlo S(n, p): per-replica exact cell sums for b-adic models; for
// cone-geometry families E|Q_n(t)|^p is integrated over the left endpoints
// of a uniform subgrid with m_sub cells per b-adic interval. Deterministic
// for fixed (seed, replicas) regardless of thread count.
McEstimate level_moment_sum_mc(const CascadeModel& model, const ReferenceMeasure& measure,
                               int n, double p, int replicas, std::uint64_t seed,
                               int m_sub = 2, int threads = 1);

// Coupled estimates for every n in [n_lo, n_hi] (same replicas across n).
std::vector<McEstimate> level_moment_sums_mc(const CascadeModel& model,
                                             const ReferenceMeasure& measure, int n_lo,
                                             int n_hi, double p, int replicas,
                                             std::uint64_t seed, int m_sub = 2,
                                             int threads = 1);

struct PhiValue {
  double value = 0.0;
  double std_error = 0.0;       // propagated from Monte Carlo moments, else 0
  MomentMethod method = MomentMethod::kExact;
  bool windowed_rate = false;   // cone-mass rate came from a finite-depth window
};

// phi(p) = liminf_n -(1/n) log_b S(n, p) in closed form per family.
// Throws std::domain_error when a required absolute moment is infinite.
PhiValue phi_closed(const CascadeModel& model, const ReferenceMeasure& measure, double p);

struct SlopeFit {
  double slope = 0.0;
  double std_error = 0.0;
  double intercept = 0.0;
  std::vector<double> log_sums;    // -log_b S-hat(n, p) per n
  std::vector<double> log_sigmas;  // propagated per-point sigmas
  int n_lo = 0;
  int n_hi = 0;
};

// Least-squares slope of -log_b S-hat(n, p) against n; the slope estimates
// phi(p), with a confidence band propagated from the per-n standard errors.
SlopeFit phi_empirical(const CascadeModel& model, const ReferenceMeasure& measure,
                       double p, int n_lo, int n_hi, int replicas, std::uint64_t seed,
                       int m_sub = 2, int threads = 1);

// sup over q in (1, p] of phi(q)/q: every gamma below it is an a.s. uniform
// Holder exponent of the limit when the positivity criterion holds.
double holder_bound(const CascadeModel& model, const ReferenceMeasure& measure, double p);

// Smallest root of phi in the open interval (1, 2), else 1 when phi(1) = 0,
// else nullopt. Concavity makes the root unique when it exists.
std::optional<double> beta_critical(const CascadeModel& model,
                                    const ReferenceMeasure& measure);

enum class Verdict { kConvergesUniformly, kDegeneratesToZero, kInconclusive };

std::string to_string(Verdict v);

struct PhiGridEntry {
  double p = 0.0;
  PhiValue phi;
};

struct ConvergenceReport {
  std::vector<PhiGridEntry> grid;  // refined near sign changes
  Verdict verdict = Verdict::kInconclusive;
  double p_star = 0.0;       // maximizer of phi on the winning side (0 if none)
  double gamma_star = 0.0;   // holder_bound at p_star for the convergent branch
  std::optional<double> beta;
  bool distortion_structural_zero = false;  // b-adic: distortion vanishes identically
  bool distortion_checked = false;          // cone families: MC growth check ran
  bool distortion_ok = false;
  std::string note;
};

struct VerdictOptions {
  double p_min = 1.0 / 32.0;
  double p_max = 2.0;
  int grid_points = 64;
  int refine_passes = 6;
  // distortion growth check (cone families, degenerate branch only)
  int distortion_replicas = 400;
  int distortion_n_hi = 8;
  std::uint64_t seed = 1;
};

// Applies the positivity criterion on a refined p-grid. The two verdict
// branches are mutually exclusive for unit-mean families by concavity of phi
// with phi(1) <= 0. Closed forms only: re-seeding cannot change the verdict
// (the seed is used solely by the optional distortion growth check).
ConvergenceReport convergence_verdict(const CascadeModel& model,
                                      const ReferenceMeasure& measure,
                                      const VerdictOptions& opts = {});

}  // namespace cascade
