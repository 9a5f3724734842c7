#pragma once

#include <vector>

#include "cascade/badic.hpp"

namespace cascade {

// Reference measure lambda on [0,1]: Lebesgue, or an inhomogeneous Bernoulli
// product measure assigning mass prod_k v^{(k)}[w_k] to I_w.
class ReferenceMeasure {
 public:
  ReferenceMeasure() = default;  // Lebesgue

  // levels[k] is the generation-(k+1) split vector (size b, nonnegative,
  // sums to 1). cycle=true repeats the list periodically, else the last
  // vector persists.
  ReferenceMeasure(int base, std::vector<std::vector<double>> levels, bool cycle);

  static ReferenceMeasure lebesgue() { return ReferenceMeasure(); }

  bool is_lebesgue() const { return levels_.empty(); }
  int base() const { return base_; }
  bool cycle() const { return cycle_; }
  int level_count() const { return static_cast<int>(levels_.size()); }

  // Split vector applied between generations k and k+1 (k is 0-based).
  const std::vector<double>& level(int k) const;

  // lambda(I_w), exact product of per-level entries (b^-|w| for Lebesgue).
  double cell_mass(const Word& w) const;

 private:
  int base_ = 0;  // 0 marks Lebesgue (any base)
  std::vector<std::vector<double>> levels_;
  bool cycle_ = true;
};

}  // namespace cascade
