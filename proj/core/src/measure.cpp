#include "cascade/measure.hpp"

#include <cmath>
#include <stdexcept>

namespace cascade {

ReferenceMeasure::ReferenceMeasure(int base, std::vector<std::vector<double>> levels,
                                   bool cycle)
    : base_(base), levels_(std::move(levels)), cycle_(cycle) {
  if (base_ < 2) throw std::invalid_argument("measure base must be >= 2");
  if (levels_.empty()) throw std::invalid_argument("Bernoulli measure needs split vectors");
  for (const auto& v : levels_) {
    if (v.size() != static_cast<std::size_t>(base_)) {
      throw std::invalid_argument("split vector size must equal base");
    }
    double total = 0.0;
    for (double x : v) {
      if (!(x >= 0.0)) throw std::invalid_argument("split entries must be >= 0");
      total += x;
    }
    if (std::abs(total - 1.0) > 1e-12) {
      throw std::invalid_argument("split vector must sum to 1");
    }
  }
}

const std::vector<double>& ReferenceMeasure::level(int k) const {
  if (is_lebesgue()) throw std::logic_error("Lebesgue measure has no split vectors");
  if (k < 0) throw std::out_of_range("negative level");
  const std::size_t n = levels_.size();
  const std::size_t idx = cycle_ ? static_cast<std::size_t>(k) % n
                                 : std::min(static_cast<std::size_t>(k), n - 1);
  return levels_[idx];
}

double ReferenceMeasure::cell_mass(const Word& w) const {
  if (is_lebesgue()) {
    return std::pow(static_cast<double>(w.base), -static_cast<double>(w.length()));
  }
  if (w.base != base_) throw std::invalid_argument("word base mismatch with measure");
  double m = 1.0;
  for (int k = 0; k < w.length(); ++k) {
    m *= level(k)[w.digits[static_cast<std::size_t>(k)]];
  }
  return m;
}

}  // namespace cascade
