#pragma once

// Hand-constructed paths with known regularity, used as analysis oracles.

#include <cmath>
#include <cstddef>
#include <numbers>
#include <vector>

#include "cascade/analysis.hpp"

namespace cascade::testing {

// F(t) = t sampled on the uniform generation-n grid.
inline SampledPath identity_path(int base, int n) {
  SampledPath p;
  p.base = base;
  const std::size_t cells = static_cast<std::size_t>(std::pow(base, n));
  p.grid.resize(cells + 1);
  p.values.resize(cells + 1);
  for (std::size_t i = 0; i <= cells; ++i) {
    const double t = static_cast<double>(i) / static_cast<double>(cells);
    p.grid[i] = t;
    p.values[i] = Complex(t, 0.0);
  }
  return p;
}

inline SampledPath constant_path(int base, int n, Complex value) {
  SampledPath p = identity_path(base, n);
  for (auto& v : p.values) v = value;
  return p;
}

// Monofractal exponent-h path on the dyadic grid: every level-k cell's
// endpoint chord has length exactly 2^{-kh}. Splitting a chord u into
// u0 = c e^{-i theta} u, u1 = c e^{+i theta} u with c = 2^{-h} and
// theta = acos(2^{h-1}) keeps u0 + u1 = u; alternating the rotation sign
// per level stops the curve from drifting away from its chord, so cell
// oscillations stay within a small constant of 2^{-kh}.
inline SampledPath chord_split_path(int n, double h) {
  const double theta = std::acos(std::pow(2.0, h - 1.0));
  const double c = std::pow(2.0, -h);
  const Complex rot_m = c * Complex(std::cos(theta), -std::sin(theta));
  const Complex rot_p = c * Complex(std::cos(theta), std::sin(theta));
  std::vector<Complex> inc{Complex(1.0, 0.0)};
  for (int lev = 0; lev < n; ++lev) {
    std::vector<Complex> next;
    next.reserve(inc.size() * 2);
    const Complex a = (lev % 2 == 0) ? rot_m : rot_p;
    const Complex b = (lev % 2 == 0) ? rot_p : rot_m;
    for (const Complex& u : inc) {
      next.push_back(a * u);
      next.push_back(b * u);
    }
    inc = std::move(next);
  }
  SampledPath p = identity_path(2, n);
  p.values[0] = Complex(0.0, 0.0);
  for (std::size_t j = 0; j < inc.size(); ++j) p.values[j + 1] = p.values[j] + inc[j];
  return p;
}

}  // namespace cascade::testing
