#include "cascade/rng.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace cascade {

namespace {

constexpr std::uint32_t kPhiloxM0 = 0xD2511F53u;
constexpr std::uint32_t kPhiloxM1 = 0xCD9E8D57u;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

inline void philox_round(std::array<std::uint32_t, 4>& ctr,
                         const std::array<std::uint32_t, 2>& key) {
  const std::uint64_t p0 = std::uint64_t(kPhiloxM0) * ctr[0];
  const std::uint64_t p1 = std::uint64_t(kPhiloxM1) * ctr[2];
  const std::uint32_t hi0 = static_cast<std::uint32_t>(p0 >> 32);
  const std::uint32_t lo0 = static_cast<std::uint32_t>(p0);
  const std::uint32_t hi1 = static_cast<std::uint32_t>(p1 >> 32);
  const std::uint32_t lo1 = static_cast<std::uint32_t>(p1);
  ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
}

}  // namespace

std::array<std::uint32_t, 4> philox4x32(const std::array<std::uint32_t, 4>& ctr,
                                        const std::array<std::uint32_t, 2>& key) {
  std::array<std::uint32_t, 4> x = ctr;
  std::array<std::uint32_t, 2> k = key;
  for (int round = 0; round < 10; ++round) {
    if (round > 0) {
      k[0] += kWeyl0;
      k[1] += kWeyl1;
    }
    philox_round(x, k);
  }
  return x;
}

RngStream::RngStream(std::uint64_t seed, StreamDomain domain, std::uint64_t id,
                     std::uint32_t lane) {
  key_ = {static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)};
  id_ = {static_cast<std::uint32_t>(id), static_cast<std::uint32_t>(id >> 32),
         (static_cast<std::uint32_t>(domain) << 24) | (lane & 0x00FFFFFFu)};
}

void RngStream::refill() {
  block_ = philox4x32({counter_, id_[0], id_[1], id_[2]}, key_);
  if (++counter_ == 0) throw std::runtime_error("rng stream exhausted");
  pos_ = 0;
}

std::uint32_t RngStream::next_u32() {
  if (pos_ >= 4) refill();
  return block_[static_cast<std::size_t>(pos_++)];
}

std::uint64_t RngStream::next_u64() {
  const std::uint64_t lo = next_u32();
  const std::uint64_t hi = next_u32();
  return (hi << 32) | lo;
}

double RngStream::uniform01() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double RngStream::uniform01_pos() {
  return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
}

double RngStream::uniform(double a, double b) {
  return a + (b - a) * uniform01();
}

double RngStream::normal() {
  if (have_cached_normal_) {
    have_cached_normal_ = false;
    return cached_normal_;
  }
  const double u1 = uniform01_pos();
  const double u2 = uniform01();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double theta = 2.0 * std::numbers::pi * u2;
  cached_normal_ = r * std::sin(theta);
  have_cached_normal_ = true;
  return r * std::cos(theta);
}

std::uint64_t RngStream::poisson(double mean) {
  if (!(mean >= 0.0) || !std::isfinite(mean)) {
    throw std::invalid_argument("poisson mean must be finite and >= 0");
  }
  if (mean == 0.0) return 0;
  if (mean < 10.0) return poisson_small(mean);
  return poisson_ptrd(mean);
}

std::uint64_t RngStream::poisson_small(double mean) {
  // inversion by sequential search on the pmf
  const double L = std::exp(-mean);
  double p = L;
  double u = uniform01();
  std::uint64_t k = 0;
  while (u > p) {
    u -= p;
    ++k;
    p *= mean / static_cast<double>(k);
    if (k > 2000) break;  // numerically unreachable for mean < 10
  }
  return k;
}

std::uint64_t RngStream::poisson_ptrd(double mean) {
  // Hormann's PTRD transformed rejection
  const double mu = mean;
  const double smu = std::sqrt(mu);
  const double b = 0.931 + 2.53 * smu;
  const double a = -0.059 + 0.02483 * b;
  const double inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
  const double v_r = 0.9277 - 3.6224 / (b - 2.0);
  const double log_mu = std::log(mu);
  for (;;) {
    double u = uniform01() - 0.5;
    double v = uniform01();
    const double us = 0.5 - std::abs(u);
    const double kf = std::floor((2.0 * a / us + b) * u + mu + 0.43);
    if (us >= 0.07 && v <= v_r) {
      return static_cast<std::uint64_t>(kf);
    }
    if (kf < 0.0 || (us < 0.013 && v > us)) {
      continue;
    }
    const double k = kf;
    const double lhs = std::log(v * inv_alpha / (a / (us * us) + b));
    const double rhs = k * log_mu - mu - std::lgamma(k + 1.0);
    if (lhs <= rhs) {
      return static_cast<std::uint64_t>(kf);
    }
  }
}

std::uint64_t derive_seed(std::uint64_t master_seed, std::uint64_t index,
                          std::uint32_t purpose) {
  RngStream s(master_seed, StreamDomain::kSeedDerive, index, purpose);
  return s.next_u64();
}

}  // namespace cascade
