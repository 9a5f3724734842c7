#pragma once

#include <array>
#include <cstdint>

namespace cascade {

// Philox4x32-10 block function. Counter-based: every 128-bit counter maps to
// an independent 128-bit block under a 64-bit key, so streams are defined by
// counter prefixes instead of shared mutable state.
std::array<std::uint32_t, 4> philox4x32(const std::array<std::uint32_t, 4>& ctr,
                                        const std::array<std::uint32_t, 2>& key);

// Purpose tags keep unrelated draw sites on disjoint counter prefixes.
enum class StreamDomain : std::uint32_t {
  kSeedDerive = 1,   // per-replica sub-seed expansion
  kBadicNode = 2,    // one stream per (level, node) weight vector
  kConeBand = 3,     // one stream per cone band (points or cells)
  kMomentMc = 4,     // law moment Monte Carlo fallback
  kScratch = 5,      // tests and ad-hoc sampling
};

// One logical random stream: key = master seed, counter = (block, id, tag).
// Disjoint (domain, lane, id) triples never share a counter, so streams are
// independent and any one stream is reproducible in isolation.
class RngStream {
 public:
  RngStream(std::uint64_t seed, StreamDomain domain, std::uint64_t id,
            std::uint32_t lane = 0);

  std::uint32_t next_u32();
  std::uint64_t next_u64();

  double uniform01();       // [0, 1), 53-bit resolution
  double uniform01_pos();   // (0, 1], safe for log()
  double uniform(double a, double b);  // [a, b)
  double normal();          // standard normal, Box-Muller with cached pair
  std::uint64_t poisson(double mean);

 private:
  void refill();
  std::uint64_t poisson_small(double mean);   // inversion by search, mean < 10
  std::uint64_t poisson_ptrd(double mean);    // transformed rejection, mean >= 10

  std::array<std::uint32_t, 4> block_{};
  std::array<std::uint32_t, 2> key_;
  std::array<std::uint32_t, 3> id_;
  std::uint32_t counter_ = 0;
  int pos_ = 4;
  bool have_cached_normal_ = false;
  double cached_normal_ = 0.0;
};

// Expands the master seed into an unrelated sub-seed, e.g. one per replica.
std::uint64_t derive_seed(std::uint64_t master_seed, std::uint64_t index,
                          std::uint32_t purpose = 0);

}  // namespace cascade
