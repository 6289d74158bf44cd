#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace gkpd {

// Derives an independent stream seed from one master seed and a component tag,
// so that "dataset" and "rff" draws never share state.
std::uint64_t split_seed(std::uint64_t master, std::string_view component);

// mt19937_64 with hand-rolled output transforms. std::normal_distribution and
// std::uniform_real_distribution are implementation-defined, so every mapping
// from raw 64-bit draws to doubles lives here, and equal seeds give equal
// streams on every conforming standard library.
class SeededRng {
 public:
  explicit SeededRng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  // Uniform on (0, 1]; never returns 0, so it is safe under log().
  double uniform01();

  double uniform(double lo, double hi);

  // Standard normal via Box-Muller. Consumes exactly two uniforms per pair of
  // variates; the second variate is cached for the next call.
  double normal();

  // Uniform integer in [lo, hi], both inclusive.
  int uniform_int(int lo, int hi);

 private:
  std::mt19937_64 engine_;
  double cached_normal_ = 0.0;
  bool has_cached_ = false;
};

}  // namespace gkpd
