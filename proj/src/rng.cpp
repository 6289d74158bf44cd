#include "gkpd/rng.hpp"

#include <cmath>
#include <stdexcept>

namespace gkpd {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace

std::uint64_t split_seed(std::uint64_t master, std::string_view component) {
  return splitmix64(master ^ splitmix64(fnv1a(component)));
}

double SeededRng::uniform01() {
  // Top 53 bits, shifted into (0, 1].
  return static_cast<double>((engine_() >> 11) + 1) * 0x1.0p-53;
}

double SeededRng::uniform(double lo, double hi) {
  if (!(lo <= hi)) throw std::invalid_argument("uniform: lo > hi");
  return lo + (hi - lo) * uniform01();
}

double SeededRng::normal() {
  if (has_cached_) {
    has_cached_ = false;
    return cached_normal_;
  }
  const double u1 = uniform01();
  const double u2 = uniform01();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double theta = 2.0 * M_PI * u2;
  cached_normal_ = r * std::sin(theta);
  has_cached_ = true;
  return r * std::cos(theta);
}

int SeededRng::uniform_int(int lo, int hi) {
  if (lo > hi) throw std::invalid_argument("uniform_int: lo > hi");
  const std::uint64_t range = static_cast<std::uint64_t>(hi) - static_cast<std::uint64_t>(lo) + 1;
  // Fixed-point multiply keeps the mapping portable and branch-free.
  const unsigned __int128 prod = static_cast<unsigned __int128>(engine_()) * range;
  return lo + static_cast<int>(prod >> 64);
}

}  // namespace gkpd
