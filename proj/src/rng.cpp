#include "gwlab/rng.hpp"

#include <stdexcept>

namespace gwlab {

std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t fnv1a64(std::string_view bytes) noexcept {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

namespace {
template <typename Range>
std::uint64_t derive(std::uint64_t master, const Range& context) {
  std::uint64_t seed = splitmix64(master);
  for (const auto& label : context) seed = splitmix64(seed ^ fnv1a64(label));
  return seed;
}
}  // namespace

std::uint64_t derive_seed(std::uint64_t master, std::span<const std::string> context) {
  return derive(master, context);
}

std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::string_view> context) {
  return derive(master, context);
}

std::uint64_t SeededRng::uniform_below(std::uint64_t bound) {
  if (bound == 0) throw std::invalid_argument("uniform_below: bound must be positive");
  // Lemire, "Fast Random Integer Generation in an Interval" (2019).
  unsigned __int128 m = static_cast<unsigned __int128>(engine_()) * bound;
  auto low = static_cast<std::uint64_t>(m);
  if (low < bound) {
    const std::uint64_t threshold = (0 - bound) % bound;
    while (low < threshold) {
      m = static_cast<unsigned __int128>(engine_()) * bound;
      low = static_cast<std::uint64_t>(m);
    }
  }
  return static_cast<std::uint64_t>(m >> 64);
}

}  // namespace gwlab
