#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace gwlab {

// Every stochastic step in the project draws from a SeededRng. The stream is
// fully determined by (master, context labels):
//
//   seed = splitmix64(master)
//   for each label L: seed = splitmix64(seed ^ fnv1a64(L))
//   engine = std::mt19937_64(seed)
//
// std::mt19937_64 has a standard-mandated output sequence. The std::*
// distributions do not, so bounded integers use Lemire's multiply-shift with
// rejection and doubles take the top 53 bits. Results are therefore identical
// across compilers and standard libraries.

std::uint64_t splitmix64(std::uint64_t x) noexcept;
std::uint64_t fnv1a64(std::string_view bytes) noexcept;

/// Mixes a master value with a list of context labels into a 64-bit seed.
std::uint64_t derive_seed(std::uint64_t master, std::span<const std::string> context);
std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::string_view> context);

class SeededRng {
 public:
  SeededRng(std::uint64_t master, std::span<const std::string> context)
      : engine_(derive_seed(master, context)) {}
  SeededRng(std::uint64_t master, std::initializer_list<std::string_view> context)
      : engine_(derive_seed(master, context)) {}

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform integer in [0, bound). bound must be > 0.
  std::uint64_t uniform_below(std::uint64_t bound);

  /// Uniform double in [0, 1).
  double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  bool bernoulli(double p) { return uniform01() < p; }

  template <typename T>
  void shuffle(std::span<T> items) {
    for (std::size_t i = items.size(); i > 1; --i) {
      auto j = static_cast<std::size_t>(uniform_below(i));
      std::swap(items[i - 1], items[j]);
    }
  }
  template <typename T>
  void shuffle(std::vector<T>& items) {
    shuffle(std::span<T>(items));
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace gwlab
