#pragma once

// Number of distinct code points in a pattern, used to size the shift-table
// approximator. Overestimates only cost buckets, underestimates only cost
// precision, so a rough single-pass estimate is enough.

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <string_view>
#include <unordered_set>

#include "capprox/hash_family.hpp"

namespace capprox {

enum class EstimateMethod { length_bound, probabilistic };

struct DistinctEstimate {
  double estimate = 0.0;
  std::size_t upper_bound = 0;  // pattern length
  EstimateMethod method = EstimateMethod::length_bound;

  // Value handed to choose_params: ceil(estimate) clamped to [1, length];
  // 0 only for the empty pattern.
  std::size_t n() const noexcept {
    if (upper_bound == 0) return 0;
    const double up = std::ceil(estimate);
    if (up < 1.0) return 1;
    if (up >= static_cast<double>(upper_bound)) return upper_bound;
    return static_cast<std::size_t>(up);
  }
};

inline std::size_t exact_distinct(std::u32string_view pattern) {
  std::unordered_set<char32_t> seen(pattern.begin(), pattern.end());
  return seen.size();
}

// Patterns up to this length report their length.
inline constexpr std::size_t kShortPatternLength = 64;

// Probabilistic counting with stochastic averaging (16 bitmaps).
class ProbabilisticCounter {
 public:
  static constexpr std::size_t kRegisters = 16;
  static constexpr double kBias = 0.77351;

  explicit ProbabilisticCounter(std::uint64_t seed) : salt_(derive_seed(seed, "pcsa")) {}

  void add(char32_t c) noexcept {
    const std::uint64_t h = key_digest(static_cast<std::uint32_t>(c), salt_);
    const std::uint64_t rest = h >> 4;
    const int rank = rest == 0 ? 31 : std::min(std::countr_zero(rest), 31);
    bitmaps_[h & (kRegisters - 1)] |= std::uint32_t{1} << rank;
  }

  double estimate() const noexcept {
    int total = 0;
    for (std::uint32_t b : bitmaps_) total += std::countr_one(b);
    const double mean = static_cast<double>(total) / kRegisters;
    return kRegisters / kBias * std::exp2(mean);
  }

 private:
  std::uint64_t salt_;
  std::array<std::uint32_t, kRegisters> bitmaps_{};
};

inline DistinctEstimate estimate_distinct(std::u32string_view pattern, std::uint64_t seed) {
  DistinctEstimate out;
  out.upper_bound = pattern.size();
  if (pattern.size() <= kShortPatternLength) {
    out.estimate = static_cast<double>(pattern.size());
    out.method = EstimateMethod::length_bound;
    return out;
  }
  ProbabilisticCounter counter(seed);
  for (char32_t c : pattern) counter.add(c);
  out.estimate = std::clamp(counter.estimate(), 1.0, static_cast<double>(pattern.size()));
  out.method = EstimateMethod::probabilistic;
  return out;
}

}  // namespace capprox
