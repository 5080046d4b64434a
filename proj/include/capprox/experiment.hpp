#pragma once

// Candidate-count comparison between the exact and approximate shift oracles.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "capprox/badchar_search.hpp"

namespace capprox {

class MatchSetMismatch : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RatioRow {
  std::u32string pattern;
  std::size_t d = 0;
  std::size_t m = 0;
  std::uint64_t c = 0;      // candidates, exact oracle
  std::uint64_t c_app = 0;  // candidates, approximate oracle
  double ratio = 1.0;
};

struct RatioOptions {
  std::vector<std::size_t> d_values{1, 2, 3, 4, 5, 6};
  std::optional<double> buckets_per_char;
  std::size_t m_floor = kDefaultMinBuckets;
  Heuristic heuristic = Heuristic::bm;
  std::uint64_t seed = 0;
  // Replaces ShiftOracle::approximate, e.g. to serve cached approximators.
  std::function<ShiftOracle(std::u32string_view, const ApproxOptions&)> approximate_oracle;
};

// One row per (pattern, d). The match sets of both engines must agree;
// MatchSetMismatch is raised otherwise.
inline std::vector<RatioRow> ratio_experiment(std::u32string_view text,
                                              std::span<const std::u32string> patterns,
                                              const RatioOptions& options) {
  if (patterns.empty()) throw InvalidParameter("ratio experiment needs at least one pattern");
  std::vector<RatioRow> rows;
  for (const auto& pattern : patterns) {
    const SearchProblem problem(pattern, text);
    const auto exact = search(problem, ShiftOracle::exact(pattern, Backing::associative),
                              options.heuristic);
    for (std::size_t d : options.d_values) {
      ApproxOptions approx_options;
      approx_options.d = d;
      approx_options.m_floor = options.m_floor;
      approx_options.seed = options.seed;
      approx_options.buckets_per_char = options.buckets_per_char;
      const ShiftOracle oracle = options.approximate_oracle
                                     ? options.approximate_oracle(pattern, approx_options)
                                     : ShiftOracle::approximate(pattern, approx_options);
      const auto approx = search(problem, oracle, options.heuristic);
      if (approx.matches != exact.matches) {
        throw MatchSetMismatch("approximate and exact engines disagree on the match set");
      }
      RatioRow row;
      row.pattern = pattern;
      row.d = d;
      row.m = oracle.approximator()->m();
      row.c = exact.candidates;
      row.c_app = approx.candidates;
      row.ratio = exact.candidates == 0
                      ? 1.0
                      : static_cast<double>(approx.candidates) / static_cast<double>(exact.candidates);
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

// Code points of text by decreasing frequency (ties by code point). Control
// characters are left out so patterns stay printable.
inline std::vector<char32_t> rank_by_frequency(std::u32string_view text) {
  std::map<char32_t, std::uint64_t> counts;
  for (char32_t c : text) {
    if (c < 0x20 || c == 0x7f) continue;
    ++counts[c];
  }
  std::vector<std::pair<char32_t, std::uint64_t>> ranked(counts.begin(), counts.end());
  std::stable_sort(ranked.begin(), ranked.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });
  std::vector<char32_t> out;
  out.reserve(ranked.size());
  for (const auto& [c, count] : ranked) out.push_back(c);
  return out;
}

enum class PatternClass { frequent, rare };

inline constexpr std::size_t kDefaultPatternPool = 16;

// A pattern of `length` characters drawn uniformly from the `pool` most
// (frequent) or least (rare) common characters of the ranking.
inline std::u32string make_class_pattern(std::span<const char32_t> ranked, PatternClass cls,
                                         std::size_t length, std::uint64_t seed,
                                         std::size_t pool = kDefaultPatternPool) {
  if (ranked.empty()) throw InvalidParameter("cannot draw a pattern from an empty ranking");
  if (length == 0) throw InvalidPattern("empty pattern");
  pool = std::clamp<std::size_t>(pool, 1, ranked.size());
  const auto chars = cls == PatternClass::frequent ? ranked.first(pool) : ranked.last(pool);
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, chars.size() - 1);
  std::u32string pattern;
  pattern.reserve(length);
  for (std::size_t i = 0; i < length; ++i) pattern.push_back(chars[pick(rng)]);
  return pattern;
}

}  // namespace capprox
