#pragma once

// Bad-character-shift search over Unicode scalar values.
//
// A shift oracle answers last(c) = (index of the last occurrence of c in the
// pattern) + 1, or 0 when c is absent. Exact oracles use a direct-address
// table or a hash map; the approximate oracle stores last() in a compact
// approximator over the natural numbers and may only overestimate it, which
// shortens shifts but never skips a match.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <variant>
#include <vector>

#include "capprox/approximator.hpp"
#include "capprox/distinct_estimator.hpp"
#include "capprox/error.hpp"
#include "capprox/hash_family.hpp"
#include "capprox/lattice.hpp"

namespace capprox {

enum class Backing { direct_address, associative, approximator };
enum class Heuristic { bm, qs };

inline constexpr std::size_t kDefaultDirectBound = 256;

using ShiftApproximator = CompactApproximator<NatLattice, char32_t, HashFamily>;

class DirectAddressTable {
 public:
  DirectAddressTable(std::u32string_view pattern, std::size_t bound = kDefaultDirectBound)
      : table_(bound, 0) {
    for (std::size_t i = 0; i < pattern.size(); ++i) {
      if (pattern[i] >= bound) {
        throw BackingUnsupported("pattern code point exceeds the direct-address table bound");
      }
      table_[pattern[i]] = static_cast<std::uint32_t>(i + 1);
    }
  }

  std::uint32_t operator()(char32_t c) const noexcept { return c < table_.size() ? table_[c] : 0; }

 private:
  std::vector<std::uint32_t> table_;
};

class AssociativeTable {
 public:
  explicit AssociativeTable(std::u32string_view pattern) {
    for (std::size_t i = 0; i < pattern.size(); ++i) {
      table_[pattern[i]] = static_cast<std::uint32_t>(i + 1);
    }
  }

  std::uint32_t operator()(char32_t c) const {
    auto it = table_.find(c);
    return it == table_.end() ? 0 : it->second;
  }

 private:
  std::unordered_map<char32_t, std::uint32_t> table_;
};

class ApproximateTable {
 public:
  explicit ApproximateTable(ShiftApproximator approx) : approx_(std::move(approx)) {}

  std::uint32_t operator()(char32_t c) const { return approx_.query(c); }
  const ShiftApproximator& approximator() const noexcept { return approx_; }

 private:
  ShiftApproximator approx_;
};

struct ApproxOptions {
  std::size_t d = 3;
  std::size_t m_floor = kDefaultMinBuckets;
  std::uint64_t seed = 0;
  // Support-size estimate; estimated from the pattern when unset.
  std::optional<std::size_t> n;
  // m = max(m_floor, ceil(buckets_per_char * n)) instead of ceil(n d / ln 2).
  std::optional<double> buckets_per_char;
};

inline BuildParams shift_table_params(std::u32string_view pattern, const ApproxOptions& options) {
  const std::size_t n =
      options.n ? *options.n : estimate_distinct(pattern, derive_seed(options.seed, "distinct")).n();
  if (options.buckets_per_char) {
    if (!(*options.buckets_per_char > 0.0)) throw InvalidParameter("buckets per char must be positive");
    if (options.d == 0) throw InvalidParameter("hash count d must be >= 1");
    if (options.m_floor == 0) throw InvalidParameter("m_floor must be >= 1");
    const auto m = static_cast<std::size_t>(std::ceil(*options.buckets_per_char * static_cast<double>(n)));
    return {n, options.d, std::max(options.m_floor, m)};
  }
  return choose_params(n, options.d, options.m_floor);
}

class ShiftOracle {
 public:
  static ShiftOracle exact(std::u32string_view pattern, Backing backing,
                           std::size_t direct_bound = kDefaultDirectBound) {
    check_pattern(pattern);
    switch (backing) {
      case Backing::direct_address:
        return ShiftOracle(pattern.size(), DirectAddressTable(pattern, direct_bound));
      case Backing::associative:
        return ShiftOracle(pattern.size(), AssociativeTable(pattern));
      case Backing::approximator:
        break;
    }
    throw InvalidParameter("exact oracle needs a direct-address or associative backing");
  }

  static ShiftOracle approximate(std::u32string_view pattern, const ApproxOptions& options) {
    check_pattern(pattern);
    const BuildParams params = shift_table_params(pattern, options);
    ShiftApproximator approx(HashFamily(options.seed, params.d, params.m));
    for (std::size_t i = 0; i < pattern.size(); ++i) {
      approx.insert(pattern[i], static_cast<NatLattice::value_type>(i + 1));
    }
    return ShiftOracle(pattern.size(), ApproximateTable(std::move(approx)));
  }

  // Wraps an approximator built elsewhere (e.g. loaded from an image).
  static ShiftOracle from_approximator(std::size_t pattern_length, ShiftApproximator approx) {
    if (pattern_length == 0) throw InvalidPattern("empty pattern");
    return ShiftOracle(pattern_length, ApproximateTable(std::move(approx)));
  }

  std::uint32_t operator()(char32_t c) const {
    return std::visit([c](const auto& table) { return table(c); }, table_);
  }

  std::size_t pattern_length() const noexcept { return pattern_length_; }

  Backing backing() const noexcept {
    switch (table_.index()) {
      case 0: return Backing::direct_address;
      case 1: return Backing::associative;
      default: return Backing::approximator;
    }
  }

  const ShiftApproximator* approximator() const noexcept {
    const auto* t = std::get_if<ApproximateTable>(&table_);
    return t ? &t->approximator() : nullptr;
  }

  template <typename Visitor>
  decltype(auto) visit(Visitor&& visitor) const {
    return std::visit(std::forward<Visitor>(visitor), table_);
  }

 private:
  using Table = std::variant<DirectAddressTable, AssociativeTable, ApproximateTable>;

  ShiftOracle(std::size_t pattern_length, Table table)
      : pattern_length_(pattern_length), table_(std::move(table)) {}

  static void check_pattern(std::u32string_view pattern) {
    if (pattern.empty()) throw InvalidPattern("empty pattern");
  }

  std::size_t pattern_length_;
  Table table_;
};

// Boyer-Moore rule: mismatch of text character c at pattern index j.
template <typename Oracle>
std::size_t shift_bm(const Oracle& oracle, char32_t c, std::size_t j) {
  const auto last = static_cast<std::size_t>(oracle(c));
  return j + 1 > last ? j + 1 - last : 1;
}

// QuickSearch rule: c is the text character just past the window.
template <typename Oracle>
std::size_t shift_qs(const Oracle& oracle, std::size_t pattern_length, char32_t c) {
  const auto last = static_cast<std::size_t>(oracle(c));
  return pattern_length + 1 > last ? pattern_length + 1 - last : 1;
}

inline std::size_t shift_bm(const ShiftOracle& oracle, char32_t c, std::size_t j) {
  return shift_bm<ShiftOracle>(oracle, c, j);
}

inline std::size_t shift_qs(const ShiftOracle& oracle, char32_t c) {
  return shift_qs<ShiftOracle>(oracle, oracle.pattern_length(), c);
}

struct SearchProblem {
  std::u32string_view pattern;
  std::u32string_view text;

  SearchProblem(std::u32string_view p, std::u32string_view t) : pattern(p), text(t) {
    if (pattern.empty()) throw InvalidPattern("empty pattern");
  }
};

struct SearchStats {
  std::uint64_t candidates = 0;   // windows examined
  std::uint64_t comparisons = 0;  // character comparisons
  std::vector<std::size_t> matches;
};

// Called as observer(bad_char, j, shift) for every oracle-derived shift; j is
// the pattern length for QuickSearch shifts.
struct NoShiftObserver {
  void operator()(char32_t, std::size_t, std::size_t) const noexcept {}
};

namespace detail {

template <typename Table, typename Observer>
SearchStats scan(std::u32string_view p, std::u32string_view t, const Table& last, Heuristic heuristic,
                 Observer& observer) {
  SearchStats stats;
  const std::size_t P = p.size();
  const std::size_t T = t.size();
  if (P > T) return stats;

  std::size_t k = 0;
  while (k <= T - P) {
    ++stats.candidates;
    std::size_t j = P;
    bool mismatch = false;
    while (j > 0) {
      --j;
      ++stats.comparisons;
      if (p[j] != t[k + j]) {
        mismatch = true;
        break;
      }
    }
    if (!mismatch) stats.matches.push_back(k);

    std::size_t shift = 1;
    if (heuristic == Heuristic::qs) {
      if (k + P >= T) break;
      const char32_t c = t[k + P];
      shift = shift_qs(last, P, c);
      observer(c, P, shift);
    } else if (mismatch) {
      const char32_t c = t[k + j];
      shift = shift_bm(last, c, j);
      observer(c, j, shift);
    }
    k += shift;
  }
  return stats;
}

}  // namespace detail

template <typename Observer>
SearchStats search(const SearchProblem& problem, const ShiftOracle& oracle, Heuristic heuristic,
                   Observer&& observer) {
  if (oracle.pattern_length() != problem.pattern.size()) {
    throw InvalidParameter("oracle was built for a different pattern length");
  }
  return oracle.visit([&](const auto& table) {
    return detail::scan(problem.pattern, problem.text, table, heuristic, observer);
  });
}

inline SearchStats search(const SearchProblem& problem, const ShiftOracle& oracle,
                          Heuristic heuristic = Heuristic::bm) {
  return search(problem, oracle, heuristic, NoShiftObserver{});
}

// Every window, left-to-right comparison.
inline SearchStats search_brute(const SearchProblem& problem) {
  SearchStats stats;
  const auto p = problem.pattern;
  const auto t = problem.text;
  if (p.size() > t.size()) return stats;
  for (std::size_t k = 0; k + p.size() <= t.size(); ++k) {
    ++stats.candidates;
    std::size_t i = 0;
    for (; i < p.size(); ++i) {
      ++stats.comparisons;
      if (p[i] != t[k + i]) break;
    }
    if (i == p.size()) stats.matches.push_back(k);
  }
  return stats;
}

}  // namespace capprox
