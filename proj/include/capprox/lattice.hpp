#pragma once

// Lattice contract consumed by the compact approximator, plus the two
// lattices the search application and the Bloom-filter degenerate case use.
//
// A lattice is described by a stateless traits type exposing value_type,
// bottom(), join(), meet() and leq(). Elements are only ever combined or
// compared through these functions.

#include <algorithm>
#include <concepts>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "capprox/error.hpp"

namespace capprox {

template <typename L>
concept LatticeTraits = requires(const typename L::value_type& a,
                                 const typename L::value_type& b) {
  typename L::value_type;
  { L::bottom() } -> std::convertible_to<typename L::value_type>;
  { L::join(a, b) } -> std::convertible_to<typename L::value_type>;
  { L::meet(a, b) } -> std::convertible_to<typename L::value_type>;
  { L::leq(a, b) } -> std::convertible_to<bool>;
  { a == b } -> std::convertible_to<bool>;
};

// Natural numbers under the usual order. 32 bits covers any pattern index
// plus one.
struct NatLattice {
  using value_type = std::uint32_t;

  static constexpr std::uint8_t tag = 1;
  static constexpr bool total_order = true;

  static constexpr value_type bottom() noexcept { return 0; }
  static constexpr value_type join(value_type a, value_type b) noexcept { return std::max(a, b); }
  static constexpr value_type meet(value_type a, value_type b) noexcept { return std::min(a, b); }
  static constexpr bool leq(value_type a, value_type b) noexcept { return a <= b; }
};

enum class Truth : std::uint8_t { bottom = 0, top = 1 };

// Two-point chain; an approximator over it is a Bloom filter.
struct BoolLattice {
  using value_type = Truth;

  static constexpr std::uint8_t tag = 2;
  static constexpr bool total_order = true;

  static constexpr value_type bottom() noexcept { return Truth::bottom; }
  static constexpr value_type join(value_type a, value_type b) noexcept {
    return (a == Truth::top || b == Truth::top) ? Truth::top : Truth::bottom;
  }
  static constexpr value_type meet(value_type a, value_type b) noexcept {
    return (a == Truth::top && b == Truth::top) ? Truth::top : Truth::bottom;
  }
  static constexpr bool leq(value_type a, value_type b) noexcept {
    return a == Truth::bottom || b == Truth::top;
  }
};

// ---------------------------------------------------------------------------
// Law checking

enum class Law {
  join_commutative,
  meet_commutative,
  join_associative,
  meet_associative,
  join_idempotent,
  meet_idempotent,
  absorption_join_meet,
  absorption_meet_join,
  bottom_identity,
  bottom_least,
  leq_matches_join,
  leq_matches_meet,
  leq_reflexive,
  leq_antisymmetric,
  leq_transitive,
};

inline std::string_view to_string(Law law) {
  switch (law) {
    case Law::join_commutative: return "join-commutative";
    case Law::meet_commutative: return "meet-commutative";
    case Law::join_associative: return "join-associative";
    case Law::meet_associative: return "meet-associative";
    case Law::join_idempotent: return "join-idempotent";
    case Law::meet_idempotent: return "meet-idempotent";
    case Law::absorption_join_meet: return "absorption-join-meet";
    case Law::absorption_meet_join: return "absorption-meet-join";
    case Law::bottom_identity: return "bottom-identity";
    case Law::bottom_least: return "bottom-least";
    case Law::leq_matches_join: return "leq-matches-join";
    case Law::leq_matches_meet: return "leq-matches-meet";
    case Law::leq_reflexive: return "leq-reflexive";
    case Law::leq_antisymmetric: return "leq-antisymmetric";
    case Law::leq_transitive: return "leq-transitive";
  }
  return "unknown";
}

template <typename T>
struct Triple {
  T x, y, z;
};

template <typename T>
struct LawViolation {
  Law law;
  Triple<T> witness;
};

template <typename T>
struct LawReport {
  std::vector<LawViolation<T>> violations;

  bool empty() const noexcept { return violations.empty(); }
  bool contains(Law law) const {
    return std::any_of(violations.begin(), violations.end(),
                       [law](const auto& v) { return v.law == law; });
  }
};

// Checks every lattice law on each sampled triple. Violations are returned as
// data; the function never throws on a broken lattice.
template <LatticeTraits L>
LawReport<typename L::value_type> check_lattice_laws(
    std::span<const Triple<typename L::value_type>> samples) {
  using T = typename L::value_type;
  LawReport<T> report;
  auto expect = [&](bool ok, Law law, const Triple<T>& t) {
    if (!ok) report.violations.push_back({law, t});
  };

  for (const auto& t : samples) {
    const T& x = t.x;
    const T& y = t.y;
    const T& z = t.z;
    expect(L::join(x, y) == L::join(y, x), Law::join_commutative, t);
    expect(L::meet(x, y) == L::meet(y, x), Law::meet_commutative, t);
    expect(L::join(L::join(x, y), z) == L::join(x, L::join(y, z)), Law::join_associative, t);
    expect(L::meet(L::meet(x, y), z) == L::meet(x, L::meet(y, z)), Law::meet_associative, t);
    expect(L::join(x, x) == x, Law::join_idempotent, t);
    expect(L::meet(x, x) == x, Law::meet_idempotent, t);
    expect(L::join(x, L::meet(x, y)) == x, Law::absorption_join_meet, t);
    expect(L::meet(x, L::join(x, y)) == x, Law::absorption_meet_join, t);
    expect(L::join(L::bottom(), x) == x, Law::bottom_identity, t);
    expect(L::leq(L::bottom(), x), Law::bottom_least, t);
    expect(L::leq(x, y) == (L::join(x, y) == y), Law::leq_matches_join, t);
    expect(L::leq(x, y) == (L::meet(x, y) == x), Law::leq_matches_meet, t);
    expect(L::leq(x, x), Law::leq_reflexive, t);
    expect(!(L::leq(x, y) && L::leq(y, x)) || x == y, Law::leq_antisymmetric, t);
    expect(!(L::leq(x, y) && L::leq(y, z)) || L::leq(x, z), Law::leq_transitive, t);
  }
  return report;
}

template <LatticeTraits L>
LawReport<typename L::value_type> check_lattice_laws(
    const std::vector<Triple<typename L::value_type>>& samples) {
  return check_lattice_laws<L>(std::span<const Triple<typename L::value_type>>(samples));
}

// ---------------------------------------------------------------------------
// FunctionSample: a function Omega -> L given by its support.

template <LatticeTraits L, typename Key>
class FunctionSample {
 public:
  using value_type = typename L::value_type;
  using pair_type = std::pair<Key, value_type>;

  FunctionSample() = default;

  // universe_size describes Omega when it is a finite range [0, size).
  explicit FunctionSample(std::optional<std::uint64_t> universe_size)
      : universe_size_(universe_size) {}

  FunctionSample(std::initializer_list<pair_type> pairs) {
    for (const auto& [key, value] : pairs) add(key, value);
  }

  void add(const Key& key, const value_type& value) {
    if (value == L::bottom()) {
      throw InvalidSample("function sample pair carries the bottom value");
    }
    auto [it, inserted] = index_.try_emplace(key, pairs_.size());
    if (!inserted) throw InvalidSample("function sample repeats a domain element");
    pairs_.emplace_back(key, value);
  }

  // f(key); bottom off the support.
  value_type operator()(const Key& key) const {
    auto it = index_.find(key);
    return it == index_.end() ? L::bottom() : pairs_[it->second].second;
  }

  bool in_support(const Key& key) const { return index_.contains(key); }

  std::span<const pair_type> pairs() const noexcept { return pairs_; }
  std::size_t support_size() const noexcept { return pairs_.size(); }
  std::optional<std::uint64_t> universe_size() const noexcept { return universe_size_; }

 private:
  std::vector<pair_type> pairs_;
  std::unordered_map<Key, std::size_t> index_;
  std::optional<std::uint64_t> universe_size_;
};

}  // namespace capprox
