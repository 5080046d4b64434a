#pragma once

// Compact approximator: m lattice-valued buckets and d hash functions.
//
// Writing (x, v) joins v into the d buckets x hashes to; reading x takes the
// meet of those d buckets. The read value is therefore never below the
// written one: f(x) <= query(x) for every x, and bottom is returned only when
// some probed bucket was never written.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <span>
#include <utility>
#include <vector>

#include "capprox/error.hpp"
#include "capprox/hash_family.hpp"
#include "capprox/lattice.hpp"

namespace capprox {

inline constexpr std::size_t kDefaultMinBuckets = 16;

struct BuildParams {
  std::size_t n = 0;  // support-size estimate
  std::size_t d = 1;
  std::size_t m = 1;

  friend bool operator==(const BuildParams&, const BuildParams&) = default;
};

// m = max(m_floor, ceil(n d / ln 2)).
inline BuildParams choose_params(std::size_t n, std::size_t d,
                                 std::size_t m_floor = kDefaultMinBuckets) {
  if (d == 0) throw InvalidParameter("choose_params needs d >= 1");
  if (m_floor == 0) throw InvalidParameter("choose_params needs m_floor >= 1");
  const double ideal = std::ceil(static_cast<double>(n) * static_cast<double>(d) / std::numbers::ln2);
  const auto m = std::max(m_floor, static_cast<std::size_t>(ideal));
  return {n, d, m};
}

// Hash count minimising the bottom-case error for n keys in m buckets.
inline std::size_t optimal_d(std::size_t n, std::size_t m) {
  if (n == 0) throw InvalidParameter("optimal_d is undefined for an empty support");
  if (m == 0) throw InvalidParameter("optimal_d needs m >= 1");
  const double d = std::round(static_cast<double>(m) * std::numbers::ln2 / static_cast<double>(n));
  return d < 1.0 ? 1 : static_cast<std::size_t>(d);
}

template <LatticeTraits L, HashableKey Key = std::uint64_t, typename Family = HashFamily>
  requires HashFamilyFor<Family, Key>
class CompactApproximator {
 public:
  using lattice_type = L;
  using key_type = Key;
  using family_type = Family;
  using value_type = typename L::value_type;

  explicit CompactApproximator(Family family)
      : family_(std::move(family)), buckets_(family_.m(), L::bottom()) {}

  CompactApproximator(Family family, std::vector<value_type> buckets)
      : family_(std::move(family)), buckets_(std::move(buckets)) {
    if (buckets_.size() != family_.m()) {
      throw InvalidParameter("bucket vector size differs from the family's m");
    }
  }

  void insert(const Key& key, const value_type& value) {
    if (value == L::bottom()) throw InvalidSample("cannot insert the bottom value");
    family_.for_each_index(key, [&](std::size_t i) { buckets_[i] = L::join(buckets_[i], value); });
  }

  value_type query(const Key& key) const {
    bool first = true;
    value_type result = L::bottom();
    family_.for_each_index(key, [&](std::size_t i) {
      result = first ? buckets_[i] : L::meet(result, buckets_[i]);
      first = false;
    });
    return result;
  }

  std::size_t d() const noexcept { return family_.d(); }
  std::size_t m() const noexcept { return family_.m(); }
  const Family& family() const noexcept { return family_; }
  std::span<const value_type> buckets() const noexcept { return buckets_; }

  friend bool operator==(const CompactApproximator& a, const CompactApproximator& b) {
    return a.buckets_ == b.buckets_;
  }

 private:
  Family family_;
  std::vector<value_type> buckets_;
};

// Fills a fresh approximator with every pair of the sample, in order.
template <LatticeTraits L, HashableKey Key, typename Family>
  requires HashFamilyFor<Family, Key>
CompactApproximator<L, Key, Family> build(Family family, const FunctionSample<L, Key>& sample) {
  CompactApproximator<L, Key, Family> approx(std::move(family));
  for (const auto& [key, value] : sample.pairs()) approx.insert(key, value);
  return approx;
}

// Same, from raw pairs; a bottom value raises InvalidSample.
template <LatticeTraits L, HashableKey Key, typename Family>
  requires HashFamilyFor<Family, Key>
CompactApproximator<L, Key, Family> build(
    Family family, std::span<const std::pair<Key, typename L::value_type>> pairs) {
  CompactApproximator<L, Key, Family> approx(std::move(family));
  for (const auto& [key, value] : pairs) approx.insert(key, value);
  return approx;
}

}  // namespace capprox
