#pragma once

// Seeded families of d hash functions Omega -> [m].
//
// HashFamily is the production family: two 64-bit digests g1, g2 per key,
// index(x, j) = (g1 + j * g2) mod m with g2 forced odd. IndependentHashFamily
// salts a separate digest per function and matches the "d independent random
// functions" model exactly, which the Monte-Carlo harness relies on.
// FixedFamily wraps explicit closed-form functions for hand-checked examples.

#include <cstddef>
#include <cstdint>
#include <cstring>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <type_traits>
#include <utility>
#include <vector>

#include "capprox/error.hpp"

namespace capprox {

// splitmix64 finalizer: bijective, full avalanche.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

// Derives an independent-looking sub-seed from a parent seed and a role.
constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t role) noexcept {
  return mix64(seed ^ mix64(role + kGolden));
}

constexpr std::uint64_t derive_seed(std::uint64_t seed, std::string_view role) noexcept {
  std::uint64_t h = 0xcbf29ce484222325ULL;  // FNV-1a
  for (char c : role) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  return derive_seed(seed, h);
}

inline std::uint64_t digest_bytes(std::span<const std::byte> bytes, std::uint64_t salt) noexcept {
  std::uint64_t h = mix64(salt + (static_cast<std::uint64_t>(bytes.size()) + 1) * kGolden);
  std::size_t i = 0;
  for (; i + 8 <= bytes.size(); i += 8) {
    std::uint64_t w = 0;
    for (int b = 7; b >= 0; --b) w = (w << 8) | std::to_integer<std::uint64_t>(bytes[i + b]);
    h = mix64(h ^ w);
  }
  if (i < bytes.size()) {
    std::uint64_t w = 0;
    for (std::size_t b = bytes.size(); b-- > i;) w = (w << 8) | std::to_integer<std::uint64_t>(bytes[b]);
    h = mix64(h ^ w ^ kGolden);
  }
  return mix64(h);
}

template <typename Key>
concept HashableKey = std::integral<Key> || std::convertible_to<const Key&, std::string_view> ||
                      std::convertible_to<const Key&, std::span<const std::byte>>;

// Salted 64-bit digest of a key. Integral keys are hashed by value, so a
// char32_t and the equal uint64_t digest identically.
template <HashableKey Key>
std::uint64_t key_digest(const Key& key, std::uint64_t salt) noexcept {
  if constexpr (std::integral<Key>) {
    return mix64(mix64(static_cast<std::uint64_t>(key) ^ salt) + salt);
  } else if constexpr (std::convertible_to<const Key&, std::string_view>) {
    std::string_view s = key;
    return digest_bytes(std::as_bytes(std::span(s.data(), s.size())), salt);
  } else {
    return digest_bytes(std::span<const std::byte>(key), salt);
  }
}

// Family contract used by the approximator.
template <typename F, typename Key>
concept HashFamilyFor = requires(const F& f, const Key& key, std::size_t j) {
  { f.d() } -> std::convertible_to<std::size_t>;
  { f.m() } -> std::convertible_to<std::size_t>;
  { f.index(key, j) } -> std::convertible_to<std::size_t>;
  f.for_each_index(key, [](std::size_t) {});
};

namespace detail {
inline void check_shape(std::size_t d, std::size_t m) {
  if (d == 0) throw InvalidParameter("hash family needs d >= 1");
  if (m == 0) throw InvalidParameter("hash family needs m >= 1");
}
}  // namespace detail

class HashFamily {
 public:
  struct Probe {
    std::uint64_t g1;
    std::uint64_t g2;  // always odd
  };

  HashFamily(std::uint64_t seed, std::size_t d, std::size_t m)
      : seed_(seed),
        d_(d),
        m_(m),
        salt1_(derive_seed(seed, 0x6731)),
        salt2_(derive_seed(seed, 0x6732)) {
    detail::check_shape(d, m);
  }

  std::uint64_t seed() const noexcept { return seed_; }
  std::size_t d() const noexcept { return d_; }
  std::size_t m() const noexcept { return m_; }

  template <HashableKey Key>
  Probe probe(const Key& key) const noexcept {
    return {key_digest(key, salt1_), key_digest(key, salt2_) | 1U};
  }

  template <HashableKey Key>
  std::size_t index(const Key& key, std::size_t j) const {
    if (j >= d_) throw InvalidParameter("hash function index out of range");
    const Probe p = probe(key);
    return static_cast<std::size_t>((p.g1 + j * p.g2) % m_);
  }

  template <HashableKey Key, typename Fn>
  void for_each_index(const Key& key, Fn&& fn) const {
    const Probe p = probe(key);
    std::uint64_t h = p.g1;
    for (std::size_t j = 0; j < d_; ++j, h += p.g2) fn(static_cast<std::size_t>(h % m_));
  }

  friend bool operator==(const HashFamily& a, const HashFamily& b) noexcept {
    return a.seed_ == b.seed_ && a.d_ == b.d_ && a.m_ == b.m_;
  }

 private:
  std::uint64_t seed_;
  std::size_t d_;
  std::size_t m_;
  std::uint64_t salt1_;
  std::uint64_t salt2_;
};

class IndependentHashFamily {
 public:
  IndependentHashFamily(std::uint64_t seed, std::size_t d, std::size_t m)
      : seed_(seed), m_(m) {
    detail::check_shape(d, m);
    salts_.reserve(d);
    for (std::size_t j = 0; j < d; ++j) salts_.push_back(derive_seed(seed, 0x1000 + j));
  }

  std::uint64_t seed() const noexcept { return seed_; }
  std::size_t d() const noexcept { return salts_.size(); }
  std::size_t m() const noexcept { return m_; }

  template <HashableKey Key>
  std::size_t index(const Key& key, std::size_t j) const {
    if (j >= salts_.size()) throw InvalidParameter("hash function index out of range");
    return static_cast<std::size_t>(key_digest(key, salts_[j]) % m_);
  }

  template <HashableKey Key, typename Fn>
  void for_each_index(const Key& key, Fn&& fn) const {
    for (std::uint64_t salt : salts_) fn(static_cast<std::size_t>(key_digest(key, salt) % m_));
  }

 private:
  std::uint64_t seed_;
  std::size_t m_;
  std::vector<std::uint64_t> salts_;
};

// Explicit functions, e.g. h0(x) = x / 2 and h1(x) = 5x mod 6.
template <typename Key = std::uint64_t>
class FixedFamily {
 public:
  using Function = std::function<std::size_t(const Key&)>;

  FixedFamily(std::vector<Function> functions, std::size_t m)
      : functions_(std::move(functions)), m_(m) {
    detail::check_shape(functions_.size(), m);
  }

  std::size_t d() const noexcept { return functions_.size(); }
  std::size_t m() const noexcept { return m_; }

  std::size_t index(const Key& key, std::size_t j) const {
    if (j >= functions_.size()) throw InvalidParameter("hash function index out of range");
    const std::size_t i = functions_[j](key);
    if (i >= m_) throw InvalidParameter("fixed hash function left the bucket range");
    return i;
  }

  template <typename Fn>
  void for_each_index(const Key& key, Fn&& fn) const {
    for (std::size_t j = 0; j < functions_.size(); ++j) fn(index(key, j));
  }

 private:
  std::vector<Function> functions_;
  std::size_t m_;
};

}  // namespace capprox
