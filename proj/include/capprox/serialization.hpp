#pragma once

// Binary image of an approximator backed by HashFamily.
//
//   offset  size  field
//        0     4  magic "CAPX"
//        4     4  format version (1), little endian
//        8     1  lattice tag (NatLattice = 1, BoolLattice = 2)
//        9     1  bucket width in bytes
//       10     2  reserved, zero
//       12     4  d
//       16     8  m
//       24     8  hash seed
//       32  m*w   buckets, little endian
//
// The hash family is rebuilt from (seed, d, m), so a round trip is bit-exact.

#include <array>
#include <cstdint>
#include <istream>
#include <ostream>
#include <vector>

#include "capprox/approximator.hpp"
#include "capprox/error.hpp"

namespace capprox {

inline constexpr std::array<char, 4> kImageMagic = {'C', 'A', 'P', 'X'};
inline constexpr std::uint32_t kImageVersion = 1;

namespace detail {

inline void put_le(std::ostream& out, std::uint64_t value, int width) {
  for (int i = 0; i < width; ++i) out.put(static_cast<char>((value >> (8 * i)) & 0xff));
}

inline std::uint64_t get_le(std::istream& in, int width) {
  std::uint64_t value = 0;
  for (int i = 0; i < width; ++i) {
    const int c = in.get();
    if (c == std::char_traits<char>::eof()) throw FormatError("truncated approximator image");
    value |= static_cast<std::uint64_t>(static_cast<unsigned char>(c)) << (8 * i);
  }
  return value;
}

template <typename L>
constexpr int bucket_width() {
  return static_cast<int>(sizeof(typename L::value_type));
}

}  // namespace detail

template <LatticeTraits L, HashableKey Key>
void write_image(std::ostream& out, const CompactApproximator<L, Key, HashFamily>& approx) {
  out.write(kImageMagic.data(), kImageMagic.size());
  detail::put_le(out, kImageVersion, 4);
  detail::put_le(out, L::tag, 1);
  detail::put_le(out, detail::bucket_width<L>(), 1);
  detail::put_le(out, 0, 2);
  detail::put_le(out, approx.d(), 4);
  detail::put_le(out, approx.m(), 8);
  detail::put_le(out, approx.family().seed(), 8);
  for (const auto& v : approx.buckets()) {
    detail::put_le(out, static_cast<std::uint64_t>(v), detail::bucket_width<L>());
  }
}

template <LatticeTraits L, HashableKey Key>
CompactApproximator<L, Key, HashFamily> read_image(std::istream& in) {
  std::array<char, 4> magic{};
  in.read(magic.data(), magic.size());
  if (!in || magic != kImageMagic) throw FormatError("not an approximator image");
  if (detail::get_le(in, 4) != kImageVersion) throw FormatError("unsupported image version");
  if (detail::get_le(in, 1) != L::tag) throw FormatError("image holds a different lattice");
  if (detail::get_le(in, 1) != static_cast<std::uint64_t>(detail::bucket_width<L>())) {
    throw FormatError("image bucket width mismatch");
  }
  detail::get_le(in, 2);
  const auto d = detail::get_le(in, 4);
  const auto m = detail::get_le(in, 8);
  const auto seed = detail::get_le(in, 8);
  if (d == 0 || m == 0) throw FormatError("image has an empty hash family");

  using V = typename L::value_type;
  std::vector<V> buckets;
  for (std::uint64_t i = 0; i < m; ++i) {
    buckets.push_back(static_cast<V>(detail::get_le(in, detail::bucket_width<L>())));
  }
  return CompactApproximator<L, Key, HashFamily>(HashFamily(seed, d, m), std::move(buckets));
}

}  // namespace capprox
