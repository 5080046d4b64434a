#include "capprox/serialization.hpp"

#include <gtest/gtest.h>

#include <random>
#include <sstream>

namespace {

using capprox::BoolLattice;
using capprox::CompactApproximator;
using capprox::HashFamily;
using capprox::NatLattice;
using capprox::Truth;

using NatApprox = CompactApproximator<NatLattice, std::uint64_t, HashFamily>;
using BoolApprox = CompactApproximator<BoolLattice, std::uint64_t, HashFamily>;

template <typename Approx>
std::string image_of(const Approx& approx) {
  std::ostringstream out;
  capprox::write_image(out, approx);
  return out.str();
}

TEST(Serialization, RoundTripIsBitExact) {
  std::mt19937_64 rng(1);
  for (int trial = 0; trial < 50; ++trial) {
    NatApprox approx(HashFamily(rng(), 1 + rng() % 5, 1 + rng() % 300));
    for (int i = 0; i < 40; ++i) approx.insert(rng(), 1 + rng() % 100000);

    const std::string bytes = image_of(approx);
    ASSERT_EQ(bytes.size(), 32 + 4 * approx.m());
    std::istringstream in(bytes);
    const auto loaded = capprox::read_image<NatLattice, std::uint64_t>(in);
    EXPECT_EQ(loaded, approx);
    EXPECT_EQ(loaded.family(), approx.family());
    EXPECT_EQ(image_of(loaded), bytes);
    for (int q = 0; q < 100; ++q) {
      const auto key = rng();
      ASSERT_EQ(loaded.query(key), approx.query(key));
    }
  }
}

TEST(Serialization, BoolBucketsAreOneByte) {
  BoolApprox bloom(HashFamily(4, 3, 20));
  bloom.insert(7, Truth::top);
  const std::string bytes = image_of(bloom);
  EXPECT_EQ(bytes.size(), 32u + 20u);
  std::istringstream in(bytes);
  EXPECT_EQ((capprox::read_image<BoolLattice, std::uint64_t>(in)), bloom);
}

TEST(Serialization, HeaderLayout) {
  NatApprox approx(HashFamily(0x0102030405060708ULL, 3, 5));
  approx.insert(1, 0x01020304);
  const std::string bytes = image_of(approx);
  EXPECT_EQ(bytes.substr(0, 4), "CAPX");
  EXPECT_EQ(bytes[4], 1);         // version
  EXPECT_EQ(bytes[8], 1);         // NatLattice
  EXPECT_EQ(bytes[9], 4);         // bucket width
  EXPECT_EQ(bytes[12], 3);        // d
  EXPECT_EQ(bytes[16], 5);        // m
  EXPECT_EQ(bytes[24], 0x08);     // seed, little endian
  EXPECT_EQ(bytes[31], 0x01);
}

TEST(Serialization, RejectsMalformedImages) {
  NatApprox approx(HashFamily(1, 2, 8));
  approx.insert(3, 9);
  const std::string good = image_of(approx);

  std::istringstream bad_magic("XXXX" + good.substr(4));
  EXPECT_THROW((capprox::read_image<NatLattice, std::uint64_t>(bad_magic)), capprox::FormatError);

  std::istringstream truncated(good.substr(0, good.size() - 1));
  EXPECT_THROW((capprox::read_image<NatLattice, std::uint64_t>(truncated)), capprox::FormatError);

  std::istringstream wrong_lattice(good);
  EXPECT_THROW((capprox::read_image<BoolLattice, std::uint64_t>(wrong_lattice)), capprox::FormatError);

  std::string bad_version = good;
  bad_version[4] = 2;
  std::istringstream version(bad_version);
  EXPECT_THROW((capprox::read_image<NatLattice, std::uint64_t>(version)), capprox::FormatError);
}

}  // namespace
