#include "capprox/lattice.hpp"

#include <gtest/gtest.h>

#include <random>
#include <vector>

namespace {

using capprox::BoolLattice;
using capprox::FunctionSample;
using capprox::Law;
using capprox::NatLattice;
using capprox::Triple;
using capprox::Truth;

// join = +, which is not idempotent.
struct AdditiveLattice {
  using value_type = std::uint32_t;
  static constexpr value_type bottom() { return 0; }
  static constexpr value_type join(value_type a, value_type b) { return a + b; }
  static constexpr value_type meet(value_type a, value_type b) { return std::min(a, b); }
  static constexpr bool leq(value_type a, value_type b) { return a <= b; }
};

template <typename T>
std::vector<Triple<T>> all_triples(const std::vector<T>& elems) {
  std::vector<Triple<T>> out;
  for (auto x : elems)
    for (auto y : elems)
      for (auto z : elems) out.push_back({x, y, z});
  return out;
}

TEST(LatticeLaws, NatLatticeSmallTriples) {
  const auto report = capprox::check_lattice_laws<NatLattice>(all_triples<std::uint32_t>({0, 1, 5}));
  EXPECT_TRUE(report.empty());
}

TEST(LatticeLaws, BoolLatticeAllTriples) {
  const auto triples = all_triples<Truth>({Truth::bottom, Truth::top});
  ASSERT_EQ(triples.size(), 8u);
  EXPECT_TRUE(capprox::check_lattice_laws<BoolLattice>(triples).empty());
}

TEST(LatticeLaws, AdditionIsNotAJoin) {
  const std::vector<Triple<std::uint32_t>> triples{{1, 1, 0}};
  const auto report = capprox::check_lattice_laws<AdditiveLattice>(triples);
  ASSERT_FALSE(report.empty());
  EXPECT_TRUE(report.contains(Law::join_idempotent));
  EXPECT_EQ(capprox::to_string(Law::join_idempotent), "join-idempotent");
}

TEST(LatticeLaws, RandomNatTriples) {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<std::uint32_t> pick(0, 20);
  for (int round = 0; round < 200; ++round) {
    std::vector<Triple<std::uint32_t>> triples;
    for (int i = 0; i < 50; ++i) triples.push_back({pick(rng), pick(rng), pick(rng)});
    const auto report = capprox::check_lattice_laws<NatLattice>(triples);
    ASSERT_TRUE(report.empty()) << capprox::to_string(report.violations.front().law);
  }
}

TEST(LatticeLaws, NatIsTotalWithMaxMin) {
  EXPECT_EQ(NatLattice::join(3, 7), 7u);
  EXPECT_EQ(NatLattice::meet(3, 7), 3u);
  EXPECT_EQ(NatLattice::bottom(), 0u);
  EXPECT_EQ(BoolLattice::join(Truth::bottom, Truth::top), Truth::top);
  EXPECT_EQ(BoolLattice::meet(Truth::bottom, Truth::top), Truth::bottom);
}

TEST(FunctionSample, RejectsBottomValues) {
  FunctionSample<NatLattice, std::uint64_t> f;
  EXPECT_THROW(f.add(3, 0), capprox::InvalidSample);
}

TEST(FunctionSample, RejectsDuplicateKeys) {
  FunctionSample<NatLattice, std::uint64_t> f;
  f.add(3, 1);
  EXPECT_THROW(f.add(3, 2), capprox::InvalidSample);
}

TEST(FunctionSample, EvaluatesOffSupportToBottom) {
  FunctionSample<NatLattice, std::uint64_t> f{{1, 3}, {5, 1}, {9, 2}};
  EXPECT_EQ(f.support_size(), 3u);
  EXPECT_EQ(f(1), 3u);
  EXPECT_EQ(f(4), 0u);
  EXPECT_TRUE(f.in_support(9));
  EXPECT_FALSE(f.in_support(4));
}

}  // namespace
