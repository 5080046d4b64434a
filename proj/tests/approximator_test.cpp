#include "capprox/approximator.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <set>
#include <vector>

namespace {

using capprox::BoolLattice;
using capprox::CompactApproximator;
using capprox::FixedFamily;
using capprox::FunctionSample;
using capprox::HashFamily;
using capprox::NatLattice;
using capprox::Truth;

using Fixed = FixedFamily<std::uint64_t>;
using FixedApprox = CompactApproximator<NatLattice, std::uint64_t, Fixed>;
using NatApprox = CompactApproximator<NatLattice, std::uint64_t, HashFamily>;
using BoolApprox = CompactApproximator<BoolLattice, std::uint64_t, HashFamily>;

// Omega = [12], f(1) = 3, f(5) = 1, f(9) = 2, h0(x) = x/2, h1(x) = 5x mod 6.
Fixed worked_family() {
  return Fixed({[](const std::uint64_t& x) { return std::size_t(x / 2); },
                [](const std::uint64_t& x) { return std::size_t(5 * x % 6); }},
               6);
}

FunctionSample<NatLattice, std::uint64_t> worked_function() {
  FunctionSample<NatLattice, std::uint64_t> f(12);
  f.add(1, 3);
  f.add(5, 1);
  f.add(9, 2);
  return f;
}

TEST(ChooseParams, Examples) {
  EXPECT_EQ(capprox::choose_params(100, 3, 16).m, 433u);
  EXPECT_EQ(capprox::choose_params(0, 3, 16).m, 16u);
  EXPECT_EQ(capprox::choose_params(100, 2, 16).m, 289u);
  const auto p = capprox::choose_params(100, 3);
  EXPECT_EQ(p, (capprox::BuildParams{100, 3, 433}));
}

TEST(ChooseParams, ValidatesArguments) {
  EXPECT_THROW(capprox::choose_params(10, 0, 16), capprox::InvalidParameter);
  EXPECT_THROW(capprox::choose_params(10, 1, 0), capprox::InvalidParameter);
}

TEST(OptimalD, Examples) {
  EXPECT_EQ(capprox::optimal_d(100, 433), 3u);
  EXPECT_EQ(capprox::optimal_d(8, 24), 2u);
  EXPECT_EQ(capprox::optimal_d(1000, 1), 1u);
  EXPECT_THROW(capprox::optimal_d(0, 10), capprox::InvalidParameter);
}

TEST(Build, WorkedExampleBuckets) {
  const auto approx = capprox::build(worked_family(), worked_function());
  const std::vector<std::uint32_t> expected{3, 1, 1, 2, 2, 3};
  EXPECT_TRUE(std::ranges::equal(approx.buckets(), expected));
}

TEST(Build, WorkedExampleQueries) {
  const auto approx = capprox::build(worked_family(), worked_function());
  EXPECT_EQ(approx.query(1), 3u);  // exact
  EXPECT_EQ(approx.query(4), 1u);  // h0 and h1 coincide at bucket 2
  const auto f = worked_function();
  for (std::uint64_t x = 0; x < 12; ++x) EXPECT_LE(f(x), approx.query(x)) << x;
}

TEST(Insert, WorkedExamplePartialFill) {
  FixedApprox approx(worked_family());
  approx.insert(1, 3);
  approx.insert(5, 1);
  const std::vector<std::uint32_t> expected{3, 1, 1, 0, 0, 3};
  EXPECT_TRUE(std::ranges::equal(approx.buckets(), expected));
}

TEST(Build, EmptySampleLeavesBottom) {
  const auto approx = capprox::build(HashFamily(1, 3, 50), FunctionSample<NatLattice, std::uint64_t>{});
  EXPECT_TRUE(std::ranges::all_of(approx.buckets(), [](auto v) { return v == 0; }));
  EXPECT_EQ(approx.query(17), 0u);
}

TEST(Build, SinglePairTouchesDBuckets) {
  NatApprox approx(HashFamily(3, 2, 101));  // m prime: the two probes differ
  approx.insert(42, 7);
  EXPECT_EQ(std::ranges::count(approx.buckets(), 7u), 2);
  EXPECT_EQ(std::ranges::count(approx.buckets(), 0u), 99);
}

TEST(Insert, IsIdempotent) {
  NatApprox once(HashFamily(9, 3, 64));
  NatApprox twice(HashFamily(9, 3, 64));
  once.insert(10, 4);
  twice.insert(10, 4);
  twice.insert(10, 4);
  EXPECT_EQ(once, twice);
}

TEST(Insert, IntoEmptyStoresValue) {
  NatApprox approx(HashFamily(9, 3, 64));
  approx.insert(10, 5);
  approx.family().for_each_index(std::uint64_t{10}, [&](std::size_t i) { EXPECT_EQ(approx.buckets()[i], 5u); });
  EXPECT_EQ(approx.query(10), 5u);
}

TEST(Insert, RejectsBottom) {
  NatApprox approx(HashFamily(9, 3, 64));
  EXPECT_THROW(approx.insert(1, 0), capprox::InvalidSample);
  BoolApprox bloom(HashFamily(9, 3, 64));
  EXPECT_THROW(bloom.insert(1, Truth::bottom), capprox::InvalidSample);
}

TEST(Build, RejectsBottomPairs) {
  const std::vector<std::pair<std::uint64_t, std::uint32_t>> pairs{{1, 2}, {3, 0}};
  EXPECT_THROW((capprox::build<NatLattice, std::uint64_t, HashFamily>(
                   HashFamily(1, 2, 8), std::span<const std::pair<std::uint64_t, std::uint32_t>>(pairs))),
               capprox::InvalidSample);
}

// --- properties ------------------------------------------------------------

struct RandomFunction {
  std::vector<std::pair<std::uint64_t, std::uint32_t>> pairs;
  std::vector<std::uint32_t> dense;  // f over the whole universe
};

RandomFunction random_function(std::mt19937_64& rng, std::uint64_t universe, std::size_t n,
                               std::uint32_t max_value) {
  RandomFunction f;
  f.dense.assign(universe, 0);
  std::uniform_int_distribution<std::uint64_t> key(0, universe - 1);
  std::uniform_int_distribution<std::uint32_t> value(1, max_value);
  while (f.pairs.size() < n) {
    const auto x = key(rng);
    if (f.dense[x] != 0) continue;
    f.dense[x] = value(rng);
    f.pairs.emplace_back(x, f.dense[x]);
  }
  return f;
}

TEST(ApproximatorProperty, UpperBoundOverWholeUniverse) {
  std::mt19937_64 rng(2024);
  for (int config = 0; config < 500; ++config) {
    const std::uint64_t universe = 1 + rng() % 512;
    const std::size_t n = rng() % (universe + 1) / 2;
    const std::size_t d = 1 + rng() % 5;
    const std::size_t m = 1 + rng() % 64;
    const auto f = random_function(rng, universe, n, 40);
    NatApprox approx(HashFamily(rng(), d, m));
    for (const auto& [x, v] : f.pairs) approx.insert(x, v);
    for (std::uint64_t x = 0; x < universe; ++x) ASSERT_LE(f.dense[x], approx.query(x));
  }
}

TEST(ApproximatorProperty, InsertionOrderDoesNotMatter) {
  std::mt19937_64 rng(5);
  for (int config = 0; config < 200; ++config) {
    auto f = random_function(rng, 1000, 1 + rng() % 60, 100);
    const HashFamily family(rng(), 1 + rng() % 4, 1 + rng() % 80);
    NatApprox a(family);
    for (const auto& [x, v] : f.pairs) a.insert(x, v);
    std::shuffle(f.pairs.begin(), f.pairs.end(), rng);
    NatApprox b(family);
    for (const auto& [x, v] : f.pairs) b.insert(x, v);
    ASSERT_TRUE(std::ranges::equal(a.buckets(), b.buckets()));
  }
}

TEST(ApproximatorProperty, InsertIsMonotone) {
  std::mt19937_64 rng(6);
  for (int config = 0; config < 100; ++config) {
    const auto f = random_function(rng, 300, 40, 50);
    NatApprox approx(HashFamily(rng(), 1 + rng() % 4, 1 + rng() % 40));
    for (const auto& [x, v] : f.pairs) {
      const std::vector<std::uint32_t> before(approx.buckets().begin(), approx.buckets().end());
      std::vector<std::uint32_t> queries;
      for (std::uint64_t y = 0; y < 300; ++y) queries.push_back(approx.query(y));
      approx.insert(x, v);
      for (std::size_t i = 0; i < before.size(); ++i) ASSERT_LE(before[i], approx.buckets()[i]);
      for (std::uint64_t y = 0; y < 300; ++y) ASSERT_LE(queries[y], approx.query(y));
    }
  }
}

TEST(ApproximatorProperty, MaximumIsStoredExactly) {
  std::mt19937_64 rng(7);
  for (int config = 0; config < 500; ++config) {
    const auto f = random_function(rng, 500, 1 + rng() % 100, 30);
    NatApprox approx(HashFamily(rng(), 1 + rng() % 5, 1 + rng() % 32));
    for (const auto& [x, v] : f.pairs) approx.insert(x, v);
    const auto top = std::ranges::max(f.dense);
    for (const auto& [x, v] : f.pairs)
      if (v == top) ASSERT_EQ(approx.query(x), v);
  }
}

TEST(ApproximatorProperty, CollisionFreeMeansExact) {
  std::mt19937_64 rng(8);
  int exercised = 0;
  for (int config = 0; config < 2000 && exercised < 100; ++config) {
    const auto f = random_function(rng, 200, 1 + rng() % 6, 9);
    const HashFamily family(rng(), 1 + rng() % 3, 256);
    std::set<std::size_t> slots;
    std::size_t total = 0;
    for (const auto& [x, v] : f.pairs) {
      std::set<std::size_t> own;
      family.for_each_index(x, [&](std::size_t i) { own.insert(i); });
      total += own.size();
      slots.insert(own.begin(), own.end());
    }
    if (slots.size() != total) continue;
    ++exercised;
    NatApprox approx(family);
    for (const auto& [x, v] : f.pairs) approx.insert(x, v);
    for (const auto& [x, v] : f.pairs) ASSERT_EQ(approx.query(x), v);
  }
  EXPECT_EQ(exercised, 100);
}

TEST(ApproximatorProperty, BloomHasNoFalseNegatives) {
  std::mt19937_64 rng(9);
  for (int config = 0; config < 200; ++config) {
    BoolApprox bloom(HashFamily(rng(), 1 + rng() % 6, 1 + rng() % 200));
    std::vector<std::uint64_t> keys(1 + rng() % 100);
    for (auto& k : keys) {
      k = rng();
      bloom.insert(k, Truth::top);
    }
    for (auto k : keys) ASSERT_EQ(bloom.query(k), Truth::top);
  }
}

TEST(Approximator, ConstructsFromBuckets) {
  EXPECT_THROW(NatApprox(HashFamily(1, 2, 4), std::vector<std::uint32_t>(3, 0)), capprox::InvalidParameter);
  NatApprox approx(HashFamily(1, 2, 4), {1, 2, 3, 4});
  EXPECT_EQ(approx.m(), 4u);
  EXPECT_EQ(approx.d(), 2u);
}

}  // namespace
