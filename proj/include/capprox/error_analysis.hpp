#pragma once

// Error probabilities of a compact approximator.
//
// Bottom case (phi): probability that a key off the support reads back a
// non-bottom value. Nonbottom case (psi): probability that a support key reads
// back a strictly larger value. Closed forms are exposed in the exact
// (1 - 1/m)^k and the exponential e^{-k/m} variants; Monte-Carlo counterparts
// measure the same events on real approximators with fresh hash seeds per
// trial.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <thread>
#include <unordered_set>
#include <vector>

#include "capprox/approximator.hpp"
#include "capprox/error.hpp"
#include "capprox/hash_family.hpp"
#include "capprox/lattice.hpp"

namespace capprox {

namespace detail {

inline void check_md(std::size_t m, std::size_t d) {
  if (m == 0) throw InvalidParameter("bucket count m must be >= 1");
  if (d == 0) throw InvalidParameter("hash count d must be >= 1");
}

// 1 - (1 - 1/m)^balls: probability that a fixed bucket is hit by `balls`
// uniform throws.
inline double occupied(std::size_t m, double balls) {
  if (balls <= 0.0) return 0.0;
  if (m == 1) return 1.0;
  return -std::expm1(balls * std::log1p(-1.0 / static_cast<double>(m)));
}

inline double occupied_approx(std::size_t m, double balls) {
  return -std::expm1(-balls / static_cast<double>(m));
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Bottom case

inline double phi_exact(std::size_t n, std::size_t m, std::size_t d) {
  detail::check_md(m, d);
  const double dn = static_cast<double>(d) * static_cast<double>(n);
  return std::pow(detail::occupied(m, dn), static_cast<double>(d));
}

inline double phi_approx(std::size_t n, std::size_t m, std::size_t d) {
  detail::check_md(m, d);
  const double dn = static_cast<double>(d) * static_cast<double>(n);
  return std::pow(detail::occupied_approx(m, dn), static_cast<double>(d));
}

// (1 - e^{-load})^d with load = dn/m, for non-integral bucket counts.
inline double phi_approx_at_load(double load, std::size_t d) {
  if (d == 0) throw InvalidParameter("hash count d must be >= 1");
  return std::pow(-std::expm1(-load), static_cast<double>(d));
}

// phi_approx at its optimum m = dn / ln 2.
inline double min_phi(std::size_t d) {
  if (d == 0) throw InvalidParameter("hash count d must be >= 1");
  return std::ldexp(1.0, -static_cast<int>(d));
}

struct ErrorEstimate {
  std::size_t n = 0, m = 1, d = 1;
  double phi_exact = 0.0;
  double phi_approx = 0.0;
};

inline ErrorEstimate estimate_bottom_error(std::size_t n, std::size_t m, std::size_t d) {
  return {n, m, d, phi_exact(n, m, d), phi_approx(n, m, d)};
}

// ---------------------------------------------------------------------------
// Nonbottom case

// Values v_1 < ... < v_s taken a_1, ..., a_s times on the support.
class ValueDistribution {
 public:
  struct Level {
    NatLattice::value_type value;
    std::uint64_t multiplicity;
  };

  explicit ValueDistribution(std::vector<Level> levels) : levels_(std::move(levels)) {
    if (levels_.empty()) throw InvalidParameter("value distribution is empty");
    for (std::size_t i = 0; i < levels_.size(); ++i) {
      if (levels_[i].value == NatLattice::bottom()) {
        throw InvalidParameter("value distribution contains bottom");
      }
      if (levels_[i].multiplicity == 0) throw InvalidParameter("multiplicity must be >= 1");
      if (i > 0 && levels_[i - 1].value >= levels_[i].value) {
        throw InvalidParameter("value distribution must be strictly increasing");
      }
      n_ += levels_[i].multiplicity;
    }
  }

  // Each of the values 1..n exactly once.
  static ValueDistribution uniform(std::size_t n) {
    std::vector<Level> levels;
    levels.reserve(n);
    for (std::size_t v = 1; v <= n; ++v) levels.push_back({static_cast<NatLattice::value_type>(v), 1});
    return ValueDistribution(std::move(levels));
  }

  const std::vector<Level>& levels() const noexcept { return levels_; }
  std::uint64_t n() const noexcept { return n_; }

 private:
  std::vector<Level> levels_;
  std::uint64_t n_ = 0;
};

inline double psi_general(const ValueDistribution& dist, std::size_t m, std::size_t d) {
  detail::check_md(m, d);
  const auto& levels = dist.levels();
  const double n = static_cast<double>(dist.n());
  double psi = 0.0;
  std::uint64_t larger = 0;  // sum of multiplicities above level i
  for (std::size_t i = levels.size(); i-- > 0;) {
    const double balls = static_cast<double>(d) * static_cast<double>(larger);
    psi += static_cast<double>(levels[i].multiplicity) / n *
           std::pow(detail::occupied(m, balls), static_cast<double>(d));
    larger += levels[i].multiplicity;
  }
  return psi;
}

// Error probability of the i-th smallest of n distinct values (1-based), i.e.
// n times its contribution to psi_uniform.
inline double summand_uniform(std::size_t i, std::size_t n, std::size_t m, std::size_t d) {
  detail::check_md(m, d);
  if (i < 1 || i > n) throw InvalidParameter("summand index must lie in [1, n]");
  const double balls = static_cast<double>(d) * static_cast<double>(n - i);
  return std::pow(detail::occupied(m, balls), static_cast<double>(d));
}

inline double summand_uniform_approx(std::size_t i, std::size_t n, std::size_t m, std::size_t d) {
  detail::check_md(m, d);
  if (i < 1 || i > n) throw InvalidParameter("summand index must lie in [1, n]");
  const double balls = static_cast<double>(d) * static_cast<double>(n - i);
  return std::pow(detail::occupied_approx(m, balls), static_cast<double>(d));
}

inline double psi_uniform(std::size_t n, std::size_t m, std::size_t d) {
  detail::check_md(m, d);
  if (n == 0) throw InvalidParameter("psi_uniform needs n >= 1");
  double sum = 0.0;
  for (std::size_t i = 1; i < n; ++i) sum += summand_uniform(i, n, m, d);
  return sum / static_cast<double>(n);
}

inline constexpr std::size_t kMaxExponentialLevels = 60;

// Support size 2^{s+1} - 1 of the exponential case.
inline std::uint64_t exponential_support(std::size_t s) {
  if (s < 1 || s > kMaxExponentialLevels) throw InvalidParameter("level count s out of range");
  return (std::uint64_t{1} << (s + 1)) - 1;
}

// Unweighted per-level term (1 - (1 - 1/m)^{d 2^{s-i+1}})^d, 0 <= i < s.
inline double exponential_level_error(std::size_t i, std::size_t s, std::size_t m, std::size_t d) {
  detail::check_md(m, d);
  exponential_support(s);
  if (i >= s) throw InvalidParameter("level index must lie in [0, s)");
  const double balls = static_cast<double>(d) * std::ldexp(1.0, static_cast<int>(s - i + 1));
  return std::pow(detail::occupied(m, balls), static_cast<double>(d));
}

// Weight 2^{s-i} / n of level i in psi_exponential.
inline double exponential_level_weight(std::size_t i, std::size_t s) {
  return std::ldexp(1.0, static_cast<int>(s - i)) / static_cast<double>(exponential_support(s));
}

inline double psi_exponential(std::size_t s, std::size_t m, std::size_t d) {
  detail::check_md(m, d);
  exponential_support(s);
  double psi = 0.0;
  for (std::size_t i = 0; i < s; ++i) {
    psi += exponential_level_weight(i, s) * exponential_level_error(i, s, m, d);
  }
  return psi;
}

// ---------------------------------------------------------------------------
// Monte Carlo

enum class HashScheme {
  independent,     // d separately salted digests
  double_hashing,  // HashFamily
};

struct MonteCarloOptions {
  std::uint64_t trials = 100'000;
  std::uint64_t seed = 0;
  unsigned workers = 0;  // 0 = hardware concurrency
  HashScheme scheme = HashScheme::independent;
};

struct MonteCarloReport {
  std::uint64_t trials = 0;
  std::uint64_t errors = 0;
  double analytic = 0.0;
  std::uint64_t seed = 0;

  double rate() const noexcept {
    return trials == 0 ? 0.0 : static_cast<double>(errors) / static_cast<double>(trials);
  }
  // Binomial standard error under the analytic reference.
  double standard_error() const noexcept {
    if (trials == 0) return 0.0;
    return std::sqrt(analytic * (1.0 - analytic) / static_cast<double>(trials));
  }
  double z_score() const noexcept {
    const double se = standard_error();
    if (se == 0.0) return rate() == analytic ? 0.0 : INFINITY;
    return (rate() - analytic) / se;
  }
};

// Trials are split into fixed-size chunks with their own sub-seeds, so the
// error count does not depend on the number of workers.
inline constexpr std::uint64_t kTrialChunk = 1 << 13;

namespace detail {

template <typename Trial>
std::uint64_t count_errors(const Trial& prototype, const MonteCarloOptions& options) {
  const std::uint64_t chunks = (options.trials + kTrialChunk - 1) / kTrialChunk;
  std::vector<std::uint64_t> per_chunk(chunks, 0);
  std::atomic<std::uint64_t> next{0};

  auto work = [&] {
    Trial trial = prototype;
    for (;;) {
      const std::uint64_t c = next.fetch_add(1, std::memory_order_relaxed);
      if (c >= chunks) return;
      std::mt19937_64 rng(derive_seed(options.seed, c));
      const std::uint64_t count = std::min(kTrialChunk, options.trials - c * kTrialChunk);
      std::uint64_t errors = 0;
      for (std::uint64_t t = 0; t < count; ++t) errors += trial(rng) ? 1 : 0;
      per_chunk[c] = errors;
    }
  };

  std::uint64_t workers = options.workers != 0 ? options.workers : std::thread::hardware_concurrency();
  workers = std::clamp<std::uint64_t>(workers, 1, std::max<std::uint64_t>(chunks, 1));
  {
    std::vector<std::jthread> pool;
    for (std::uint64_t w = 1; w < workers; ++w) pool.emplace_back(work);
    work();
  }
  std::uint64_t total = 0;
  for (auto e : per_chunk) total += e;
  return total;
}

template <typename Family>
Family make_family(std::uint64_t seed, std::size_t d, std::size_t m) {
  return Family(seed, d, m);
}

// One trial: random support of n keys in [0, universe), one off-support query.
template <typename Family>
struct BottomTrial {
  std::size_t n, m, d;
  std::uint64_t universe;
  std::unordered_set<std::uint64_t> support{};

  bool operator()(std::mt19937_64& rng) {
    std::uniform_int_distribution<std::uint64_t> pick(0, universe - 1);
    CompactApproximator<NatLattice, std::uint64_t, Family> approx(make_family<Family>(rng(), d, m));
    support.clear();
    NatLattice::value_type value = 0;
    while (support.size() < n) {
      const std::uint64_t key = pick(rng);
      if (support.insert(key).second) approx.insert(key, ++value);
    }
    std::uint64_t probe = pick(rng);
    while (support.contains(probe)) probe = pick(rng);
    return approx.query(probe) != NatLattice::bottom();
  }
};

// One trial: random keys realizing dist, one uniformly chosen support query.
template <typename Family>
struct ValueTrial {
  const ValueDistribution* dist;
  std::size_t m, d;
  std::vector<std::uint64_t> keys{};
  std::vector<NatLattice::value_type> values{};
  std::unordered_set<std::uint64_t> seen{};

  bool operator()(std::mt19937_64& rng) {
    CompactApproximator<NatLattice, std::uint64_t, Family> approx(make_family<Family>(rng(), d, m));
    keys.clear();
    values.clear();
    seen.clear();
    for (const auto& level : dist->levels()) {
      for (std::uint64_t a = 0; a < level.multiplicity; ++a) {
        std::uint64_t key = rng();
        while (!seen.insert(key).second) key = rng();
        keys.push_back(key);
        values.push_back(level.value);
        approx.insert(key, level.value);
      }
    }
    std::uniform_int_distribution<std::size_t> pick(0, keys.size() - 1);
    const std::size_t q = pick(rng);
    return approx.query(keys[q]) != values[q];
  }
};

}  // namespace detail

inline MonteCarloReport measure_bottom_error(std::size_t n, std::size_t m, std::size_t d,
                                             std::uint64_t universe,
                                             const MonteCarloOptions& options) {
  detail::check_md(m, d);
  if (options.trials == 0) throw InvalidParameter("trials must be >= 1");
  if (universe == 0 || universe < 100 * static_cast<std::uint64_t>(n)) {
    throw InvalidParameter("universe must hold at least 100 keys per support element");
  }
  MonteCarloReport report{options.trials, 0, phi_exact(n, m, d), options.seed};
  if (options.scheme == HashScheme::independent) {
    report.errors = detail::count_errors(
        detail::BottomTrial<IndependentHashFamily>{n, m, d, universe}, options);
  } else {
    report.errors = detail::count_errors(detail::BottomTrial<HashFamily>{n, m, d, universe}, options);
  }
  return report;
}

inline MonteCarloReport measure_value_error(const ValueDistribution& dist, std::size_t m,
                                            std::size_t d, const MonteCarloOptions& options) {
  detail::check_md(m, d);
  if (options.trials == 0) throw InvalidParameter("trials must be >= 1");
  MonteCarloReport report{options.trials, 0, psi_general(dist, m, d), options.seed};
  if (options.scheme == HashScheme::independent) {
    report.errors = detail::count_errors(detail::ValueTrial<IndependentHashFamily>{&dist, m, d}, options);
  } else {
    report.errors = detail::count_errors(detail::ValueTrial<HashFamily>{&dist, m, d}, options);
  }
  return report;
}

// ---------------------------------------------------------------------------
// Curves

struct CurvePoint {
  std::size_t parameter = 0;
  double analytic = 0.0;
  std::optional<double> empirical;
  std::optional<double> standard_error;
};

// Analytic values of fn(p) for p in [first, last].
template <typename Fn>
std::vector<CurvePoint> analytic_curve(std::size_t first, std::size_t last, Fn&& fn) {
  std::vector<CurvePoint> rows;
  for (std::size_t p = first; p <= last; ++p) rows.push_back({p, fn(p), std::nullopt, std::nullopt});
  return rows;
}

}  // namespace capprox
