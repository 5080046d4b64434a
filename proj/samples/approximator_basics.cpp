// Store a small function, query it, and compare against the error formulas.

#include <cstdio>

#include "capprox/capprox.hpp"

int main() {
  using namespace capprox;

  // f(1) = 3, f(2) = 1, f(3) = 2 on a table of 6 buckets with 2 hash functions.
  FunctionSample<NatLattice, std::uint64_t> f{{1, 3}, {2, 1}, {3, 2}};
  const auto approx = build(HashFamily(42, 2, 6), f);
  for (std::uint64_t x = 0; x < 8; ++x) {
    std::printf("x=%llu f=%u query=%u\n", static_cast<unsigned long long>(x), f(x), approx.query(x));
  }

  // Sizing for 100 keys and the resulting bottom error.
  const auto params = choose_params(100, 3);
  std::printf("n=100 d=3 -> m=%zu, phi exact %.4f, approx %.4f, floor %.4f\n", params.m,
              phi_exact(100, params.m, 3), phi_approx(100, params.m, 3), min_phi(3));

  MonteCarloOptions mc;
  mc.trials = 20000;
  mc.seed = 1;
  const auto r = measure_bottom_error(100, params.m, 3, 1ULL << 32, mc);
  std::printf("simulated %.4f +- %.4f\n", r.rate(), r.standard_error());
}
