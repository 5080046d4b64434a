// Search a mixed-script text with each shift-table backing.

#include <cstdio>
#include <string>

#include "capprox/capprox.hpp"

int main(int argc, char** argv) {
  using namespace capprox;

  const std::string text = argc > 2 ? argv[2] : "Ein Käfer, ein Кот и 猫, ein Käfer am Ende.";
  const std::string pattern = argc > 1 ? argv[1] : "Käfer";
  const auto decoded = decode_utf8(text, true);
  const auto p = to_code_points(pattern);
  const SearchProblem problem(p, decoded.code_points);

  ApproxOptions options;
  options.d = 2;
  const ShiftOracle oracles[] = {ShiftOracle::exact(p, Backing::associative), ShiftOracle::approximate(p, options)};
  const char* names[] = {"associative", "approximator"};
  for (int i = 0; i < 2; ++i) {
    for (auto h : {Heuristic::bm, Heuristic::qs}) {
      const auto stats = search(problem, oracles[i], h);
      std::printf("%-12s %s: %zu matches, %llu windows, %llu comparisons\n", names[i], h == Heuristic::bm ? "bm" : "qs",
                  stats.matches.size(), static_cast<unsigned long long>(stats.candidates),
                  static_cast<unsigned long long>(stats.comparisons));
    }
  }
  for (auto k : search_brute(problem).matches) {
    std::printf("match at code point %zu, byte %zu\n", k, decoded.byte_offsets[k]);
  }
}
