// capprox: search, analysis, simulation and experiment front end.

#include <CLI11.hpp>

#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "capprox/capprox.hpp"

namespace {

namespace fs = std::filesystem;
using namespace capprox;

enum Exit : int { kOk = 0, kUsage = 2, kIo = 3, kDecode = 4, kInternal = 5 };

constexpr std::uint64_t kDefaultSeed = 0x5eedc0de;
constexpr const char* kCsvVersion = "capprox-csv/1";

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Seeds

struct SeedFlags {
  std::optional<std::uint64_t> seed;
  bool random = false;

  void attach(CLI::App* app) {
    app->add_option("--seed", seed, "Master seed (default: $CAPPROX_SEED or a fixed constant)");
    app->add_flag("--random-seed", random, "Draw the master seed from the system entropy source");
  }

  std::uint64_t resolve() const {
    if (seed && random) throw UsageError("--seed and --random-seed are mutually exclusive");
    if (seed) return *seed;
    if (random) {
      std::random_device rd;
      const std::uint64_t s = (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
      std::cerr << "capprox: seed " << s << '\n';
      return s;
    }
    if (const char* env = std::getenv("CAPPROX_SEED"); env && *env) {
      std::uint64_t s = 0;
      const std::string_view v(env);
      const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), s);
      if (ec != std::errc{} || ptr != v.data() + v.size()) throw UsageError("CAPPROX_SEED is not an integer");
      return s;
    }
    return kDefaultSeed;
  }
};

// ---------------------------------------------------------------------------
// Parsing helpers

std::uint64_t parse_uint(std::string_view s, const char* what) {
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size()) {
    throw UsageError(std::string("bad ") + what + ": '" + std::string(s) + "'");
  }
  return v;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  for (;;) {
    const auto pos = s.find(sep);
    out.push_back(s.substr(0, pos));
    if (pos == std::string_view::npos) return out;
    s.remove_prefix(pos + 1);
  }
}

// "5", "1..5" or "2,4,8" (items may themselves be ranges).
std::vector<std::size_t> parse_grid(std::string_view spec, const char* what) {
  std::vector<std::size_t> out;
  for (auto item : split(spec, ',')) {
    if (const auto dots = item.find(".."); dots != std::string_view::npos) {
      const auto lo = parse_uint(item.substr(0, dots), what);
      const auto hi = parse_uint(item.substr(dots + 2), what);
      if (lo > hi) throw UsageError(std::string("empty ") + what + " range '" + std::string(item) + "'");
      if (hi - lo > 10'000'000) throw UsageError(std::string(what) + " range too large");
      for (auto v = lo; v <= hi; ++v) out.push_back(v);
    } else {
      out.push_back(parse_uint(item, what));
    }
  }
  return out;
}

std::string read_input(const std::string& path) {
  std::ostringstream buf;
  if (path.empty() || path == "-") {
    buf << std::cin.rdbuf();
    if (std::cin.bad()) throw IoError("cannot read standard input");
    return buf.str();
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "'");
  buf << in.rdbuf();
  if (in.bad()) throw IoError("cannot read '" + path + "'");
  return buf.str();
}

// ---------------------------------------------------------------------------
// CSV

std::string fmt(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ec == std::errc{} ? ptr : buf);
}

std::string quote(std::string_view field) {
  if (field.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(field);
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

class Csv {
 public:
  Csv(std::ostream& out, std::string_view kind, std::initializer_list<std::string_view> header) : out_(out) {
    out_ << "# " << kCsvVersion << ' ' << kind << '\n';
    row(header);
  }

  template <typename... Fields>
  void operator()(const Fields&... fields) {
    bool first = true;
    ((out_ << (first ? "" : ",") << cell(fields), first = false), ...);
    out_ << '\n';
  }

 private:
  void row(std::initializer_list<std::string_view> fields) {
    bool first = true;
    for (auto f : fields) {
      out_ << (first ? "" : ",") << quote(f);
      first = false;
    }
    out_ << '\n';
  }
  static std::string cell(double v) { return fmt(v); }
  static std::string cell(const std::string& s) { return quote(s); }
  static std::string cell(const char* s) { return quote(s); }
  template <std::integral I>
  static std::string cell(I v) {
    return std::to_string(v);
  }

  std::ostream& out_;
};

std::size_t default_m(std::uint64_t n) {
  return std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(2.0 * static_cast<double>(n) / std::log(2.0))));
}

// ---------------------------------------------------------------------------
// search

struct SearchArgs {
  std::string pattern;
  bool has_pattern = false;
  std::string engine = "approx";
  std::string heuristic = "bm";
  std::size_t d = 3;
  std::size_t m_floor = kDefaultMinBuckets;
  std::size_t direct_bound = kDefaultDirectBound;
  bool stats = false;
  bool byte_offsets = false;
  std::string input = "-";
  SeedFlags seed;
};

int run_search(const SearchArgs& a) {
  if (a.pattern.empty()) throw UsageError("pattern must not be empty");
  std::u32string pattern;
  try {
    pattern = to_code_points(a.pattern);
  } catch (const DecodeError& e) {
    throw UsageError(std::string("pattern is not valid UTF-8: ") + e.what());
  }
  const std::uint64_t seed = a.seed.resolve();
  const std::string bytes = read_input(a.input);
  const DecodedText text = decode_utf8(bytes, a.byte_offsets);
  const SearchProblem problem(pattern, text.code_points);
  const Heuristic heuristic = a.heuristic == "qs" ? Heuristic::qs : Heuristic::bm;

  SearchStats stats;
  if (a.engine == "brute") {
    stats = search_brute(problem);
  } else if (a.engine == "direct") {
    stats = search(problem, ShiftOracle::exact(pattern, Backing::direct_address, a.direct_bound), heuristic);
  } else if (a.engine == "assoc") {
    stats = search(problem, ShiftOracle::exact(pattern, Backing::associative), heuristic);
  } else {
    ApproxOptions o;
    o.d = a.d;
    o.m_floor = a.m_floor;
    o.seed = derive_seed(seed, "search");
    stats = search(problem, ShiftOracle::approximate(pattern, o), heuristic);
  }

  std::string out;
  for (auto k : stats.matches) {
    out += std::to_string(k);
    if (a.byte_offsets) out += ',' + std::to_string(text.byte_offsets[k]);
    out += '\n';
  }
  if (a.stats) {
    out += "# candidates=" + std::to_string(stats.candidates) + ",comparisons=" +
           std::to_string(stats.comparisons) + ",matches=" + std::to_string(stats.matches.size()) + '\n';
  }
  std::cout << out;
  return kOk;
}

// ---------------------------------------------------------------------------
// analyze

struct AnalyzeArgs {
  std::string selector;
  std::optional<std::uint64_t> n;
  std::optional<std::string> m;
  std::string d = "1..10";
  std::optional<std::size_t> s;
  std::string scenario = "uniform";
};

int run_analyze(const AnalyzeArgs& a) {
  const auto ds = parse_grid(a.d, "d");
  auto m_grid = [&](std::uint64_t n) {
    return a.m ? parse_grid(*a.m, "m") : std::vector<std::size_t>{default_m(n)};
  };
  auto need_n = [&] {
    if (!a.n) throw UsageError("analyze " + a.selector + " needs --n");
    return *a.n;
  };
  auto need_s = [&] {
    if (!a.s) throw UsageError("analyze " + a.selector + " needs --s");
    if (*a.s == 0 || *a.s > kMaxExponentialLevels) throw UsageError("--s out of range");
    return *a.s;
  };

  // Evaluate the whole grid before printing so errors leave no partial CSV.
  std::ostringstream out;
  if (a.selector == "phi") {
    const auto n = need_n();
    Csv csv(out, "phi", {"n", "m", "d", "phi_exact", "phi_approx"});
    for (auto m : m_grid(n))
      for (auto d : ds) csv(n, m, d, phi_exact(n, m, d), phi_approx(n, m, d));
  } else if (a.selector == "psi-uniform") {
    const auto n = need_n();
    Csv csv(out, "psi-uniform", {"n", "m", "d", "psi"});
    for (auto m : m_grid(n))
      for (auto d : ds) csv(n, m, d, psi_uniform(n, m, d));
  } else if (a.selector == "psi-exp") {
    const auto s = need_s();
    const auto n = exponential_support(s);
    Csv csv(out, "psi-exp", {"s", "n", "m", "d", "psi"});
    for (auto m : m_grid(n))
      for (auto d : ds) csv(s, n, m, d, psi_exponential(s, m, d));
  } else if (a.scenario == "uniform") {
    const auto n = need_n();
    if (n == 0) throw UsageError("--n must be >= 1");
    Csv csv(out, "summands-uniform", {"n", "m", "d", "i", "summand"});
    for (auto m : m_grid(n))
      for (std::uint64_t i = 1; i <= n; ++i)
        for (auto d : ds) csv(n, m, d, i, summand_uniform(i, n, m, d));
  } else {
    const auto s = need_s();
    const auto n = exponential_support(s);
    Csv csv(out, "summands-exponential", {"s", "n", "m", "d", "i", "level_error", "weighted"});
    for (auto m : m_grid(n))
      for (std::size_t i = 0; i < s; ++i)
        for (auto d : ds) {
          const double e = exponential_level_error(i, s, m, d);
          csv(s, n, m, d, i, e, e * exponential_level_weight(i, s));
        }
  }
  std::cout << out.str();
  return kOk;
}

// ---------------------------------------------------------------------------
// simulate

struct SimulateArgs {
  std::string kind;
  std::uint64_t n = 0;
  bool has_n = false;
  std::optional<std::size_t> m;
  std::string d = "3";
  std::optional<std::uint64_t> universe;
  std::string dist = "uniform";
  std::string levels;
  std::uint64_t trials = 100'000;
  unsigned workers = 0;
  std::string scheme = "independent";
  SeedFlags seed;
};

ValueDistribution parse_levels(std::string_view spec) {
  std::vector<ValueDistribution::Level> levels;
  for (auto item : split(spec, ',')) {
    const auto colon = item.find(':');
    if (colon == std::string_view::npos) throw UsageError("levels are value:multiplicity pairs");
    const auto v = parse_uint(item.substr(0, colon), "level value");
    if (v > UINT32_MAX) throw UsageError("level value too large");
    levels.push_back({static_cast<NatLattice::value_type>(v), parse_uint(item.substr(colon + 1), "multiplicity")});
  }
  return ValueDistribution(std::move(levels));
}

int run_simulate(const SimulateArgs& a) {
  const std::uint64_t master = a.seed.resolve();
  const auto ds = parse_grid(a.d, "d");
  MonteCarloOptions base;
  base.trials = a.trials;
  base.workers = a.workers;
  base.scheme = a.scheme == "double" ? HashScheme::double_hashing : HashScheme::independent;

  std::optional<ValueDistribution> dist;
  std::uint64_t n = a.n;
  if (a.kind == "values") {
    if (a.dist == "custom") {
      if (a.levels.empty()) throw UsageError("--dist custom needs --levels");
      dist = parse_levels(a.levels);
    } else {
      if (!a.has_n || a.n == 0) throw UsageError("simulate values needs --n >= 1");
      dist = ValueDistribution::uniform(a.n);
    }
    n = dist->n();
  }

  std::ostringstream out;
  Csv csv(out, "simulate", {"kind", "n", "m", "d", "trials", "errors", "empirical", "analytic", "stderr", "seed"});
  for (auto d : ds) {
    if (d == 0) throw UsageError("d must be >= 1");
    const std::size_t m = a.m ? *a.m : choose_params(n, d, 1).m;
    MonteCarloOptions o = base;
    o.seed = derive_seed(derive_seed(master, a.kind), d);
    MonteCarloReport r;
    if (a.kind == "bottom") {
      const std::uint64_t universe = a.universe ? *a.universe : std::max<std::uint64_t>(100 * n, 1ULL << 32);
      r = measure_bottom_error(n, m, d, universe, o);
    } else {
      r = measure_value_error(*dist, m, d, o);
    }
    csv(a.kind, n, m, d, r.trials, r.errors, r.rate(), r.analytic, r.standard_error(), r.seed);
  }
  std::cout << out.str();
  return kOk;
}

// ---------------------------------------------------------------------------
// experiment

struct ExperimentArgs {
  std::string text;
  std::vector<std::string> patterns;
  bool frequent = false;
  bool rare = false;
  std::string lengths = "9,18,27";
  std::string d = "1..6";
  std::string heuristic = "bm";
  std::size_t pool = kDefaultPatternPool;
  std::optional<double> buckets_per_char;
  std::size_t m_floor = kDefaultMinBuckets;
  std::string cache;
  SeedFlags seed;
};

std::string hex(std::uint64_t v) {
  char buf[17];
  const auto [ptr, ec] = std::to_chars(buf, buf + 16, v, 16);
  return std::string(buf, ptr);
}

// Serves approximators from image files under dir, building missing ones.
ShiftOracle cached_oracle(const fs::path& dir, std::u32string_view pattern, const ApproxOptions& o,
                          std::optional<double> buckets_per_char) {
  const std::string utf8 = to_utf8(pattern);
  std::uint64_t key = digest_bytes(std::as_bytes(std::span(utf8.data(), utf8.size())), o.seed);
  key = mix64(key ^ o.d) ^ mix64(o.m_floor + kGolden);
  if (buckets_per_char) key ^= mix64(std::bit_cast<std::uint64_t>(*buckets_per_char));
  const fs::path file = dir / (hex(key) + ".capx");
  if (std::ifstream in(file, std::ios::binary); in) {
    try {
      auto approx = read_image<NatLattice, char32_t>(in);
      if (approx.d() == o.d) return ShiftOracle::from_approximator(pattern.size(), std::move(approx));
    } catch (const FormatError& e) {
      std::cerr << "capprox: ignoring cache entry " << file << ": " << e.what() << '\n';
    }
  }
  ShiftOracle oracle = ShiftOracle::approximate(pattern, o);
  std::ofstream out(file, std::ios::binary | std::ios::trunc);
  if (out) write_image(out, *oracle.approximator());
  if (!out) std::cerr << "capprox: cannot write cache entry " << file << '\n';
  return oracle;
}

int run_experiment(const ExperimentArgs& a) {
  const std::uint64_t master = a.seed.resolve();
  if (a.frequent && a.rare) throw UsageError("--frequent and --rare are mutually exclusive");
  if (!a.frequent && !a.rare && a.patterns.empty()) {
    throw UsageError("give --pattern, --frequent or --rare");
  }
  const auto ds = parse_grid(a.d, "d");
  for (auto d : ds)
    if (d == 0) throw UsageError("d must be >= 1");

  const std::u32string text = decode_utf8(read_input(a.text)).code_points;

  std::vector<std::u32string> patterns;
  for (const auto& p : a.patterns) {
    if (p.empty()) throw UsageError("pattern must not be empty");
    patterns.push_back(to_code_points(p));
  }
  if (a.frequent || a.rare) {
    const auto ranked = rank_by_frequency(text);
    if (ranked.empty()) throw UsageError("text has no printable characters to draw patterns from");
    const auto cls = a.frequent ? PatternClass::frequent : PatternClass::rare;
    const std::uint64_t pattern_seed = derive_seed(master, "patterns");
    for (auto len : parse_grid(a.lengths, "length")) {
      if (len == 0) throw UsageError("pattern length must be >= 1");
      patterns.push_back(make_class_pattern(ranked, cls, len, derive_seed(pattern_seed, len), a.pool));
    }
  }

  RatioOptions o;
  o.d_values = ds;
  o.buckets_per_char = a.buckets_per_char;
  o.m_floor = a.m_floor;
  o.heuristic = a.heuristic == "qs" ? Heuristic::qs : Heuristic::bm;
  o.seed = derive_seed(master, "hash");
  if (!a.cache.empty()) {
    std::error_code ec;
    fs::create_directories(a.cache, ec);
    if (ec) throw IoError("cannot create cache directory '" + a.cache + "'");
    o.approximate_oracle = [dir = fs::path(a.cache), bpc = a.buckets_per_char](std::u32string_view p,
                                                                              const ApproxOptions& ao) {
      return cached_oracle(dir, p, ao, bpc);
    };
  }

  const auto rows = ratio_experiment(text, patterns, o);
  std::ostringstream out;
  Csv csv(out, "ratio", {"pattern", "d", "m", "c", "c_app", "ratio"});
  for (const auto& r : rows) csv(to_utf8(r.pattern), r.d, r.m, r.c, r.c_app, r.ratio);
  std::cout << out.str();
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Compact approximators and bad-character search"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kCsvVersion));

  SearchArgs search_args;
  auto* search_cmd = app.add_subcommand("search", "Find all occurrences of a pattern in UTF-8 text");
  search_cmd->add_option("--pattern,-p", search_args.pattern, "Pattern (UTF-8)")->required();
  search_cmd->add_option("--engine", search_args.engine)
      ->check(CLI::IsMember({"brute", "direct", "assoc", "approx"}))
      ->capture_default_str();
  search_cmd->add_option("--heuristic", search_args.heuristic)->check(CLI::IsMember({"bm", "qs"}))->capture_default_str();
  search_cmd->add_option("-d,--d", search_args.d, "Hash functions (approx engine)")->check(CLI::PositiveNumber)->capture_default_str();
  search_cmd->add_option("--m-floor", search_args.m_floor)->check(CLI::PositiveNumber)->capture_default_str();
  search_cmd->add_option("--direct-bound", search_args.direct_bound, "Code point bound of the direct engine")
      ->capture_default_str();
  search_cmd->add_flag("--stats", search_args.stats, "Append a candidates/comparisons comment line");
  search_cmd->add_flag("--byte-offsets", search_args.byte_offsets, "Print code point and byte offsets");
  search_cmd->add_option("input", search_args.input, "Input file, '-' for standard input")->capture_default_str();
  search_args.seed.attach(search_cmd);

  AnalyzeArgs analyze_args;
  auto* analyze_cmd = app.add_subcommand("analyze", "Tabulate the analytic error formulas");
  analyze_cmd->add_option("selector", analyze_args.selector)
      ->required()
      ->check(CLI::IsMember({"phi", "psi-uniform", "psi-exp", "summands"}));
  analyze_cmd->add_option("--n", analyze_args.n, "Support size");
  analyze_cmd->add_option("--m", analyze_args.m, "Bucket grid (default ceil(2n/ln 2))");
  analyze_cmd->add_option("--d", analyze_args.d, "Hash-count grid, e.g. 1..10 or 1,3,5")->capture_default_str();
  analyze_cmd->add_option("--s", analyze_args.s, "Levels of the exponential case (n = 2^(s+1) - 1)");
  analyze_cmd->add_option("--case", analyze_args.scenario, "Summand family")
      ->check(CLI::IsMember({"uniform", "exponential"}))
      ->capture_default_str();

  SimulateArgs sim_args;
  auto* sim_cmd = app.add_subcommand("simulate", "Monte Carlo error rates");
  sim_cmd->add_option("kind", sim_args.kind)->required()->check(CLI::IsMember({"bottom", "values"}));
  auto* n_opt = sim_cmd->add_option("--n", sim_args.n, "Support size");
  sim_cmd->add_option("--m", sim_args.m, "Buckets (default ceil(dn/ln 2))")->check(CLI::PositiveNumber);
  sim_cmd->add_option("--d", sim_args.d, "Hash-count grid")->capture_default_str();
  sim_cmd->add_option("--universe", sim_args.universe, "Key universe for bottom trials");
  sim_cmd->add_option("--dist", sim_args.dist)->check(CLI::IsMember({"uniform", "custom"}))->capture_default_str();
  sim_cmd->add_option("--levels", sim_args.levels, "value:multiplicity,... for --dist custom");
  sim_cmd->add_option("--trials", sim_args.trials)->check(CLI::PositiveNumber)->capture_default_str();
  sim_cmd->add_option("--workers", sim_args.workers, "Threads (0 = all cores)");
  sim_cmd->add_option("--scheme", sim_args.scheme, "Hash functions used by the trials")
      ->check(CLI::IsMember({"independent", "double"}))
      ->capture_default_str();
  sim_args.seed.attach(sim_cmd);

  ExperimentArgs exp_args;
  auto* exp_cmd = app.add_subcommand("experiment", "Candidate-count experiments");
  std::string exp_kind;
  exp_cmd->add_option("kind", exp_kind)->required()->check(CLI::IsMember({"ratio"}));
  exp_cmd->add_option("--text", exp_args.text, "UTF-8 corpus")->required();
  exp_cmd->add_option("--pattern", exp_args.patterns, "Explicit pattern (repeatable)");
  exp_cmd->add_flag("--frequent", exp_args.frequent, "Draw patterns from the most frequent characters");
  exp_cmd->add_flag("--rare", exp_args.rare, "Draw patterns from the least frequent characters");
  exp_cmd->add_option("--lengths", exp_args.lengths)->capture_default_str();
  exp_cmd->add_option("--pool", exp_args.pool, "Characters per frequency class")->check(CLI::PositiveNumber)->capture_default_str();
  exp_cmd->add_option("--d", exp_args.d)->capture_default_str();
  exp_cmd->add_option("--heuristic", exp_args.heuristic)->check(CLI::IsMember({"bm", "qs"}))->capture_default_str();
  exp_cmd->add_option("--buckets-per-char", exp_args.buckets_per_char, "Table size as a multiple of n")
      ->check(CLI::PositiveNumber);
  exp_cmd->add_option("--m-floor", exp_args.m_floor)->check(CLI::PositiveNumber)->capture_default_str();
  exp_cmd->add_option("--cache", exp_args.cache, "Directory for cached approximator images");
  exp_args.seed.attach(exp_cmd);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }
  sim_args.has_n = n_opt->count() > 0;

  try {
    if (*search_cmd) return run_search(search_args);
    if (*analyze_cmd) return run_analyze(analyze_args);
    if (*sim_cmd) return run_simulate(sim_args);
    return run_experiment(exp_args);
  } catch (const UsageError& e) {
    std::cerr << "capprox: " << e.what() << '\n';
    return kUsage;
  } catch (const InvalidParameter& e) {
    std::cerr << "capprox: " << e.what() << '\n';
    return kUsage;
  } catch (const InvalidPattern& e) {
    std::cerr << "capprox: " << e.what() << '\n';
    return kUsage;
  } catch (const BackingUnsupported& e) {
    std::cerr << "capprox: " << e.what() << '\n';
    return kUsage;
  } catch (const IoError& e) {
    std::cerr << "capprox: " << e.what() << '\n';
    return kIo;
  } catch (const DecodeError& e) {
    std::cerr << "capprox: malformed UTF-8 input: " << e.what() << '\n';
    return kDecode;
  } catch (const MatchSetMismatch& e) {
    std::cerr << "capprox: " << e.what() << '\n';
    return kInternal;
  } catch (const std::exception& e) {
    std::cerr << "capprox: internal error: " << e.what() << '\n';
    return kInternal;
  }
}
