#include "commands.hpp"

#include "kat_replay.hpp"

#include "pqbench/bench.hpp"
#include "pqbench/classical.hpp"
#include "pqbench/dilithium.hpp"
#include "pqbench/errors.hpp"
#include "pqbench/kyber.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <charconv>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace pqbench::cli {

namespace {

// Thrown once the equivalence gate fails; carries the diagnostic.
struct EquivalenceFailure {
  std::string detail;
};

int parse_int(const std::string& s, const std::string& what) {
  int v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size()) {
    throw InputError("invalid " + what + " '" + s + "'");
  }
  return v;
}

std::vector<int> split_levels(const std::string& levels) {
  std::vector<int> out;
  std::stringstream ss(levels);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(parse_int(item, "level"));
  }
  return out;
}

std::vector<int> all_levels(const std::string& scheme) {
  if (scheme == "kyber") return {512, 768, 1024};
  return {2, 3, 5};
}

void check_level(const std::string& scheme, int level) {
  if (scheme == "kyber") {
    (void)kyber::params_for_level(level);
  } else {
    (void)dilithium::params_for_level(level);
  }
}

// Writes to --out when given, otherwise to the command's stream.
void emit(const std::string& text, const std::string& path, std::ostream& out) {
  if (path.empty()) {
    out << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw InputError("cannot write " + path);
  f << text;
  if (!f) throw CapabilityError("write to " + path + " failed");
}

// Several shapes in one stream: csv keeps a single header, json a single
// array, text stacks the tables.
std::string render_all(const std::vector<bench::BenchReport>& reports, bench::Format format,
                       const std::vector<bench::Shape>& shapes) {
  if (format == bench::Format::json) {
    auto merged = nlohmann::json::array();
    for (auto shape : shapes) {
      for (auto& j : nlohmann::json::parse(bench::render_report(reports, format, shape))) merged.push_back(j);
    }
    return merged.dump(2) + "\n";
  }
  std::string out;
  for (std::size_t i = 0; i < shapes.size(); ++i) {
    std::string part = bench::render_report(reports, format, shapes[i]);
    if (i > 0 && format == bench::Format::csv) part.erase(0, part.find('\n') + 1);
    if (i > 0 && format == bench::Format::text) out += "\n";
    out += part;
  }
  return out;
}

struct BenchOptions {
  std::string alg;
  std::string levels;
  std::size_t iters = bench::kDefaultIterations;
  std::size_t warmup = bench::kDefaultWarmup;
  double clock_ghz = 0;  // 0: default_clock_ghz()
  std::string backend = "all";
  std::string format = "text";
  std::string out;
};

int cmd_sizes(std::ostream& out) {
  for (const auto& p : kyber::kAllParams) {
    out << p.name << " sk=" << p.sizes.sk_bytes << " pk=" << p.sizes.pk_bytes << " ct=" << p.sizes.ct_bytes << "\n";
  }
  for (const auto& p : dilithium::kAllParams) {
    out << p.name << " pk=" << p.sizes.pk_bytes << " sig=" << p.sizes.sig_bytes << "\n";
  }
  return kExitOk;
}

bench::CampaignConfig campaign(std::size_t iters, std::size_t warmup, double clock_ghz) {
  if (iters == 0) throw InputError("--iters must be at least 1");
  const double ghz = clock_ghz > 0 ? clock_ghz : default_clock_ghz();
  bench::CampaignConfig c;
  c.iterations = iters;
  c.warmup = warmup;
  c.clock_hz = ghz * 1e9;
  return c;
}

int cmd_bench(const BenchOptions& o, std::ostream& out, std::ostream& err) {
  const auto targets = resolve_targets(o.alg, o.levels);
  const auto format = bench::format_from_string(o.format);
  if (o.backend != "all" && o.backend != "reference" && o.backend != "ref" && o.backend != "accelerated" &&
      o.backend != "avx2") {
    throw InputError("unknown backend '" + o.backend + "' (all, reference, accelerated)");
  }
  const bool want_ref = o.backend == "all" || backend_from_string(o.backend) == Backend::reference;
  const bool want_acc = o.backend == "all" || backend_from_string(o.backend) == Backend::accelerated;
  if (want_acc && o.backend != "all" && !accelerated_available()) {
    throw CapabilityError("the accelerated backend is not available on this machine");
  }
  const auto config = campaign(o.iters, o.warmup, o.clock_ghz);

  std::vector<bench::BenchReport> reports;
  bool kyber = false, dilithium = false;
  for (const auto& [scheme, level] : targets) {
    (scheme == "kyber" ? kyber : dilithium) = true;
    if (want_acc && accelerated_available()) {
      const auto gate = bench::check_backend_equivalence(scheme, level);
      if (!gate.passed) throw EquivalenceFailure{scheme + std::to_string(level) + ": " + gate.detail};
    }
    if (want_ref) reports.push_back(bench::run_pqc(scheme, level, Backend::reference, config));
    if (want_acc && accelerated_available()) {
      auto r = bench::run_pqc(scheme, level, Backend::accelerated, config);
      r.equivalence_verified = true;
      reports.push_back(std::move(r));
    }
  }
  if (o.backend == "all" && !accelerated_available()) {
    err << "note: accelerated backend unavailable; speedup columns are not computed\n";
  }
  std::vector<bench::Shape> shapes;
  if (kyber) shapes.push_back(bench::Shape::table1);
  if (dilithium) shapes.push_back(bench::Shape::table2);
  emit(render_all(reports, format, shapes), o.out, out);
  return kExitOk;
}

struct KatOptions {
  std::string alg;
  int level = 0;
  std::string file;
  std::string backend = "reference";
  std::string seeds = "auto";
};

int cmd_kat(const KatOptions& o, std::ostream& out, std::ostream& err) {
  const auto targets = resolve_targets(o.alg, o.level == 0 ? "" : std::to_string(o.level));
  if (targets.size() != 1) throw InputError("kat needs exactly one parameter set (e.g. --alg kyber --level 512)");
  SeedSource source = SeedSource::automatic;
  if (o.seeds == "drbg") {
    source = SeedSource::drbg;
  } else if (o.seeds == "pre-expanded") {
    source = SeedSource::pre_expanded;
  } else if (o.seeds != "auto") {
    throw InputError("unknown seed source '" + o.seeds + "' (auto, drbg, pre-expanded)");
  }
  const Backend backend = backend_from_string(o.backend);
  if (backend == Backend::accelerated && !accelerated_available()) {
    throw CapabilityError("the accelerated backend is not available on this machine");
  }
  std::vector<KatRecord> records;
  try {
    records = load_kat(o.file);
  } catch (const InputError& e) {
    throw InputError(o.file + ": " + e.what());
  }
  KatSummary s;
  try {
    s = replay_kat(targets[0].first, targets[0].second, records, backend, source);
  } catch (const InputError& e) {
    throw InputError(o.file + ": " + e.what());
  }
  out << format_summary(s) << "\n";
  if (!s.ok()) {
    err << "kat: " << o.file << " does not match\n";
    return kExitFailure;
  }
  return kExitOk;
}

struct CompareOptions {
  std::size_t iters = bench::kDefaultIterations;
  std::size_t warmup = bench::kDefaultWarmup;
  double clock_ghz = 0;
  std::string format = "text";
  std::string out;
  std::vector<std::string> deny;
  bool no_provider = false;
};

int cmd_compare(const CompareOptions& o, std::ostream& out, std::ostream& err) {
  const auto format = bench::format_from_string(o.format);
  for (const auto& id : o.deny) (void)classical::scheme_by_id(id);
  const auto config = campaign(o.iters, o.warmup, o.clock_ghz);

  std::vector<bench::BenchReport> reports;
  for (const auto& [scheme, level] : resolve_targets("all", "")) {
    reports.push_back(bench::run_pqc(scheme, level, Backend::reference, config));
  }
  classical::ProbeOptions probe;
  probe.disable_provider = o.no_provider;
  for (const auto& id : o.deny) probe.deny.emplace_back(classical::scheme_by_id(id).id);
  const auto handle = classical::probe_provider(probe);
  if (handle.capability_count() == 0) err << "note: no classical crypto provider; classical rows are unavailable\n";
  for (const auto& s : classical::kSchemes) reports.push_back(classical::run_classical(handle, s, config));
  emit(bench::render_report(reports, format, bench::Shape::table3), o.out, out);
  return kExitOk;
}

}  // namespace

std::vector<Target> resolve_targets(const std::string& alg, const std::string& levels) {
  const std::vector<int> requested = split_levels(levels);
  std::vector<Target> out;
  auto add_scheme = [&](const std::string& scheme) {
    for (int level : requested.empty() ? all_levels(scheme) : requested) {
      check_level(scheme, level);
      out.emplace_back(scheme, level);
    }
  };
  if (alg == "all") {
    if (!requested.empty()) throw InputError("--levels needs a single scheme with --alg");
    add_scheme("kyber");
    add_scheme("dilithium");
    return out;
  }
  if (alg == "kyber" || alg == "dilithium") {
    add_scheme(alg);
    return out;
  }
  for (const std::string scheme : {"kyber", "dilithium"}) {
    if (alg.rfind(scheme, 0) == 0 && alg.size() > scheme.size()) {
      const int level = parse_int(alg.substr(scheme.size()), "algorithm '" + alg + "'");
      check_level(scheme, level);
      if (!requested.empty() && (requested.size() != 1 || requested[0] != level)) {
        throw InputError("--levels conflicts with --alg " + alg);
      }
      out.emplace_back(scheme, level);
      return out;
    }
  }
  throw InputError("unknown algorithm '" + alg + "' (kyber, dilithium, kyber512, dilithium3, all, ...)");
}

double default_clock_ghz() {
  const char* env = std::getenv("PQBENCH_CLOCK_GHZ");
  if (env == nullptr || *env == '\0') return bench::kDefaultClockHz / 1e9;
  char* end = nullptr;
  const double v = std::strtod(env, &end);
  if (end == env || *end != '\0' || !(v > 0)) {
    throw InputError(std::string("PQBENCH_CLOCK_GHZ must be a positive number, got '") + env + "'");
  }
  return v;
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Benchmarks and conformance checks for Kyber and Dilithium against classical baselines", "pqbench"};
  app.require_subcommand(1);

  app.add_subcommand("sizes", "Print key, ciphertext and signature sizes of every parameter set");

  BenchOptions bo;
  auto* bench_cmd = app.add_subcommand("bench", "Time keygen/encaps/decaps or keygen/sign/verify per backend");
  bench_cmd->add_option("--alg", bo.alg, "kyber, dilithium, all, or one set such as kyber768")->required();
  bench_cmd->add_option("--levels", bo.levels, "Comma separated levels, e.g. 512,768,1024");
  bench_cmd->add_option("--iters", bo.iters, "Timed iterations per operation")->capture_default_str();
  bench_cmd->add_option("--warmup", bo.warmup, "Untimed iterations before timing")->capture_default_str();
  bench_cmd->add_option("--clock-ghz", bo.clock_ghz, "Clock for cycle conversion (default 3.3 or PQBENCH_CLOCK_GHZ)");
  bench_cmd->add_option("--backend", bo.backend, "all, reference or accelerated")->capture_default_str();
  bench_cmd->add_option("--format", bo.format, "text, csv or json")->capture_default_str();
  bench_cmd->add_option("--out", bo.out, "Write the report to this file instead of stdout");

  KatOptions ko;
  auto* kat_cmd = app.add_subcommand("kat", "Replay a known-answer-test response file");
  kat_cmd->add_option("--alg", ko.alg, "kyber or dilithium, or one set such as dilithium3")->required();
  kat_cmd->add_option("--level", ko.level, "Level when --alg names the scheme only");
  kat_cmd->add_option("--file", ko.file, "Response file (.rsp)")->required();
  kat_cmd->add_option("--backend", ko.backend, "reference or accelerated")->capture_default_str();
  kat_cmd->add_option("--seeds", ko.seeds, "auto, drbg or pre-expanded")->capture_default_str();

  CompareOptions co;
  auto* compare_cmd = app.add_subcommand("compare", "Post-quantum versus classical total times");
  compare_cmd->add_option("--iters", co.iters, "Timed iterations per operation")->capture_default_str();
  compare_cmd->add_option("--warmup", co.warmup, "Untimed iterations before timing")->capture_default_str();
  compare_cmd->add_option("--clock-ghz", co.clock_ghz, "Clock for cycle conversion (default 3.3 or PQBENCH_CLOCK_GHZ)");
  compare_cmd->add_option("--format", co.format, "text, csv or json")->capture_default_str();
  compare_cmd->add_option("--out", co.out, "Write the report to this file instead of stdout");
  compare_cmd->add_option("--deny", co.deny, "Classical scheme ids to treat as unsupported");
  compare_cmd->add_flag("--no-provider", co.no_provider, "Run without the classical crypto provider");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (app.got_subcommand("sizes")) return cmd_sizes(out);
    if (app.got_subcommand(bench_cmd)) {
      if (bo.clock_ghz < 0 || (bench_cmd->count("--clock-ghz") > 0 && !(bo.clock_ghz > 0))) {
        throw InputError("--clock-ghz must be positive");
      }
      return cmd_bench(bo, out, err);
    }
    if (app.got_subcommand(kat_cmd)) return cmd_kat(ko, out, err);
    if (compare_cmd->count("--clock-ghz") > 0 && !(co.clock_ghz > 0)) throw InputError("--clock-ghz must be positive");
    return cmd_compare(co, out, err);
  } catch (const EquivalenceFailure& e) {
    err << "error: backends disagree, speedups withheld: " << e.detail << "\n";
    return kExitEquivalence;
  } catch (const InputError& e) {
    err << "error: " << e.what() << "\n";
    err << "run '" << app.get_name() << " " << app.get_subcommands().front()->get_name() << " --help' for usage\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitFailure;
  }
}

}  // namespace pqbench::cli
