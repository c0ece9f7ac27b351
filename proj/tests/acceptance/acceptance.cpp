// Acceptance run: one PASS/FAIL line per criterion, exit status 0 only
// when all eight pass. Counts and tolerances are fixed here on purpose.

#include "pqbench/bench.hpp"
#include "pqbench/dilithium.hpp"
#include "pqbench/kyber.hpp"

#include "kat_file.hpp"
#include "kat_replay.hpp"

#include <algorithm>
#include <array>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <random>
#include <string>
#include <vector>

using namespace pqbench;

namespace {

constexpr std::size_t kRoundTrips = 10'000;      // per level
constexpr std::size_t kTamperCases = 10'000;     // per level
constexpr std::size_t kEquivalenceSeeds = 1'000;  // per scheme and level
constexpr std::size_t kNttPairs = 1'000;          // per ring
constexpr std::size_t kBenchIterations = 1'000;
constexpr std::size_t kBenchRounds = 3;
constexpr double kMinSignShare = 0.5;
constexpr double kMinSpeedup = 1.5;
constexpr double kClockHz = 3.3e9;

struct Outcome {
  bool pass = true;
  std::string detail;

  void fail(const std::string& why) {
    if (pass) detail = why;
    pass = false;
  }
};

std::array<std::uint8_t, 32> seed32(std::mt19937_64& rng) {
  std::array<std::uint8_t, 32> s{};
  for (auto& b : s) b = static_cast<std::uint8_t>(rng());
  return s;
}

Bytes random_bytes(std::mt19937_64& rng, std::size_t n) {
  Bytes b(n);
  for (auto& x : b) x = static_cast<std::uint8_t>(rng());
  return b;
}

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

std::filesystem::path data_dir = PQBENCH_TEST_DATA_DIR;

// 1 -------------------------------------------------------------------------
Outcome sizes() {
  Outcome o;
  const std::array<std::array<std::size_t, 3>, 3> kyber_expected = {{{1632, 800, 768}, {2400, 1184, 1088}, {3168, 1568, 1568}}};
  const std::array<std::array<std::size_t, 2>, 3> dil_expected = {{{1312, 2420}, {1952, 3293}, {2592, 4595}}};
  std::mt19937_64 rng(1);
  for (std::size_t i = 0; i < 3; ++i) {
    const auto& p = kyber::kAllParams[i];
    const auto kp = kyber::keygen(p, seed32(rng), seed32(rng));
    const auto enc = kyber::encapsulate(p, kp.public_key, seed32(rng));
    if (kp.secret_key.size() != kyber_expected[i][0] || kp.public_key.size() != kyber_expected[i][1] ||
        enc.ciphertext.size() != kyber_expected[i][2]) {
      o.fail(std::string(p.name) + " emits wrong lengths");
    }
  }
  for (std::size_t i = 0; i < 3; ++i) {
    const auto& p = dilithium::kAllParams[i];
    const auto kp = dilithium::keygen(p, seed32(rng));
    const auto sig = dilithium::sign(p, kp.secret_key, random_bytes(rng, 33));
    if (kp.public_key.size() != dil_expected[i][0] || sig.size() != dil_expected[i][1]) {
      o.fail(std::string(p.name) + " emits wrong lengths");
    }
  }
  if (o.pass) o.detail = "all six parameter sets emit the published lengths";
  return o;
}

// 2 -------------------------------------------------------------------------
Outcome kat() {
  Outcome o;
  const std::vector<std::tuple<std::string, int, std::string>> files = {
      {"kyber", 512, "PQCkemKAT_1632.rsp"},      {"kyber", 768, "PQCkemKAT_2400.rsp"},
      {"kyber", 1024, "PQCkemKAT_3168.rsp"},     {"dilithium", 2, "PQCsignKAT_Dilithium2.rsp"},
      {"dilithium", 3, "PQCsignKAT_Dilithium3.rsp"}, {"dilithium", 5, "PQCsignKAT_Dilithium5.rsp"}};
  std::vector<Backend> backends = {Backend::reference};
  if (accelerated_available()) backends.push_back(Backend::accelerated);
  std::string counts;
  for (const auto& [scheme, level, file] : files) {
    try {
      const auto records = cli::load_kat(data_dir / "kat" / file);
      for (Backend b : backends) {
        const auto s = cli::replay_kat(scheme, level, records, b);
        if (s.total != 100 || !s.ok()) o.fail(cli::format_summary(s) + " on " + std::string(to_string(b)));
        if (b == Backend::reference) counts += (counts.empty() ? "" : ", ") + std::to_string(s.passed) + "/100";
      }
    } catch (const std::exception& e) {
      o.fail(file + ": " + e.what());
    }
  }
  if (o.pass) o.detail = counts + " (" + std::to_string(backends.size()) + " backend(s))";
  return o;
}

// 3 -------------------------------------------------------------------------
Outcome roundtrips() {
  Outcome o;
  std::mt19937_64 rng(3);
  for (const auto& p : kyber::kAllParams) {
    std::size_t ok = 0;
    for (std::size_t i = 0; i < kRoundTrips; ++i) {
      const auto kp = kyber::keygen(p, seed32(rng), seed32(rng));
      const auto enc = kyber::encapsulate(p, kp.public_key, seed32(rng));
      ok += kyber::decapsulate(p, kp.secret_key, enc.ciphertext) == enc.shared_secret;
    }
    if (ok != kRoundTrips) o.fail(std::string(p.name) + ": " + std::to_string(ok) + " agreements");
  }
  for (const auto& p : dilithium::kAllParams) {
    std::size_t ok = 0;
    dilithium::KeyPair kp;
    for (std::size_t i = 0; i < kRoundTrips; ++i) {
      if (i % 10 == 0) kp = dilithium::keygen(p, seed32(rng));
      const Bytes msg = random_bytes(rng, rng() % 256);
      const auto sig = i % 2 ? dilithium::sign(p, kp.secret_key, msg)
                             : dilithium::sign(p, kp.secret_key, msg, dilithium::SigningMode::randomized, seed32(rng));
      ok += dilithium::verify(p, kp.public_key, msg, sig);
    }
    if (ok != kRoundTrips) o.fail(std::string(p.name) + ": " + std::to_string(ok) + " acceptances");
  }
  if (o.pass) o.detail = std::to_string(kRoundTrips) + " per level, all six levels 100%";
  return o;
}

// 4 -------------------------------------------------------------------------
Outcome tamper() {
  Outcome o;
  std::mt19937_64 rng(4);
  for (const auto& p : dilithium::kAllParams) {
    std::size_t rejected = 0;
    dilithium::KeyPair kp;
    Bytes msg, sig;
    for (std::size_t i = 0; i < kTamperCases; ++i) {
      if (i % 100 == 0) {
        kp = dilithium::keygen(p, seed32(rng));
        msg = random_bytes(rng, 1 + rng() % 64);
        sig = dilithium::sign(p, kp.secret_key, msg).bytes();
      }
      Bytes m = msg, s = sig;
      // three quarters signature flips, one quarter message flips
      if (i % 4 != 3) {
        const std::size_t bit = rng() % (s.size() * 8);
        s[bit / 8] ^= static_cast<std::uint8_t>(1u << (bit % 8));
      } else {
        const std::size_t bit = rng() % (m.size() * 8);
        m[bit / 8] ^= static_cast<std::uint8_t>(1u << (bit % 8));
      }
      rejected += !dilithium::verify(p, kp.public_key, m, s);
    }
    if (rejected != kTamperCases) o.fail(std::string(p.name) + ": " + std::to_string(rejected) + " rejections");
  }
  for (const auto& p : kyber::kAllParams) {
    std::size_t differ = 0;
    kyber::KeyPair kp;
    kyber::Encapsulation enc;
    for (std::size_t i = 0; i < kTamperCases; ++i) {
      if (i % 100 == 0) {
        kp = kyber::keygen(p, seed32(rng), seed32(rng));
        enc = kyber::encapsulate(p, kp.public_key, seed32(rng));
      }
      Bytes ct = enc.ciphertext.bytes();
      const std::size_t bit = rng() % (ct.size() * 8);
      ct[bit / 8] ^= static_cast<std::uint8_t>(1u << (bit % 8));
      differ += kyber::decapsulate(p, kp.secret_key, ct) != enc.shared_secret;
    }
    if (differ != kTamperCases) o.fail(std::string(p.name) + ": " + std::to_string(differ) + " differing secrets");
  }
  if (o.pass) o.detail = std::to_string(kTamperCases) + " single-bit flips per level, all rejected";
  return o;
}

// 5 -------------------------------------------------------------------------
Outcome equivalence() {
  Outcome o;
  if (!accelerated_available()) {
    o.fail("accelerated backend unavailable on this machine, nothing to compare");
    return o;
  }
  for (const auto& [scheme, level] : std::vector<std::pair<std::string, int>>{
           {"kyber", 512}, {"kyber", 768}, {"kyber", 1024}, {"dilithium", 2}, {"dilithium", 3}, {"dilithium", 5}}) {
    const auto r = bench::check_backend_equivalence(scheme, level, kEquivalenceSeeds);
    if (!r.passed) o.fail(scheme + std::to_string(level) + ": " + r.detail);
  }
  if (o.pass) o.detail = std::to_string(kEquivalenceSeeds) + " seeds per scheme/level, bit-identical";
  return o;
}

// 6 -------------------------------------------------------------------------
template <class Element, class Coeff, std::int64_t Q>
Element schoolbook(const Element& a, const Element& b) {
  std::array<__int128, 256> acc{};
  for (int i = 0; i < 256; ++i) {
    for (int j = 0; j < 256; ++j) {
      const __int128 prod = static_cast<__int128>(a.coeffs[i]) * b.coeffs[j];
      if (i + j < 256) {
        acc[i + j] += prod;
      } else {
        acc[i + j - 256] -= prod;
      }
    }
  }
  Element r;
  for (int i = 0; i < 256; ++i) r.coeffs[i] = static_cast<Coeff>(((acc[i] % Q) + Q) % Q);
  return r;
}

Outcome ntt_oracle() {
  Outcome o;
  std::mt19937_64 rng(6);
  std::vector<Backend> backends = {Backend::reference};
  if (accelerated_available()) backends.push_back(Backend::accelerated);
  for (std::size_t t = 0; t < kNttPairs; ++t) {
    kyber::RingElement a, b;
    for (auto& c : a.coeffs) c = static_cast<std::uint16_t>(rng() % kyber::kQ);
    for (auto& c : b.coeffs) c = static_cast<std::uint16_t>(rng() % kyber::kQ);
    const auto expect = schoolbook<kyber::RingElement, std::uint16_t, kyber::kQ>(a, b);
    for (Backend be : backends) {
      if (kyber::inv_ntt(kyber::multiply_ntt(kyber::ntt(a, be), kyber::ntt(b, be), be), be) != expect) {
        o.fail("Kyber ring pair " + std::to_string(t) + " on " + std::string(to_string(be)));
      }
    }
    dilithium::RingElement c, d;
    for (auto& x : c.coeffs) x = static_cast<std::int32_t>(rng() % dilithium::kQ);
    for (auto& x : d.coeffs) x = static_cast<std::int32_t>(rng() % dilithium::kQ);
    const auto expect2 = schoolbook<dilithium::RingElement, std::int32_t, dilithium::kQ>(c, d);
    for (Backend be : backends) {
      const auto got = dilithium::inv_ntt(dilithium::multiply_ntt(dilithium::ntt(c, be), dilithium::ntt(d, be), be), be);
      if (got != expect2) o.fail("Dilithium ring pair " + std::to_string(t) + " on " + std::string(to_string(be)));
    }
  }
  if (o.pass) o.detail = std::to_string(kNttPairs) + " pairs per ring, exact";
  return o;
}

// 7 -------------------------------------------------------------------------
double median_of(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : (v[n / 2 - 1] + v[n / 2]) / 2;
}

struct LevelRuns {
  std::string scheme;
  int level;
  std::vector<double> totals;         // reference median totals, one per round
  std::vector<double> sign_shares;    // reference mean sign share (Dilithium)
  std::vector<std::vector<double>> speedups;  // per op then total, one inner vector per round
};

// Rounds are interleaved across levels so a slow phase of the machine hits
// every level instead of one; each level is then judged on its median round.
Outcome methodology() {
  Outcome o;
  bench::CampaignConfig config;
  config.iterations = kBenchIterations;
  config.clock_hz = kClockHz;
  const bool accelerated = accelerated_available();

  std::vector<LevelRuns> runs;
  for (const std::string scheme : {"kyber", "dilithium"}) {
    for (int level : scheme == "kyber" ? std::vector<int>{512, 768, 1024} : std::vector<int>{2, 3, 5}) {
      runs.push_back({scheme, level, {}, {}, {}});
      if (!accelerated) continue;
      const auto gate = bench::check_backend_equivalence(scheme, level);
      if (!gate.passed) o.fail("(c) equivalence gate failed: " + gate.detail);
    }
  }
  if (!o.pass) return o;

  for (std::size_t round = 0; round < kBenchRounds; ++round) {
    for (auto& run : runs) {
      const auto ref = bench::run_pqc(run.scheme, run.level, Backend::reference, config);
      run.totals.push_back(bench::total_ms(ref));
      if (run.scheme == "dilithium") {
        double mean_total = 0;
        for (const auto& row : ref.rows) mean_total += bench::row_ms(ref, row, true);
        run.sign_shares.push_back(bench::row_ms(ref, ref.rows[1], true) / mean_total);
      }
      if (!accelerated) continue;
      const auto acc = bench::run_pqc(run.scheme, run.level, Backend::accelerated, config);
      std::vector<double> s;
      for (std::size_t i = 0; i < ref.rows.size(); ++i) s.push_back(bench::speedup_rate(ref.rows[i], acc.rows[i]));
      s.push_back(bench::total_ms(ref) / bench::total_ms(acc));
      run.speedups.push_back(std::move(s));
    }
  }

  std::string totals_note, share_note;
  double min_speedup = 1e300;
  std::string min_speedup_at;
  const std::vector<std::string> kyber_ops = {"gen", "enc", "dec", "total"};
  const std::vector<std::string> dil_ops = {"gen", "sign", "verify", "total"};
  for (std::size_t i = 0; i < runs.size(); ++i) {
    const auto& run = runs[i];
    const std::string name = run.scheme + std::to_string(run.level);
    const double total = median_of(run.totals);
    totals_note += (totals_note.empty() ? "" : " ") + fmt("%.3f", total);
    if (i > 0 && runs[i - 1].scheme == run.scheme) {
      const double previous = median_of(runs[i - 1].totals);
      if (!(total > previous)) {
        o.fail("(a) " + run.scheme + " total does not increase at level " + std::to_string(run.level) + ": " +
               fmt("%.4f", previous) + " -> " + fmt("%.4f", total) + " ms");
      }
    }
    if (run.scheme == "dilithium") {
      // Means: the median of a rejection-sampled sign collapses the attempt
      // distribution, the mean is the expected cost including repetitions.
      const double share = median_of(run.sign_shares);
      share_note += (share_note.empty() ? "" : " ") + fmt("%.2f", share);
      if (!(share > kMinSignShare)) o.fail("(b) " + name + " mean sign share " + fmt("%.3f", share));
    }
    if (!accelerated) continue;
    const auto& ops = run.scheme == "kyber" ? kyber_ops : dil_ops;
    for (std::size_t op = 0; op < ops.size(); ++op) {
      std::vector<double> per_round;
      for (const auto& r : run.speedups) per_round.push_back(r[op]);
      const double sp = median_of(per_round);
      if (sp < min_speedup) {
        min_speedup = sp;
        min_speedup_at = name + " " + ops[op];
      }
      if (!(sp > kMinSpeedup)) o.fail("(c) " + name + " " + ops[op] + " speedup " + fmt("%.2f", sp));
    }
  }
  if (o.pass) {
    o.detail = "(a) reference totals ms " + totals_note + "; (b) mean sign shares " + share_note + "; (c) ";
    o.detail += accelerated ? "min speedup " + fmt("%.2f", min_speedup) + " at " + min_speedup_at
                            : "no accelerated backend, not applicable";
    o.detail += "; median of " + std::to_string(kBenchRounds) + " rounds";
  }
  return o;
}

// 8 -------------------------------------------------------------------------
Outcome harness() {
  Outcome o;
  const auto s = bench::summarize("planted", {700, 100, 500, 300, 900}, bench::TimeUnit::cycles);
  if (s.median != 500 || s.mean != 500 || s.min != 100 || s.max != 900 || s.iterations != 5) {
    o.fail("planted statistics differ");
  }
  if (bench::cycles_to_ms(3'300'000, 3.3e9) != 1.0) o.fail("3,300,000 cycles at 3.3 GHz is not 1.0 ms");
  const auto st = [](const char* op, double m) {
    bench::TimingStats t;
    t.op_name = op;
    t.iterations = 1;
    t.median = t.mean = t.min = t.max = m;
    return t;
  };
  const std::string kyber_dec = fmt("%.2f", bench::speedup_rate(st("dec", 0.052), st("dec", 0.008)));
  const std::string dil_sign = fmt("%.2f", bench::speedup_rate(st("sign", 0.840), st("sign", 0.144)));
  if (kyber_dec != "6.50") o.fail("0.052/0.008 renders as " + kyber_dec);
  if (dil_sign != "5.83") o.fail("0.840/0.144 renders as " + dil_sign);
  if (o.pass) o.detail = "planted stats exact, 1.0 ms conversion, ratios " + kyber_dec + " and " + dil_sign;
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc > 1) data_dir = argv[1];
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"size exactness", sizes},
      {"KAT conformance", kat},
      {"roundtrip properties", roundtrips},
      {"tamper rejection", tamper},
      {"backend equivalence", equivalence},
      {"NTT oracle equivalence", ntt_oracle},
      {"methodology reproduction", methodology},
      {"harness self-checks", harness},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o.fail(std::string("exception: ") + e.what());
    }
    failed += !o.pass;
    std::printf("%s %zu %s: %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first, o.detail.c_str());
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
