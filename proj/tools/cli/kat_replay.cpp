#include "kat_replay.hpp"

#include "nist_drbg.hpp"

#include "pqbench/dilithium.hpp"
#include "pqbench/errors.hpp"
#include "pqbench/kyber.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <span>

namespace pqbench::cli {

namespace {

struct FieldRule {
  const char* name;
  std::size_t bytes;  // 0: any length
};

[[noreturn]] void bad(const KatRecord& r, const std::string& what, const std::string& field = {}) {
  throw InputError("line " + std::to_string(r.line(field)) + ": " + what);
}

bool is_hex(const std::string& s) {
  return std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isxdigit(c) != 0; });
}

bool uses_drbg(const KatRecord& r, SeedSource source) {
  if (source == SeedSource::drbg) return true;
  if (source == SeedSource::pre_expanded) return false;
  return r.has("seed");
}

std::vector<FieldRule> rules_for(const std::string& scheme, int level, bool drbg) {
  std::vector<FieldRule> rules;
  if (drbg) rules.push_back({"seed", 48});
  if (scheme == "kyber") {
    const auto& p = kyber::params_for_level(level);
    if (!drbg) rules.insert(rules.end(), {{"d", 32}, {"z", 32}, {"m", 32}});
    rules.insert(rules.end(), {{"pk", p.sizes.pk_bytes},
                               {"sk", p.sizes.sk_bytes},
                               {"ct", p.sizes.ct_bytes},
                               {"ss", kyber::kSharedSecretBytes}});
  } else if (scheme == "dilithium") {
    const auto& p = dilithium::params_for_level(level);
    if (!drbg) rules.push_back({"xi", 32});
    rules.insert(rules.end(), {{"pk", p.sizes.pk_bytes}, {"sk", p.sizes.sk_bytes}, {"msg", 0}, {"sm", 0}});
  } else {
    throw InputError("unknown scheme '" + scheme + "' (kyber, dilithium)");
  }
  return rules;
}

// Expected values are compared as text so a corrupted digit is reported
// as a mismatch of that field rather than a parse error.
bool same_hex(const std::string& expected, ByteView actual) {
  const std::string got = to_hex(actual);
  return expected.size() == got.size() &&
         std::equal(got.begin(), got.end(), expected.begin(),
                    [](char a, char b) { return std::toupper(static_cast<unsigned char>(a)) ==
                                                std::toupper(static_cast<unsigned char>(b)); });
}

template <std::size_t N>
std::array<std::uint8_t, N> fixed(const KatRecord& r, const char* field) {
  const Bytes b = r.bytes(field);
  std::array<std::uint8_t, N> out{};
  std::copy_n(b.begin(), N, out.begin());
  return out;
}

std::optional<std::string> replay_kyber(const kyber::KyberParams& p, const KatRecord& r, bool drbg,
                                        Backend backend) {
  std::array<std::uint8_t, 32> d{}, z{}, m{};
  if (drbg) {
    const Bytes seed = r.bytes("seed");
    NistDrbg rng(std::span<const std::uint8_t, 48>(seed.data(), 48));
    d = rng.generate<32>();
    z = rng.generate<32>();
    m = rng.generate<32>();
  } else {
    d = fixed<32>(r, "d");
    z = fixed<32>(r, "z");
    m = fixed<32>(r, "m");
  }
  const auto kp = kyber::keygen(p, d, z, backend);
  if (!same_hex(r.text("pk"), kp.public_key)) return "pk";
  if (!same_hex(r.text("sk"), kp.secret_key)) return "sk";
  const auto enc = kyber::encapsulate(p, kp.public_key, m, backend);
  if (!same_hex(r.text("ct"), enc.ciphertext)) return "ct";
  if (!same_hex(r.text("ss"), enc.shared_secret)) return "ss";
  // decapsulating the published ciphertext must give the published secret
  const Bytes ct = from_hex(r.text("ct"));
  if (!same_hex(r.text("ss"), kyber::decapsulate(p, kp.secret_key, ct, backend))) return "ss";
  return std::nullopt;
}

std::optional<std::string> replay_dilithium(const dilithium::DilithiumParams& p, const KatRecord& r, bool drbg,
                                            Backend backend) {
  std::array<std::uint8_t, 32> xi{};
  if (drbg) {
    const Bytes seed = r.bytes("seed");
    NistDrbg rng(std::span<const std::uint8_t, 48>(seed.data(), 48));
    xi = rng.generate<32>();
  } else {
    xi = fixed<32>(r, "xi");
  }
  const auto kp = dilithium::keygen(p, xi, backend);
  if (!same_hex(r.text("pk"), kp.public_key)) return "pk";
  if (!same_hex(r.text("sk"), kp.secret_key)) return "sk";
  const Bytes msg = r.bytes("msg");
  const auto sig = dilithium::sign(p, kp.secret_key, msg, backend);
  Bytes sm = sig.bytes();
  sm.insert(sm.end(), msg.begin(), msg.end());
  if (!same_hex(r.text("sm"), sm)) return "sm";
  if (!dilithium::verify(p, kp.public_key, msg, sig, backend)) return "verify";
  return std::nullopt;
}

}  // namespace

void validate_kat(const std::vector<KatRecord>& records, const std::string& scheme, int level, SeedSource source) {
  if (records.empty()) throw InputError("no test vector records");
  long long expected = 0;
  for (const auto& r : records) {
    if (!r.has("count")) bad(r, "record has no count");
    long long count = 0;
    try {
      count = r.integer("count");
    } catch (const InputError& e) {
      bad(r, e.what());
    }
    if (count != expected) {
      bad(r, "expected count " + std::to_string(expected) + ", found " + std::to_string(count), "count");
    }
    ++expected;
    for (const auto& rule : rules_for(scheme, level, uses_drbg(r, source))) {
      if (!r.has(rule.name)) bad(r, std::string("record has no ") + rule.name);
      const std::string& v = r.text(rule.name);
      if (v.size() % 2 != 0) bad(r, std::string(rule.name) + " has an odd number of hex digits", rule.name);
      if (rule.bytes != 0 && v.size() != 2 * rule.bytes) {
        bad(r, std::string(rule.name) + " is " + std::to_string(v.size() / 2) + " bytes, expected " +
                   std::to_string(rule.bytes),
            rule.name);
      }
      // inputs must decode; outputs are compared as text
      const std::string name = rule.name;
      const bool input = name != "pk" && name != "sk" && name != "ct" && name != "ss" && name != "sm";
      if (input && !is_hex(v)) bad(r, std::string(rule.name) + " is not hex", rule.name);
    }
    if (scheme == "dilithium" && r.has("mlen")) {
      long long mlen = -1;
      try {
        mlen = r.integer("mlen");
      } catch (const InputError& e) {
        bad(r, e.what());
      }
      if (static_cast<std::size_t>(mlen) * 2 != r.text("msg").size()) bad(r, "mlen does not match msg", "mlen");
    }
  }
}

KatSummary replay_kat(const std::string& scheme, int level, const std::vector<KatRecord>& records, Backend backend,
                      SeedSource source) {
  validate_kat(records, scheme, level, source);
  KatSummary s;
  s.total = records.size();
  for (const auto& r : records) {
    std::optional<std::string> failed;
    if (scheme == "kyber") {
      const auto& p = kyber::params_for_level(level);
      s.scheme = std::string(p.name);
      failed = replay_kyber(p, r, uses_drbg(r, source), backend);
    } else {
      const auto& p = dilithium::params_for_level(level);
      s.scheme = std::string(p.name);
      failed = replay_dilithium(p, r, uses_drbg(r, source), backend);
    }
    if (!failed) {
      ++s.passed;
    } else if (!s.first_failure) {
      s.first_failure = KatMismatch{r.integer("count"), *failed};
    }
  }
  return s;
}

std::string format_summary(const KatSummary& s) {
  std::string out = s.scheme + ": " + std::to_string(s.passed) + "/" + std::to_string(s.total) + " records pass";
  if (s.first_failure) {
    out += "; first mismatch in record " + std::to_string(s.first_failure->count) + " field " +
           s.first_failure->field;
  }
  return out;
}

}  // namespace pqbench::cli
