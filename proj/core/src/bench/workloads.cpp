// Units of work for the post-quantum campaigns and the backend
// equivalence gate.

#include "pqbench/bench.hpp"
#include "pqbench/dilithium.hpp"
#include "pqbench/errors.hpp"
#include "pqbench/keccak.hpp"
#include "pqbench/kyber.hpp"

#include <algorithm>
#include <array>
#include <string>

namespace pqbench::bench {

namespace {

// Distinct inputs prepared per campaign; longer campaigns cycle through them.
constexpr std::size_t kMaxPool = 128;

using Seed = std::array<std::uint8_t, 32>;

// Seed i of a named deterministic stream.
Seed derive_seed(std::string_view label, std::size_t i) {
  Bytes in(label.begin(), label.end());
  for (int b = 0; b < 8; ++b) in.push_back(static_cast<std::uint8_t>(i >> (8 * b)));
  Seed out{};
  keccak::shake256(out, in);
  return out;
}

std::size_t pool_size(const CampaignConfig& c) { return std::min(c.iterations + c.warmup, kMaxPool); }

int kyber_bits(int level) { return level == 512 ? 128 : level == 768 ? 192 : 256; }
int dilithium_bits(int level) { return level == 2 ? 128 : level == 3 ? 192 : 256; }

BenchReport base_report(std::string scheme, int level, Backend backend, const CampaignConfig& c) {
  BenchReport r;
  r.scheme = std::move(scheme);
  r.level = level;
  r.backend = std::string(to_string(backend));
  r.clock_hz = c.clock_hz;
  return r;
}

void finish(BenchReport& r) {
  if (!r.rows.empty()) r.unit = r.rows.front().unit;
}

BenchReport run_kyber(int level, Backend backend, const CampaignConfig& c) {
  const auto& p = kyber::params_for_level(level);
  BenchReport r = base_report("kyber", level, backend, c);
  r.security_bits = kyber_bits(level);
  r.sizes = {{"sk", p.sizes.sk_bytes}, {"pk", p.sizes.pk_bytes}, {"ct", p.sizes.ct_bytes}};

  const std::size_t n = pool_size(c);
  std::vector<Seed> d(n), z(n), m(n);
  for (std::size_t i = 0; i < n; ++i) {
    d[i] = derive_seed("kyber-d", i);
    z[i] = derive_seed("kyber-z", i);
    m[i] = derive_seed("kyber-m", i);
  }
  const auto kp = kyber::keygen(p, d[0], z[0], backend);
  std::vector<kyber::Ciphertext> cts;
  for (std::size_t i = 0; i < n; ++i) cts.push_back(kyber::encapsulate(p, kp.public_key, m[i], backend).ciphertext);

  std::size_t next = 0;
  kyber::KeyPair key_sink;
  r.rows.push_back(measure(
      "gen", [&] { key_sink = kyber::keygen(p, d[next % n], z[next % n], backend), ++next; }, c.iterations,
      c.warmup, c.clock));
  next = 0;
  kyber::Encapsulation enc_sink;
  r.rows.push_back(measure(
      "enc", [&] { enc_sink = kyber::encapsulate(p, kp.public_key, m[next++ % n], backend); }, c.iterations,
      c.warmup, c.clock));
  next = 0;
  kyber::SharedSecret ss_sink{};
  r.rows.push_back(measure(
      "dec", [&] { ss_sink = kyber::decapsulate(p, kp.secret_key, cts[next++ % n], backend); }, c.iterations,
      c.warmup, c.clock));
  finish(r);
  return r;
}

BenchReport run_dilithium(int level, Backend backend, const CampaignConfig& c) {
  const auto& p = dilithium::params_for_level(level);
  BenchReport r = base_report("dilithium", level, backend, c);
  r.security_bits = dilithium_bits(level);
  r.sizes = {{"pk", p.sizes.pk_bytes}, {"sig", p.sizes.sig_bytes}};

  const std::size_t n = pool_size(c);
  std::vector<Seed> seeds(n), msgs(n);
  for (std::size_t i = 0; i < n; ++i) {
    seeds[i] = derive_seed("dilithium-seed", i);
    msgs[i] = derive_seed("dilithium-msg", i);
  }
  const auto kp = dilithium::keygen(p, seeds[0], backend);
  std::vector<dilithium::Signature> sigs;
  for (std::size_t i = 0; i < n; ++i) sigs.push_back(dilithium::sign(p, kp.secret_key, msgs[i], backend));

  std::size_t next = 0;
  dilithium::KeyPair key_sink;
  r.rows.push_back(measure(
      "gen", [&] { key_sink = dilithium::keygen(p, seeds[next++ % n], backend); }, c.iterations, c.warmup,
      c.clock));
  next = 0;
  dilithium::Signature sig_sink;
  r.rows.push_back(measure(
      "sign", [&] { sig_sink = dilithium::sign(p, kp.secret_key, msgs[next++ % n], backend); }, c.iterations,
      c.warmup, c.clock));
  next = 0;
  bool ok = true;
  r.rows.push_back(measure(
      "verify",
      [&] {
        const std::size_t i = next++ % n;
        ok = dilithium::verify(p, kp.public_key, msgs[i], sigs[i], backend) && ok;
      },
      c.iterations, c.warmup, c.clock));
  if (!ok) throw ContractViolation("a prepared Dilithium signature failed verification during timing");
  finish(r);
  return r;
}

template <class T>
std::string hex_head(const T& bytes) {
  return to_hex(ByteView(bytes.data(), std::min<std::size_t>(bytes.size(), 8)));
}

EquivalenceResult kyber_equivalence(int level, std::size_t seeds) {
  const auto& p = kyber::params_for_level(level);
  const auto ref = Backend::reference;
  const auto acc = Backend::accelerated;
  for (std::size_t i = 0; i < seeds; ++i) {
    const Seed d = derive_seed("eq-kyber-d", i);
    const Seed z = derive_seed("eq-kyber-z", i);
    const Seed m = derive_seed("eq-kyber-m", i);
    const auto k1 = kyber::keygen(p, d, z, ref);
    const auto k2 = kyber::keygen(p, d, z, acc);
    const std::string at = "kyber" + std::to_string(level) + " seed " + std::to_string(i) + ": ";
    if (k1.public_key != k2.public_key) return {false, at + "public keys differ"};
    if (k1.secret_key != k2.secret_key) return {false, at + "secret keys differ"};
    const auto e1 = kyber::encapsulate(p, k1.public_key, m, ref);
    const auto e2 = kyber::encapsulate(p, k1.public_key, m, acc);
    if (e1.ciphertext != e2.ciphertext) return {false, at + "ciphertexts differ"};
    if (e1.shared_secret != e2.shared_secret) return {false, at + "encapsulated secrets differ"};
    if (kyber::decapsulate(p, k1.secret_key, e1.ciphertext, ref) !=
        kyber::decapsulate(p, k1.secret_key, e1.ciphertext, acc)) {
      return {false, at + "decapsulated secrets differ"};
    }
    Bytes bad = e1.ciphertext.bytes();
    bad[i % bad.size()] ^= 0x01;
    if (kyber::decapsulate(p, k1.secret_key, bad, ref) != kyber::decapsulate(p, k1.secret_key, bad, acc)) {
      return {false, at + "rejection secrets differ"};
    }
  }
  return {true, {}};
}

EquivalenceResult dilithium_equivalence(int level, std::size_t seeds) {
  const auto& p = dilithium::params_for_level(level);
  const auto ref = Backend::reference;
  const auto acc = Backend::accelerated;
  for (std::size_t i = 0; i < seeds; ++i) {
    const Seed seed = derive_seed("eq-dilithium-seed", i);
    const Seed msg = derive_seed("eq-dilithium-msg", i);
    const Seed rnd = derive_seed("eq-dilithium-rnd", i);
    const auto k1 = dilithium::keygen(p, seed, ref);
    const auto k2 = dilithium::keygen(p, seed, acc);
    const std::string at = "dilithium" + std::to_string(level) + " seed " + std::to_string(i) + ": ";
    if (k1.public_key != k2.public_key) return {false, at + "public keys differ"};
    if (k1.secret_key != k2.secret_key) return {false, at + "secret keys differ"};
    const auto s1 = dilithium::sign(p, k1.secret_key, msg, ref);
    const auto s2 = dilithium::sign(p, k1.secret_key, msg, acc);
    if (s1 != s2) return {false, at + "signatures differ (first bytes " + hex_head(s1) + " vs " + hex_head(s2) + ")"};
    const auto r1 = dilithium::sign(p, k1.secret_key, msg, dilithium::SigningMode::randomized, rnd, ref);
    const auto r2 = dilithium::sign(p, k1.secret_key, msg, dilithium::SigningMode::randomized, rnd, acc);
    if (r1 != r2) return {false, at + "randomized signatures differ"};
    if (!dilithium::verify(p, k1.public_key, msg, s1, ref) || !dilithium::verify(p, k1.public_key, msg, s1, acc)) {
      return {false, at + "verification disagrees"};
    }
  }
  return {true, {}};
}

}  // namespace

BenchReport run_pqc(std::string_view scheme, int level, Backend backend, const CampaignConfig& config) {
  if (config.iterations == 0) throw InputError("iterations must be at least 1");
  if (scheme == "kyber") return run_kyber(level, backend, config);
  if (scheme == "dilithium") return run_dilithium(level, backend, config);
  throw InputError("unknown post-quantum scheme '" + std::string(scheme) + "'");
}

EquivalenceResult check_backend_equivalence(std::string_view scheme, int level, std::size_t seeds) {
  if (!accelerated_available()) return {false, "accelerated backend is not available"};
  if (scheme == "kyber") return kyber_equivalence(level, seeds);
  if (scheme == "dilithium") return dilithium_equivalence(level, seeds);
  throw InputError("unknown post-quantum scheme '" + std::string(scheme) + "'");
}

}  // namespace pqbench::bench
