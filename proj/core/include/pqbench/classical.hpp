#pragma once

// Classical baselines (ECDH, ECDSA, RSA) through the host crypto provider,
// exposed as single-operation units of work for the bench engine.

#include "pqbench/bench.hpp"

#include <array>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace pqbench::classical {

enum class Kind { key_exchange, signature };

enum class Op { keygen, agree, sign, verify, encrypt, decrypt };

std::string_view to_string(Op op) noexcept;

struct ClassicalScheme {
  std::string_view id;       // "ecdh-p256", "ecdsa-p521", "rsa-2048", ...
  std::string_view family;   // "ecdh", "ecdsa", "rsa"
  int level;                 // curve bits or modulus bits
  Kind kind;
  int claimed_security_bits;
  std::string_view label;    // as printed in the comparison table
};

// ECDSA at 256-bit security is published as "P-512"; it runs on P-521.
inline constexpr std::array<ClassicalScheme, 8> kSchemes = {{
    {"ecdsa-p256", "ecdsa", 256, Kind::signature, 128, "ECDSA(P-256)"},
    {"ecdsa-p384", "ecdsa", 384, Kind::signature, 192, "ECDSA(P-384)"},
    {"ecdsa-p521", "ecdsa", 521, Kind::signature, 256, "ECDSA(P-512)"},
    {"rsa-2048", "rsa", 2048, Kind::key_exchange, 112, "RSA-2048"},
    {"rsa-3072", "rsa", 3072, Kind::key_exchange, 128, "RSA-3072"},
    {"ecdh-p256", "ecdh", 256, Kind::key_exchange, 128, "ECDH(P-256)"},
    {"ecdh-p384", "ecdh", 384, Kind::key_exchange, 192, "ECDH(P-384)"},
    {"ecdh-p521", "ecdh", 521, Kind::key_exchange, 256, "ECDH(P-521)"},
}};

/// Accepts the ids above plus "ecdsa-p512". Throws InputError otherwise.
const ClassicalScheme& scheme_by_id(std::string_view id);

/// Operations valid for a scheme: ECDH keygen/agree, ECDSA keygen/sign/
/// verify, RSA all of keygen/encrypt/decrypt/sign/verify.
std::vector<Op> supported_ops(const ClassicalScheme& scheme);

struct ProbeOptions {
  /// Scheme ids to report as unsupported regardless of the provider.
  std::vector<std::string> deny;
  /// Pretend no provider is present.
  bool disable_provider = false;
};

struct ProviderState;

/// Capability flags plus provider-side state (cached long-lived keys).
/// Single-threaded: do not share one handle between threads.
class ProviderHandle {
 public:
  [[nodiscard]] bool available(const ClassicalScheme& scheme) const noexcept;
  [[nodiscard]] std::size_t capability_count() const noexcept;
  /// Provider name and version, or empty when none is present.
  [[nodiscard]] const std::string& provider_name() const noexcept { return name_; }

 private:
  friend ProviderHandle probe_provider(const ProbeOptions& options);
  friend bench::Work run_classical_op(const ProviderHandle&, const ClassicalScheme&, Op);
  friend bool roundtrip_check(const ProviderHandle&, const ClassicalScheme&);
  std::array<bool, kSchemes.size()> caps_{};
  std::string name_;
  std::shared_ptr<ProviderState> state_;
};

/// Never throws: schemes the provider cannot run are flagged unavailable.
ProviderHandle probe_provider(const ProbeOptions& options = {});

/// One invocation performs exactly one operation on inputs prepared when
/// the closure is built (keys, peer keys, digests, padded plaintexts).
/// Throws CapabilityError when the scheme is unavailable on the handle or
/// the op is not valid for the scheme.
bench::Work run_classical_op(const ProviderHandle& handle, const ClassicalScheme& scheme, Op op);

/// One functional roundtrip before timing: both sides agree on the shared
/// secret, a signature verifies, a decryption returns the plaintext.
/// Throws CapabilityError when unavailable.
bool roundtrip_check(const ProviderHandle& handle, const ClassicalScheme& scheme);

struct WeightedOp {
  Op op;
  unsigned count;
};

/// Which operations make up a scheme's total time. The defaults are
/// ECDH: 2 x keygen + 2 x agree (both parties), ECDSA: keygen + sign +
/// verify, RSA: encrypt + decrypt with OAEP, key generation excluded.
class CompositionPolicy {
 public:
  static CompositionPolicy defaults();

  void set(std::string_view family, std::vector<WeightedOp> ops);
  [[nodiscard]] const std::vector<WeightedOp>& ops_for(std::string_view family) const;

 private:
  std::vector<std::pair<std::string, std::vector<WeightedOp>>> entries_;
};

/// Times every op of the policy for one scheme. When the scheme is
/// unavailable, or the roundtrip check fails, the report carries an
/// `unavailable` note instead of rows.
bench::BenchReport run_classical(const ProviderHandle& handle, const ClassicalScheme& scheme,
                                 const bench::CampaignConfig& config,
                                 const CompositionPolicy& policy = CompositionPolicy::defaults());

}  // namespace pqbench::classical
