#pragma once

// CRYSTALS-Dilithium signatures, round-3.1 parameter sets and byte layouts.

#include "pqbench/backend.hpp"
#include "pqbench/bytes.hpp"

#include <array>
#include <cstddef>
#include <cstdint>
#include <string_view>

namespace pqbench::dilithium {

inline constexpr std::int32_t kQ = 8380417;
inline constexpr int kN = 256;
inline constexpr int kD = 13;  // dropped bits of t
inline constexpr std::size_t kSeedBytes = 32;
inline constexpr std::size_t kCrhBytes = 64;

struct Sizes {
  std::size_t pk_bytes;
  std::size_t sk_bytes;
  std::size_t sig_bytes;
};

struct DilithiumParams {
  std::string_view name;  // "dilithium2", ...
  int level;              // 2, 3, 5
  unsigned k;
  unsigned l;
  unsigned eta;
  unsigned tau;
  std::int32_t beta;  // tau * eta
  std::int32_t gamma1;
  std::int32_t gamma2;
  unsigned omega;
  Sizes sizes;
};

inline constexpr DilithiumParams kDilithium2{
    "dilithium2", 2, 4, 4, 2, 39, 78, 1 << 17, (kQ - 1) / 88, 80, {1312, 2528, 2420}};
inline constexpr DilithiumParams kDilithium3{
    "dilithium3", 3, 6, 5, 4, 49, 196, 1 << 19, (kQ - 1) / 32, 55, {1952, 4000, 3293}};
inline constexpr DilithiumParams kDilithium5{
    "dilithium5", 5, 8, 7, 2, 60, 120, 1 << 19, (kQ - 1) / 32, 75, {2592, 4864, 4595}};

inline constexpr std::array<DilithiumParams, 3> kAllParams = {kDilithium2, kDilithium3, kDilithium5};

/// Throws InputError for anything but 2, 3, 5.
const DilithiumParams& params_for_level(int level);

struct PublicKeyTag {};
struct SecretKeyTag {};
struct SignatureTag {};

using PublicKey = ByteString<PublicKeyTag>;
using SecretKey = ByteString<SecretKeyTag>;
using Signature = ByteString<SignatureTag>;

struct KeyPair {
  PublicKey public_key;
  SecretKey secret_key;
};

enum class SigningMode { deterministic, randomized };

/// Signing gives up after this many rejected candidates. The expected count
/// is below ten, so hitting the cap means a defect, reported as SigningFailure.
inline constexpr unsigned kMaxSigningAttempts = 1000;

/// Deterministic key generation from a 32-byte seed; throws InputError on a
/// seed of any other length.
KeyPair keygen(const DilithiumParams& params, ByteView seed, Backend backend = default_backend());

/// Seed drawn from the OS CSPRNG.
KeyPair keygen(const DilithiumParams& params, Backend backend = default_backend());

/// Deterministic signing: identical (sk, message) give identical signatures.
Signature sign(const DilithiumParams& params, ByteView secret_key, ByteView message,
               Backend backend = default_backend());

/// mode = randomized requires a 32-byte rnd, mixed into the masking seed
/// together with the key and message digest; deterministic requires rnd to
/// be empty. Throws InputError on violations or a wrong sk length, and
/// SigningFailure if kMaxSigningAttempts candidates are all rejected.
Signature sign(const DilithiumParams& params, ByteView secret_key, ByteView message, SigningMode mode,
               ByteView rnd, Backend backend = default_backend());

/// Never throws on malformed input: wrong lengths, bad hint encodings, norm
/// violations and challenge mismatches all return false.
bool verify(const DilithiumParams& params, ByteView public_key, ByteView message, ByteView signature,
            Backend backend = default_backend());

// ---------------------------------------------------------------------------
// Ring arithmetic over Z_8380417[X]/(X^256 + 1) and rounding helpers

enum class Domain { normal, ntt };

struct RingElement {
  std::array<std::int32_t, kN> coeffs{};  // each in [0, q)
  Domain domain = Domain::normal;

  friend bool operator==(const RingElement&, const RingElement&) = default;
};

/// Throws ContractViolation on a domain mismatch, as the Kyber ring does.
RingElement ntt(const RingElement& p, Backend backend = default_backend());
RingElement inv_ntt(const RingElement& p, Backend backend = default_backend());
RingElement multiply_ntt(const RingElement& a, const RingElement& b, Backend backend = default_backend());
RingElement add(const RingElement& a, const RingElement& b);

/// Challenge polynomial: exactly tau coefficients in {-1, +1} (stored as
/// 1 and q-1), the rest zero. tau must be 39, 49 or 60.
RingElement sample_in_ball(ByteView seed, unsigned tau);

struct Split {
  std::int32_t high;
  std::int32_t low;
};

/// r = high * 2^13 + low with low in (-2^12, 2^12]; r in [0, q).
Split power2round(std::int32_t r);

/// r = high * 2*gamma2 + low with low in (-gamma2, gamma2], except that the
/// top bucket wraps to high = 0 with low shifted down by one. r in [0, q);
/// gamma2 is (q-1)/88 or (q-1)/32, otherwise InputError.
Split decompose(std::int32_t r, std::int32_t gamma2);

/// 1 iff adding z changes the high bits of r. r in [0, q), z any
/// representative in (-q, q).
std::int32_t make_hint(std::int32_t z, std::int32_t r, std::int32_t gamma2);

/// High bits of r + z recovered from r and the hint, valid when |z| <= gamma2.
std::int32_t use_hint(std::int32_t hint, std::int32_t r, std::int32_t gamma2);

}  // namespace pqbench::dilithium
