#pragma once

// CRYSTALS-Kyber KEM, round-3 parameter sets and byte layouts.

#include "pqbench/backend.hpp"
#include "pqbench/bytes.hpp"

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>

namespace pqbench::kyber {

inline constexpr int kQ = 3329;
inline constexpr int kN = 256;
inline constexpr std::size_t kSeedBytes = 32;
inline constexpr std::size_t kSharedSecretBytes = 32;

struct Sizes {
  std::size_t sk_bytes;
  std::size_t pk_bytes;
  std::size_t ct_bytes;
  std::size_t ss_bytes = kSharedSecretBytes;
};

struct KyberParams {
  std::string_view name;  // "kyber512", ...
  int level;              // 512, 768, 1024
  unsigned k;             // module rank
  unsigned eta1;
  unsigned eta2;
  unsigned du;
  unsigned dv;
  Sizes sizes;
};

inline constexpr KyberParams kKyber512{"kyber512", 512, 2, 3, 2, 10, 4, {1632, 800, 768}};
inline constexpr KyberParams kKyber768{"kyber768", 768, 3, 2, 2, 10, 4, {2400, 1184, 1088}};
inline constexpr KyberParams kKyber1024{"kyber1024", 1024, 4, 2, 2, 11, 5, {3168, 1568, 1568}};

inline constexpr std::array<KyberParams, 3> kAllParams = {kKyber512, kKyber768, kKyber1024};

/// Throws InputError for anything but 512, 768, 1024.
const KyberParams& params_for_level(int level);

struct PublicKeyTag {};
struct SecretKeyTag {};
struct CiphertextTag {};

using PublicKey = ByteString<PublicKeyTag>;
using SecretKey = ByteString<SecretKeyTag>;
using Ciphertext = ByteString<CiphertextTag>;
using SharedSecret = std::array<std::uint8_t, kSharedSecretBytes>;

struct KeyPair {
  PublicKey public_key;
  SecretKey secret_key;
};

struct Encapsulation {
  Ciphertext ciphertext;
  SharedSecret shared_secret;
};

/// Deterministic key generation. seed_d feeds the CPA key pair, seed_z is
/// the implicit-rejection secret stored at the end of sk. Both must be 32
/// bytes; throws InputError otherwise.
KeyPair keygen(const KyberParams& params, ByteView seed_d, ByteView seed_z,
               Backend backend = default_backend());

/// Deterministic encapsulation; seed_m is the 32-byte message randomness
/// (hashed before use, as the round-3 scheme does).
Encapsulation encapsulate(const KyberParams& params, ByteView public_key, ByteView seed_m,
                          Backend backend = default_backend());

/// Never fails on ciphertext content: a ciphertext that does not re-encrypt
/// yields the pseudorandom rejection secret. Only lengths are validated.
SharedSecret decapsulate(const KyberParams& params, ByteView secret_key, ByteView ciphertext,
                         Backend backend = default_backend());

/// Convenience wrappers drawing seeds from the OS CSPRNG.
KeyPair keygen(const KyberParams& params, Backend backend = default_backend());
Encapsulation encapsulate(const KyberParams& params, ByteView public_key,
                          Backend backend = default_backend());

// ---------------------------------------------------------------------------
// Ring arithmetic over Z_3329[X]/(X^256 + 1)

enum class Domain { normal, ntt };

struct RingElement {
  std::array<std::uint16_t, kN> coeffs{};  // each in [0, q)
  Domain domain = Domain::normal;

  friend bool operator==(const RingElement&, const RingElement&) = default;
};

/// Forward negacyclic NTT (bit-reversed output order, as used on the wire).
/// Throws ContractViolation unless p is in the normal domain.
RingElement ntt(const RingElement& p, Backend backend = default_backend());

/// Exact inverse of ntt(). Throws ContractViolation unless p is in the NTT domain.
RingElement inv_ntt(const RingElement& p, Backend backend = default_backend());

/// Product in the NTT domain: inv_ntt(multiply_ntt(ntt(a), ntt(b))) is the
/// negacyclic product a*b.
RingElement multiply_ntt(const RingElement& a, const RingElement& b, Backend backend = default_backend());

/// Coefficient-wise sum; both operands must share a domain.
RingElement add(const RingElement& a, const RingElement& b);

/// Centered binomial sample from 64*eta stream bytes; eta in {2, 3}.
RingElement cbd_sample(unsigned eta, ByteView stream);

/// Compresses to d bits per coefficient, d in {1, 4, 5, 10, 11}.
/// Output is 32*d bytes.
Bytes compress(const RingElement& p, unsigned d, Backend backend = default_backend());
RingElement decompress(ByteView bytes, unsigned d, Backend backend = default_backend());

}  // namespace pqbench::kyber
