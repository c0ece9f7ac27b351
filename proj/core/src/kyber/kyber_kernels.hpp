#pragma once

// Backend kernel table for Kyber. The scheme logic in kyber.cpp is written
// once against this table; each backend fills it with its own arithmetic.
//
// Coefficients are int16 representatives congruent mod q. Between kernels
// they stay within the bounds the reference implementation relies on:
// |x| < q after ntt/invntt_tomont/basemul_acc/reduce, |x| < 4096 after
// from_bytes. Encoders accept any such representative and emit canonical
// values, so outputs never depend on which representative a backend keeps.

#include <cstddef>
#include <cstdint>

namespace pqbench::kyber::detail {

inline constexpr int kN = 256;
inline constexpr int kQ = 3329;

struct alignas(32) Poly {
  std::int16_t coeffs[kN];
};

struct Kernels {
  void (*ntt)(Poly& p);
  /// Inverse transform, result scaled by 2^16 (Montgomery form).
  void (*invntt_tomont)(Poly& p);
  /// r = sum_i a[i] o b[i] in the NTT domain, scaled by 2^-16, reduced.
  void (*basemul_acc)(Poly& r, const Poly* a, const Poly* b, unsigned k);
  void (*tomont)(Poly& p);
  void (*reduce)(Poly& p);
  void (*add)(Poly& r, const Poly& a, const Poly& b);
  void (*sub)(Poly& r, const Poly& a, const Poly& b);

  /// a[i*k + j] = Parse(SHAKE128(seed || j || i)), or (i, j) when transposed.
  void (*gen_matrix)(Poly* a, unsigned k, const std::uint8_t* seed, bool transposed);
  /// r[i] = CBD_eta(SHAKE256(seed || first_nonce + i, 64*eta)), i < count.
  void (*noise)(Poly* r, unsigned count, unsigned eta, const std::uint8_t* seed, std::uint8_t first_nonce);

  void (*to_bytes)(std::uint8_t* out, const Poly& p);
  void (*from_bytes)(Poly& p, const std::uint8_t* in);
  /// d in {4, 5, 10, 11}; writes 32*d bytes.
  void (*compress)(std::uint8_t* out, const Poly& p, unsigned d);
  void (*decompress)(Poly& p, const std::uint8_t* in, unsigned d);
  void (*from_msg)(Poly& p, const std::uint8_t* msg);
  void (*to_msg)(std::uint8_t* msg, const Poly& p);
};

const Kernels& reference_kernels() noexcept;

/// nullptr when the AVX2 kernels were not compiled in.
const Kernels* avx2_kernels() noexcept;

/// Scalar encoders shared by both backends.
void to_bytes_scalar(std::uint8_t* out, const Poly& p) noexcept;
void from_bytes_scalar(Poly& p, const std::uint8_t* in) noexcept;
void compress_scalar(std::uint8_t* out, const Poly& p, unsigned d) noexcept;
void decompress_scalar(Poly& p, const std::uint8_t* in, unsigned d) noexcept;
void from_msg_scalar(Poly& p, const std::uint8_t* msg) noexcept;
void to_msg_scalar(std::uint8_t* msg, const Poly& p) noexcept;

/// Scalar centered binomial sampler, eta in {2, 3}.
void cbd(Poly& r, const std::uint8_t* buf, unsigned eta) noexcept;

}  // namespace pqbench::kyber::detail
