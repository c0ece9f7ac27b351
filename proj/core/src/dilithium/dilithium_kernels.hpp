#pragma once

// Backend kernel table for Dilithium. As for Kyber, the scheme logic in
// dilithium.cpp is written once against this table. Both backends perform
// the same reductions in the same places, so every intermediate polynomial
// (and hence every encoded byte) is identical across backends.

#include <cstddef>
#include <cstdint>

namespace pqbench::dilithium::detail {

inline constexpr int kN = 256;
inline constexpr std::int32_t kQ = 8380417;

struct alignas(32) Poly {
  std::int32_t coeffs[kN];
};

struct Kernels {
  void (*ntt)(Poly& p);
  /// Inverse transform, result scaled by 2^32 (Montgomery form).
  void (*invntt_tomont)(Poly& p);
  /// r = a o b * 2^-32.
  void (*pointwise)(Poly& r, const Poly& a, const Poly& b);
  /// r = sum_i a[i] o b[i] * 2^-32, no final reduction.
  void (*pointwise_acc)(Poly& r, const Poly* a, const Poly* b, unsigned n);
  void (*reduce)(Poly& p);  // centered-ish reduction into (-6283009, 6283008]
  void (*caddq)(Poly& p);   // adds q to negative coefficients
  void (*add)(Poly& r, const Poly& a, const Poly& b);
  void (*sub)(Poly& r, const Poly& a, const Poly& b);
  void (*shiftl)(Poly& p);  // multiply by 2^13

  /// mat[i*l + j] = Uniform(SHAKE128(rho || (i << 8) + j)).
  void (*expand_matrix)(Poly* mat, unsigned k, unsigned l, const std::uint8_t* rho);
  /// r[i] = UniformEta(SHAKE256(seed || first_nonce + i)), seed 64 bytes.
  void (*uniform_eta)(Poly* r, unsigned count, unsigned eta, const std::uint8_t* seed, std::uint16_t first_nonce);
  /// r[i] = gamma1 - bits(SHAKE256(seed || first_nonce + i)).
  void (*uniform_gamma1)(Poly* r, unsigned count, std::int32_t gamma1, const std::uint8_t* seed,
                         std::uint16_t first_nonce);

  void (*power2round)(Poly& a1, Poly& a0, const Poly& a);
  void (*decompose)(Poly& a1, Poly& a0, const Poly& a, std::int32_t gamma2);
  /// Returns the number of set hints.
  unsigned (*make_hint)(Poly& h, const Poly& a0, const Poly& a1, std::int32_t gamma2);
  void (*use_hint)(Poly& r, const Poly& a, const Poly& h, std::int32_t gamma2);
  /// Nonzero iff some |coefficient| >= bound. Runs over all coefficients.
  int (*exceeds_norm)(const Poly& a, std::int32_t bound);
};

const Kernels& reference_kernels() noexcept;

/// nullptr when the AVX2 kernels were not compiled in.
const Kernels* avx2_kernels() noexcept;

}  // namespace pqbench::dilithium::detail
