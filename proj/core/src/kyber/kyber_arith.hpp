#pragma once

// Scalar modular arithmetic and twiddle tables for q = 3329. Functions have
// internal linkage so TUs compiled with different ISA flags never share a
// definition.

#include <array>
#include <cstdint>

namespace pqbench::kyber::detail {

inline constexpr std::int16_t kQinv = -3327;  // q^-1 mod 2^16
inline constexpr std::int16_t kMont = -1044;  // 2^16 mod q, centered
inline constexpr std::int16_t kBarrettV = ((1 << 26) + 3329 / 2) / 3329;

namespace {

constexpr std::int64_t pow_mod(std::int64_t base, std::int64_t exp, std::int64_t mod) {
  std::int64_t result = 1;
  base %= mod;
  while (exp > 0) {
    if (exp & 1) result = result * base % mod;
    base = base * base % mod;
    exp >>= 1;
  }
  return result;
}

constexpr unsigned bit_reverse7(unsigned x) {
  unsigned r = 0;
  for (int i = 0; i < 7; ++i) r |= ((x >> i) & 1U) << (6 - i);
  return r;
}

// zetas[i] = 2^16 * 17^brv7(i) mod q, centered
constexpr std::array<std::int16_t, 128> make_zetas() {
  std::array<std::int16_t, 128> z{};
  for (unsigned i = 0; i < 128; ++i) {
    std::int64_t v = pow_mod(17, bit_reverse7(i), 3329) * 65536 % 3329;
    if (v > 3329 / 2) v -= 3329;
    z[i] = static_cast<std::int16_t>(v);
  }
  return z;
}

}  // namespace

constexpr std::array<std::int16_t, 128> kZetas = make_zetas();

namespace {

inline std::int16_t montgomery_reduce(std::int32_t a) {
  const auto t = static_cast<std::int16_t>(static_cast<std::int16_t>(a) * kQinv);
  return static_cast<std::int16_t>((a - static_cast<std::int32_t>(t) * 3329) >> 16);
}

inline std::int16_t fqmul(std::int16_t a, std::int16_t b) {
  return montgomery_reduce(static_cast<std::int32_t>(a) * b);
}

// centered representative in [-(q-1)/2, (q-1)/2]
inline std::int16_t barrett_reduce(std::int16_t a) {
  std::int16_t t = static_cast<std::int16_t>((static_cast<std::int32_t>(kBarrettV) * a + (1 << 25)) >> 26);
  t = static_cast<std::int16_t>(t * 3329);
  return static_cast<std::int16_t>(a - t);
}

// canonical representative in [0, q)
inline std::uint16_t canonical(std::int16_t a) {
  std::int16_t r = barrett_reduce(a);
  r = static_cast<std::int16_t>(r + ((r >> 15) & 3329));
  return static_cast<std::uint16_t>(r);
}

}  // namespace

}  // namespace pqbench::kyber::detail
