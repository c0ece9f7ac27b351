#pragma once

// Scalar modular arithmetic, rounding and twiddles for q = 8380417. Internal
// linkage throughout so ISA-specific TUs never share a definition.

#include <cstdint>

namespace pqbench::dilithium::detail {

namespace {

constexpr std::int32_t kQinv = 58728449;  // q^-1 mod 2^32
constexpr int kDropped = 13;

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

constexpr unsigned bit_reverse8(unsigned x) {
  unsigned r = 0;
  for (int i = 0; i < 8; ++i) r |= ((x >> i) & 1U) << (7 - i);
  return r;
}

struct ZetaTable {
  std::int32_t v[256];
};

// zetas[k] = 2^32 * 1753^brv8(k) mod q, centered; entry 0 is unused.
constexpr ZetaTable make_zetas() {
  ZetaTable z{};
  for (unsigned k = 1; k < 256; ++k) {
    std::int64_t v = pow_mod(1753, bit_reverse8(k), 8380417) * ((std::int64_t{1} << 32) % 8380417) % 8380417;
    if (v > 8380417 / 2) v -= 8380417;
    z.v[k] = static_cast<std::int32_t>(v);
  }
  return z;
}

constexpr ZetaTable kZetaTable = make_zetas();
constexpr const std::int32_t (&kZetas)[256] = kZetaTable.v;

inline std::int32_t montgomery_reduce(std::int64_t a) {
  const auto t = static_cast<std::int32_t>(static_cast<std::int64_t>(static_cast<std::int32_t>(a)) * kQinv);
  return static_cast<std::int32_t>((a - static_cast<std::int64_t>(t) * 8380417) >> 32);
}

inline std::int32_t reduce32(std::int32_t a) {
  const std::int32_t t = (a + (1 << 22)) >> 23;
  return a - t * 8380417;
}

inline std::int32_t caddq(std::int32_t a) { return a + ((a >> 31) & 8380417); }

inline std::int32_t freeze(std::int32_t a) { return caddq(reduce32(a)); }

inline std::int32_t power2round_scalar(std::int32_t* a0, std::int32_t a) {
  const std::int32_t a1 = (a + (1 << (kDropped - 1)) - 1) >> kDropped;
  *a0 = a - (a1 << kDropped);
  return a1;
}

inline std::int32_t decompose_scalar(std::int32_t* a0, std::int32_t a, std::int32_t gamma2) {
  std::int32_t a1 = (a + 127) >> 7;
  if (gamma2 == (8380417 - 1) / 32) {
    a1 = (a1 * 1025 + (1 << 21)) >> 22;
    a1 &= 15;
  } else {
    a1 = (a1 * 11275 + (1 << 23)) >> 24;
    a1 ^= ((43 - a1) >> 31) & a1;
  }
  *a0 = a - a1 * 2 * gamma2;
  *a0 -= (((8380417 - 1) / 2 - *a0) >> 31) & 8380417;
  return a1;
}

// a0 depends on the secret key, so no short-circuit evaluation here.
inline std::int32_t make_hint_scalar(std::int32_t a0, std::int32_t a1, std::int32_t gamma2) {
  const std::int32_t above = ((gamma2 - a0) >> 31) & 1;
  const std::int32_t below = ((a0 + gamma2) >> 31) & 1;
  const std::int32_t on_edge = static_cast<std::int32_t>(a0 == -gamma2) & static_cast<std::int32_t>(a1 != 0);
  return above | below | on_edge;
}

// 1 iff |a| >= bound, for |a| < 2^31 - 1.
inline std::int32_t exceeds_scalar(std::int32_t a, std::int32_t bound) {
  const std::int32_t sign = a >> 31;
  const std::int32_t abs = a - (sign & 2 * a);
  return ((bound - 1 - abs) >> 31) & 1;
}

inline std::int32_t use_hint_scalar(std::int32_t a, std::int32_t hint, std::int32_t gamma2) {
  std::int32_t a0;
  const std::int32_t a1 = decompose_scalar(&a0, a, gamma2);
  if (hint == 0) return a1;
  if (gamma2 == (8380417 - 1) / 32) {
    return a0 > 0 ? (a1 + 1) & 15 : (a1 - 1) & 15;
  }
  if (a0 > 0) return a1 == 43 ? 0 : a1 + 1;
  return a1 == 0 ? 43 : a1 - 1;
}

}  // namespace

}  // namespace pqbench::dilithium::detail
