// Compiled with -mavx2. Four Keccak-f[1600] instances, one per 64-bit lane
// of each ymm register.

#include "keccak_x4.hpp"

#include <immintrin.h>

#include <cstdint>
#include <utility>

namespace pqbench::keccak::detail {

namespace {

constexpr std::uint64_t kRoundConstants[24] = {
    0x0000000000000001ULL, 0x0000000000008082ULL, 0x800000000000808AULL, 0x8000000080008000ULL,
    0x000000000000808BULL, 0x0000000080000001ULL, 0x8000000080008081ULL, 0x8000000000008009ULL,
    0x000000000000008AULL, 0x0000000000000088ULL, 0x0000000080008009ULL, 0x000000008000000AULL,
    0x000000008000808BULL, 0x800000000000008BULL, 0x8000000000008089ULL, 0x8000000000008003ULL,
    0x8000000000008002ULL, 0x8000000000000080ULL, 0x000000000000800AULL, 0x800000008000000AULL,
    0x8000000080008081ULL, 0x8000000000008080ULL, 0x0000000080000001ULL, 0x8000000080008008ULL,
};

template <int N>
inline __m256i rotl(__m256i x) {
  if constexpr (N == 0) {
    return x;
  } else {
    return _mm256_or_si256(_mm256_slli_epi64(x, N), _mm256_srli_epi64(x, 64 - N));
  }
}

// Rotation offsets indexed by lane (x + 5y).
constexpr int kRot[25] = {0,  1,  62, 28, 27, 36, 44, 6,  55, 20, 3,  10, 43,
                                      25, 39, 41, 45, 15, 21, 8,  18, 2,  61, 56, 14};

template <int I>
inline void rho_pi_lane(__m256i (&b)[25], const __m256i (&a)[25]) {
  constexpr int x = I % 5;
  constexpr int y = I / 5;
  // B[y, 2x+3y] = rot(A[x, y])
  constexpr int dst = y + 5 * ((2 * x + 3 * y) % 5);
  b[dst] = rotl<kRot[I]>(a[I]);
}

template <int... I>
inline void rho_pi(__m256i (&b)[25], const __m256i (&a)[25], std::integer_sequence<int, I...>) {
  (rho_pi_lane<I>(b, a), ...);
}

void permute_avx2(std::uint64_t (*state)[4]) {
  __m256i a[25];
  __m256i b[25];
  for (int i = 0; i < 25; ++i) {
    a[i] = _mm256_load_si256(reinterpret_cast<const __m256i*>(state[i]));
  }
  for (int round = 0; round < 24; ++round) {
    __m256i c[5];
    for (int x = 0; x < 5; ++x) {
      c[x] = _mm256_xor_si256(
          _mm256_xor_si256(_mm256_xor_si256(a[x], a[x + 5]), _mm256_xor_si256(a[x + 10], a[x + 15])),
          a[x + 20]);
    }
    for (int x = 0; x < 5; ++x) {
      const __m256i d = _mm256_xor_si256(c[(x + 4) % 5], rotl<1>(c[(x + 1) % 5]));
      for (int y = 0; y < 25; y += 5) a[y + x] = _mm256_xor_si256(a[y + x], d);
    }
    rho_pi(b, a, std::make_integer_sequence<int, 25>{});
    for (int y = 0; y < 25; y += 5) {
      for (int x = 0; x < 5; ++x) {
        a[y + x] = _mm256_xor_si256(b[y + x], _mm256_andnot_si256(b[y + (x + 1) % 5], b[y + (x + 2) % 5]));
      }
    }
    a[0] = _mm256_xor_si256(a[0], _mm256_set1_epi64x(static_cast<long long>(kRoundConstants[round])));
  }
  for (int i = 0; i < 25; ++i) {
    _mm256_store_si256(reinterpret_cast<__m256i*>(state[i]), a[i]);
  }
}

}  // namespace

PermuteX4Fn permute_x4_avx2() noexcept { return &permute_avx2; }

}  // namespace pqbench::keccak::detail
