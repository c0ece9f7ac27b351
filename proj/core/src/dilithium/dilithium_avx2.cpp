// Compiled with -mavx2. Dilithium kernels on 8 x int32 vectors.
//
// Montgomery products are formed exactly as in dilithium_arith.hpp: the
// 64-bit products of even and odd lanes are taken separately and their high
// halves recombined, so every polynomial matches the reference one
// coefficient for coefficient. Butterflies with distance 4, 2 and 1 run on
// transposed 8x8 blocks.
//
// As in the Kyber AVX2 file, no standard-library templates are instantiated
// here and all shared helpers have internal linkage.

#include "../common/bitpack.hpp"
#include "../keccak/keccak_x4.hpp"
#include "dilithium_arith.hpp"
#include "dilithium_kernels.hpp"

#include <immintrin.h>

#include <cstdint>
#include <cstring>

namespace pqbench::dilithium::detail {

namespace {

using Vec = __m256i;

constexpr std::int32_t qinv_of(std::int32_t z) {
  return static_cast<std::int32_t>(static_cast<std::uint32_t>(z) * static_cast<std::uint32_t>(kQinv));
}

// A twiddle row together with its products by q^-1 mod 2^32.
struct alignas(32) ZetaRow {
  std::int32_t z[8];
  std::int32_t zq[8];
};

// Lane r of transposed register i in group g holds coefficient
// 64g + 8r + i, which fixes the block index of each butterfly.
struct TransposedZetas {
  ZetaRow fwd4[4];
  ZetaRow fwd2[4][2];
  ZetaRow fwd1[4][4];
  ZetaRow inv1[4][4];
  ZetaRow inv2[4][2];
  ZetaRow inv4[4];
};

constexpr void set(ZetaRow& row, int lane, std::int32_t z) {
  row.z[lane] = z;
  row.zq[lane] = qinv_of(z);
}

constexpr TransposedZetas make_transposed_zetas() {
  TransposedZetas t{};
  for (int g = 0; g < 4; ++g) {
    for (int r = 0; r < 8; ++r) {
      set(t.fwd4[g], r, kZetas[32 + 8 * g + r]);
      set(t.inv4[g], r, -kZetas[63 - (8 * g + r)]);
      for (int h = 0; h < 2; ++h) {
        set(t.fwd2[g][h], r, kZetas[64 + 16 * g + 2 * r + h]);
        set(t.inv2[g][h], r, -kZetas[127 - (16 * g + 2 * r + h)]);
      }
      for (int h = 0; h < 4; ++h) {
        set(t.fwd1[g][h], r, kZetas[128 + 32 * g + 4 * r + h]);
        set(t.inv1[g][h], r, -kZetas[255 - (32 * g + 4 * r + h)]);
      }
    }
  }
  return t;
}

alignas(32) constexpr TransposedZetas kTz = make_transposed_zetas();

inline Vec load(const std::int32_t* p) { return _mm256_load_si256(reinterpret_cast<const Vec*>(p)); }
inline void store(std::int32_t* p, Vec v) { _mm256_store_si256(reinterpret_cast<Vec*>(p), v); }

inline Vec odd_to_even(Vec a) { return _mm256_shuffle_epi32(a, 0xF5); }

// a * b * 2^-32 given bq = b * q^-1 mod 2^32.
inline Vec montmul_pre(Vec a, Vec b, Vec bq) {
  const Vec q = _mm256_set1_epi32(kQ);
  const Vec prod_e = _mm256_mul_epi32(a, b);
  const Vec prod_o = _mm256_mul_epi32(odd_to_even(a), odd_to_even(b));
  const Vec t = _mm256_mullo_epi32(a, bq);
  const Vec r_e = _mm256_sub_epi64(prod_e, _mm256_mul_epi32(t, q));
  const Vec r_o = _mm256_sub_epi64(prod_o, _mm256_mul_epi32(odd_to_even(t), q));
  return _mm256_blend_epi32(odd_to_even(r_e), r_o, 0xAA);
}

inline Vec montmul(Vec a, Vec b) {
  return montmul_pre(a, b, _mm256_mullo_epi32(b, _mm256_set1_epi32(kQinv)));
}

inline void fwd_butterfly(Vec& lo, Vec& hi, Vec z, Vec zq) {
  const Vec t = montmul_pre(hi, z, zq);
  hi = _mm256_sub_epi32(lo, t);
  lo = _mm256_add_epi32(lo, t);
}

inline void inv_butterfly(Vec& lo, Vec& hi, Vec z, Vec zq) {
  const Vec t = lo;
  lo = _mm256_add_epi32(t, hi);
  hi = montmul_pre(_mm256_sub_epi32(t, hi), z, zq);
}

inline void fwd_butterfly(Vec& lo, Vec& hi, const ZetaRow& row) {
  fwd_butterfly(lo, hi, load(row.z), load(row.zq));
}

inline void inv_butterfly(Vec& lo, Vec& hi, const ZetaRow& row) {
  inv_butterfly(lo, hi, load(row.z), load(row.zq));
}

// out[i] lane r <- in[r] lane i. Self-inverse.
inline void transpose8(Vec out[8], const Vec in[8]) {
  const Vec t0 = _mm256_unpacklo_epi32(in[0], in[1]);
  const Vec t1 = _mm256_unpackhi_epi32(in[0], in[1]);
  const Vec t2 = _mm256_unpacklo_epi32(in[2], in[3]);
  const Vec t3 = _mm256_unpackhi_epi32(in[2], in[3]);
  const Vec t4 = _mm256_unpacklo_epi32(in[4], in[5]);
  const Vec t5 = _mm256_unpackhi_epi32(in[4], in[5]);
  const Vec t6 = _mm256_unpacklo_epi32(in[6], in[7]);
  const Vec t7 = _mm256_unpackhi_epi32(in[6], in[7]);
  const Vec u0 = _mm256_unpacklo_epi64(t0, t2);
  const Vec u1 = _mm256_unpackhi_epi64(t0, t2);
  const Vec u2 = _mm256_unpacklo_epi64(t1, t3);
  const Vec u3 = _mm256_unpackhi_epi64(t1, t3);
  const Vec u4 = _mm256_unpacklo_epi64(t4, t6);
  const Vec u5 = _mm256_unpackhi_epi64(t4, t6);
  const Vec u6 = _mm256_unpacklo_epi64(t5, t7);
  const Vec u7 = _mm256_unpackhi_epi64(t5, t7);
  out[0] = _mm256_permute2x128_si256(u0, u4, 0x20);
  out[1] = _mm256_permute2x128_si256(u1, u5, 0x20);
  out[2] = _mm256_permute2x128_si256(u2, u6, 0x20);
  out[3] = _mm256_permute2x128_si256(u3, u7, 0x20);
  out[4] = _mm256_permute2x128_si256(u0, u4, 0x31);
  out[5] = _mm256_permute2x128_si256(u1, u5, 0x31);
  out[6] = _mm256_permute2x128_si256(u2, u6, 0x31);
  out[7] = _mm256_permute2x128_si256(u3, u7, 0x31);
}

// lower indices of the distance-2 and distance-1 pairs in a transposed block
constexpr int kDist2[4] = {0, 1, 4, 5};
constexpr int kDist1[4] = {0, 2, 4, 6};

void ntt_avx2(Poly& p) {
  Vec v[32];
  for (int i = 0; i < 32; ++i) v[i] = load(p.coeffs + 8 * i);
  int k = 0;
  for (int dist = 16; dist >= 1; dist >>= 1) {
    for (int start = 0; start < 32; start += 2 * dist) {
      const std::int32_t zeta = kZetas[++k];
      const Vec z = _mm256_set1_epi32(zeta);
      const Vec zq = _mm256_set1_epi32(qinv_of(zeta));
      for (int j = start; j < start + dist; ++j) fwd_butterfly(v[j], v[j + dist], z, zq);
    }
  }
  for (int g = 0; g < 4; ++g) {
    Vec w[8];
    transpose8(w, v + 8 * g);
    for (int i = 0; i < 4; ++i) fwd_butterfly(w[i], w[i + 4], kTz.fwd4[g]);
    for (const int i : kDist2) fwd_butterfly(w[i], w[i + 2], kTz.fwd2[g][i >> 2]);
    for (const int i : kDist1) fwd_butterfly(w[i], w[i + 1], kTz.fwd1[g][i >> 1]);
    transpose8(v + 8 * g, w);
  }
  for (int i = 0; i < 32; ++i) store(p.coeffs + 8 * i, v[i]);
}

void invntt_avx2(Poly& p) {
  Vec v[32];
  for (int i = 0; i < 32; ++i) v[i] = load(p.coeffs + 8 * i);
  for (int g = 0; g < 4; ++g) {
    Vec w[8];
    transpose8(w, v + 8 * g);
    for (const int i : kDist1) inv_butterfly(w[i], w[i + 1], kTz.inv1[g][i >> 1]);
    for (const int i : kDist2) inv_butterfly(w[i], w[i + 2], kTz.inv2[g][i >> 2]);
    for (int i = 0; i < 4; ++i) inv_butterfly(w[i], w[i + 4], kTz.inv4[g]);
    transpose8(v + 8 * g, w);
  }
  for (int dist = 1; dist <= 16; dist <<= 1) {
    const int len = 8 * dist;
    for (int start = 0, b = 0; start < 32; start += 2 * dist, ++b) {
      const std::int32_t zeta = -kZetas[256 / len - 1 - b];
      const Vec z = _mm256_set1_epi32(zeta);
      const Vec zq = _mm256_set1_epi32(qinv_of(zeta));
      for (int j = start; j < start + dist; ++j) inv_butterfly(v[j], v[j + dist], z, zq);
    }
  }
  constexpr std::int32_t f = 41978;
  const Vec fv = _mm256_set1_epi32(f);
  const Vec fq = _mm256_set1_epi32(qinv_of(f));
  for (int i = 0; i < 32; ++i) store(p.coeffs + 8 * i, montmul_pre(v[i], fv, fq));
}

void pointwise_avx2(Poly& r, const Poly& a, const Poly& b) {
  for (int i = 0; i < kN; i += 8) store(r.coeffs + i, montmul(load(a.coeffs + i), load(b.coeffs + i)));
}

void pointwise_acc_avx2(Poly& r, const Poly* a, const Poly* b, unsigned n) {
  for (int i = 0; i < kN; i += 8) {
    Vec acc = montmul(load(a[0].coeffs + i), load(b[0].coeffs + i));
    for (unsigned j = 1; j < n; ++j) acc = _mm256_add_epi32(acc, montmul(load(a[j].coeffs + i), load(b[j].coeffs + i)));
    store(r.coeffs + i, acc);
  }
}

// q = 2^23 - 2^13 + 1, so t*q is formed with shifts.
inline Vec reduce32(Vec a) {
  const Vec t = _mm256_srai_epi32(_mm256_add_epi32(a, _mm256_set1_epi32(1 << 22)), 23);
  const Vec tq = _mm256_add_epi32(_mm256_sub_epi32(_mm256_slli_epi32(t, 23), _mm256_slli_epi32(t, 13)), t);
  return _mm256_sub_epi32(a, tq);
}

inline Vec caddq(Vec a) {
  return _mm256_add_epi32(a, _mm256_and_si256(_mm256_srai_epi32(a, 31), _mm256_set1_epi32(kQ)));
}

void reduce_avx2(Poly& p) {
  for (int i = 0; i < kN; i += 8) store(p.coeffs + i, reduce32(load(p.coeffs + i)));
}

void caddq_avx2(Poly& p) {
  for (int i = 0; i < kN; i += 8) store(p.coeffs + i, caddq(load(p.coeffs + i)));
}

void add_avx2(Poly& r, const Poly& a, const Poly& b) {
  for (int i = 0; i < kN; i += 8) store(r.coeffs + i, _mm256_add_epi32(load(a.coeffs + i), load(b.coeffs + i)));
}

void sub_avx2(Poly& r, const Poly& a, const Poly& b) {
  for (int i = 0; i < kN; i += 8) store(r.coeffs + i, _mm256_sub_epi32(load(a.coeffs + i), load(b.coeffs + i)));
}

void shiftl_avx2(Poly& p) {
  for (int i = 0; i < kN; i += 8) store(p.coeffs + i, _mm256_slli_epi32(load(p.coeffs + i), kDropped));
}

// ---------------------------------------------------------------------------
// Samplers

struct alignas(8) PermTable {
  std::uint8_t idx[256][8];
};

// idx[m] lists the set bits of m, used to pack accepted lanes to the front.
constexpr PermTable make_perm_table() {
  PermTable t{};
  for (int m = 0; m < 256; ++m) {
    int n = 0;
    for (int b = 0; b < 8; ++b) {
      if ((m >> b) & 1) t.idx[m][n++] = static_cast<std::uint8_t>(b);
    }
  }
  return t;
}

constexpr PermTable kPerm = make_perm_table();

unsigned rej_uniform_scalar(std::int32_t* a, unsigned len, const std::uint8_t* buf, unsigned pos, unsigned buflen,
                            unsigned ctr) {
  while (ctr < len && pos + 3 <= buflen) {
    std::uint32_t t = buf[pos] | (static_cast<std::uint32_t>(buf[pos + 1]) << 8) |
                      (static_cast<std::uint32_t>(buf[pos + 2]) << 16);
    t &= 0x7FFFFF;
    pos += 3;
    if (t < static_cast<std::uint32_t>(kQ)) a[ctr++] = static_cast<std::int32_t>(t);
  }
  return ctr;
}

// buf must be readable for 8 bytes past buflen.
unsigned rej_uniform(std::int32_t* a, unsigned len, const std::uint8_t* buf, unsigned buflen) {
  const Vec spread = _mm256_setr_epi8(0, 1, 2, -1, 3, 4, 5, -1, 6, 7, 8, -1, 9, 10, 11, -1,  //
                                      4, 5, 6, -1, 7, 8, 9, -1, 10, 11, 12, -1, 13, 14, 15, -1);
  const Vec mask = _mm256_set1_epi32(0x7FFFFF);
  const Vec bound = _mm256_set1_epi32(kQ);
  unsigned ctr = 0;
  unsigned pos = 0;
  while (ctr + 8 <= len && pos + 24 <= buflen) {
    Vec d = _mm256_loadu_si256(reinterpret_cast<const Vec*>(buf + pos));
    d = _mm256_permute4x64_epi64(d, 0x94);
    d = _mm256_and_si256(_mm256_shuffle_epi8(d, spread), mask);
    pos += 24;
    const int good = _mm256_movemask_ps(_mm256_castsi256_ps(_mm256_sub_epi32(d, bound)));
    std::uint64_t packed;
    std::memcpy(&packed, kPerm.idx[good], 8);
    const Vec perm = _mm256_cvtepu8_epi32(_mm_cvtsi64_si128(static_cast<long long>(packed)));
    _mm256_storeu_si256(reinterpret_cast<Vec*>(a + ctr), _mm256_permutevar8x32_epi32(d, perm));
    ctr += static_cast<unsigned>(__builtin_popcount(static_cast<unsigned>(good)));
  }
  return rej_uniform_scalar(a, len, buf, pos, buflen, ctr);
}

unsigned rej_eta(std::int32_t* a, unsigned len, const std::uint8_t* buf, unsigned buflen, unsigned eta) {
  unsigned ctr = 0;
  unsigned pos = 0;
  while (ctr < len && pos < buflen) {
    std::uint32_t t0 = buf[pos] & 0x0F;
    std::uint32_t t1 = buf[pos++] >> 4;
    if (eta == 2) {
      if (t0 < 15) {
        t0 = t0 - (205 * t0 >> 10) * 5;
        a[ctr++] = 2 - static_cast<std::int32_t>(t0);
      }
      if (t1 < 15 && ctr < len) {
        t1 = t1 - (205 * t1 >> 10) * 5;
        a[ctr++] = 2 - static_cast<std::int32_t>(t1);
      }
    } else {
      if (t0 < 9) a[ctr++] = 4 - static_cast<std::int32_t>(t0);
      if (t1 < 9 && ctr < len) a[ctr++] = 4 - static_cast<std::int32_t>(t1);
    }
  }
  return ctr;
}

constexpr unsigned kRate128 = 168;
constexpr unsigned kRate256 = 136;
constexpr unsigned kUniformBlocks = 5;
constexpr unsigned kGamma1Blocks = 5;

// Four entries per batch; a short final batch repeats its last entry.
void expand_matrix_avx2(Poly* mat, unsigned k, unsigned l, const std::uint8_t* rho) {
  const keccak::detail::PermuteX4Fn permute = keccak::detail::permute_x4_avx2();
  const unsigned total = k * l;
  alignas(32) std::uint8_t bufs[4][kUniformBlocks * kRate128 + 8];
  std::uint8_t ext[4][34];
  for (unsigned first = 0; first < total; first += 4) {
    unsigned idx[4];
    for (unsigned j = 0; j < 4; ++j) {
      idx[j] = first + j < total ? first + j : total - 1;
      const unsigned nonce = ((idx[j] / l) << 8) + idx[j] % l;
      std::memcpy(ext[j], rho, 32);
      ext[j][32] = static_cast<std::uint8_t>(nonce);
      ext[j][33] = static_cast<std::uint8_t>(nonce >> 8);
    }
    keccak::detail::SpongeX4 xof(kRate128, permute);
    const std::uint8_t* ins[4] = {ext[0], ext[1], ext[2], ext[3]};
    xof.absorb_once(ins, 34, 0x1F);
    std::uint8_t* outs[4] = {bufs[0], bufs[1], bufs[2], bufs[3]};
    xof.squeeze_blocks(outs, kUniformBlocks);

    unsigned ctr[4];
    for (unsigned j = 0; j < 4; ++j) ctr[j] = rej_uniform(mat[idx[j]].coeffs, kN, bufs[j], kUniformBlocks * kRate128);
    while (ctr[0] < kN || ctr[1] < kN || ctr[2] < kN || ctr[3] < kN) {
      xof.squeeze_blocks(outs, 1);
      for (unsigned j = 0; j < 4; ++j) {
        ctr[j] += rej_uniform(mat[idx[j]].coeffs + ctr[j], kN - ctr[j], bufs[j], kRate128);
      }
    }
  }
}

void fill_ext66(std::uint8_t ext[4][66], const std::uint8_t* seed, std::uint16_t first_nonce) {
  for (unsigned j = 0; j < 4; ++j) {
    const auto nonce = static_cast<std::uint16_t>(first_nonce + j);
    std::memcpy(ext[j], seed, 64);
    ext[j][64] = static_cast<std::uint8_t>(nonce);
    ext[j][65] = static_cast<std::uint8_t>(nonce >> 8);
  }
}

// Lanes past count hash surplus nonces whose output is discarded.
void uniform_eta_avx2(Poly* r, unsigned count, unsigned eta, const std::uint8_t* seed, std::uint16_t first_nonce) {
  const keccak::detail::PermuteX4Fn permute = keccak::detail::permute_x4_avx2();
  const unsigned nblocks = eta == 2 ? 1 : 2;
  alignas(32) std::uint8_t bufs[4][2 * kRate256];
  std::uint8_t ext[4][66];
  Poly spare;
  for (unsigned first = 0; first < count; first += 4) {
    fill_ext66(ext, seed, static_cast<std::uint16_t>(first_nonce + first));
    keccak::detail::SpongeX4 xof(kRate256, permute);
    const std::uint8_t* ins[4] = {ext[0], ext[1], ext[2], ext[3]};
    xof.absorb_once(ins, 66, 0x1F);
    std::uint8_t* outs[4] = {bufs[0], bufs[1], bufs[2], bufs[3]};
    xof.squeeze_blocks(outs, nblocks);
    std::int32_t* dst[4];
    unsigned ctr[4];
    for (unsigned j = 0; j < 4; ++j) {
      dst[j] = first + j < count ? r[first + j].coeffs : spare.coeffs;
      ctr[j] = first + j < count ? rej_eta(dst[j], kN, bufs[j], nblocks * kRate256, eta) : kN;
    }
    while (ctr[0] < kN || ctr[1] < kN || ctr[2] < kN || ctr[3] < kN) {
      xof.squeeze_blocks(outs, 1);
      for (unsigned j = 0; j < 4; ++j) ctr[j] += rej_eta(dst[j] + ctr[j], kN - ctr[j], bufs[j], kRate256, eta);
    }
  }
}

void uniform_gamma1_avx2(Poly* r, unsigned count, std::int32_t gamma1, const std::uint8_t* seed,
                         std::uint16_t first_nonce) {
  const keccak::detail::PermuteX4Fn permute = keccak::detail::permute_x4_avx2();
  alignas(32) std::uint8_t bufs[4][kGamma1Blocks * kRate256];
  std::uint8_t ext[4][66];
  std::uint32_t v[kN];
  const Vec g1 = _mm256_set1_epi32(gamma1);
  for (unsigned first = 0; first < count; first += 4) {
    fill_ext66(ext, seed, static_cast<std::uint16_t>(first_nonce + first));
    keccak::detail::SpongeX4 xof(kRate256, permute);
    const std::uint8_t* ins[4] = {ext[0], ext[1], ext[2], ext[3]};
    xof.absorb_once(ins, 66, 0x1F);
    std::uint8_t* outs[4] = {bufs[0], bufs[1], bufs[2], bufs[3]};
    xof.squeeze_blocks(outs, kGamma1Blocks);
    for (unsigned j = 0; j < 4 && first + j < count; ++j) {
      if (gamma1 == (1 << 17)) {
        pqbench::detail::unpack_fixed<18>(v, bufs[j], kN);
      } else {
        pqbench::detail::unpack_fixed<20>(v, bufs[j], kN);
      }
      for (int i = 0; i < kN; i += 8) {
        const Vec x = _mm256_loadu_si256(reinterpret_cast<const Vec*>(v + i));
        store(r[first + j].coeffs + i, _mm256_sub_epi32(g1, x));
      }
    }
  }
}

// ---------------------------------------------------------------------------
// Rounding

void power2round_avx2(Poly& a1, Poly& a0, const Poly& a) {
  const Vec half = _mm256_set1_epi32((1 << (kDropped - 1)) - 1);
  for (int i = 0; i < kN; i += 8) {
    const Vec x = load(a.coeffs + i);
    const Vec hi = _mm256_srai_epi32(_mm256_add_epi32(x, half), kDropped);
    store(a0.coeffs + i, _mm256_sub_epi32(x, _mm256_slli_epi32(hi, kDropped)));
    store(a1.coeffs + i, hi);
  }
}

inline Vec decompose(Vec& low, Vec a, std::int32_t gamma2) {
  Vec a1 = _mm256_srai_epi32(_mm256_add_epi32(a, _mm256_set1_epi32(127)), 7);
  if (gamma2 == (kQ - 1) / 32) {
    a1 = _mm256_mullo_epi32(a1, _mm256_set1_epi32(1025));
    a1 = _mm256_srai_epi32(_mm256_add_epi32(a1, _mm256_set1_epi32(1 << 21)), 22);
    a1 = _mm256_and_si256(a1, _mm256_set1_epi32(15));
  } else {
    a1 = _mm256_mullo_epi32(a1, _mm256_set1_epi32(11275));
    a1 = _mm256_srai_epi32(_mm256_add_epi32(a1, _mm256_set1_epi32(1 << 23)), 24);
    const Vec wrap = _mm256_srai_epi32(_mm256_sub_epi32(_mm256_set1_epi32(43), a1), 31);
    a1 = _mm256_xor_si256(a1, _mm256_and_si256(wrap, a1));
  }
  Vec a0 = _mm256_sub_epi32(a, _mm256_mullo_epi32(a1, _mm256_set1_epi32(2 * gamma2)));
  const Vec over = _mm256_srai_epi32(_mm256_sub_epi32(_mm256_set1_epi32((kQ - 1) / 2), a0), 31);
  a0 = _mm256_sub_epi32(a0, _mm256_and_si256(over, _mm256_set1_epi32(kQ)));
  low = a0;
  return a1;
}

void decompose_avx2(Poly& a1, Poly& a0, const Poly& a, std::int32_t gamma2) {
  for (int i = 0; i < kN; i += 8) {
    Vec low;
    const Vec high = decompose(low, load(a.coeffs + i), gamma2);
    store(a0.coeffs + i, low);
    store(a1.coeffs + i, high);
  }
}

unsigned make_hint_avx2(Poly& h, const Poly& a0, const Poly& a1, std::int32_t gamma2) {
  const Vec g = _mm256_set1_epi32(gamma2);
  const Vec neg_g = _mm256_set1_epi32(-gamma2);
  const Vec zero = _mm256_setzero_si256();
  Vec total = zero;
  for (int i = 0; i < kN; i += 8) {
    const Vec lo = load(a0.coeffs + i);
    const Vec hi = load(a1.coeffs + i);
    const Vec above = _mm256_cmpgt_epi32(lo, g);
    const Vec below = _mm256_cmpgt_epi32(neg_g, lo);
    const Vec edge = _mm256_andnot_si256(_mm256_cmpeq_epi32(hi, zero), _mm256_cmpeq_epi32(lo, neg_g));
    const Vec bit = _mm256_srli_epi32(_mm256_or_si256(_mm256_or_si256(above, below), edge), 31);
    store(h.coeffs + i, bit);
    total = _mm256_add_epi32(total, bit);
  }
  __m128i s = _mm_add_epi32(_mm256_castsi256_si128(total), _mm256_extracti128_si256(total, 1));
  s = _mm_add_epi32(s, _mm_shuffle_epi32(s, 0x4E));
  s = _mm_add_epi32(s, _mm_shuffle_epi32(s, 0xB1));
  return static_cast<unsigned>(_mm_cvtsi128_si32(s));
}

void use_hint_avx2(Poly& r, const Poly& a, const Poly& h, std::int32_t gamma2) {
  const Vec zero = _mm256_setzero_si256();
  const Vec one = _mm256_set1_epi32(1);
  for (int i = 0; i < kN; i += 8) {
    Vec low;
    const Vec high = decompose(low, load(a.coeffs + i), gamma2);
    const Vec hint = _mm256_cmpgt_epi32(load(h.coeffs + i), zero);
    // +1 when the low part is positive, -1 otherwise
    const Vec step = _mm256_or_si256(_mm256_cmpgt_epi32(zero, _mm256_sub_epi32(low, one)), one);
    Vec t = _mm256_add_epi32(high, _mm256_and_si256(step, hint));
    if (gamma2 == (kQ - 1) / 32) {
      t = _mm256_and_si256(t, _mm256_set1_epi32(15));
    } else {
      const Vec m44 = _mm256_set1_epi32(44);
      t = _mm256_add_epi32(t, _mm256_and_si256(_mm256_srai_epi32(t, 31), m44));
      t = _mm256_sub_epi32(t, _mm256_and_si256(_mm256_cmpeq_epi32(t, m44), m44));
    }
    store(r.coeffs + i, t);
  }
}

int exceeds_norm_avx2(const Poly& a, std::int32_t bound) {
  const Vec limit = _mm256_set1_epi32(bound - 1);
  Vec acc = _mm256_setzero_si256();
  for (int i = 0; i < kN; i += 8) {
    acc = _mm256_or_si256(acc, _mm256_cmpgt_epi32(_mm256_abs_epi32(load(a.coeffs + i)), limit));
  }
  return _mm256_testz_si256(acc, acc) ? 0 : 1;
}

constinit const Kernels kAvx2Kernels = {
    .ntt = ntt_avx2,
    .invntt_tomont = invntt_avx2,
    .pointwise = pointwise_avx2,
    .pointwise_acc = pointwise_acc_avx2,
    .reduce = reduce_avx2,
    .caddq = caddq_avx2,
    .add = add_avx2,
    .sub = sub_avx2,
    .shiftl = shiftl_avx2,
    .expand_matrix = expand_matrix_avx2,
    .uniform_eta = uniform_eta_avx2,
    .uniform_gamma1 = uniform_gamma1_avx2,
    .power2round = power2round_avx2,
    .decompose = decompose_avx2,
    .make_hint = make_hint_avx2,
    .use_hint = use_hint_avx2,
    .exceeds_norm = exceeds_norm_avx2,
};

}  // namespace

const Kernels* avx2_kernels() noexcept { return &kAvx2Kernels; }

}  // namespace pqbench::dilithium::detail
