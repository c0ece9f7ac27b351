// Compiled with -mavx2. Kyber kernels on 16 x int16 vectors.
//
// Every modular operation is the vector image of the scalar one in
// kyber_arith.hpp (same Montgomery and Barrett steps, same order), so the
// polynomials produced here equal the reference ones coefficient for
// coefficient. Layers with butterfly distance below 16 run on the transposed
// 16x16 coefficient matrix, where they become whole-register butterflies.
//
// No standard-library templates are instantiated in this file: anything
// inline it emitted could be merged with a non-AVX2 copy at link time. The
// helpers it shares with scalar code (bitpack.hpp, kyber_arith.hpp) have
// internal linkage for the same reason.

#include "../common/bitpack.hpp"
#include "../keccak/keccak_x4.hpp"
#include "kyber_arith.hpp"
#include "kyber_kernels.hpp"
#include "pqbench/keccak.hpp"

#include <immintrin.h>

#include <cstdint>
#include <cstring>

namespace pqbench::kyber::detail {

namespace {

using Vec = __m256i;

struct alignas(32) ZetaRow {
  std::int16_t v[16];
};

// Per-lane twiddles for the transposed layers. Lane i of register j holds
// coefficient 16*i + j, so the block index of a butterfly depends on i.
struct TransposedZetas {
  ZetaRow fwd8;
  ZetaRow fwd4[2];
  ZetaRow fwd2[4];
  ZetaRow inv2[4];
  ZetaRow inv4[2];
  ZetaRow inv8;
  ZetaRow basemul[16];  // +-zeta for the pair containing each coefficient
};

constexpr TransposedZetas make_transposed_zetas() {
  TransposedZetas t{};
  for (int i = 0; i < 16; ++i) {
    t.fwd8.v[i] = kZetas[16 + i];
    t.inv8.v[i] = kZetas[31 - i];
    for (int h = 0; h < 2; ++h) {
      t.fwd4[h].v[i] = kZetas[32 + 2 * i + h];
      t.inv4[h].v[i] = kZetas[63 - 2 * i - h];
    }
    for (int q = 0; q < 4; ++q) {
      t.fwd2[q].v[i] = kZetas[64 + 4 * i + q];
      t.inv2[q].v[i] = kZetas[127 - 4 * i - q];
    }
  }
  for (int v = 0; v < 16; ++v) {
    for (int l = 0; l < 16; ++l) {
      const int c = 16 * v + l;
      const std::int16_t z = kZetas[64 + c / 4];
      t.basemul[v].v[l] = (c % 4) < 2 ? z : static_cast<std::int16_t>(-z);
    }
  }
  return t;
}

alignas(32) constexpr TransposedZetas kTz = make_transposed_zetas();

inline Vec load(const std::int16_t* p) { return _mm256_load_si256(reinterpret_cast<const Vec*>(p)); }
inline void store(std::int16_t* p, Vec v) { _mm256_store_si256(reinterpret_cast<Vec*>(p), v); }
inline Vec load(const ZetaRow& z) { return load(z.v); }

inline Vec fqmul(Vec a, Vec b) {
  const Vec q = _mm256_set1_epi16(kQ);
  const Vec qinv = _mm256_set1_epi16(kQinv);
  const Vec t = _mm256_mullo_epi16(_mm256_mullo_epi16(a, b), qinv);
  return _mm256_sub_epi16(_mm256_mulhi_epi16(a, b), _mm256_mulhi_epi16(t, q));
}

inline Vec barrett(Vec a) {
  const Vec v = _mm256_set1_epi16(kBarrettV);
  Vec t = _mm256_mulhi_epi16(a, v);
  t = _mm256_srai_epi16(_mm256_add_epi16(t, _mm256_set1_epi16(1 << 9)), 10);
  return _mm256_sub_epi16(a, _mm256_mullo_epi16(t, _mm256_set1_epi16(kQ)));
}

inline void fwd_butterfly(Vec& lo, Vec& hi, Vec zeta) {
  const Vec t = fqmul(zeta, hi);
  hi = _mm256_sub_epi16(lo, t);
  lo = _mm256_add_epi16(lo, t);
}

inline void inv_butterfly(Vec& lo, Vec& hi, Vec zeta) {
  const Vec t = lo;
  lo = barrett(_mm256_add_epi16(t, hi));
  hi = fqmul(zeta, _mm256_sub_epi16(hi, t));
}

// 8x8 transpose of 16-bit elements inside each 128-bit half.
inline void transpose8(Vec x[8], const Vec r[8]) {
  const Vec a0 = _mm256_unpacklo_epi16(r[0], r[1]);
  const Vec a1 = _mm256_unpacklo_epi16(r[2], r[3]);
  const Vec a2 = _mm256_unpacklo_epi16(r[4], r[5]);
  const Vec a3 = _mm256_unpacklo_epi16(r[6], r[7]);
  const Vec b0 = _mm256_unpackhi_epi16(r[0], r[1]);
  const Vec b1 = _mm256_unpackhi_epi16(r[2], r[3]);
  const Vec b2 = _mm256_unpackhi_epi16(r[4], r[5]);
  const Vec b3 = _mm256_unpackhi_epi16(r[6], r[7]);
  const Vec c0 = _mm256_unpacklo_epi32(a0, a1);
  const Vec c1 = _mm256_unpackhi_epi32(a0, a1);
  const Vec c2 = _mm256_unpacklo_epi32(a2, a3);
  const Vec c3 = _mm256_unpackhi_epi32(a2, a3);
  const Vec d0 = _mm256_unpacklo_epi32(b0, b1);
  const Vec d1 = _mm256_unpackhi_epi32(b0, b1);
  const Vec d2 = _mm256_unpacklo_epi32(b2, b3);
  const Vec d3 = _mm256_unpackhi_epi32(b2, b3);
  x[0] = _mm256_unpacklo_epi64(c0, c2);
  x[1] = _mm256_unpackhi_epi64(c0, c2);
  x[2] = _mm256_unpacklo_epi64(c1, c3);
  x[3] = _mm256_unpackhi_epi64(c1, c3);
  x[4] = _mm256_unpacklo_epi64(d0, d2);
  x[5] = _mm256_unpackhi_epi64(d0, d2);
  x[6] = _mm256_unpacklo_epi64(d1, d3);
  x[7] = _mm256_unpackhi_epi64(d1, d3);
}

// w[j] lane i <- v[i] lane j. Self-inverse.
inline void transpose16(Vec w[16], const Vec v[16]) {
  Vec x[8], y[8];
  transpose8(x, v);
  transpose8(y, v + 8);
  for (int c = 0; c < 8; ++c) {
    w[c] = _mm256_permute2x128_si256(x[c], y[c], 0x20);
    w[c + 8] = _mm256_permute2x128_si256(x[c], y[c], 0x31);
  }
}

void ntt_avx2(Poly& p) {
  Vec v[16];
  for (int i = 0; i < 16; ++i) v[i] = load(p.coeffs + 16 * i);

  for (int len = 128, k = 1; len >= 16; len >>= 1) {
    const int step = len / 16;
    for (int start = 0; start < 16; start += 2 * step, ++k) {
      const Vec zeta = _mm256_set1_epi16(kZetas[k]);
      for (int j = start; j < start + step; ++j) fwd_butterfly(v[j], v[j + step], zeta);
    }
  }

  Vec w[16];
  transpose16(w, v);
  for (int j = 0; j < 8; ++j) fwd_butterfly(w[j], w[j + 8], load(kTz.fwd8));
  for (int j = 0; j < 16; ++j) {
    if ((j & 7) < 4) fwd_butterfly(w[j], w[j + 4], load(kTz.fwd4[j >> 3]));
  }
  for (int j = 0; j < 16; ++j) {
    if ((j & 3) < 2) fwd_butterfly(w[j], w[j + 2], load(kTz.fwd2[j >> 2]));
  }
  transpose16(v, w);

  for (int i = 0; i < 16; ++i) store(p.coeffs + 16 * i, barrett(v[i]));
}

void invntt_avx2(Poly& p) {
  Vec v[16], w[16];
  for (int i = 0; i < 16; ++i) v[i] = load(p.coeffs + 16 * i);

  transpose16(w, v);
  for (int j = 0; j < 16; ++j) {
    if ((j & 3) < 2) inv_butterfly(w[j], w[j + 2], load(kTz.inv2[j >> 2]));
  }
  for (int j = 0; j < 16; ++j) {
    if ((j & 7) < 4) inv_butterfly(w[j], w[j + 4], load(kTz.inv4[j >> 3]));
  }
  for (int j = 0; j < 8; ++j) inv_butterfly(w[j], w[j + 8], load(kTz.inv8));
  transpose16(v, w);

  for (int len = 16; len <= 128; len <<= 1) {
    const int step = len / 16;
    int k = 256 / len - 1;
    for (int start = 0; start < 16; start += 2 * step, --k) {
      const Vec zeta = _mm256_set1_epi16(kZetas[k]);
      for (int j = start; j < start + step; ++j) inv_butterfly(v[j], v[j + step], zeta);
    }
  }

  const Vec f = _mm256_set1_epi16(1441);
  for (int i = 0; i < 16; ++i) store(p.coeffs + 16 * i, fqmul(v[i], f));
}

inline Vec swap_pairs(Vec x) { return _mm256_shufflehi_epi16(_mm256_shufflelo_epi16(x, 0xB1), 0xB1); }

// Pairwise products (a0 + a1 X)(b0 + b1 X) mod (X^2 - zeta); even lanes
// carry the constant term, odd lanes the linear one.
inline Vec basemul_vec(Vec a, Vec b, Vec zeta) {
  const Vec prod = fqmul(a, b);                   // a0b0, a1b1
  const Vec cross = fqmul(a, swap_pairs(b));      // a0b1, a1b0
  const Vec scaled = fqmul(prod, zeta);           // odd lanes: a1b1 zeta
  const Vec even = _mm256_add_epi16(_mm256_srli_epi32(scaled, 16), prod);
  const Vec odd = _mm256_add_epi16(_mm256_slli_epi32(cross, 16), cross);
  return _mm256_blend_epi16(even, odd, 0xAA);
}

void basemul_acc_avx2(Poly& r, const Poly* a, const Poly* b, unsigned k) {
  for (int v = 0; v < 16; ++v) {
    const Vec zeta = load(kTz.basemul[v]);
    Vec acc = basemul_vec(load(a[0].coeffs + 16 * v), load(b[0].coeffs + 16 * v), zeta);
    for (unsigned i = 1; i < k; ++i) {
      acc = _mm256_add_epi16(acc, basemul_vec(load(a[i].coeffs + 16 * v), load(b[i].coeffs + 16 * v), zeta));
    }
    store(r.coeffs + 16 * v, barrett(acc));
  }
}

void tomont_avx2(Poly& p) {
  const Vec f = _mm256_set1_epi16(static_cast<std::int16_t>((1ULL << 32) % kQ));
  for (int i = 0; i < 16; ++i) store(p.coeffs + 16 * i, fqmul(load(p.coeffs + 16 * i), f));
}

void reduce_avx2(Poly& p) {
  for (int i = 0; i < 16; ++i) store(p.coeffs + 16 * i, barrett(load(p.coeffs + 16 * i)));
}

void add_avx2(Poly& r, const Poly& a, const Poly& b) {
  for (int i = 0; i < 16; ++i) {
    store(r.coeffs + 16 * i, _mm256_add_epi16(load(a.coeffs + 16 * i), load(b.coeffs + 16 * i)));
  }
}

void sub_avx2(Poly& r, const Poly& a, const Poly& b) {
  for (int i = 0; i < 16; ++i) {
    store(r.coeffs + 16 * i, _mm256_sub_epi16(load(a.coeffs + 16 * i), load(b.coeffs + 16 * i)));
  }
}

// Byte shuffle placing the 16-bit lanes selected by an 8-bit mask first.
struct CompactTable {
  alignas(16) std::uint8_t idx[256][16];
};

constexpr CompactTable make_compact_table() {
  CompactTable t{};
  for (int m = 0; m < 256; ++m) {
    int k = 0;
    for (int j = 0; j < 8; ++j) {
      if ((m >> j) & 1) {
        t.idx[m][2 * k] = static_cast<std::uint8_t>(2 * j);
        t.idx[m][2 * k + 1] = static_cast<std::uint8_t>(2 * j + 1);
        ++k;
      }
    }
    for (int j = 2 * k; j < 16; ++j) t.idx[m][j] = 0x80;
  }
  return t;
}

constexpr CompactTable kCompact = make_compact_table();

// Sixteen 12-bit little-endian values from 24 bytes at in. Reads 32 bytes.
inline Vec unpack12(const std::uint8_t* in) {
  const Vec shuffle = _mm256_setr_epi8(0, 1, 1, 2, 3, 4, 4, 5, 6, 7, 7, 8, 9, 10, 10, 11,  //
                                       4, 5, 5, 6, 7, 8, 8, 9, 10, 11, 11, 12, 13, 14, 14, 15);
  Vec f = _mm256_loadu_si256(reinterpret_cast<const Vec*>(in));
  f = _mm256_permute4x64_epi64(f, 0x94);
  f = _mm256_shuffle_epi8(f, shuffle);
  const Vec even = _mm256_and_si256(f, _mm256_set1_epi16(0xFFF));
  const Vec odd = _mm256_srli_epi16(f, 4);
  return _mm256_blend_epi16(even, odd, 0xAA);
}

unsigned rej_uniform_scalar(std::int16_t* r, unsigned len, const std::uint8_t* buf, unsigned pos, unsigned buflen,
                            unsigned ctr) {
  while (ctr < len && pos + 3 <= buflen) {
    const unsigned val0 = (buf[pos] | (static_cast<unsigned>(buf[pos + 1]) << 8)) & 0xFFF;
    const unsigned val1 = ((buf[pos + 1] >> 4) | (static_cast<unsigned>(buf[pos + 2]) << 4)) & 0xFFF;
    pos += 3;
    if (val0 < kQ) r[ctr++] = static_cast<std::int16_t>(val0);
    if (ctr < len && val1 < kQ) r[ctr++] = static_cast<std::int16_t>(val1);
  }
  return ctr;
}

// Same acceptance order as the scalar sampler; the vector loop stops while
// at least 16 outputs are still wanted, so it never overshoots len.
unsigned rej_uniform(std::int16_t* r, unsigned len, const std::uint8_t* buf, unsigned buflen) {
  const Vec q = _mm256_set1_epi16(kQ);
  unsigned ctr = 0;
  unsigned pos = 0;
  while (ctr + 16 <= len && pos + 32 <= buflen) {
    const Vec f = unpack12(buf + pos);
    const Vec good = _mm256_cmpgt_epi16(q, f);
    const auto mask = static_cast<unsigned>(_mm256_movemask_epi8(_mm256_packs_epi16(good, good)));
    const unsigned m0 = mask & 0xFF;
    const unsigned m1 = (mask >> 16) & 0xFF;
    const __m128i lo = _mm_shuffle_epi8(_mm256_castsi256_si128(f),
                                        _mm_load_si128(reinterpret_cast<const __m128i*>(kCompact.idx[m0])));
    _mm_storeu_si128(reinterpret_cast<__m128i*>(r + ctr), lo);
    ctr += static_cast<unsigned>(__builtin_popcount(m0));
    const __m128i hi = _mm_shuffle_epi8(_mm256_extracti128_si256(f, 1),
                                        _mm_load_si128(reinterpret_cast<const __m128i*>(kCompact.idx[m1])));
    _mm_storeu_si128(reinterpret_cast<__m128i*>(r + ctr), hi);
    ctr += static_cast<unsigned>(__builtin_popcount(m1));
    pos += 24;
  }
  return rej_uniform_scalar(r, len, buf, pos, buflen, ctr);
}

constexpr unsigned kRate128 = 168;
constexpr unsigned kRate256 = 136;
constexpr unsigned kMatrixBlocks = 3;

// Four matrix entries per batch; short batches repeat the last entry.
void gen_matrix_avx2(Poly* a, unsigned k, const std::uint8_t* seed, bool transposed) {
  const keccak::detail::PermuteX4Fn permute = keccak::detail::permute_x4_avx2();
  const unsigned total = k * k;
  alignas(32) std::uint8_t bufs[4][kMatrixBlocks * kRate128];
  std::uint8_t ext[4][34];
  for (unsigned first = 0; first < total; first += 4) {
    unsigned idx[4];
    for (unsigned j = 0; j < 4; ++j) {
      idx[j] = first + j < total ? first + j : total - 1;
      const unsigned row = idx[j] / k;
      const unsigned col = idx[j] % k;
      std::memcpy(ext[j], seed, 32);
      ext[j][32] = static_cast<std::uint8_t>(transposed ? row : col);
      ext[j][33] = static_cast<std::uint8_t>(transposed ? col : row);
    }
    keccak::detail::SpongeX4 xof(kRate128, permute);
    const std::uint8_t* ins[4] = {ext[0], ext[1], ext[2], ext[3]};
    xof.absorb_once(ins, 34, 0x1F);
    std::uint8_t* outs[4] = {bufs[0], bufs[1], bufs[2], bufs[3]};
    xof.squeeze_blocks(outs, kMatrixBlocks);

    unsigned ctr[4];
    for (unsigned j = 0; j < 4; ++j) ctr[j] = rej_uniform(a[idx[j]].coeffs, kN, bufs[j], sizeof bufs[j]);
    while (ctr[0] < kN || ctr[1] < kN || ctr[2] < kN || ctr[3] < kN) {
      xof.squeeze_blocks(outs, 1);
      for (unsigned j = 0; j < 4; ++j) {
        ctr[j] += rej_uniform(a[idx[j]].coeffs + ctr[j], kN - ctr[j], bufs[j], kRate128);
      }
    }
  }
}

void noise_avx2(Poly* r, unsigned count, unsigned eta, const std::uint8_t* seed, std::uint8_t first_nonce) {
  const keccak::detail::PermuteX4Fn permute = keccak::detail::permute_x4_avx2();
  alignas(32) std::uint8_t bufs[4][2 * kRate256];
  std::uint8_t ext[4][33];
  for (unsigned first = 0; first < count; first += 4) {
    for (unsigned j = 0; j < 4; ++j) {
      std::memcpy(ext[j], seed, 32);
      ext[j][32] = static_cast<std::uint8_t>(first_nonce + first + j);
    }
    keccak::detail::SpongeX4 xof(kRate256, permute);
    const std::uint8_t* ins[4] = {ext[0], ext[1], ext[2], ext[3]};
    xof.absorb_once(ins, 33, 0x1F);
    std::uint8_t* outs[4] = {bufs[0], bufs[1], bufs[2], bufs[3]};
    xof.squeeze_blocks(outs, 2);
    for (unsigned j = 0; j < 4 && first + j < count; ++j) cbd(r[first + j], bufs[j], eta);
  }
}

inline Vec canonical(Vec a) {
  a = barrett(a);
  return _mm256_add_epi16(a, _mm256_and_si256(_mm256_srai_epi16(a, 15), _mm256_set1_epi16(kQ)));
}

void to_bytes_avx2(std::uint8_t* out, const Poly& p) {
  const Vec shuffle = _mm256_setr_epi8(0, 1, 2, 4, 5, 6, 8, 9, 10, 12, 13, 14, -1, -1, -1, -1,  //
                                       0, 1, 2, 4, 5, 6, 8, 9, 10, 12, 13, 14, -1, -1, -1, -1);
  std::uint8_t buf[384 + 4];
  for (int i = 0; i < 16; ++i) {
    const Vec x = canonical(load(p.coeffs + 16 * i));
    // lane pair (a, b) -> a | b << 12 in one 32-bit lane
    const Vec y = _mm256_or_si256(_mm256_and_si256(x, _mm256_set1_epi32(0xFFF)),
                                  _mm256_and_si256(_mm256_srli_epi32(x, 4), _mm256_set1_epi32(0xFFF000)));
    const Vec z = _mm256_shuffle_epi8(y, shuffle);
    _mm_storeu_si128(reinterpret_cast<__m128i*>(buf + 24 * i), _mm256_castsi256_si128(z));
    _mm_storeu_si128(reinterpret_cast<__m128i*>(buf + 24 * i + 12), _mm256_extracti128_si256(z, 1));
  }
  std::memcpy(out, buf, 384);
}

void from_bytes_avx2(Poly& p, const std::uint8_t* in) {
  std::uint8_t buf[384 + 8];
  std::memcpy(buf, in, 384);
  std::memset(buf + 384, 0, 8);
  for (int i = 0; i < 16; ++i) store(p.coeffs + 16 * i, unpack12(buf + 24 * i));
}

// floor(x / q) for 0 <= x < 2^23, as (x * ceil(2^36 / q)) >> 36.
inline Vec div_q(Vec x) {
  const Vec m = _mm256_set1_epi64x((std::int64_t{1} << 36) / kQ + 1);
  const Vec even = _mm256_srli_epi64(_mm256_mul_epu32(x, m), 36);
  const Vec odd = _mm256_srli_epi64(_mm256_mul_epu32(_mm256_srli_epi64(x, 32), m), 36);
  return _mm256_or_si256(even, _mm256_slli_epi64(odd, 32));
}

template <unsigned D>
void compress_fixed(std::uint8_t* out, const Poly& p) {
  alignas(32) std::uint16_t t[kN];
  const Vec half = _mm256_set1_epi32(kQ / 2);
  const Vec mask = _mm256_set1_epi32((1 << D) - 1);
  for (int i = 0; i < 16; ++i) {
    const Vec c = canonical(load(p.coeffs + 16 * i));
    const Vec u0 = _mm256_cvtepu16_epi32(_mm256_castsi256_si128(c));
    const Vec u1 = _mm256_cvtepu16_epi32(_mm256_extracti128_si256(c, 1));
    const Vec r0 = _mm256_and_si256(div_q(_mm256_add_epi32(_mm256_slli_epi32(u0, D), half)), mask);
    const Vec r1 = _mm256_and_si256(div_q(_mm256_add_epi32(_mm256_slli_epi32(u1, D), half)), mask);
    const Vec packed = _mm256_permute4x64_epi64(_mm256_packus_epi32(r0, r1), 0xD8);
    _mm256_store_si256(reinterpret_cast<Vec*>(t + 16 * i), packed);
  }
  pqbench::detail::pack_fixed<D>(out, t, kN);
}

template <unsigned D>
void decompress_fixed(Poly& p, const std::uint8_t* in) {
  alignas(32) std::uint16_t t[kN];
  pqbench::detail::unpack_fixed<D>(t, in, kN);
  // (t q + 2^(d-1)) >> d, computed as a rounding high multiply
  for (int i = 0; i < 16; ++i) {
    const Vec x = _mm256_slli_epi16(_mm256_load_si256(reinterpret_cast<const Vec*>(t + 16 * i)), 15 - D);
    store(p.coeffs + 16 * i, _mm256_mulhrs_epi16(x, _mm256_set1_epi16(kQ)));
  }
}

void compress_avx2(std::uint8_t* out, const Poly& p, unsigned d) {
  switch (d) {
    case 4: return compress_fixed<4>(out, p);
    case 5: return compress_fixed<5>(out, p);
    case 10: return compress_fixed<10>(out, p);
    case 11: return compress_fixed<11>(out, p);
    default: return compress_scalar(out, p, d);
  }
}

void decompress_avx2(Poly& p, const std::uint8_t* in, unsigned d) {
  switch (d) {
    case 4: return decompress_fixed<4>(p, in);
    case 5: return decompress_fixed<5>(p, in);
    case 10: return decompress_fixed<10>(p, in);
    case 11: return decompress_fixed<11>(p, in);
    default: return decompress_scalar(p, in, d);
  }
}

constinit const Kernels kAvx2Kernels = {
    .ntt = ntt_avx2,
    .invntt_tomont = invntt_avx2,
    .basemul_acc = basemul_acc_avx2,
    .tomont = tomont_avx2,
    .reduce = reduce_avx2,
    .add = add_avx2,
    .sub = sub_avx2,
    .gen_matrix = gen_matrix_avx2,
    .noise = noise_avx2,
    .to_bytes = to_bytes_avx2,
    .from_bytes = from_bytes_avx2,
    .compress = compress_avx2,
    .decompress = decompress_avx2,
    .from_msg = from_msg_scalar,
    .to_msg = to_msg_scalar,
};

}  // namespace

const Kernels* avx2_kernels() noexcept { return &kAvx2Kernels; }

}  // namespace pqbench::kyber::detail
