// Portable scalar Kyber kernels, following the structure of the round-3
// reference code.

#include "../common/bitpack.hpp"
#include "kyber_arith.hpp"
#include "kyber_kernels.hpp"
#include "pqbench/keccak.hpp"

#include <cstring>

namespace pqbench::kyber::detail {

namespace {

void ntt_ref(Poly& p) {
  std::int16_t* r = p.coeffs;
  unsigned k = 1;
  for (unsigned len = 128; len >= 2; len >>= 1) {
    for (unsigned start = 0; start < 256; start += 2 * len) {
      const std::int16_t zeta = kZetas[k++];
      for (unsigned j = start; j < start + len; ++j) {
        const std::int16_t t = fqmul(zeta, r[j + len]);
        r[j + len] = static_cast<std::int16_t>(r[j] - t);
        r[j] = static_cast<std::int16_t>(r[j] + t);
      }
    }
  }
  for (auto& c : p.coeffs) c = barrett_reduce(c);
}

void invntt_ref(Poly& p) {
  constexpr std::int16_t f = 1441;  // 2^32 / 128 mod q
  std::int16_t* r = p.coeffs;
  unsigned k = 127;
  for (unsigned len = 2; len <= 128; len <<= 1) {
    for (unsigned start = 0; start < 256; start += 2 * len) {
      const std::int16_t zeta = kZetas[k--];
      for (unsigned j = start; j < start + len; ++j) {
        const std::int16_t t = r[j];
        r[j] = barrett_reduce(static_cast<std::int16_t>(t + r[j + len]));
        r[j + len] = static_cast<std::int16_t>(r[j + len] - t);
        r[j + len] = fqmul(zeta, r[j + len]);
      }
    }
  }
  for (auto& c : p.coeffs) c = fqmul(c, f);
}

void basemul(std::int16_t r[2], const std::int16_t a[2], const std::int16_t b[2], std::int16_t zeta) {
  r[0] = fqmul(a[1], b[1]);
  r[0] = fqmul(r[0], zeta);
  r[0] = static_cast<std::int16_t>(r[0] + fqmul(a[0], b[0]));
  r[1] = fqmul(a[0], b[1]);
  r[1] = static_cast<std::int16_t>(r[1] + fqmul(a[1], b[0]));
}

void poly_basemul(Poly& r, const Poly& a, const Poly& b) {
  for (unsigned i = 0; i < kN / 4; ++i) {
    basemul(&r.coeffs[4 * i], &a.coeffs[4 * i], &b.coeffs[4 * i], kZetas[64 + i]);
    basemul(&r.coeffs[4 * i + 2], &a.coeffs[4 * i + 2], &b.coeffs[4 * i + 2],
            static_cast<std::int16_t>(-kZetas[64 + i]));
  }
}

void reduce_ref(Poly& p) {
  for (auto& c : p.coeffs) c = barrett_reduce(c);
}

void basemul_acc_ref(Poly& r, const Poly* a, const Poly* b, unsigned k) {
  Poly t;
  poly_basemul(r, a[0], b[0]);
  for (unsigned i = 1; i < k; ++i) {
    poly_basemul(t, a[i], b[i]);
    for (int j = 0; j < kN; ++j) r.coeffs[j] = static_cast<std::int16_t>(r.coeffs[j] + t.coeffs[j]);
  }
  reduce_ref(r);
}

void tomont_ref(Poly& p) {
  constexpr std::int32_t f = (1ULL << 32) % 3329;
  for (auto& c : p.coeffs) c = montgomery_reduce(static_cast<std::int32_t>(c) * f);
}

void add_ref(Poly& r, const Poly& a, const Poly& b) {
  for (int i = 0; i < kN; ++i) r.coeffs[i] = static_cast<std::int16_t>(a.coeffs[i] + b.coeffs[i]);
}

void sub_ref(Poly& r, const Poly& a, const Poly& b) {
  for (int i = 0; i < kN; ++i) r.coeffs[i] = static_cast<std::int16_t>(a.coeffs[i] - b.coeffs[i]);
}

unsigned rej_uniform(std::int16_t* r, unsigned len, const std::uint8_t* buf, std::size_t buflen) {
  unsigned ctr = 0;
  std::size_t pos = 0;
  while (ctr < len && pos + 3 <= buflen) {
    const std::uint16_t val0 = (buf[pos] | static_cast<std::uint16_t>(buf[pos + 1] << 8)) & 0xFFF;
    const std::uint16_t val1 = ((buf[pos + 1] >> 4) | static_cast<std::uint16_t>(buf[pos + 2] << 4)) & 0xFFF;
    pos += 3;
    if (val0 < kQ) r[ctr++] = static_cast<std::int16_t>(val0);
    if (ctr < len && val1 < kQ) r[ctr++] = static_cast<std::int16_t>(val1);
  }
  return ctr;
}

constexpr unsigned kGenMatrixBlocks = 3;

void gen_matrix_ref(Poly* a, unsigned k, const std::uint8_t* seed, bool transposed) {
  std::uint8_t ext[34];
  std::memcpy(ext, seed, 32);
  std::uint8_t buf[kGenMatrixBlocks * keccak::kShake128Rate];
  for (unsigned i = 0; i < k; ++i) {
    for (unsigned j = 0; j < k; ++j) {
      ext[32] = static_cast<std::uint8_t>(transposed ? i : j);
      ext[33] = static_cast<std::uint8_t>(transposed ? j : i);
      auto xof = keccak::SpongeState::shake128();
      xof.absorb(ext);
      xof.squeeze_blocks(buf, kGenMatrixBlocks);
      std::int16_t* coeffs = a[i * k + j].coeffs;
      unsigned ctr = rej_uniform(coeffs, kN, buf, sizeof buf);
      while (ctr < kN) {
        xof.squeeze_blocks(buf, 1);
        ctr += rej_uniform(coeffs + ctr, kN - ctr, buf, keccak::kShake128Rate);
      }
    }
  }
}

void noise_ref(Poly* r, unsigned count, unsigned eta, const std::uint8_t* seed, std::uint8_t first_nonce) {
  std::uint8_t ext[33];
  std::memcpy(ext, seed, 32);
  std::uint8_t buf[3 * 64];
  for (unsigned i = 0; i < count; ++i) {
    ext[32] = static_cast<std::uint8_t>(first_nonce + i);
    keccak::shake256({buf, 64 * eta}, ext);
    cbd(r[i], buf, eta);
  }
}


}  // namespace

void to_bytes_scalar(std::uint8_t* out, const Poly& p) noexcept {
  std::uint16_t t[kN];
  for (int i = 0; i < kN; ++i) t[i] = canonical(p.coeffs[i]);
  pqbench::detail::pack_bits(out, t, kN, 12);
}

void from_bytes_scalar(Poly& p, const std::uint8_t* in) noexcept {
  std::uint16_t t[kN];
  pqbench::detail::unpack_bits(t, in, kN, 12);
  for (int i = 0; i < kN; ++i) p.coeffs[i] = static_cast<std::int16_t>(t[i]);
}

void compress_scalar(std::uint8_t* out, const Poly& p, unsigned d) noexcept {
  std::uint16_t t[kN];
  for (int i = 0; i < kN; ++i) {
    const std::uint32_t u = canonical(p.coeffs[i]);
    t[i] = static_cast<std::uint16_t>((((u << d) + kQ / 2) / kQ) & ((1U << d) - 1));
  }
  pqbench::detail::pack_bits(out, t, kN, d);
}

void decompress_scalar(Poly& p, const std::uint8_t* in, unsigned d) noexcept {
  std::uint16_t t[kN];
  pqbench::detail::unpack_bits(t, in, kN, d);
  for (int i = 0; i < kN; ++i) {
    p.coeffs[i] = static_cast<std::int16_t>((static_cast<std::uint32_t>(t[i]) * kQ + (1U << (d - 1))) >> d);
  }
}

void from_msg_scalar(Poly& p, const std::uint8_t* msg) noexcept {
  for (int i = 0; i < 32; ++i) {
    for (int j = 0; j < 8; ++j) {
      const auto mask = static_cast<std::int16_t>(-static_cast<std::int16_t>((msg[i] >> j) & 1));
      p.coeffs[8 * i + j] = static_cast<std::int16_t>(mask & ((kQ + 1) / 2));
    }
  }
}

void to_msg_scalar(std::uint8_t* msg, const Poly& p) noexcept {
  for (int i = 0; i < 32; ++i) {
    msg[i] = 0;
    for (int j = 0; j < 8; ++j) {
      const std::uint32_t u = canonical(p.coeffs[8 * i + j]);
      const std::uint32_t bit = (((u << 1) + kQ / 2) / kQ) & 1;
      msg[i] = static_cast<std::uint8_t>(msg[i] | (bit << j));
    }
  }
}

void cbd(Poly& r, const std::uint8_t* buf, unsigned eta) noexcept {
  if (eta == 2) {
    for (int i = 0; i < kN / 8; ++i) {
      std::uint32_t t = 0;
      for (int b = 0; b < 4; ++b) t |= static_cast<std::uint32_t>(buf[4 * i + b]) << (8 * b);
      std::uint32_t d = t & 0x55555555U;
      d += (t >> 1) & 0x55555555U;
      for (int j = 0; j < 8; ++j) {
        const auto a = static_cast<std::int16_t>((d >> (4 * j)) & 0x3);
        const auto b = static_cast<std::int16_t>((d >> (4 * j + 2)) & 0x3);
        r.coeffs[8 * i + j] = static_cast<std::int16_t>(a - b);
      }
    }
  } else {
    for (int i = 0; i < kN / 4; ++i) {
      std::uint32_t t = 0;
      for (int b = 0; b < 3; ++b) t |= static_cast<std::uint32_t>(buf[3 * i + b]) << (8 * b);
      std::uint32_t d = t & 0x00249249U;
      d += (t >> 1) & 0x00249249U;
      d += (t >> 2) & 0x00249249U;
      for (int j = 0; j < 4; ++j) {
        const auto a = static_cast<std::int16_t>((d >> (6 * j)) & 0x7);
        const auto b = static_cast<std::int16_t>((d >> (6 * j + 3)) & 0x7);
        r.coeffs[4 * i + j] = static_cast<std::int16_t>(a - b);
      }
    }
  }
}

constinit const Kernels kReferenceKernels = {
    .ntt = ntt_ref,
    .invntt_tomont = invntt_ref,
    .basemul_acc = basemul_acc_ref,
    .tomont = tomont_ref,
    .reduce = reduce_ref,
    .add = add_ref,
    .sub = sub_ref,
    .gen_matrix = gen_matrix_ref,
    .noise = noise_ref,
    .to_bytes = to_bytes_scalar,
    .from_bytes = from_bytes_scalar,
    .compress = compress_scalar,
    .decompress = decompress_scalar,
    .from_msg = from_msg_scalar,
    .to_msg = to_msg_scalar,
};

const Kernels& reference_kernels() noexcept { return kReferenceKernels; }

#if !defined(PQBENCH_HAVE_AVX2)
const Kernels* avx2_kernels() noexcept { return nullptr; }
#endif

}  // namespace pqbench::kyber::detail
