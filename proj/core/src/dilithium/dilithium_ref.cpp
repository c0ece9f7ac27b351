// Portable scalar Dilithium kernels, following the structure of the
// round-3.1 reference code.

#include "dilithium_arith.hpp"
#include "dilithium_kernels.hpp"
#include "pqbench/keccak.hpp"

#include <cstring>

namespace pqbench::dilithium::detail {

namespace {

void ntt_ref(Poly& p) {
  std::int32_t* a = p.coeffs;
  unsigned k = 0;
  for (unsigned len = 128; len > 0; len >>= 1) {
    for (unsigned start = 0; start < kN; start += 2 * len) {
      const std::int32_t zeta = kZetas[++k];
      for (unsigned j = start; j < start + len; ++j) {
        const std::int32_t t = montgomery_reduce(static_cast<std::int64_t>(zeta) * a[j + len]);
        a[j + len] = a[j] - t;
        a[j] = a[j] + t;
      }
    }
  }
}

void invntt_ref(Poly& p) {
  constexpr std::int32_t f = 41978;  // 2^64 / 256 mod q
  std::int32_t* a = p.coeffs;
  unsigned k = 256;
  for (unsigned len = 1; len < kN; len <<= 1) {
    for (unsigned start = 0; start < kN; start += 2 * len) {
      const std::int32_t zeta = -kZetas[--k];
      for (unsigned j = start; j < start + len; ++j) {
        const std::int32_t t = a[j];
        a[j] = t + a[j + len];
        a[j + len] = t - a[j + len];
        a[j + len] = montgomery_reduce(static_cast<std::int64_t>(zeta) * a[j + len]);
      }
    }
  }
  for (auto& c : p.coeffs) c = montgomery_reduce(static_cast<std::int64_t>(f) * c);
}

void pointwise_ref(Poly& r, const Poly& a, const Poly& b) {
  for (int i = 0; i < kN; ++i) r.coeffs[i] = montgomery_reduce(static_cast<std::int64_t>(a.coeffs[i]) * b.coeffs[i]);
}

void pointwise_acc_ref(Poly& r, const Poly* a, const Poly* b, unsigned n) {
  Poly t;
  pointwise_ref(r, a[0], b[0]);
  for (unsigned i = 1; i < n; ++i) {
    pointwise_ref(t, a[i], b[i]);
    for (int j = 0; j < kN; ++j) r.coeffs[j] += t.coeffs[j];
  }
}

void reduce_ref(Poly& p) {
  for (auto& c : p.coeffs) c = reduce32(c);
}

void caddq_ref(Poly& p) {
  for (auto& c : p.coeffs) c = caddq(c);
}

void add_ref(Poly& r, const Poly& a, const Poly& b) {
  for (int i = 0; i < kN; ++i) r.coeffs[i] = a.coeffs[i] + b.coeffs[i];
}

void sub_ref(Poly& r, const Poly& a, const Poly& b) {
  for (int i = 0; i < kN; ++i) r.coeffs[i] = a.coeffs[i] - b.coeffs[i];
}

void shiftl_ref(Poly& p) {
  for (auto& c : p.coeffs) c = static_cast<std::int32_t>(static_cast<std::uint32_t>(c) << kDropped);
}

unsigned rej_uniform(std::int32_t* a, unsigned len, const std::uint8_t* buf, std::size_t buflen) {
  unsigned ctr = 0;
  std::size_t pos = 0;
  while (ctr < len && pos + 3 <= buflen) {
    std::uint32_t t = buf[pos] | (static_cast<std::uint32_t>(buf[pos + 1]) << 8) |
                      (static_cast<std::uint32_t>(buf[pos + 2]) << 16);
    t &= 0x7FFFFF;
    pos += 3;
    if (t < static_cast<std::uint32_t>(kQ)) a[ctr++] = static_cast<std::int32_t>(t);
  }
  return ctr;
}

unsigned rej_eta(std::int32_t* a, unsigned len, const std::uint8_t* buf, std::size_t buflen, unsigned eta) {
  unsigned ctr = 0;
  std::size_t pos = 0;
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

constexpr unsigned kUniformBlocks = 5;  // 768 bytes of SHAKE128 cover the expected need

void expand_matrix_ref(Poly* mat, unsigned k, unsigned l, const std::uint8_t* rho) {
  std::uint8_t ext[34];
  std::memcpy(ext, rho, 32);
  std::uint8_t buf[kUniformBlocks * keccak::kShake128Rate];
  for (unsigned i = 0; i < k; ++i) {
    for (unsigned j = 0; j < l; ++j) {
      const unsigned nonce = (i << 8) + j;
      ext[32] = static_cast<std::uint8_t>(nonce);
      ext[33] = static_cast<std::uint8_t>(nonce >> 8);
      auto xof = keccak::SpongeState::shake128();
      xof.absorb(ext);
      xof.squeeze_blocks(buf, kUniformBlocks);
      std::int32_t* a = mat[i * l + j].coeffs;
      unsigned ctr = rej_uniform(a, kN, buf, sizeof buf);
      while (ctr < kN) {
        xof.squeeze_blocks(buf, 1);
        ctr += rej_uniform(a + ctr, kN - ctr, buf, keccak::kShake128Rate);
      }
    }
  }
}

void uniform_eta_ref(Poly* r, unsigned count, unsigned eta, const std::uint8_t* seed, std::uint16_t first_nonce) {
  const unsigned nblocks = eta == 2 ? 1 : 2;
  std::uint8_t ext[66];
  std::memcpy(ext, seed, 64);
  std::uint8_t buf[2 * keccak::kShake256Rate];
  for (unsigned i = 0; i < count; ++i) {
    const auto nonce = static_cast<std::uint16_t>(first_nonce + i);
    ext[64] = static_cast<std::uint8_t>(nonce);
    ext[65] = static_cast<std::uint8_t>(nonce >> 8);
    auto xof = keccak::SpongeState::shake256();
    xof.absorb(ext);
    xof.squeeze_blocks(buf, nblocks);
    unsigned ctr = rej_eta(r[i].coeffs, kN, buf, nblocks * keccak::kShake256Rate, eta);
    while (ctr < kN) {
      xof.squeeze_blocks(buf, 1);
      ctr += rej_eta(r[i].coeffs + ctr, kN - ctr, buf, keccak::kShake256Rate, eta);
    }
  }
}

void unpack_z(Poly& r, const std::uint8_t* in, std::int32_t gamma1) {
  if (gamma1 == (1 << 17)) {
    for (int i = 0; i < kN / 4; ++i) {
      const std::uint8_t* b = in + 9 * i;
      std::uint32_t v[4];
      v[0] = (b[0] | (static_cast<std::uint32_t>(b[1]) << 8) | (static_cast<std::uint32_t>(b[2]) << 16)) & 0x3FFFF;
      v[1] = ((b[2] >> 2) | (static_cast<std::uint32_t>(b[3]) << 6) | (static_cast<std::uint32_t>(b[4]) << 14)) &
             0x3FFFF;
      v[2] = ((b[4] >> 4) | (static_cast<std::uint32_t>(b[5]) << 4) | (static_cast<std::uint32_t>(b[6]) << 12)) &
             0x3FFFF;
      v[3] = ((b[6] >> 6) | (static_cast<std::uint32_t>(b[7]) << 2) | (static_cast<std::uint32_t>(b[8]) << 10)) &
             0x3FFFF;
      for (int j = 0; j < 4; ++j) r.coeffs[4 * i + j] = gamma1 - static_cast<std::int32_t>(v[j]);
    }
  } else {
    for (int i = 0; i < kN / 2; ++i) {
      const std::uint8_t* b = in + 5 * i;
      const std::uint32_t v0 =
          (b[0] | (static_cast<std::uint32_t>(b[1]) << 8) | (static_cast<std::uint32_t>(b[2]) << 16)) & 0xFFFFF;
      const std::uint32_t v1 =
          (b[2] >> 4) | (static_cast<std::uint32_t>(b[3]) << 4) | (static_cast<std::uint32_t>(b[4]) << 12);
      r.coeffs[2 * i] = gamma1 - static_cast<std::int32_t>(v0);
      r.coeffs[2 * i + 1] = gamma1 - static_cast<std::int32_t>(v1);
    }
  }
}

constexpr unsigned kGamma1Blocks = 5;  // 640 bytes cover both packings

void uniform_gamma1_ref(Poly* r, unsigned count, std::int32_t gamma1, const std::uint8_t* seed,
                        std::uint16_t first_nonce) {
  std::uint8_t ext[66];
  std::memcpy(ext, seed, 64);
  std::uint8_t buf[kGamma1Blocks * keccak::kShake256Rate];
  for (unsigned i = 0; i < count; ++i) {
    const auto nonce = static_cast<std::uint16_t>(first_nonce + i);
    ext[64] = static_cast<std::uint8_t>(nonce);
    ext[65] = static_cast<std::uint8_t>(nonce >> 8);
    auto xof = keccak::SpongeState::shake256();
    xof.absorb(ext);
    xof.squeeze_blocks(buf, kGamma1Blocks);
    unpack_z(r[i], buf, gamma1);
  }
}

void power2round_ref(Poly& a1, Poly& a0, const Poly& a) {
  for (int i = 0; i < kN; ++i) a1.coeffs[i] = power2round_scalar(&a0.coeffs[i], a.coeffs[i]);
}

void decompose_ref(Poly& a1, Poly& a0, const Poly& a, std::int32_t gamma2) {
  for (int i = 0; i < kN; ++i) a1.coeffs[i] = decompose_scalar(&a0.coeffs[i], a.coeffs[i], gamma2);
}

unsigned make_hint_ref(Poly& h, const Poly& a0, const Poly& a1, std::int32_t gamma2) {
  unsigned s = 0;
  for (int i = 0; i < kN; ++i) {
    h.coeffs[i] = make_hint_scalar(a0.coeffs[i], a1.coeffs[i], gamma2);
    s += static_cast<unsigned>(h.coeffs[i]);
  }
  return s;
}

void use_hint_ref(Poly& r, const Poly& a, const Poly& h, std::int32_t gamma2) {
  for (int i = 0; i < kN; ++i) r.coeffs[i] = use_hint_scalar(a.coeffs[i], h.coeffs[i], gamma2);
}

int exceeds_norm_ref(const Poly& a, std::int32_t bound) {
  std::int32_t any = 0;
  for (const auto c : a.coeffs) any |= exceeds_scalar(c, bound);
  return any;
}

constinit const Kernels kReferenceKernels = {
    .ntt = ntt_ref,
    .invntt_tomont = invntt_ref,
    .pointwise = pointwise_ref,
    .pointwise_acc = pointwise_acc_ref,
    .reduce = reduce_ref,
    .caddq = caddq_ref,
    .add = add_ref,
    .sub = sub_ref,
    .shiftl = shiftl_ref,
    .expand_matrix = expand_matrix_ref,
    .uniform_eta = uniform_eta_ref,
    .uniform_gamma1 = uniform_gamma1_ref,
    .power2round = power2round_ref,
    .decompose = decompose_ref,
    .make_hint = make_hint_ref,
    .use_hint = use_hint_ref,
    .exceeds_norm = exceeds_norm_ref,
};

}  // namespace

const Kernels& reference_kernels() noexcept { return kReferenceKernels; }

#if !defined(PQBENCH_HAVE_AVX2)
const Kernels* avx2_kernels() noexcept { return nullptr; }
#endif

}  // namespace pqbench::dilithium::detail
