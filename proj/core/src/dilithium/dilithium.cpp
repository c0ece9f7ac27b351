#include "pqbench/dilithium.hpp"

#include "common/bitpack.hpp"
#include "dilithium_arith.hpp"
#include "dilithium_kernels.hpp"
#include "pqbench/errors.hpp"
#include "pqbench/keccak.hpp"

#include <cstring>
#include <string>
#include <vector>

namespace pqbench::dilithium {

namespace {

using detail::Kernels;
using detail::Poly;

constexpr std::size_t kT1Bytes = 320;  // 10 bits per coefficient
constexpr std::size_t kT0Bytes = 416;  // 13 bits
constexpr std::size_t kTrBytes = 32;

const Kernels& kernels_for(Backend backend) {
  if (backend == Backend::accelerated) {
    const Kernels* k = accelerated_available() ? detail::avx2_kernels() : nullptr;
    if (k == nullptr) {
      throw CapabilityError("accelerated Dilithium backend is not available on this machine");
    }
    return *k;
  }
  return detail::reference_kernels();
}

void require_length(ByteView data, std::size_t expected, const char* what) {
  if (data.size() != expected) {
    throw InputError(std::string(what) + " must be " + std::to_string(expected) + " bytes, got " +
                     std::to_string(data.size()));
  }
}

// ---------------------------------------------------------------------------
// Byte layouts. Every field is a little-endian bit stream of fixed width.

std::size_t eta_bytes(const DilithiumParams& p) { return p.eta == 2 ? 96 : 128; }
std::size_t z_bytes(const DilithiumParams& p) { return p.gamma1 == (1 << 17) ? 576 : 640; }
std::size_t w1_bytes(const DilithiumParams& p) { return p.gamma2 == (kQ - 1) / 88 ? 192 : 128; }

template <unsigned W>
void pack_offset(std::uint8_t* out, const Poly& a, std::int32_t offset) {
  std::uint32_t v[kN];
  for (int i = 0; i < kN; ++i) v[i] = static_cast<std::uint32_t>(offset - a.coeffs[i]);
  pqbench::detail::pack_fixed<W>(out, v, kN);
}

template <unsigned W>
void unpack_offset(Poly& a, const std::uint8_t* in, std::int32_t offset) {
  std::uint32_t v[kN];
  pqbench::detail::unpack_fixed<W>(v, in, kN);
  for (int i = 0; i < kN; ++i) a.coeffs[i] = offset - static_cast<std::int32_t>(v[i]);
}

void pack_eta(std::uint8_t* out, const Poly& a, unsigned eta) {
  if (eta == 2) {
    pack_offset<3>(out, a, 2);
  } else {
    pack_offset<4>(out, a, 4);
  }
}

void unpack_eta(Poly& a, const std::uint8_t* in, unsigned eta) {
  if (eta == 2) {
    unpack_offset<3>(a, in, 2);
  } else {
    unpack_offset<4>(a, in, 4);
  }
}

void pack_t1(std::uint8_t* out, const Poly& a) {
  std::uint32_t v[kN];
  for (int i = 0; i < kN; ++i) v[i] = static_cast<std::uint32_t>(a.coeffs[i]);
  pqbench::detail::pack_fixed<10>(out, v, kN);
}

void unpack_t1(Poly& a, const std::uint8_t* in) {
  std::uint32_t v[kN];
  pqbench::detail::unpack_fixed<10>(v, in, kN);
  for (int i = 0; i < kN; ++i) a.coeffs[i] = static_cast<std::int32_t>(v[i]);
}

void pack_t0(std::uint8_t* out, const Poly& a) { pack_offset<13>(out, a, 1 << 12); }
void unpack_t0(Poly& a, const std::uint8_t* in) { unpack_offset<13>(a, in, 1 << 12); }

void pack_z(std::uint8_t* out, const Poly& a, std::int32_t gamma1) {
  if (gamma1 == (1 << 17)) {
    pack_offset<18>(out, a, gamma1);
  } else {
    pack_offset<20>(out, a, gamma1);
  }
}

void unpack_z(Poly& a, const std::uint8_t* in, std::int32_t gamma1) {
  if (gamma1 == (1 << 17)) {
    unpack_offset<18>(a, in, gamma1);
  } else {
    unpack_offset<20>(a, in, gamma1);
  }
}

void pack_w1(std::uint8_t* out, const Poly& a, std::int32_t gamma2) {
  std::uint32_t v[kN];
  for (int i = 0; i < kN; ++i) v[i] = static_cast<std::uint32_t>(a.coeffs[i]);
  if (gamma2 == (kQ - 1) / 88) {
    pqbench::detail::pack_fixed<6>(out, v, kN);
  } else {
    pqbench::detail::pack_fixed<4>(out, v, kN);
  }
}

// Hints: omega indices of set coefficients, then k running totals.
void pack_hints(std::uint8_t* out, const Poly* h, const DilithiumParams& p) {
  std::memset(out, 0, p.omega + p.k);
  unsigned n = 0;
  for (unsigned i = 0; i < p.k; ++i) {
    for (int j = 0; j < kN; ++j) {
      if (h[i].coeffs[j] != 0) out[n++] = static_cast<std::uint8_t>(j);
    }
    out[p.omega + i] = static_cast<std::uint8_t>(n);
  }
}

// Rejects every encoding except the canonical one: indices strictly
// increasing within a polynomial, totals monotone and at most omega, and
// unused slots zero.
bool unpack_hints(Poly* h, const std::uint8_t* in, const DilithiumParams& p) {
  unsigned n = 0;
  for (unsigned i = 0; i < p.k; ++i) {
    std::memset(h[i].coeffs, 0, sizeof h[i].coeffs);
    const unsigned end = in[p.omega + i];
    if (end < n || end > p.omega) return false;
    for (unsigned j = n; j < end; ++j) {
      if (j > n && in[j] <= in[j - 1]) return false;
      h[i].coeffs[in[j]] = 1;
    }
    n = end;
  }
  for (unsigned j = n; j < p.omega; ++j) {
    if (in[j] != 0) return false;
  }
  return true;
}

struct Layout {
  std::size_t s1_off;
  std::size_t s2_off;
  std::size_t t0_off;
  std::size_t z_off;
  std::size_t h_off;
};

// sk = rho || key || tr || s1 || s2 || t0,  sig = c~ || z || h
Layout layout(const DilithiumParams& p) {
  Layout l{};
  l.s1_off = 2 * kSeedBytes + kTrBytes;
  l.s2_off = l.s1_off + p.l * eta_bytes(p);
  l.t0_off = l.s2_off + p.k * eta_bytes(p);
  l.z_off = kSeedBytes;
  l.h_off = l.z_off + p.l * z_bytes(p);
  return l;
}

void challenge(Poly& c, const std::uint8_t* seed, std::size_t seed_len, unsigned tau) {
  auto xof = keccak::SpongeState::shake256();
  xof.absorb({seed, seed_len});
  std::uint8_t buf[keccak::kShake256Rate];
  xof.squeeze_blocks(buf, 1);
  std::uint64_t signs = 0;
  for (int i = 0; i < 8; ++i) signs |= static_cast<std::uint64_t>(buf[i]) << (8 * i);
  unsigned pos = 8;
  std::memset(c.coeffs, 0, sizeof c.coeffs);
  for (unsigned i = kN - tau; i < static_cast<unsigned>(kN); ++i) {
    unsigned b;
    do {
      if (pos >= keccak::kShake256Rate) {
        xof.squeeze_blocks(buf, 1);
        pos = 0;
      }
      b = buf[pos++];
    } while (b > i);
    c.coeffs[i] = c.coeffs[b];
    c.coeffs[b] = 1 - 2 * static_cast<std::int32_t>(signs & 1);
    signs >>= 1;
  }
}

class Scheme {
 public:
  Scheme(const DilithiumParams& params, const Kernels& kern) : p_(params), k_(kern), l_(layout(params)) {}

  void keypair(std::uint8_t* pk, std::uint8_t* sk, const std::uint8_t* seed) const {
    std::uint8_t seedbuf[2 * kSeedBytes + kCrhBytes];
    keccak::shake256(seedbuf, {seed, kSeedBytes});
    const std::uint8_t* rho = seedbuf;
    const std::uint8_t* rhoprime = seedbuf + kSeedBytes;
    const std::uint8_t* key = seedbuf + kSeedBytes + kCrhBytes;

    const unsigned k = p_.k;
    const unsigned l = p_.l;
    std::vector<Poly> mat(k * l);
    std::vector<Poly> s(l + k);  // s1 then s2
    std::vector<Poly> s1hat(l);
    std::vector<Poly> t1(k);
    std::vector<Poly> t0(k);
    k_.expand_matrix(mat.data(), k, l, rho);
    k_.uniform_eta(s.data(), l + k, p_.eta, rhoprime, 0);
    const Poly* s1 = s.data();
    const Poly* s2 = s.data() + l;

    for (unsigned j = 0; j < l; ++j) {
      s1hat[j] = s1[j];
      k_.ntt(s1hat[j]);
    }
    for (unsigned i = 0; i < k; ++i) {
      k_.pointwise_acc(t1[i], &mat[i * l], s1hat.data(), l);
      k_.reduce(t1[i]);
      k_.invntt_tomont(t1[i]);
      k_.add(t1[i], t1[i], s2[i]);
      k_.caddq(t1[i]);
      k_.power2round(t1[i], t0[i], t1[i]);
    }

    std::memcpy(pk, rho, kSeedBytes);
    for (unsigned i = 0; i < k; ++i) pack_t1(pk + kSeedBytes + i * kT1Bytes, t1[i]);

    std::memcpy(sk, rho, kSeedBytes);
    std::memcpy(sk + kSeedBytes, key, kSeedBytes);
    keccak::shake256({sk + 2 * kSeedBytes, kTrBytes}, {pk, p_.sizes.pk_bytes});
    for (unsigned j = 0; j < l; ++j) pack_eta(sk + l_.s1_off + j * eta_bytes(p_), s1[j], p_.eta);
    for (unsigned i = 0; i < k; ++i) pack_eta(sk + l_.s2_off + i * eta_bytes(p_), s2[i], p_.eta);
    for (unsigned i = 0; i < k; ++i) pack_t0(sk + l_.t0_off + i * kT0Bytes, t0[i]);
  }

  // rnd is nullptr in deterministic mode.
  void sign(std::uint8_t* sig, const std::uint8_t* sk, ByteView msg, const std::uint8_t* rnd) const {
    const unsigned k = p_.k;
    const unsigned l = p_.l;
    const std::uint8_t* rho = sk;
    const std::uint8_t* key = sk + kSeedBytes;
    const std::uint8_t* tr = sk + 2 * kSeedBytes;

    std::uint8_t mu[kCrhBytes];
    {
      auto h = keccak::SpongeState::shake256();
      h.absorb({tr, kTrBytes});
      h.absorb(msg);
      h.squeeze(mu);
    }
    std::uint8_t rhoprime[kCrhBytes];
    {
      auto h = keccak::SpongeState::shake256();
      h.absorb({key, kSeedBytes});
      if (rnd != nullptr) h.absorb({rnd, kSeedBytes});
      h.absorb(mu);
      h.squeeze(rhoprime);
    }

    std::vector<Poly> mat(k * l);
    std::vector<Poly> s1(l);
    std::vector<Poly> s2(k);
    std::vector<Poly> t0(k);
    k_.expand_matrix(mat.data(), k, l, rho);
    for (unsigned j = 0; j < l; ++j) {
      unpack_eta(s1[j], sk + l_.s1_off + j * eta_bytes(p_), p_.eta);
      k_.ntt(s1[j]);
    }
    for (unsigned i = 0; i < k; ++i) {
      unpack_eta(s2[i], sk + l_.s2_off + i * eta_bytes(p_), p_.eta);
      k_.ntt(s2[i]);
      unpack_t0(t0[i], sk + l_.t0_off + i * kT0Bytes);
      k_.ntt(t0[i]);
    }

    std::vector<Poly> y(l);
    std::vector<Poly> yhat(l);
    std::vector<Poly> z(l);
    std::vector<Poly> w1(k);
    std::vector<Poly> w0(k);
    std::vector<Poly> h(k);
    Poly cp;
    Poly tmp;
    const std::size_t w1len = w1_bytes(p_);
    std::vector<std::uint8_t> w1packed(k * w1len);

    for (unsigned attempt = 0; attempt < kMaxSigningAttempts; ++attempt) {
      k_.uniform_gamma1(y.data(), l, p_.gamma1, rhoprime, static_cast<std::uint16_t>(l * attempt));
      for (unsigned j = 0; j < l; ++j) {
        yhat[j] = y[j];
        k_.ntt(yhat[j]);
      }
      for (unsigned i = 0; i < k; ++i) {
        k_.pointwise_acc(w1[i], &mat[i * l], yhat.data(), l);
        k_.reduce(w1[i]);
        k_.invntt_tomont(w1[i]);
        k_.caddq(w1[i]);
        k_.decompose(w1[i], w0[i], w1[i], p_.gamma2);
        pack_w1(w1packed.data() + i * w1len, w1[i], p_.gamma2);
      }
      {
        auto hs = keccak::SpongeState::shake256();
        hs.absorb(mu);
        hs.absorb(w1packed);
        hs.squeeze({sig, kSeedBytes});
      }
      challenge(cp, sig, kSeedBytes, p_.tau);
      k_.ntt(cp);

      // Each rejection test below is on public information (whether this
      // candidate is released), so branching on its outcome is fine.
      int reject = 0;
      for (unsigned j = 0; j < l; ++j) {
        k_.pointwise(z[j], cp, s1[j]);
        k_.invntt_tomont(z[j]);
        k_.add(z[j], z[j], y[j]);
        k_.reduce(z[j]);
        reject |= k_.exceeds_norm(z[j], p_.gamma1 - p_.beta);
      }
      if (reject != 0) continue;

      for (unsigned i = 0; i < k; ++i) {
        k_.pointwise(tmp, cp, s2[i]);
        k_.invntt_tomont(tmp);
        k_.sub(w0[i], w0[i], tmp);
        k_.reduce(w0[i]);
        reject |= k_.exceeds_norm(w0[i], p_.gamma2 - p_.beta);
      }
      if (reject != 0) continue;

      unsigned hints = 0;
      for (unsigned i = 0; i < k; ++i) {
        k_.pointwise(h[i], cp, t0[i]);
        k_.invntt_tomont(h[i]);
        k_.reduce(h[i]);
        reject |= k_.exceeds_norm(h[i], p_.gamma2);
        k_.add(w0[i], w0[i], h[i]);
        hints += k_.make_hint(h[i], w0[i], w1[i], p_.gamma2);
      }
      if (reject != 0 || hints > p_.omega) continue;

      for (unsigned j = 0; j < l; ++j) pack_z(sig + l_.z_off + j * z_bytes(p_), z[j], p_.gamma1);
      pack_hints(sig + l_.h_off, h.data(), p_);
      return;
    }
    throw SigningFailure("Dilithium signing rejected " + std::to_string(kMaxSigningAttempts) +
                         " candidates in a row");
  }

  bool verify(const std::uint8_t* pk, ByteView msg, const std::uint8_t* sig) const {
    const unsigned k = p_.k;
    const unsigned l = p_.l;
    std::vector<Poly> z(l);
    std::vector<Poly> h(k);
    if (!unpack_hints(h.data(), sig + l_.h_off, p_)) return false;
    int too_big = 0;
    for (unsigned j = 0; j < l; ++j) {
      unpack_z(z[j], sig + l_.z_off + j * z_bytes(p_), p_.gamma1);
      too_big |= k_.exceeds_norm(z[j], p_.gamma1 - p_.beta);
    }
    if (too_big != 0) return false;

    std::uint8_t mu[kCrhBytes];
    {
      std::uint8_t tr[kTrBytes];
      keccak::shake256(tr, {pk, p_.sizes.pk_bytes});
      auto hs = keccak::SpongeState::shake256();
      hs.absorb(tr);
      hs.absorb(msg);
      hs.squeeze(mu);
    }

    Poly cp;
    challenge(cp, sig, kSeedBytes, p_.tau);
    k_.ntt(cp);
    std::vector<Poly> mat(k * l);
    k_.expand_matrix(mat.data(), k, l, pk);
    for (auto& poly : z) k_.ntt(poly);

    const std::size_t w1len = w1_bytes(p_);
    std::vector<std::uint8_t> w1packed(k * w1len);
    Poly w1;
    Poly t1;
    for (unsigned i = 0; i < k; ++i) {
      k_.pointwise_acc(w1, &mat[i * l], z.data(), l);
      unpack_t1(t1, pk + kSeedBytes + i * kT1Bytes);
      k_.shiftl(t1);
      k_.ntt(t1);
      k_.pointwise(t1, cp, t1);
      k_.sub(w1, w1, t1);
      k_.reduce(w1);
      k_.invntt_tomont(w1);
      k_.caddq(w1);
      k_.use_hint(w1, w1, h[i], p_.gamma2);
      pack_w1(w1packed.data() + i * w1len, w1, p_.gamma2);
    }

    std::uint8_t c2[kSeedBytes];
    auto hs = keccak::SpongeState::shake256();
    hs.absorb(mu);
    hs.absorb(w1packed);
    hs.squeeze(c2);
    return ct_equal({c2, kSeedBytes}, {sig, kSeedBytes});
  }

 private:
  const DilithiumParams& p_;
  const Kernels& k_;
  Layout l_;
};

// ---------------------------------------------------------------------------
// Ring element plumbing

RingElement from_poly(const Poly& p, Domain domain) {
  RingElement r;
  for (int i = 0; i < kN; ++i) r.coeffs[i] = detail::freeze(p.coeffs[i]);
  r.domain = domain;
  return r;
}

Poly to_poly(const RingElement& r) {
  Poly p;
  for (int i = 0; i < kN; ++i) p.coeffs[i] = detail::freeze(r.coeffs[i] % kQ);
  return p;
}

void require_domain(const RingElement& p, Domain expected, const char* op) {
  if (p.domain != expected) {
    throw ContractViolation(std::string(op) + ": operand is in the " +
                            (p.domain == Domain::ntt ? "NTT" : "normal") + " domain");
  }
}

void require_coefficient(std::int32_t r) {
  if (r < 0 || r >= kQ) throw InputError("coefficient " + std::to_string(r) + " is outside [0, q)");
}

void require_gamma2(std::int32_t gamma2) {
  if (gamma2 != (kQ - 1) / 88 && gamma2 != (kQ - 1) / 32) {
    throw InputError("gamma2 must be (q-1)/88 or (q-1)/32");
  }
}

constexpr auto kMont2 = static_cast<std::int32_t>(detail::pow_mod(2, 64, kQ));  // 2^64 mod q

}  // namespace

const DilithiumParams& params_for_level(int level) {
  for (const auto& p : kAllParams) {
    if (p.level == level) return p;
  }
  throw InputError("unknown Dilithium level " + std::to_string(level));
}

KeyPair keygen(const DilithiumParams& params, ByteView seed, Backend backend) {
  require_length(seed, kSeedBytes, "seed");
  const Scheme scheme(params, kernels_for(backend));
  Bytes pk(params.sizes.pk_bytes);
  Bytes sk(params.sizes.sk_bytes);
  scheme.keypair(pk.data(), sk.data(), seed.data());
  return {PublicKey(std::move(pk)), SecretKey(std::move(sk))};
}

KeyPair keygen(const DilithiumParams& params, Backend backend) {
  const auto seed = os_random_array<kSeedBytes>();
  return keygen(params, seed, backend);
}

Signature sign(const DilithiumParams& params, ByteView secret_key, ByteView message, Backend backend) {
  return sign(params, secret_key, message, SigningMode::deterministic, {}, backend);
}

Signature sign(const DilithiumParams& params, ByteView secret_key, ByteView message, SigningMode mode,
               ByteView rnd, Backend backend) {
  require_length(secret_key, params.sizes.sk_bytes, "secret key");
  if (mode == SigningMode::randomized) {
    require_length(rnd, kSeedBytes, "rnd");
  } else if (!rnd.empty()) {
    throw InputError("rnd must be empty in deterministic mode");
  }
  const Scheme scheme(params, kernels_for(backend));
  Bytes sig(params.sizes.sig_bytes);
  scheme.sign(sig.data(), secret_key.data(), message, mode == SigningMode::randomized ? rnd.data() : nullptr);
  return Signature(std::move(sig));
}

bool verify(const DilithiumParams& params, ByteView public_key, ByteView message, ByteView signature,
            Backend backend) {
  if (public_key.size() != params.sizes.pk_bytes || signature.size() != params.sizes.sig_bytes) return false;
  try {
    const Scheme scheme(params, kernels_for(backend));
    return scheme.verify(public_key.data(), message, signature.data());
  } catch (const std::exception&) {
    return false;
  }
}

RingElement ntt(const RingElement& p, Backend backend) {
  require_domain(p, Domain::normal, "ntt");
  Poly t = to_poly(p);
  kernels_for(backend).ntt(t);
  return from_poly(t, Domain::ntt);
}

RingElement inv_ntt(const RingElement& p, Backend backend) {
  require_domain(p, Domain::ntt, "inv_ntt");
  Poly t = to_poly(p);
  kernels_for(backend).invntt_tomont(t);
  for (auto& c : t.coeffs) c = detail::montgomery_reduce(c);
  return from_poly(t, Domain::normal);
}

RingElement multiply_ntt(const RingElement& a, const RingElement& b, Backend backend) {
  require_domain(a, Domain::ntt, "multiply_ntt");
  require_domain(b, Domain::ntt, "multiply_ntt");
  const Poly pa = to_poly(a);
  const Poly pb = to_poly(b);
  Poly r;
  kernels_for(backend).pointwise(r, pa, pb);
  for (auto& c : r.coeffs) c = detail::montgomery_reduce(static_cast<std::int64_t>(c) * kMont2);
  return from_poly(r, Domain::ntt);
}

RingElement add(const RingElement& a, const RingElement& b) {
  if (a.domain != b.domain) throw ContractViolation("add: operands are in different domains");
  RingElement r;
  r.domain = a.domain;
  for (int i = 0; i < kN; ++i) r.coeffs[i] = (a.coeffs[i] + b.coeffs[i]) % kQ;
  return r;
}

RingElement sample_in_ball(ByteView seed, unsigned tau) {
  if (tau != 39 && tau != 49 && tau != 60) throw InputError("tau must be 39, 49 or 60");
  Poly c;
  challenge(c, seed.data(), seed.size(), tau);
  return from_poly(c, Domain::normal);
}

Split power2round(std::int32_t r) {
  require_coefficient(r);
  Split s{};
  s.high = detail::power2round_scalar(&s.low, r);
  return s;
}

Split decompose(std::int32_t r, std::int32_t gamma2) {
  require_coefficient(r);
  require_gamma2(gamma2);
  Split s{};
  s.high = detail::decompose_scalar(&s.low, r, gamma2);
  return s;
}

std::int32_t make_hint(std::int32_t z, std::int32_t r, std::int32_t gamma2) {
  require_coefficient(r);
  require_gamma2(gamma2);
  if (z <= -kQ || z >= kQ) throw InputError("z must lie in (-q, q)");
  std::int32_t low;
  const std::int32_t before = detail::decompose_scalar(&low, r, gamma2);
  const std::int32_t after = detail::decompose_scalar(&low, detail::freeze(r + z), gamma2);
  return before != after ? 1 : 0;
}

std::int32_t use_hint(std::int32_t hint, std::int32_t r, std::int32_t gamma2) {
  require_coefficient(r);
  require_gamma2(gamma2);
  if (hint != 0 && hint != 1) throw InputError("hint must be 0 or 1");
  return detail::use_hint_scalar(r, hint, gamma2);
}

}  // namespace pqbench::dilithium
