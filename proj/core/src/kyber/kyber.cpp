#include "pqbench/kyber.hpp"

#include "kyber_arith.hpp"
#include "kyber_kernels.hpp"
#include "pqbench/errors.hpp"
#include "pqbench/keccak.hpp"

#include <algorithm>
#include <cstring>
#include <string>
#include <vector>

namespace pqbench::kyber {

namespace {

using detail::Kernels;
using detail::Poly;

constexpr std::size_t kPolyBytes = 384;

const Kernels& kernels_for(Backend backend) {
  if (backend == Backend::accelerated) {
    const Kernels* k = accelerated_available() ? detail::avx2_kernels() : nullptr;
    if (k == nullptr) {
      throw CapabilityError("accelerated Kyber backend is not available on this machine");
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

struct Layout {
  std::size_t polyvec_bytes;
  std::size_t polyvec_compressed_bytes;
  std::size_t poly_compressed_bytes;
  std::size_t indcpa_pk_bytes;
  std::size_t indcpa_sk_bytes;
};

Layout layout(const KyberParams& p) {
  Layout l{};
  l.polyvec_bytes = p.k * kPolyBytes;
  l.polyvec_compressed_bytes = p.k * 32 * p.du;
  l.poly_compressed_bytes = 32 * p.dv;
  l.indcpa_pk_bytes = l.polyvec_bytes + kSeedBytes;
  l.indcpa_sk_bytes = l.polyvec_bytes;
  return l;
}

// CPA-secure public-key encryption underlying the KEM.
class IndCpa {
 public:
  IndCpa(const KyberParams& params, const Kernels& kern) : p_(params), kern_(kern), l_(layout(params)) {}

  void keypair(std::uint8_t* pk, std::uint8_t* sk, const std::uint8_t* seed) const {
    std::uint8_t buf[64];
    keccak::sha3_512(std::span<std::uint8_t, 64>(buf), {seed, kSeedBytes});
    const std::uint8_t* public_seed = buf;
    const std::uint8_t* noise_seed = buf + 32;

    const unsigned k = p_.k;
    std::vector<Poly> a(k * k);
    std::vector<Poly> noise(2 * k);  // s then e
    std::vector<Poly> t(k);
    kern_.gen_matrix(a.data(), k, public_seed, false);
    kern_.noise(noise.data(), 2 * k, p_.eta1, noise_seed, 0);
    Poly* s = noise.data();
    Poly* e = noise.data() + k;
    for (unsigned i = 0; i < 2 * k; ++i) kern_.ntt(noise[i]);

    for (unsigned i = 0; i < k; ++i) {
      kern_.basemul_acc(t[i], &a[i * k], s, k);
      kern_.tomont(t[i]);
      kern_.add(t[i], t[i], e[i]);
      kern_.reduce(t[i]);
    }
    for (unsigned i = 0; i < k; ++i) {
      kern_.to_bytes(sk + i * kPolyBytes, s[i]);
      kern_.to_bytes(pk + i * kPolyBytes, t[i]);
    }
    std::memcpy(pk + l_.polyvec_bytes, public_seed, kSeedBytes);
  }

  void encrypt(std::uint8_t* ct, const std::uint8_t* msg, const std::uint8_t* pk,
               const std::uint8_t* coins) const {
    const unsigned k = p_.k;
    std::vector<Poly> t(k);
    for (unsigned i = 0; i < k; ++i) kern_.from_bytes(t[i], pk + i * kPolyBytes);
    const std::uint8_t* seed = pk + l_.polyvec_bytes;

    Poly m;
    kern_.from_msg(m, msg);

    std::vector<Poly> at(k * k);
    kern_.gen_matrix(at.data(), k, seed, true);

    std::vector<Poly> sp(k);
    std::vector<Poly> errs(k + 1);  // e1 then e2
    kern_.noise(sp.data(), k, p_.eta1, coins, 0);
    kern_.noise(errs.data(), k + 1, p_.eta2, coins, static_cast<std::uint8_t>(k));
    for (auto& poly : sp) kern_.ntt(poly);

    std::vector<Poly> u(k);
    Poly v;
    for (unsigned i = 0; i < k; ++i) {
      kern_.basemul_acc(u[i], &at[i * k], sp.data(), k);
    }
    kern_.basemul_acc(v, t.data(), sp.data(), k);
    for (auto& poly : u) kern_.invntt_tomont(poly);
    kern_.invntt_tomont(v);

    for (unsigned i = 0; i < k; ++i) {
      kern_.add(u[i], u[i], errs[i]);
      kern_.reduce(u[i]);
      kern_.compress(ct + i * 32 * p_.du, u[i], p_.du);
    }
    kern_.add(v, v, errs[k]);
    kern_.add(v, v, m);
    kern_.reduce(v);
    kern_.compress(ct + l_.polyvec_compressed_bytes, v, p_.dv);
  }

  void decrypt(std::uint8_t* msg, const std::uint8_t* ct, const std::uint8_t* sk) const {
    const unsigned k = p_.k;
    std::vector<Poly> u(k);
    std::vector<Poly> s(k);
    Poly v;
    for (unsigned i = 0; i < k; ++i) {
      kern_.decompress(u[i], ct + i * 32 * p_.du, p_.du);
      kern_.from_bytes(s[i], sk + i * kPolyBytes);
      kern_.ntt(u[i]);
    }
    kern_.decompress(v, ct + l_.polyvec_compressed_bytes, p_.dv);

    Poly mp;
    kern_.basemul_acc(mp, s.data(), u.data(), k);
    kern_.invntt_tomont(mp);
    kern_.sub(mp, v, mp);
    kern_.reduce(mp);
    kern_.to_msg(msg, mp);
  }

  [[nodiscard]] const Layout& sizes() const noexcept { return l_; }

 private:
  const KyberParams& p_;
  const Kernels& kern_;
  Layout l_;
};

void kdf(std::uint8_t* ss, const std::uint8_t kr[64]) {
  keccak::shake256({ss, kSharedSecretBytes}, {kr, 64});
}

void hash_h(std::uint8_t* out, ByteView data) { keccak::sha3_256(std::span<std::uint8_t, 32>(out, 32), data); }

void hash_g(std::uint8_t* out, ByteView data) { keccak::sha3_512(std::span<std::uint8_t, 64>(out, 64), data); }

RingElement from_poly(const Poly& p, Domain domain) {
  RingElement r;
  for (int i = 0; i < kN; ++i) r.coeffs[i] = detail::canonical(p.coeffs[i]);
  r.domain = domain;
  return r;
}

Poly to_poly(const RingElement& r) {
  Poly p;
  for (int i = 0; i < kN; ++i) p.coeffs[i] = static_cast<std::int16_t>(r.coeffs[i] % kQ);
  return p;
}

void require_domain(const RingElement& p, Domain expected, const char* op) {
  if (p.domain != expected) {
    throw ContractViolation(std::string(op) + ": operand is in the " +
                            (p.domain == Domain::ntt ? "NTT" : "normal") + " domain");
  }
}

}  // namespace

const KyberParams& params_for_level(int level) {
  for (const auto& p : kAllParams) {
    if (p.level == level) return p;
  }
  throw InputError("unknown Kyber level " + std::to_string(level));
}

KeyPair keygen(const KyberParams& params, ByteView seed_d, ByteView seed_z, Backend backend) {
  require_length(seed_d, kSeedBytes, "seed_d");
  require_length(seed_z, kSeedBytes, "seed_z");
  const IndCpa cpa(params, kernels_for(backend));
  const auto& l = cpa.sizes();

  Bytes pk(params.sizes.pk_bytes);
  Bytes sk(params.sizes.sk_bytes);
  cpa.keypair(pk.data(), sk.data(), seed_d.data());
  // sk = s || pk || H(pk) || z
  std::memcpy(sk.data() + l.indcpa_sk_bytes, pk.data(), pk.size());
  hash_h(sk.data() + sk.size() - 2 * kSeedBytes, pk);
  std::memcpy(sk.data() + sk.size() - kSeedBytes, seed_z.data(), kSeedBytes);
  return {PublicKey(std::move(pk)), SecretKey(std::move(sk))};
}

Encapsulation encapsulate(const KyberParams& params, ByteView public_key, ByteView seed_m, Backend backend) {
  require_length(public_key, params.sizes.pk_bytes, "public key");
  require_length(seed_m, kSeedBytes, "seed_m");
  const IndCpa cpa(params, kernels_for(backend));

  std::uint8_t buf[64];
  std::uint8_t kr[64];
  hash_h(buf, seed_m);
  hash_h(buf + 32, public_key);
  hash_g(kr, {buf, 64});

  Bytes ct(params.sizes.ct_bytes);
  cpa.encrypt(ct.data(), buf, public_key.data(), kr + 32);
  hash_h(kr + 32, ct);

  Encapsulation out{Ciphertext(std::move(ct)), {}};
  kdf(out.shared_secret.data(), kr);
  return out;
}

SharedSecret decapsulate(const KyberParams& params, ByteView secret_key, ByteView ciphertext, Backend backend) {
  require_length(secret_key, params.sizes.sk_bytes, "secret key");
  require_length(ciphertext, params.sizes.ct_bytes, "ciphertext");
  const IndCpa cpa(params, kernels_for(backend));
  const auto& l = cpa.sizes();
  const std::uint8_t* pk = secret_key.data() + l.indcpa_sk_bytes;
  const std::uint8_t* hpk = secret_key.data() + secret_key.size() - 2 * kSeedBytes;
  const std::uint8_t* z = secret_key.data() + secret_key.size() - kSeedBytes;

  std::uint8_t buf[64];
  std::uint8_t kr[64];
  cpa.decrypt(buf, ciphertext.data(), secret_key.data());
  std::memcpy(buf + 32, hpk, kSeedBytes);
  hash_g(kr, {buf, 64});

  Bytes cmp(params.sizes.ct_bytes);
  cpa.encrypt(cmp.data(), buf, pk, kr + 32);
  const bool fail = !ct_equal(ciphertext, cmp);

  hash_h(kr + 32, ciphertext);
  ct_select({kr, 32}, {z, kSeedBytes}, fail);

  SharedSecret ss{};
  kdf(ss.data(), kr);
  return ss;
}

KeyPair keygen(const KyberParams& params, Backend backend) {
  const auto d = os_random_array<kSeedBytes>();
  const auto z = os_random_array<kSeedBytes>();
  return keygen(params, d, z, backend);
}

Encapsulation encapsulate(const KyberParams& params, ByteView public_key, Backend backend) {
  const auto m = os_random_array<kSeedBytes>();
  return encapsulate(params, public_key, m, backend);
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
  // strip the Montgomery factor left by invntt_tomont
  for (auto& c : t.coeffs) c = detail::montgomery_reduce(c);
  return from_poly(t, Domain::normal);
}

RingElement multiply_ntt(const RingElement& a, const RingElement& b, Backend backend) {
  require_domain(a, Domain::ntt, "multiply_ntt");
  require_domain(b, Domain::ntt, "multiply_ntt");
  const auto& kern = kernels_for(backend);
  const Poly pa = to_poly(a);
  const Poly pb = to_poly(b);
  Poly r;
  kern.basemul_acc(r, &pa, &pb, 1);
  kern.tomont(r);
  return from_poly(r, Domain::ntt);
}

RingElement add(const RingElement& a, const RingElement& b) {
  if (a.domain != b.domain) throw ContractViolation("add: operands are in different domains");
  RingElement r;
  r.domain = a.domain;
  for (int i = 0; i < kN; ++i) r.coeffs[i] = static_cast<std::uint16_t>((a.coeffs[i] + b.coeffs[i]) % kQ);
  return r;
}

RingElement cbd_sample(unsigned eta, ByteView stream) {
  if (eta != 2 && eta != 3) throw InputError("cbd eta must be 2 or 3");
  require_length(stream, 64 * eta, "cbd stream");
  Poly p;
  detail::cbd(p, stream.data(), eta);
  return from_poly(p, Domain::normal);
}

namespace {

void require_depth(unsigned d) {
  if (d != 1 && d != 4 && d != 5 && d != 10 && d != 11) {
    throw InputError("compression depth must be one of 1, 4, 5, 10, 11");
  }
}

}  // namespace

Bytes compress(const RingElement& p, unsigned d, Backend backend) {
  require_depth(d);
  const auto& kern = kernels_for(backend);
  Bytes out(32 * d);
  const Poly t = to_poly(p);
  if (d == 1) {
    kern.to_msg(out.data(), t);
  } else {
    kern.compress(out.data(), t, d);
  }
  return out;
}

RingElement decompress(ByteView bytes, unsigned d, Backend backend) {
  require_depth(d);
  require_length(bytes, 32 * d, "compressed polynomial");
  const auto& kern = kernels_for(backend);
  Poly t;
  if (d == 1) {
    kern.from_msg(t, bytes.data());
  } else {
    kern.decompress(t, bytes.data(), d);
  }
  return from_poly(t, Domain::normal);
}

}  // namespace pqbench::kyber
