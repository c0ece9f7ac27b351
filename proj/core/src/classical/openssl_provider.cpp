// Classical schemes on OpenSSL 3 through the EVP interface. Contexts are
// initialised (curve, padding, digest, peer) when a closure is built so
// the timed call is the bare primitive.

#include "pqbench/classical.hpp"
#include "pqbench/errors.hpp"

#include <openssl/core_names.h>
#include <openssl/crypto.h>
#include <openssl/evp.h>
#include <openssl/rand.h>
#include <openssl/rsa.h>

#include <algorithm>
#include <map>
#include <memory>
#include <vector>

namespace pqbench::classical {

namespace {

using PKey = std::shared_ptr<EVP_PKEY>;
using Ctx = std::shared_ptr<EVP_PKEY_CTX>;
using Buf = std::vector<unsigned char>;

[[noreturn]] void fail(const ClassicalScheme& s, const char* what) {
  throw CapabilityError(std::string(s.id) + ": provider call failed (" + what + ")");
}

PKey wrap(EVP_PKEY* k) { return PKey(k, EVP_PKEY_free); }
Ctx wrap(EVP_PKEY_CTX* c) { return Ctx(c, EVP_PKEY_CTX_free); }

const char* curve_name(int level) {
  switch (level) {
    case 256:
      return "P-256";
    case 384:
      return "P-384";
    default:
      return "P-521";
  }
}

const EVP_MD* digest_for(const ClassicalScheme& s) {
  if (s.family == "rsa") return EVP_sha256();
  switch (s.level) {
    case 256:
      return EVP_sha256();
    case 384:
      return EVP_sha384();
    default:
      return EVP_sha512();
  }
}

bool is_rsa(const ClassicalScheme& s) { return s.family == "rsa"; }

Ctx keygen_ctx(const ClassicalScheme& s) {
  Ctx ctx = wrap(EVP_PKEY_CTX_new_from_name(nullptr, is_rsa(s) ? "RSA" : "EC", nullptr));
  if (!ctx || EVP_PKEY_keygen_init(ctx.get()) <= 0) return nullptr;
  if (is_rsa(s)) {
    if (EVP_PKEY_CTX_set_rsa_keygen_bits(ctx.get(), s.level) <= 0) return nullptr;
  } else {
    char* name = const_cast<char*>(curve_name(s.level));
    const OSSL_PARAM params[] = {
        OSSL_PARAM_construct_utf8_string(OSSL_PKEY_PARAM_GROUP_NAME, name, 0),
        OSSL_PARAM_construct_end(),
    };
    if (EVP_PKEY_CTX_set_params(ctx.get(), params) <= 0) return nullptr;
  }
  return ctx;
}

PKey generate(const ClassicalScheme& s) {
  Ctx ctx = keygen_ctx(s);
  EVP_PKEY* k = nullptr;
  if (!ctx || EVP_PKEY_generate(ctx.get(), &k) <= 0) fail(s, "key generation");
  return wrap(k);
}

Buf random_bytes(std::size_t n) {
  Buf b(n);
  if (RAND_bytes(b.data(), static_cast<int>(n)) != 1) throw CapabilityError("provider RNG failed");
  return b;
}

Buf digest(const ClassicalScheme& s, const Buf& msg) {
  Buf out(EVP_MAX_MD_SIZE);
  unsigned len = 0;
  if (EVP_Digest(msg.data(), msg.size(), out.data(), &len, digest_for(s), nullptr) != 1) fail(s, "digest");
  out.resize(len);
  return out;
}

}  // namespace

struct ProviderState {
  // long-lived keys: RSA generation is far too slow to repeat per closure
  std::map<std::string, PKey, std::less<>> keys;

  PKey key(const ClassicalScheme& s, int slot = 0) {
    std::string name = std::string(s.id) + "#" + std::to_string(slot);
    auto it = keys.find(name);
    if (it != keys.end()) return it->second;
    PKey k = generate(s);
    keys.emplace(std::move(name), k);
    return k;
  }
};

namespace {

Ctx ctx_for(const ClassicalScheme& s, const PKey& key) {
  Ctx ctx = wrap(EVP_PKEY_CTX_new_from_pkey(nullptr, key.get(), nullptr));
  if (!ctx) fail(s, "context");
  return ctx;
}

Ctx agree_ctx(const ClassicalScheme& s, const PKey& own, const PKey& peer) {
  Ctx ctx = ctx_for(s, own);
  if (EVP_PKEY_derive_init(ctx.get()) <= 0 || EVP_PKEY_derive_set_peer(ctx.get(), peer.get()) <= 0) {
    fail(s, "derive init");
  }
  return ctx;
}

Buf derive(const ClassicalScheme& s, EVP_PKEY_CTX* ctx) {
  std::size_t len = 0;
  if (EVP_PKEY_derive(ctx, nullptr, &len) <= 0) fail(s, "derive");
  Buf out(len);
  if (EVP_PKEY_derive(ctx, out.data(), &len) <= 0) fail(s, "derive");
  out.resize(len);
  return out;
}

Ctx sign_ctx(const ClassicalScheme& s, const PKey& key, bool verify) {
  Ctx ctx = ctx_for(s, key);
  const int init = verify ? EVP_PKEY_verify_init(ctx.get()) : EVP_PKEY_sign_init(ctx.get());
  if (init <= 0 || EVP_PKEY_CTX_set_signature_md(ctx.get(), digest_for(s)) <= 0) fail(s, "sign init");
  if (is_rsa(s) && (EVP_PKEY_CTX_set_rsa_padding(ctx.get(), RSA_PKCS1_PSS_PADDING) <= 0 ||
                    EVP_PKEY_CTX_set_rsa_pss_saltlen(ctx.get(), RSA_PSS_SALTLEN_DIGEST) <= 0)) {
    fail(s, "pss padding");
  }
  return ctx;
}

Buf sign(const ClassicalScheme& s, EVP_PKEY_CTX* ctx, const Buf& dgst) {
  std::size_t len = 0;
  if (EVP_PKEY_sign(ctx, nullptr, &len, dgst.data(), dgst.size()) <= 0) fail(s, "sign");
  Buf out(len);
  if (EVP_PKEY_sign(ctx, out.data(), &len, dgst.data(), dgst.size()) <= 0) fail(s, "sign");
  out.resize(len);
  return out;
}

Ctx oaep_ctx(const ClassicalScheme& s, const PKey& key, bool decrypt) {
  Ctx ctx = ctx_for(s, key);
  const int init = decrypt ? EVP_PKEY_decrypt_init(ctx.get()) : EVP_PKEY_encrypt_init(ctx.get());
  if (init <= 0 || EVP_PKEY_CTX_set_rsa_padding(ctx.get(), RSA_PKCS1_OAEP_PADDING) <= 0 ||
      EVP_PKEY_CTX_set_rsa_oaep_md(ctx.get(), EVP_sha256()) <= 0) {
    fail(s, "oaep init");
  }
  return ctx;
}

Buf crypt(const ClassicalScheme& s, EVP_PKEY_CTX* ctx, const Buf& in, bool decrypt) {
  auto call = decrypt ? EVP_PKEY_decrypt : EVP_PKEY_encrypt;
  std::size_t len = 0;
  if (call(ctx, nullptr, &len, in.data(), in.size()) <= 0) fail(s, decrypt ? "decrypt" : "encrypt");
  Buf out(len);
  if (call(ctx, out.data(), &len, in.data(), in.size()) <= 0) fail(s, decrypt ? "decrypt" : "encrypt");
  out.resize(len);
  return out;
}

// A 32-byte session key, the payload RSA carries in a key transport.
constexpr std::size_t kPayload = 32;

}  // namespace

ProviderHandle probe_provider(const ProbeOptions& options) {
  ProviderHandle h;
  if (options.disable_provider) return h;
  h.name_ = OpenSSL_version(OPENSSL_VERSION);
  h.state_ = std::make_shared<ProviderState>();
  for (std::size_t i = 0; i < kSchemes.size(); ++i) {
    const auto& s = kSchemes[i];
    if (std::find(options.deny.begin(), options.deny.end(), s.id) != options.deny.end()) continue;
    // a configured keygen context is enough; RSA keys are generated lazily
    h.caps_[i] = keygen_ctx(s) != nullptr && digest_for(s) != nullptr;
  }
  return h;
}

bench::Work run_classical_op(const ProviderHandle& handle, const ClassicalScheme& s, Op op) {
  if (!handle.available(s)) throw CapabilityError(std::string(s.id) + " is not available from the provider");
  const auto ops = supported_ops(s);
  if (std::find(ops.begin(), ops.end(), op) == ops.end()) {
    throw CapabilityError(std::string(to_string(op)) + " is not an operation of " + std::string(s.id));
  }
  ProviderState& st = *handle.state_;
  switch (op) {
    case Op::keygen: {
      Ctx ctx = keygen_ctx(s);
      if (!ctx) fail(s, "keygen init");
      return [ctx, s] {
        EVP_PKEY* k = nullptr;
        if (EVP_PKEY_generate(ctx.get(), &k) <= 0) fail(s, "key generation");
        EVP_PKEY_free(k);
      };
    }
    case Op::agree: {
      Ctx ctx = agree_ctx(s, st.key(s, 0), st.key(s, 1));
      return [ctx, s] { (void)derive(s, ctx.get()); };
    }
    case Op::sign: {
      Ctx ctx = sign_ctx(s, st.key(s), false);
      Buf dgst = digest(s, random_bytes(64));
      return [ctx, dgst, s] { (void)sign(s, ctx.get(), dgst); };
    }
    case Op::verify: {
      const PKey key = st.key(s);
      const Buf dgst = digest(s, random_bytes(64));
      const Buf sig = sign(s, sign_ctx(s, key, false).get(), dgst);
      Ctx ctx = sign_ctx(s, key, true);
      return [ctx, dgst, sig, s] {
        if (EVP_PKEY_verify(ctx.get(), sig.data(), sig.size(), dgst.data(), dgst.size()) != 1) fail(s, "verify");
      };
    }
    case Op::encrypt: {
      Ctx ctx = oaep_ctx(s, st.key(s), false);
      Buf msg = random_bytes(kPayload);
      return [ctx, msg, s] { (void)crypt(s, ctx.get(), msg, false); };
    }
    case Op::decrypt: {
      const PKey key = st.key(s);
      const Buf ct = crypt(s, oaep_ctx(s, key, false).get(), random_bytes(kPayload), false);
      Ctx ctx = oaep_ctx(s, key, true);
      return [ctx, ct, s] { (void)crypt(s, ctx.get(), ct, true); };
    }
  }
  throw CapabilityError("unknown operation");
}

bool roundtrip_check(const ProviderHandle& handle, const ClassicalScheme& s) {
  if (!handle.available(s)) throw CapabilityError(std::string(s.id) + " is not available from the provider");
  ProviderState& st = *handle.state_;
  try {
    if (s.family == "ecdh") {
      const PKey a = st.key(s, 0), b = st.key(s, 1);
      const Buf ab = derive(s, agree_ctx(s, a, b).get());
      const Buf ba = derive(s, agree_ctx(s, b, a).get());
      return !ab.empty() && ab == ba;
    }
    const PKey key = st.key(s);
    const Buf dgst = digest(s, random_bytes(64));
    const Buf sig = sign(s, sign_ctx(s, key, false).get(), dgst);
    Ctx vctx = sign_ctx(s, key, true);
    if (EVP_PKEY_verify(vctx.get(), sig.data(), sig.size(), dgst.data(), dgst.size()) != 1) return false;
    Buf bad = dgst;
    bad[0] ^= 1;
    if (EVP_PKEY_verify(vctx.get(), sig.data(), sig.size(), bad.data(), bad.size()) == 1) return false;
    if (is_rsa(s)) {
      const Buf msg = random_bytes(kPayload);
      const Buf ct = crypt(s, oaep_ctx(s, key, false).get(), msg, false);
      if (crypt(s, oaep_ctx(s, key, true).get(), ct, true) != msg) return false;
    }
    return true;
  } catch (const CapabilityError&) {
    return false;
  }
}

}  // namespace pqbench::classical
