#include "pqbench/errors.hpp"
#include "pqbench/keccak.hpp"
#include "pqbench/kyber.hpp"

#include "kat_file.hpp"
#include "nist_drbg.hpp"
#include "unit/test_data.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace pqbench;
using namespace pqbench::kyber;

namespace {

std::vector<Backend> backends() {
  std::vector<Backend> out = {Backend::reference};
  if (accelerated_available()) out.push_back(Backend::accelerated);
  return out;
}

RingElement random_element(std::mt19937& rng) {
  RingElement p;
  for (auto& c : p.coeffs) c = static_cast<std::uint16_t>(rng() % kQ);
  return p;
}

// Negacyclic schoolbook product, the oracle for the NTT path.
RingElement schoolbook(const RingElement& a, const RingElement& b) {
  std::array<std::int64_t, kN> acc{};
  for (int i = 0; i < kN; ++i) {
    for (int j = 0; j < kN; ++j) {
      const std::int64_t prod = static_cast<std::int64_t>(a.coeffs[i]) * b.coeffs[j];
      if (i + j < kN) {
        acc[i + j] += prod;
      } else {
        acc[i + j - kN] -= prod;
      }
    }
  }
  RingElement r;
  for (int i = 0; i < kN; ++i) r.coeffs[i] = static_cast<std::uint16_t>(((acc[i] % kQ) + kQ) % kQ);
  return r;
}

struct KatCase {
  const KyberParams* params;
  const char* file;
};

class KyberKat : public ::testing::TestWithParam<std::tuple<KatCase, Backend>> {};

}  // namespace

TEST_P(KyberKat, ReplaysAllRecords) {
  const auto [kat, backend] = GetParam();
  const auto records = cli::load_kat(test::data_path(std::string("kat/") + kat.file));
  ASSERT_EQ(records.size(), 100u);
  for (const auto& rec : records) {
    const Bytes seed = rec.bytes("seed");
    ASSERT_EQ(seed.size(), 48u);
    cli::NistDrbg drbg(std::span<const std::uint8_t, 48>(seed.data(), 48));
    const auto d = drbg.generate<32>();
    const auto z = drbg.generate<32>();
    const KeyPair kp = keygen(*kat.params, d, z, backend);
    ASSERT_EQ(to_hex(kp.public_key), rec.text("pk")) << "count " << rec.text("count");
    ASSERT_EQ(to_hex(kp.secret_key), rec.text("sk")) << "count " << rec.text("count");

    const auto m = drbg.generate<32>();
    const Encapsulation enc = encapsulate(*kat.params, kp.public_key, m, backend);
    ASSERT_EQ(to_hex(enc.ciphertext), rec.text("ct")) << "count " << rec.text("count");
    ASSERT_EQ(to_hex(enc.shared_secret), rec.text("ss")) << "count " << rec.text("count");

    const SharedSecret dec = decapsulate(*kat.params, kp.secret_key, enc.ciphertext, backend);
    ASSERT_EQ(dec, enc.shared_secret);
  }
}

INSTANTIATE_TEST_SUITE_P(AllLevels, KyberKat,
                         ::testing::Combine(::testing::Values(KatCase{&kKyber512, "PQCkemKAT_1632.rsp"},
                                                              KatCase{&kKyber768, "PQCkemKAT_2400.rsp"},
                                                              KatCase{&kKyber1024, "PQCkemKAT_3168.rsp"}),
                                            ::testing::ValuesIn(backends())),
                         [](const auto& info) {
                           return std::string(std::get<0>(info.param).params->name) + "_" +
                                  std::string(to_string(std::get<1>(info.param)));
                         });

TEST(KyberKem, SizesMatchParameterSets) {
  for (const auto& p : kAllParams) {
    const KeyPair kp = keygen(p);
    EXPECT_EQ(kp.public_key.size(), p.sizes.pk_bytes);
    EXPECT_EQ(kp.secret_key.size(), p.sizes.sk_bytes);
    const Encapsulation enc = encapsulate(p, kp.public_key);
    EXPECT_EQ(enc.ciphertext.size(), p.sizes.ct_bytes);
  }
  EXPECT_EQ(kKyber512.sizes.sk_bytes, 1632u);
  EXPECT_EQ(kKyber1024.sizes.ct_bytes, 1568u);
}

TEST(KyberKem, RandomRoundTrips) {
  for (const auto backend : backends()) {
    for (const auto& p : kAllParams) {
      for (int i = 0; i < 20; ++i) {
        const KeyPair kp = keygen(p, backend);
        const Encapsulation enc = encapsulate(p, kp.public_key, backend);
        EXPECT_EQ(decapsulate(p, kp.secret_key, enc.ciphertext, backend), enc.shared_secret);
      }
    }
  }
}

TEST(KyberKem, TamperedCiphertextGivesRejectionSecret) {
  std::mt19937 rng(5);
  for (const auto& p : kAllParams) {
    const KeyPair kp = keygen(p);
    const Encapsulation enc = encapsulate(p, kp.public_key);
    const Bytes& sk = kp.secret_key.bytes();
    const ByteView z = ByteView(sk).subspan(sk.size() - 32);
    for (int i = 0; i < 10; ++i) {
      Bytes ct = enc.ciphertext.bytes();
      ct[rng() % ct.size()] ^= static_cast<std::uint8_t>(1u << (rng() % 8));
      const SharedSecret ss = decapsulate(p, kp.secret_key, ct);
      EXPECT_NE(ss, enc.shared_secret);
      // implicit rejection: KDF(z || H(c'))
      Bytes kr(z.begin(), z.end());
      const Bytes hc = keccak::hash(keccak::Sha3Variant::sha3_256, ct);
      kr.insert(kr.end(), hc.begin(), hc.end());
      const Bytes expected = keccak::xof(keccak::XofVariant::shake256, kr, 32);
      EXPECT_TRUE(std::equal(ss.begin(), ss.end(), expected.begin()));
    }
  }
}

TEST(KyberKem, WrongLengthsAreRejected) {
  const Bytes short_seed(31);
  const Bytes seed(32);
  EXPECT_THROW(keygen(kKyber512, short_seed, seed), InputError);
  const KeyPair kp = keygen(kKyber512);
  EXPECT_THROW(encapsulate(kKyber512, Bytes(799), seed), InputError);
  EXPECT_THROW(decapsulate(kKyber512, kp.secret_key, Bytes(767)), InputError);
  EXPECT_THROW(decapsulate(kKyber768, kp.secret_key, Bytes(1088)), InputError);
  EXPECT_THROW(params_for_level(256), InputError);
  EXPECT_EQ(params_for_level(768).k, 3u);
}

TEST(KyberRing, NttProductMatchesSchoolbook) {
  std::mt19937 rng(17);
  for (const auto backend : backends()) {
    for (int trial = 0; trial < 20; ++trial) {
      const RingElement a = random_element(rng);
      const RingElement b = random_element(rng);
      const RingElement prod = inv_ntt(multiply_ntt(ntt(a, backend), ntt(b, backend), backend), backend);
      EXPECT_EQ(prod, schoolbook(a, b));
    }
  }
}

TEST(KyberRing, NttRoundTripIsIdentity) {
  std::mt19937 rng(19);
  for (const auto backend : backends()) {
    for (int trial = 0; trial < 200; ++trial) {
      const RingElement a = random_element(rng);
      const RingElement t = ntt(a, backend);
      EXPECT_EQ(t.domain, Domain::ntt);
      EXPECT_EQ(inv_ntt(t, backend), a);
    }
  }
}

TEST(KyberRing, NttOfMonomialOneIsAllOnes) {
  RingElement one;
  one.coeffs[0] = 1;
  const RingElement t = ntt(one, Backend::reference);
  for (int i = 0; i < kN; ++i) EXPECT_EQ(t.coeffs[i], i % 2 == 0 ? 1 : 0) << i;
}

TEST(KyberRing, DomainMisuseIsRejected) {
  RingElement a;
  EXPECT_THROW(inv_ntt(a), ContractViolation);
  const RingElement t = ntt(a);
  EXPECT_THROW(ntt(t), ContractViolation);
  EXPECT_THROW(multiply_ntt(a, a), ContractViolation);
  EXPECT_THROW(add(a, t), ContractViolation);
}

TEST(KyberRing, BackendsAgreeOnNtt) {
  if (!accelerated_available()) GTEST_SKIP() << "no accelerated backend on this machine";
  std::mt19937 rng(23);
  for (int trial = 0; trial < 200; ++trial) {
    const RingElement a = random_element(rng);
    EXPECT_EQ(ntt(a, Backend::reference), ntt(a, Backend::accelerated));
  }
}

TEST(KyberCompression, RoundTripErrorIsBounded) {
  for (unsigned d : {1u, 4u, 5u, 10u, 11u}) {
    // exhaustive over Z_q, one coefficient position at a time
    const int bound = (kQ + (1 << (d + 1)) - 1) >> (d + 1);  // ceil(q / 2^(d+1))
    for (int base = 0; base < kQ; base += kN) {
      RingElement p;
      for (int i = 0; i < kN; ++i) p.coeffs[i] = static_cast<std::uint16_t>((base + i) % kQ);
      const Bytes packed = compress(p, d);
      ASSERT_EQ(packed.size(), 32u * d);
      const RingElement back = decompress(packed, d);
      for (int i = 0; i < kN; ++i) {
        int diff = std::abs(static_cast<int>(back.coeffs[i]) - static_cast<int>(p.coeffs[i]));
        diff = std::min(diff, kQ - diff);
        ASSERT_LE(diff, bound) << "d=" << d << " x=" << p.coeffs[i];
      }
    }
  }
}

TEST(KyberCompression, DecompressThenCompressIsIdentity) {
  std::mt19937 rng(29);
  for (unsigned d : {1u, 4u, 5u, 10u, 11u}) {
    Bytes packed(32 * d);
    for (auto& b : packed) b = static_cast<std::uint8_t>(rng());
    EXPECT_EQ(compress(decompress(packed, d), d), packed) << "d=" << d;
  }
}

TEST(KyberCompression, BackendsAgreeExhaustively) {
  if (!accelerated_available()) GTEST_SKIP() << "no accelerated backend on this machine";
  std::mt19937 rng(37);
  for (unsigned d : {1u, 4u, 5u, 10u, 11u}) {
    for (int base = 0; base < kQ; base += kN) {
      RingElement p;
      for (int i = 0; i < kN; ++i) p.coeffs[i] = static_cast<std::uint16_t>((base + i) % kQ);
      ASSERT_EQ(compress(p, d, Backend::reference), compress(p, d, Backend::accelerated)) << "d=" << d;
    }
    for (int trial = 0; trial < 50; ++trial) {
      Bytes packed(32 * d);
      for (auto& b : packed) b = static_cast<std::uint8_t>(rng());
      ASSERT_EQ(decompress(packed, d, Backend::reference), decompress(packed, d, Backend::accelerated)) << "d=" << d;
    }
  }
}

TEST(KyberCompression, InvalidWidthIsRejected) {
  RingElement p;
  EXPECT_THROW(compress(p, 3), InputError);
  EXPECT_THROW(decompress(Bytes(32 * 4 - 1), 4), InputError);
}

TEST(KyberCbd, SupportAndMoments) {
  std::mt19937 rng(31);
  for (unsigned eta : {2u, 3u}) {
    std::vector<long> hist(2 * eta + 1, 0);
    long total = 0;
    double sum = 0, sum_sq = 0;
    for (int trial = 0; trial < 400; ++trial) {
      Bytes stream(64 * eta);
      for (auto& b : stream) b = static_cast<std::uint8_t>(rng());
      const RingElement p = cbd_sample(eta, stream);
      for (auto c : p.coeffs) {
        int v = c > kQ / 2 ? static_cast<int>(c) - kQ : c;
        ASSERT_LE(std::abs(v), static_cast<int>(eta));
        ++hist[static_cast<std::size_t>(v + static_cast<int>(eta))];
        sum += v;
        sum_sq += static_cast<double>(v) * v;
        ++total;
      }
    }
    const double mean = sum / total;
    const double var = sum_sq / total - mean * mean;
    EXPECT_NEAR(mean, 0.0, 0.02);
    EXPECT_NEAR(var, eta / 2.0, 0.03);
    // binomial pmf C(2eta, eta+v) / 4^eta, checked within 5 sigma
    for (int v = -static_cast<int>(eta); v <= static_cast<int>(eta); ++v) {
      double binom = 1;
      for (unsigned i = 0; i < eta + static_cast<unsigned>(v); ++i) binom = binom * (2 * eta - i) / (i + 1);
      const double p = binom / std::pow(4.0, eta);
      const double sigma = std::sqrt(p * (1 - p) / total);
      EXPECT_NEAR(static_cast<double>(hist[static_cast<std::size_t>(v + static_cast<int>(eta))]) / total, p,
                  5 * sigma)
          << "eta=" << eta << " v=" << v;
    }
  }
}

TEST(KyberCbd, WrongStreamLengthIsRejected) {
  EXPECT_THROW(cbd_sample(2, Bytes(127)), InputError);
  EXPECT_THROW(cbd_sample(4, Bytes(256)), InputError);
}
