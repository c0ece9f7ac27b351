#include "pqbench/backend.hpp"
#include "pqbench/errors.hpp"
#include "pqbench/keccak.hpp"

#include "kat_file.hpp"
#include "unit/test_data.hpp"
#include "keccak/keccak_x4.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace pqbench;
using namespace pqbench::keccak;

namespace {

// Byte-aligned entries only; the bit-oriented lengths are not exercised by
// the byte-level API.
struct Vector {
  Bytes msg;
  Bytes md;
};

std::vector<Vector> load_vectors(const std::string& file) {
  std::vector<Vector> out;
  for (const auto& rec : cli::load_kat(test::data_path("keccak/" + file))) {
    const long long bits = rec.integer("Len");
    if (bits % 8 != 0) continue;
    Bytes msg = rec.bytes("Msg");
    msg.resize(static_cast<std::size_t>(bits / 8));  // Len = 0 lists Msg = 00
    out.push_back({std::move(msg), rec.bytes("MD")});
  }
  return out;
}

}  // namespace

TEST(KeccakPermutation, ZeroStateFirstLane) {
  Lanes s{};
  permute(s);
  EXPECT_EQ(s[0], 0xF1258F7940E1DDE7ULL);
  EXPECT_EQ(s[1], 0x84D5CCF933C0478AULL);
  permute(s);
  EXPECT_EQ(s[0], 0x2D5C954DF96ECB3CULL);
}

TEST(KeccakVectors, Sha3_256ShortMessages) {
  const auto vectors = load_vectors("ShortMsgKAT_SHA3-256.txt");
  ASSERT_GE(vectors.size(), 200u);
  for (const auto& v : vectors) {
    EXPECT_EQ(to_hex(hash(Sha3Variant::sha3_256, v.msg)), to_hex(v.md)) << "len " << v.msg.size();
  }
}

TEST(KeccakVectors, Sha3_512ShortMessages) {
  const auto vectors = load_vectors("ShortMsgKAT_SHA3-512.txt");
  ASSERT_GE(vectors.size(), 200u);
  for (const auto& v : vectors) {
    EXPECT_EQ(to_hex(hash(Sha3Variant::sha3_512, v.msg)), to_hex(v.md)) << "len " << v.msg.size();
  }
}

TEST(KeccakVectors, Shake128ShortMessages) {
  const auto vectors = load_vectors("ShortMsgKAT_SHAKE128.txt");
  ASSERT_GE(vectors.size(), 200u);
  for (const auto& v : vectors) {
    EXPECT_EQ(to_hex(xof(XofVariant::shake128, v.msg, v.md.size())), to_hex(v.md)) << "len " << v.msg.size();
  }
}

TEST(KeccakVectors, Shake256ShortMessages) {
  const auto vectors = load_vectors("ShortMsgKAT_SHAKE256.txt");
  ASSERT_GE(vectors.size(), 200u);
  for (const auto& v : vectors) {
    EXPECT_EQ(to_hex(xof(XofVariant::shake256, v.msg, v.md.size())), to_hex(v.md)) << "len " << v.msg.size();
  }
}

TEST(KeccakSponge, EmptyInputDigests) {
  EXPECT_EQ(to_hex(hash(Sha3Variant::sha3_256, {})),
            "A7FFC6F8BF1ED76651C14756A061D662F580FF4DE43B49FA82D80A4B80F8434A");
  EXPECT_EQ(to_hex(xof(XofVariant::shake128, {}, 16)), "7F9C2BA4E88F827D616045507605853E");
}

TEST(KeccakSponge, SqueezeIsPrefixConsistent) {
  std::mt19937 rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    Bytes msg(rng() % 400);
    for (auto& b : msg) b = static_cast<std::uint8_t>(rng());
    const std::size_t n = 1 + rng() % 600;
    const std::size_t m = rng() % 600;
    const Bytes longer = xof(XofVariant::shake256, msg, n + m);
    const Bytes shorter = xof(XofVariant::shake256, msg, n);
    ASSERT_TRUE(std::equal(shorter.begin(), shorter.end(), longer.begin()));

    // incremental squeezes in arbitrary chunks match the one-shot stream
    auto sponge = SpongeState::shake256();
    sponge.absorb(msg);
    Bytes pieced(n + m);
    std::size_t done = 0;
    while (done < pieced.size()) {
      const std::size_t step = std::min<std::size_t>(1 + rng() % 200, pieced.size() - done);
      sponge.squeeze(std::span(pieced).subspan(done, step));
      done += step;
    }
    ASSERT_EQ(pieced, longer);
  }
}

TEST(KeccakSponge, ChunkedAbsorbMatchesOneShot) {
  std::mt19937 rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    Bytes msg(rng() % 1000);
    for (auto& b : msg) b = static_cast<std::uint8_t>(rng());
    auto sponge = SpongeState::shake128();
    std::size_t done = 0;
    while (done < msg.size()) {
      const std::size_t step = std::min<std::size_t>(rng() % 300, msg.size() - done);
      sponge.absorb(ByteView(msg).subspan(done, step));
      done += step;
    }
    Bytes out(64);
    sponge.squeeze(out);
    ASSERT_EQ(out, xof(XofVariant::shake128, msg, 64));
  }
}

TEST(KeccakSponge, SqueezeBlocksMatchesStream) {
  const Bytes msg = {1, 2, 3};
  auto sponge = SpongeState::shake128();
  sponge.absorb(msg);
  Bytes blocks(3 * kShake128Rate);
  sponge.squeeze_blocks(blocks.data(), 2);
  sponge.squeeze_blocks(blocks.data() + 2 * kShake128Rate, 1);
  EXPECT_EQ(blocks, xof(XofVariant::shake128, msg, blocks.size()));
}

TEST(KeccakSponge, AbsorbAfterSqueezeIsRejected) {
  auto sponge = SpongeState::sha3_256();
  Bytes out(32);
  sponge.squeeze(out);
  const Bytes more = {0};
  EXPECT_THROW(sponge.absorb(more), ContractViolation);
}

TEST(KeccakSponge, InvalidRateIsRejected) {
  EXPECT_THROW(SpongeState(100, 0x1F), InputError);
  EXPECT_THROW(SpongeState(0, 0x1F), InputError);
}

TEST(KeccakX4, MatchesScalarSponge) {
  std::vector<detail::PermuteX4Fn> impls = {detail::permute_x4_portable};
  if (auto* avx2 = detail::permute_x4_avx2(); avx2 != nullptr && accelerated_available()) impls.push_back(avx2);
  std::mt19937 rng(3);
  for (auto impl : impls) {
    for (std::size_t rate : {kShake128Rate, kShake256Rate}) {
      const std::size_t len = 34;
      std::array<Bytes, 4> in;
      for (auto& v : in) {
        v.resize(len);
        for (auto& b : v) b = static_cast<std::uint8_t>(rng());
      }
      detail::SpongeX4 x4(rate, impl);
      const std::uint8_t* ins[4] = {in[0].data(), in[1].data(), in[2].data(), in[3].data()};
      x4.absorb_once(ins, len, 0x1F);
      std::array<Bytes, 4> out;
      std::uint8_t* outs[4];
      for (int j = 0; j < 4; ++j) {
        out[j].resize(3 * rate);
        outs[j] = out[j].data();
      }
      x4.squeeze_blocks(outs, 3);
      const auto variant = rate == kShake128Rate ? XofVariant::shake128 : XofVariant::shake256;
      for (int j = 0; j < 4; ++j) EXPECT_EQ(out[j], xof(variant, in[j], 3 * rate));
    }
  }
}
