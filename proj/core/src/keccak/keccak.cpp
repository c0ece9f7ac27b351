#include "pqbench/keccak.hpp"

#include "pqbench/errors.hpp"

#include <bit>
#include <cstring>

namespace pqbench::keccak {

namespace {

constexpr std::array<std::uint64_t, 24> kRoundConstants = {
    0x0000000000000001ULL, 0x0000000000008082ULL, 0x800000000000808AULL, 0x8000000080008000ULL,
    0x000000000000808BULL, 0x0000000080000001ULL, 0x8000000080008081ULL, 0x8000000000008009ULL,
    0x000000000000008AULL, 0x0000000000000088ULL, 0x0000000080008009ULL, 0x000000008000000AULL,
    0x000000008000808BULL, 0x800000000000008BULL, 0x8000000000008089ULL, 0x8000000000008003ULL,
    0x8000000000008002ULL, 0x8000000000000080ULL, 0x000000000000800AULL, 0x800000008000000AULL,
    0x8000000080008081ULL, 0x8000000000008080ULL, 0x0000000080000001ULL, 0x8000000080008008ULL,
};

// rotation offset of lane x + 5y
constexpr int kRot[25] = {0,  1,  62, 28, 27, 36, 44, 6,  55, 20, 3,  10, 43,
                          25, 39, 41, 45, 15, 21, 8,  18, 2,  61, 56, 14};

bool valid_rate(std::size_t rate) {
  return rate == kShake128Rate || rate == kShake256Rate || rate == 104 || rate == kSha3_512Rate;
}

void xor_byte(Lanes& lanes, std::size_t offset, std::uint8_t value) noexcept {
  lanes[offset / 8] ^= static_cast<std::uint64_t>(value) << (8 * (offset % 8));
}

std::uint8_t get_byte(const Lanes& lanes, std::size_t offset) noexcept {
  return static_cast<std::uint8_t>(lanes[offset / 8] >> (8 * (offset % 8)));
}

}  // namespace

// Fully unrolled so the 25 lanes live in registers; b is the rho+pi image
// of a, lane (x, y) moving to (y, 2x + 3y).
void permute(Lanes& lanes) noexcept {
  std::uint64_t a[25];
  std::uint64_t b[25];
  std::uint64_t c[5];
  std::memcpy(a, lanes.data(), sizeof a);
  for (int round = 0; round < 24; ++round) {
#pragma GCC unroll 5
    for (int x = 0; x < 5; ++x) c[x] = a[x] ^ a[x + 5] ^ a[x + 10] ^ a[x + 15] ^ a[x + 20];
#pragma GCC unroll 25
    for (int i = 0; i < 25; ++i) {
      const int x = i % 5;
      const int y = i / 5;
      const std::uint64_t d = c[(x + 4) % 5] ^ std::rotl(c[(x + 1) % 5], 1);
      b[y + 5 * ((2 * x + 3 * y) % 5)] = std::rotl(a[i] ^ d, kRot[i]);
    }
#pragma GCC unroll 25
    for (int i = 0; i < 25; ++i) {
      const int x = i % 5;
      const int y5 = i - x;
      a[i] = b[i] ^ (~b[y5 + (x + 1) % 5] & b[y5 + (x + 2) % 5]);
    }
    a[0] ^= kRoundConstants[round];
  }
  std::memcpy(lanes.data(), a, sizeof a);
}

SpongeState::SpongeState(std::size_t rate, std::uint8_t domain) : rate_(rate), domain_(domain) {
  if (!valid_rate(rate)) {
    throw InputError("unsupported sponge rate " + std::to_string(rate));
  }
}

SpongeState& SpongeState::absorb(ByteView data) {
  if (phase_ != Phase::absorbing) {
    throw ContractViolation("absorb called after squeezing started");
  }
  std::size_t i = 0;
  // fast path for whole blocks when aligned
  if constexpr (std::endian::native == std::endian::little) {
    while (position_ == 0 && data.size() - i >= rate_) {
      for (std::size_t w = 0; w < rate_ / 8; ++w) {
        std::uint64_t word;
        std::memcpy(&word, data.data() + i + 8 * w, 8);
        lanes_[w] ^= word;
      }
      permute(lanes_);
      i += rate_;
    }
  }
  for (; i < data.size(); ++i) {
    xor_byte(lanes_, position_, data[i]);
    if (++position_ == rate_) {
      permute(lanes_);
      position_ = 0;
    }
  }
  return *this;
}

void SpongeState::finalize() noexcept {
  xor_byte(lanes_, position_, domain_);
  xor_byte(lanes_, rate_ - 1, 0x80);
  permute(lanes_);
  position_ = 0;
  phase_ = Phase::squeezing;
}

void SpongeState::squeeze(std::span<std::uint8_t> out) {
  if (phase_ == Phase::absorbing) finalize();
  for (auto& b : out) {
    if (position_ == rate_) {
      permute(lanes_);
      position_ = 0;
    }
    b = get_byte(lanes_, position_++);
  }
}

void SpongeState::squeeze_blocks(std::uint8_t* out, std::size_t nblocks) {
  if (phase_ == Phase::absorbing) finalize();
  if (position_ != 0 && position_ != rate_) {
    squeeze({out, nblocks * rate_});
    return;
  }
  for (std::size_t blk = 0; blk < nblocks; ++blk) {
    if (position_ == rate_) permute(lanes_);
    if constexpr (std::endian::native == std::endian::little) {
      std::memcpy(out + blk * rate_, lanes_.data(), rate_);
    } else {
      for (std::size_t j = 0; j < rate_; ++j) out[blk * rate_ + j] = get_byte(lanes_, j);
    }
    position_ = rate_;
  }
}

Bytes hash(Sha3Variant variant, ByteView data) {
  if (variant == Sha3Variant::sha3_256) {
    Bytes out(32);
    sha3_256(std::span<std::uint8_t, 32>(out.data(), 32), data);
    return out;
  }
  Bytes out(64);
  sha3_512(std::span<std::uint8_t, 64>(out.data(), 64), data);
  return out;
}

void sha3_256(std::span<std::uint8_t, 32> out, ByteView data) noexcept {
  auto s = SpongeState::sha3_256();
  s.absorb(data);
  s.squeeze(out);
}

void sha3_512(std::span<std::uint8_t, 64> out, ByteView data) noexcept {
  auto s = SpongeState::sha3_512();
  s.absorb(data);
  s.squeeze(out);
}

Bytes xof(XofVariant variant, ByteView data, std::size_t out_len) {
  Bytes out(out_len);
  if (variant == XofVariant::shake128) {
    shake128(out, data);
  } else {
    shake256(out, data);
  }
  return out;
}

void shake128(std::span<std::uint8_t> out, ByteView data) noexcept {
  auto s = SpongeState::shake128();
  s.absorb(data);
  s.squeeze(out);
}

void shake256(std::span<std::uint8_t> out, ByteView data) noexcept {
  auto s = SpongeState::shake256();
  s.absorb(data);
  s.squeeze(out);
}

}  // namespace pqbench::keccak
