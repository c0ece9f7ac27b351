#include "keccak_x4.hpp"

#include "pqbench/keccak.hpp"

namespace pqbench::keccak::detail {

void permute_x4_portable(std::uint64_t (*state)[4]) noexcept {
  for (int j = 0; j < 4; ++j) {
    Lanes lanes;
    for (int i = 0; i < 25; ++i) lanes[i] = state[i][j];
    permute(lanes);
    for (int i = 0; i < 25; ++i) state[i][j] = lanes[i];
  }
}

SpongeX4::SpongeX4(std::size_t rate, PermuteX4Fn permute) noexcept : rate_(rate), permute_(permute) {}

void SpongeX4::absorb_once(const std::uint8_t* const in[4], std::size_t len,
                           std::uint8_t domain) noexcept {
  for (auto& lane : state_) {
    for (auto& w : lane) w = 0;
  }
  std::size_t offset = 0;
  while (len - offset >= rate_) {
    for (std::size_t i = 0; i < rate_ / 8; ++i) {
      for (int j = 0; j < 4; ++j) {
        std::uint64_t w = 0;
        for (int b = 0; b < 8; ++b) {
          w |= static_cast<std::uint64_t>(in[j][offset + 8 * i + b]) << (8 * b);
        }
        state_[i][j] ^= w;
      }
    }
    permute_(state_);
    offset += rate_;
  }
  for (std::size_t i = offset; i < len; ++i) {
    const std::size_t pos = i - offset;
    for (int j = 0; j < 4; ++j) {
      state_[pos / 8][j] ^= static_cast<std::uint64_t>(in[j][i]) << (8 * (pos % 8));
    }
  }
  const std::size_t pos = len - offset;
  for (int j = 0; j < 4; ++j) {
    state_[pos / 8][j] ^= static_cast<std::uint64_t>(domain) << (8 * (pos % 8));
    state_[(rate_ - 1) / 8][j] ^= 0x80ULL << (8 * ((rate_ - 1) % 8));
  }
}

void SpongeX4::squeeze_blocks(std::uint8_t* const out[4], std::size_t nblocks) noexcept {
  for (std::size_t blk = 0; blk < nblocks; ++blk) {
    permute_(state_);
    for (std::size_t i = 0; i < rate_ / 8; ++i) {
      for (int j = 0; j < 4; ++j) {
        const std::uint64_t w = state_[i][j];
        std::uint8_t* dst = out[j] + blk * rate_ + 8 * i;
        for (int b = 0; b < 8; ++b) dst[b] = static_cast<std::uint8_t>(w >> (8 * b));
      }
    }
  }
}

#if !defined(PQBENCH_HAVE_AVX2)
PermuteX4Fn permute_x4_avx2() noexcept { return nullptr; }
#endif

}  // namespace pqbench::keccak::detail
