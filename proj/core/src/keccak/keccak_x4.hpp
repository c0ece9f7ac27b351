#pragma once

// Four independent Keccak sponges advanced in lock step. Used by the
// accelerated kernels for matrix expansion and noise sampling, where four
// equal-length seeds are hashed at once.

#include <cstddef>
#include <cstdint>

namespace pqbench::keccak::detail {

/// state[i][j] is lane i of instance j.
using PermuteX4Fn = void (*)(std::uint64_t (*state)[4]);

void permute_x4_portable(std::uint64_t (*state)[4]) noexcept;

/// AVX2 implementation, or nullptr when not compiled in.
PermuteX4Fn permute_x4_avx2() noexcept;

class SpongeX4 {
 public:
  SpongeX4(std::size_t rate, PermuteX4Fn permute) noexcept;

  /// Absorbs four messages of identical length and applies padding.
  void absorb_once(const std::uint8_t* const in[4], std::size_t len, std::uint8_t domain) noexcept;

  /// Squeezes nblocks rate-sized blocks into each of the four outputs.
  void squeeze_blocks(std::uint8_t* const out[4], std::size_t nblocks) noexcept;

   private:
  alignas(32) std::uint64_t state_[25][4] = {};
  std::size_t rate_;
  PermuteX4Fn permute_;
};

}  // namespace pqbench::keccak::detail
