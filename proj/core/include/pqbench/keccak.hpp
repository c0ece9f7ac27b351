#pragma once

#include "pqbench/bytes.hpp"

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>

namespace pqbench::keccak {

using Lanes = std::array<std::uint64_t, 25>;

inline constexpr std::size_t kShake128Rate = 168;
inline constexpr std::size_t kShake256Rate = 136;
inline constexpr std::size_t kSha3_256Rate = 136;
inline constexpr std::size_t kSha3_512Rate = 72;

/// 24-round Keccak-f[1600] applied in place. Lane i holds the little-endian
/// word at byte offset 8*i of the state.
void permute(Lanes& lanes) noexcept;

enum class Sha3Variant { sha3_256, sha3_512 };
enum class XofVariant { shake128, shake256 };

/// Incremental Keccak sponge with FIPS-202 padding.
///
/// Absorb any number of times, then squeeze any number of times; the first
/// squeeze closes the absorbing phase. Squeezed output is one continuous
/// stream, so squeeze(a) followed by squeeze(b) equals a single squeeze(a+b).
/// Instances are single-owner.
class SpongeState {
 public:
  enum class Phase { absorbing, squeezing };

  /// rate must be one of 168, 136, 104, 72. domain is the padding suffix
  /// byte (0x06 for SHA-3, 0x1F for SHAKE). Throws InputError.
  SpongeState(std::size_t rate, std::uint8_t domain);

  static SpongeState shake128() { return {kShake128Rate, 0x1F}; }
  static SpongeState shake256() { return {kShake256Rate, 0x1F}; }
  static SpongeState sha3_256() { return {kSha3_256Rate, 0x06}; }
  static SpongeState sha3_512() { return {kSha3_512Rate, 0x06}; }

  /// Throws ContractViolation once squeezing has started.
  SpongeState& absorb(ByteView data);

  void squeeze(std::span<std::uint8_t> out);

  /// Squeezes whole rate-sized blocks. Requires the stream to be block
  /// aligned (no partial squeeze before); otherwise falls back to squeeze().
  void squeeze_blocks(std::uint8_t* out, std::size_t nblocks);

  [[nodiscard]] std::size_t rate() const noexcept { return rate_; }
  [[nodiscard]] std::size_t position() const noexcept { return position_; }
  [[nodiscard]] Phase phase() const noexcept { return phase_; }
  [[nodiscard]] const Lanes& lanes() const noexcept { return lanes_; }

 private:
  void finalize() noexcept;

  Lanes lanes_{};
  std::size_t rate_;
  std::size_t position_ = 0;
  Phase phase_ = Phase::absorbing;
  std::uint8_t domain_;
};

/// One-shot SHA3-256 / SHA3-512. Output is 32 or 64 bytes.
Bytes hash(Sha3Variant variant, ByteView data);

void sha3_256(std::span<std::uint8_t, 32> out, ByteView data) noexcept;
void sha3_512(std::span<std::uint8_t, 64> out, ByteView data) noexcept;

/// First out_len bytes of SHAKE128/SHAKE256(data).
Bytes xof(XofVariant variant, ByteView data, std::size_t out_len);

void shake128(std::span<std::uint8_t> out, ByteView data) noexcept;
void shake256(std::span<std::uint8_t> out, ByteView data) noexcept;

}  // namespace pqbench::keccak
