#pragma once

// AES-256 CTR_DRBG (no derivation function, no reseeding) as used by the
// post-quantum submission packages to generate known-answer-test files.
// Only for replaying those files: it is not constant time and never touches
// the schemes themselves.

#include "pqbench/bytes.hpp"

#include <array>
#include <cstdint>
#include <span>

namespace pqbench::cli {

/// FIPS-197 AES-256, encryption direction only.
class Aes256 {
 public:
  explicit Aes256(std::span<const std::uint8_t, 32> key) noexcept;
  void encrypt_block(std::span<const std::uint8_t, 16> in, std::span<std::uint8_t, 16> out) const noexcept;

 private:
  std::array<std::uint32_t, 60> round_keys_{};
};

class NistDrbg {
 public:
  /// Equivalent to randombytes_init(entropy, NULL, 256).
  explicit NistDrbg(std::span<const std::uint8_t, 48> entropy) noexcept;

  /// Equivalent to randombytes(out, out.size()).
  void generate(std::span<std::uint8_t> out) noexcept;

  template <std::size_t N>
  std::array<std::uint8_t, N> generate() noexcept {
    std::array<std::uint8_t, N> out{};
    generate(out);
    return out;
  }

 private:
  void update(const std::uint8_t* provided) noexcept;
  void increment_v() noexcept;

  std::array<std::uint8_t, 32> key_{};
  std::array<std::uint8_t, 16> v_{};
};

}  // namespace pqbench::cli
