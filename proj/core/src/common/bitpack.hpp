#pragma once

// Little-endian bit packing shared by both schemes' reference encoders:
// value i occupies bits [width*i, width*(i+1)) of the output stream.

#include <cstddef>
#include <cstdint>

namespace pqbench::detail {

template <class T>
static inline void pack_bits(std::uint8_t* out, const T* values, std::size_t count, unsigned width) {
  std::uint64_t acc = 0;
  unsigned bits = 0;
  std::size_t o = 0;
  const std::uint64_t mask = (std::uint64_t{1} << width) - 1;
  for (std::size_t i = 0; i < count; ++i) {
    acc |= (static_cast<std::uint64_t>(values[i]) & mask) << bits;
    bits += width;
    while (bits >= 8) {
      out[o++] = static_cast<std::uint8_t>(acc);
      acc >>= 8;
      bits -= 8;
    }
  }
  if (bits > 0) out[o] = static_cast<std::uint8_t>(acc);
}

template <class T>
static inline void unpack_bits(T* values, const std::uint8_t* in, std::size_t count, unsigned width) {
  std::uint64_t acc = 0;
  unsigned bits = 0;
  std::size_t o = 0;
  const std::uint64_t mask = (std::uint64_t{1} << width) - 1;
  for (std::size_t i = 0; i < count; ++i) {
    while (bits < width) {
      acc |= static_cast<std::uint64_t>(in[o++]) << bits;
      bits += 8;
    }
    values[i] = static_cast<T>(acc & mask);
    acc >>= width;
    bits -= width;
  }
}

// Fixed-width variants: groups of G values fill G*W/8 whole bytes, which
// lets the compiler unroll each group completely. count must be a multiple
// of G.
template <unsigned W>
inline constexpr unsigned kGroupValues = W % 8 == 0 ? 1 : (W % 4 == 0 ? 2 : (W % 2 == 0 ? 4 : 8));

template <unsigned W, class T>
static inline void pack_fixed(std::uint8_t* out, const T* values, std::size_t count) {
  constexpr unsigned G = kGroupValues<W>;
  constexpr unsigned kBytes = G * W / 8;
  constexpr unsigned __int128 kMask = (static_cast<unsigned __int128>(1) << W) - 1;
  for (std::size_t i = 0; i < count; i += G) {
    unsigned __int128 acc = 0;
    for (unsigned j = 0; j < G; ++j) acc |= (static_cast<unsigned __int128>(values[i + j]) & kMask) << (W * j);
    for (unsigned b = 0; b < kBytes; ++b) out[b] = static_cast<std::uint8_t>(acc >> (8 * b));
    out += kBytes;
  }
}

template <unsigned W, class T>
static inline void unpack_fixed(T* values, const std::uint8_t* in, std::size_t count) {
  constexpr unsigned G = kGroupValues<W>;
  constexpr unsigned kBytes = G * W / 8;
  constexpr unsigned __int128 kMask = (static_cast<unsigned __int128>(1) << W) - 1;
  for (std::size_t i = 0; i < count; i += G) {
    unsigned __int128 acc = 0;
    for (unsigned b = 0; b < kBytes; ++b) acc |= static_cast<unsigned __int128>(in[b]) << (8 * b);
    for (unsigned j = 0; j < G; ++j) values[i + j] = static_cast<T>((acc >> (W * j)) & kMask);
    in += kBytes;
  }
}

}  // namespace pqbench::detail
