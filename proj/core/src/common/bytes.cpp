#include "pqbench/bytes.hpp"

#include "pqbench/errors.hpp"

#include <random>

#if defined(__linux__)
#include <sys/random.h>
#endif

namespace pqbench {

namespace {

int hex_value(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}

}  // namespace

std::string to_hex(ByteView bytes, bool upper) {
  const char* digits = upper ? "0123456789ABCDEF" : "0123456789abcdef";
  std::string out;
  out.reserve(bytes.size() * 2);
  for (auto b : bytes) {
    out.push_back(digits[b >> 4]);
    out.push_back(digits[b & 0x0F]);
  }
  return out;
}

Bytes from_hex(std::string_view hex) {
  if (hex.size() % 2 != 0) {
    throw InputError("hex string has odd length " + std::to_string(hex.size()));
  }
  Bytes out(hex.size() / 2);
  for (std::size_t i = 0; i < out.size(); ++i) {
    const int hi = hex_value(hex[2 * i]);
    const int lo = hex_value(hex[2 * i + 1]);
    if (hi < 0 || lo < 0) {
      throw InputError("invalid hex digit near offset " + std::to_string(2 * i));
    }
    out[i] = static_cast<std::uint8_t>((hi << 4) | lo);
  }
  return out;
}

std::uint8_t ct_equal_mask(ByteView a, ByteView b) noexcept {
  if (a.size() != b.size()) return 0;
  std::uint8_t diff = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    diff |= static_cast<std::uint8_t>(a[i] ^ b[i]);
  }
  // diff == 0 -> 0xFF, otherwise 0x00
  const std::uint32_t wide = static_cast<std::uint32_t>(diff) - 1U;
  return static_cast<std::uint8_t>(wide >> 24);
}

void ct_select(std::span<std::uint8_t> dst, ByteView src, bool condition) noexcept {
  const auto mask = static_cast<std::uint8_t>(-static_cast<std::uint8_t>(condition));
  const std::size_t n = dst.size() < src.size() ? dst.size() : src.size();
  for (std::size_t i = 0; i < n; ++i) {
    dst[i] = static_cast<std::uint8_t>(dst[i] ^ (mask & (dst[i] ^ src[i])));
  }
}

void os_random(std::span<std::uint8_t> out) {
#if defined(__linux__)
  std::size_t done = 0;
  while (done < out.size()) {
    const auto got = ::getrandom(out.data() + done, out.size() - done, 0);
    if (got <= 0) break;
    done += static_cast<std::size_t>(got);
  }
  if (done == out.size()) return;
#endif
  std::random_device rd;
  for (auto& b : out) b = static_cast<std::uint8_t>(rd());
}

}  // namespace pqbench
