#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace pqbench {

using Bytes = std::vector<std::uint8_t>;
using ByteView = std::span<const std::uint8_t>;

/// Owning byte string tagged with its role so a public key cannot be passed
/// where a ciphertext is expected.
template <class Tag>
class ByteString {
 public:
  ByteString() = default;
  explicit ByteString(Bytes bytes) : bytes_(std::move(bytes)) {}

  [[nodiscard]] const Bytes& bytes() const noexcept { return bytes_; }
  [[nodiscard]] std::size_t size() const noexcept { return bytes_.size(); }
  [[nodiscard]] const std::uint8_t* data() const noexcept { return bytes_.data(); }
  [[nodiscard]] ByteView view() const noexcept { return bytes_; }
  operator ByteView() const noexcept { return bytes_; }  // NOLINT(google-explicit-constructor)

  friend bool operator==(const ByteString&, const ByteString&) = default;

 private:
  Bytes bytes_;
};

std::string to_hex(ByteView bytes, bool upper = true);

/// Decodes a hex string (either case, even length). Throws InputError.
Bytes from_hex(std::string_view hex);

/// Returns 0xFF when the inputs are identical and 0x00 otherwise. Inspects
/// every byte regardless of where the first difference is; lengths are
/// treated as public.
std::uint8_t ct_equal_mask(ByteView a, ByteView b) noexcept;

inline bool ct_equal(ByteView a, ByteView b) noexcept { return ct_equal_mask(a, b) == 0xFF; }

/// dst = condition ? src : dst, without branching on condition.
void ct_select(std::span<std::uint8_t> dst, ByteView src, bool condition) noexcept;

/// Fills `out` from the operating system CSPRNG.
void os_random(std::span<std::uint8_t> out);

template <std::size_t N>
std::array<std::uint8_t, N> os_random_array() {
  std::array<std::uint8_t, N> out{};
  os_random(out);
  return out;
}

}  // namespace pqbench
