#pragma once

#include <string_view>

namespace pqbench {

/// Which kernel set runs the lattice arithmetic and hashing. Both produce
/// bit-identical outputs for identical inputs.
enum class Backend {
  reference,    // portable scalar code
  accelerated,  // AVX2 vectorised kernels, x86-64 only
};

/// True when the accelerated kernels were compiled in and the running CPU
/// supports them. Probed once.
bool accelerated_available() noexcept;

/// accelerated when available, reference otherwise.
Backend default_backend() noexcept;

std::string_view to_string(Backend backend) noexcept;

/// Parses "reference" / "ref" / "accelerated" / "avx2". Throws InputError.
Backend backend_from_string(std::string_view name);

}  // namespace pqbench
