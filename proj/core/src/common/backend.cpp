#include "pqbench/backend.hpp"

#include "pqbench/errors.hpp"

#include <string>

namespace pqbench {

namespace {

bool probe_accelerated() noexcept {
#if defined(PQBENCH_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") != 0;
#else
  return false;
#endif
}

}  // namespace

bool accelerated_available() noexcept {
  static const bool available = probe_accelerated();
  return available;
}

Backend default_backend() noexcept {
  return accelerated_available() ? Backend::accelerated : Backend::reference;
}

std::string_view to_string(Backend backend) noexcept {
  switch (backend) {
    case Backend::reference:
      return "reference";
    case Backend::accelerated:
      return "accelerated";
  }
  return "unknown";
}

Backend backend_from_string(std::string_view name) {
  if (name == "reference" || name == "ref") return Backend::reference;
  if (name == "accelerated" || name == "avx2") return Backend::accelerated;
  throw InputError("unknown backend '" + std::string(name) + "'");
}

}  // namespace pqbench
