// Built when no crypto provider was found at configure time: every
// classical scheme reports unavailable.

#include "pqbench/classical.hpp"
#include "pqbench/errors.hpp"

namespace pqbench::classical {

struct ProviderState {};

ProviderHandle probe_provider(const ProbeOptions&) { return {}; }

bench::Work run_classical_op(const ProviderHandle&, const ClassicalScheme& scheme, Op) {
  throw CapabilityError(std::string(scheme.id) + " is unavailable: built without a crypto provider");
}

bool roundtrip_check(const ProviderHandle&, const ClassicalScheme& scheme) {
  throw CapabilityError(std::string(scheme.id) + " is unavailable: built without a crypto provider");
}

}  // namespace pqbench::classical
