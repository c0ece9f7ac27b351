#pragma once

#include <stdexcept>
#include <string>

namespace pqbench {

/// Malformed caller input: wrong lengths, unknown names, out-of-range options.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A precondition the caller controls statically was broken (e.g. mixing
/// NTT-domain and normal-domain polynomials).
class ContractViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// The requested backend, scheme or operation is not supported here.
class CapabilityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Signing hit its iteration cap. Indicates a defect, not bad luck.
class SigningFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace pqbench
