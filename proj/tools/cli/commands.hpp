#pragma once

// The pqbench command line: sizes | bench | kat | compare.
//
// Exit codes are shared by every subcommand: 0 success, 1 verification or
// measurement failure, 2 usage or parse error, 3 the two backends disagree.

#include <ostream>
#include <string>
#include <utility>
#include <vector>

namespace pqbench::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitEquivalence = 3;

/// One (scheme, level) pair to benchmark, e.g. {"kyber", 768}.
using Target = std::pair<std::string, int>;

/// Expands --alg / --levels. alg is "kyber", "dilithium", "all" or a full
/// name such as "kyber512" (then levels must be empty or agree). levels is
/// a comma separated list. Throws InputError.
std::vector<Target> resolve_targets(const std::string& alg, const std::string& levels);

/// Clock for cycle conversion in GHz: PQBENCH_CLOCK_GHZ when set, else 3.3.
/// Throws InputError when the variable is not a positive number.
double default_clock_ghz();

/// Runs the tool on argv (argv[0] is the program name). Reports go to
/// `out` unless --out names a file; diagnostics go to `err`.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace pqbench::cli
