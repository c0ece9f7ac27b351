#pragma once

// Replays known-answer-test records through the deterministic keygen /
// encapsulate / sign pipelines and compares every output byte-exactly.

#include "kat_file.hpp"

#include "pqbench/backend.hpp"

#include <optional>
#include <string>
#include <vector>

namespace pqbench::cli {

/// Where a record's randomness comes from. `drbg` expands the 48-byte
/// "seed" field; `pre_expanded` reads the already expanded values
/// ("d", "z", "m" for Kyber, "xi" for Dilithium) so no DRBG is needed.
/// `automatic` uses the seed when present.
enum class SeedSource { automatic, drbg, pre_expanded };

struct KatMismatch {
  long long count = 0;
  std::string field;
};

struct KatSummary {
  std::string scheme;  // "kyber512", "dilithium3", ...
  std::size_t total = 0;
  std::size_t passed = 0;
  std::optional<KatMismatch> first_failure;

  [[nodiscard]] bool ok() const { return total > 0 && passed == total; }
};

/// Checks the record structure against the parameter set: at least one
/// record, counts consecutive from 0, required fields present with hex
/// lengths that fit the scheme. Throws InputError naming the line.
void validate_kat(const std::vector<KatRecord>& records, const std::string& scheme, int level,
                  SeedSource source = SeedSource::automatic);

/// scheme is "kyber" or "dilithium", level one of the published levels.
/// Throws InputError for an unknown scheme/level or invalid records.
KatSummary replay_kat(const std::string& scheme, int level, const std::vector<KatRecord>& records,
                      Backend backend, SeedSource source = SeedSource::automatic);

/// Single line such as "kyber512: 100/100 records pass".
std::string format_summary(const KatSummary& summary);

}  // namespace pqbench::cli
