#pragma once

// Measurement engine: timed campaigns over units of work, summary
// statistics, cycle to millisecond conversion, speedup rates and the
// table/csv/json renderers.

#include "pqbench/backend.hpp"

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace pqbench::bench {

/// What the recorded numbers count. Cycle counts are converted with the
/// report's clock; nanosecond samples are used as they are.
enum class TimeUnit { cycles, nanoseconds };

enum class ClockSource {
  automatic,  // cycle counter when present, otherwise the monotonic clock
  cycle_counter,
  monotonic,
};

std::string_view to_string(TimeUnit unit) noexcept;

/// True when this build and CPU expose a usable cycle counter.
bool cycle_counter_available() noexcept;

/// Rate of the cycle counter estimated against the monotonic clock over
/// roughly `window_ms`. Returns 0 without a cycle counter.
double estimate_cycle_counter_hz(double window_ms = 50.0);

struct TimingStats {
  std::string op_name;
  std::size_t iterations = 0;
  double median = 0;  // in `unit`
  double mean = 0;
  double min = 0;
  double max = 0;
  TimeUnit unit = TimeUnit::cycles;

  friend bool operator==(const TimingStats&, const TimingStats&) = default;
};

/// Statistics over an explicit sample set; the median of an even count is
/// the mean of the two middle values. Throws InputError on an empty set.
TimingStats summarize(std::string op_name, std::vector<std::uint64_t> samples, TimeUnit unit);

using Work = std::function<void()>;

inline constexpr std::size_t kDefaultWarmup = 100;
inline constexpr std::size_t kDefaultIterations = 1000;

/// Runs `warmup` untimed invocations, then times exactly `iterations` more,
/// one sample per invocation. Throws InputError when iterations is 0, and
/// CapabilityError when a cycle counter is demanded but absent.
TimingStats measure(std::string op_name, const Work& work, std::size_t iterations,
                    std::size_t warmup = kDefaultWarmup, ClockSource clock = ClockSource::automatic);

inline constexpr double kDefaultClockHz = 3.3e9;

/// cycles / clock_hz in milliseconds. Throws InputError unless clock_hz > 0.
double cycles_to_ms(double cycles, double clock_hz);

/// reference.median / accelerated.median. Throws ContractViolation when the
/// two stats describe different operations or units, InputError when the
/// accelerated median is not positive.
double speedup_rate(const TimingStats& reference, const TimingStats& accelerated);

// ---------------------------------------------------------------------------
// Reports

struct SizeField {
  std::string name;  // "sk", "pk", "ct", "sig"
  std::size_t bytes = 0;

  friend bool operator==(const SizeField&, const SizeField&) = default;
};

/// Backend labels used in reports: "reference", "accelerated", or
/// "provider" for the classical rows.
inline constexpr std::string_view kProviderBackend = "provider";

struct BenchReport {
  std::string scheme;  // "kyber", "dilithium", "ecdh", "ecdsa", "rsa"
  int level = 0;       // 512, 2, 256, 2048, ...
  std::string backend;
  int security_bits = 0;
  double clock_hz = kDefaultClockHz;
  TimeUnit unit = TimeUnit::cycles;
  std::vector<SizeField> sizes;
  std::vector<TimingStats> rows;
  /// Per-row multiplicity in the total; empty means every row once.
  std::vector<unsigned> weights;
  /// Set on an accelerated report whose outputs matched the reference
  /// backend on a shared seed. Speedups are only rendered when it is set.
  bool equivalence_verified = false;
  /// Present when the row could not be measured (e.g. provider lacks it).
  std::optional<std::string> unavailable;

  friend bool operator==(const BenchReport&, const BenchReport&) = default;
};

/// Milliseconds for one row under the report's unit and clock.
double row_ms(const BenchReport& report, const TimingStats& row, bool use_mean = false);

/// Weighted sum of row medians in milliseconds.
double total_ms(const BenchReport& report);

/// Display name as printed in the tables: "Kyber-512", "ECDSA(P-512)", ...
std::string display_name(const BenchReport& report);

enum class Format { text, csv, json };
enum class Shape { table1, table2, table3 };

/// Parse "text"/"csv"/"json" and "table1"/"table2"/"table3"; InputError otherwise.
Format format_from_string(std::string_view name);
Shape shape_from_string(std::string_view name);

/// table1 takes the Kyber reports, table2 the Dilithium ones (both backends
/// per level, paired by scheme and level), table3 one row per report in the
/// published order using reference-backend totals. Reports that do not fit
/// the shape are ignored.
std::string render_report(const std::vector<BenchReport>& reports, Format format, Shape shape);

/// Inverse of the json renderer. Throws InputError on malformed input.
std::vector<BenchReport> parse_reports_json(std::string_view json);

// ---------------------------------------------------------------------------
// Post-quantum campaigns

struct CampaignConfig {
  std::size_t iterations = kDefaultIterations;
  std::size_t warmup = kDefaultWarmup;
  double clock_hz = kDefaultClockHz;
  ClockSource clock = ClockSource::automatic;
};

/// Runs keygen/encaps/decaps (Kyber) or keygen/sign/verify (Dilithium) for
/// one level and backend. Fresh per-iteration inputs are prepared before
/// timing starts. scheme is "kyber" or "dilithium"; InputError otherwise.
BenchReport run_pqc(std::string_view scheme, int level, Backend backend, const CampaignConfig& config);

struct EquivalenceResult {
  bool passed = false;
  std::string detail;  // first divergence when failed
};

/// Compares every output of both backends for `seeds` deterministic seeds
/// (keys, ciphertexts, shared secrets; keys and signatures).
EquivalenceResult check_backend_equivalence(std::string_view scheme, int level, std::size_t seeds = 1);

}  // namespace pqbench::bench
