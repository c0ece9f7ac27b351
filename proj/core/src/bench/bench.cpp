#include "pqbench/bench.hpp"

#include "pqbench/errors.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>

#if defined(__x86_64__) || defined(_M_X64)
#include <x86intrin.h>
#define PQBENCH_HAVE_TSC 1
#endif

namespace pqbench::bench {

namespace {

#if defined(PQBENCH_HAVE_TSC)
// lfence keeps earlier instructions from drifting past the first read;
// rdtscp waits for the measured work to retire.
inline std::uint64_t cycles_begin() noexcept {
  _mm_lfence();
  const std::uint64_t t = __rdtsc();
  _mm_lfence();
  return t;
}

inline std::uint64_t cycles_end() noexcept {
  unsigned aux;
  const std::uint64_t t = __rdtscp(&aux);
  _mm_lfence();
  return t;
}
#endif

inline std::uint64_t nanos_now() noexcept {
  return static_cast<std::uint64_t>(
      std::chrono::duration_cast<std::chrono::nanoseconds>(std::chrono::steady_clock::now().time_since_epoch())
          .count());
}

}  // namespace

std::string_view to_string(TimeUnit unit) noexcept {
  return unit == TimeUnit::cycles ? "cycles" : "nanoseconds";
}

bool cycle_counter_available() noexcept {
#if defined(PQBENCH_HAVE_TSC)
  return true;
#else
  return false;
#endif
}

double estimate_cycle_counter_hz(double window_ms) {
#if defined(PQBENCH_HAVE_TSC)
  const auto window = std::chrono::duration<double, std::milli>(window_ms);
  const auto start = std::chrono::steady_clock::now();
  const std::uint64_t c0 = cycles_begin();
  while (std::chrono::steady_clock::now() - start < window) {
  }
  const std::uint64_t c1 = cycles_end();
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return static_cast<double>(c1 - c0) / seconds;
#else
  (void)window_ms;
  return 0.0;
#endif
}

TimingStats summarize(std::string op_name, std::vector<std::uint64_t> samples, TimeUnit unit) {
  if (samples.empty()) throw InputError("cannot summarize an empty sample set");
  std::sort(samples.begin(), samples.end());
  const std::size_t n = samples.size();
  TimingStats s;
  s.op_name = std::move(op_name);
  s.iterations = n;
  s.unit = unit;
  s.min = static_cast<double>(samples.front());
  s.max = static_cast<double>(samples.back());
  s.median = n % 2 == 1 ? static_cast<double>(samples[n / 2])
                        : (static_cast<double>(samples[n / 2 - 1]) + static_cast<double>(samples[n / 2])) / 2.0;
  // exact integer sum; 2^64 cycles is far beyond any campaign
  const std::uint64_t sum = std::accumulate(samples.begin(), samples.end(), std::uint64_t{0});
  s.mean = static_cast<double>(sum) / static_cast<double>(n);
  // rounding can push the mean a hair outside [min, max] for constant samples
  s.mean = std::clamp(s.mean, s.min, s.max);
  return s;
}

TimingStats measure(std::string op_name, const Work& work, std::size_t iterations, std::size_t warmup,
                    ClockSource clock) {
  if (iterations == 0) throw InputError("iterations must be at least 1");
  if (!work) throw InputError("empty unit of work");
  bool use_cycles = false;
  switch (clock) {
    case ClockSource::automatic:
      use_cycles = cycle_counter_available();
      break;
    case ClockSource::cycle_counter:
      if (!cycle_counter_available()) throw CapabilityError("no cycle counter on this platform");
      use_cycles = true;
      break;
    case ClockSource::monotonic:
      break;
  }

  for (std::size_t i = 0; i < warmup; ++i) work();

  std::vector<std::uint64_t> samples(iterations);
  for (std::size_t i = 0; i < iterations; ++i) {
#if defined(PQBENCH_HAVE_TSC)
    if (use_cycles) {
      const std::uint64_t t0 = cycles_begin();
      work();
      samples[i] = cycles_end() - t0;
      continue;
    }
#endif
    const std::uint64_t t0 = nanos_now();
    work();
    samples[i] = nanos_now() - t0;
  }
  return summarize(std::move(op_name), std::move(samples), use_cycles ? TimeUnit::cycles : TimeUnit::nanoseconds);
}

double cycles_to_ms(double cycles, double clock_hz) {
  if (!(clock_hz > 0)) throw InputError("clock frequency must be positive");
  return cycles / clock_hz * 1e3;
}

double speedup_rate(const TimingStats& reference, const TimingStats& accelerated) {
  if (reference.op_name != accelerated.op_name) {
    throw ContractViolation("speedup between different operations: " + reference.op_name + " vs " +
                            accelerated.op_name);
  }
  if (reference.unit != accelerated.unit) throw ContractViolation("speedup between different time units");
  if (!(accelerated.median > 0)) throw InputError("accelerated median must be positive");
  return reference.median / accelerated.median;
}

double row_ms(const BenchReport& report, const TimingStats& row, bool use_mean) {
  const double v = use_mean ? row.mean : row.median;
  if (row.unit == TimeUnit::nanoseconds) return v / 1e6;
  return cycles_to_ms(v, report.clock_hz);
}

double total_ms(const BenchReport& report) {
  double total = 0;
  for (std::size_t i = 0; i < report.rows.size(); ++i) {
    const unsigned w = i < report.weights.size() ? report.weights[i] : 1;
    total += w * row_ms(report, report.rows[i]);
  }
  return total;
}

std::string display_name(const BenchReport& r) {
  const std::string level = std::to_string(r.level);
  if (r.scheme == "kyber") return "Kyber-" + level;
  if (r.scheme == "dilithium") return "Dilithium-" + level;
  if (r.scheme == "rsa") return "RSA-" + level;
  if (r.scheme == "ecdh") return "ECDH(P-" + level + ")";
  if (r.scheme == "ecdsa") return r.level == 521 ? "ECDSA(P-512)" : "ECDSA(P-" + level + ")";
  return r.scheme + "-" + level;
}

Format format_from_string(std::string_view name) {
  if (name == "text") return Format::text;
  if (name == "csv") return Format::csv;
  if (name == "json") return Format::json;
  throw InputError("unknown format '" + std::string(name) + "' (text, csv, json)");
}

Shape shape_from_string(std::string_view name) {
  if (name == "table1") return Shape::table1;
  if (name == "table2") return Shape::table2;
  if (name == "table3") return Shape::table3;
  throw InputError("unknown shape '" + std::string(name) + "' (table1, table2, table3)");
}

}  // namespace pqbench::bench
