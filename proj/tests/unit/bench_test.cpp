#include "pqbench/bench.hpp"
#include "pqbench/errors.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>
#include <random>
#include <sstream>

using namespace pqbench;
using namespace pqbench::bench;

namespace {

// Naive recomputation used as the oracle for summarize().
struct Naive {
  double median, mean, min, max;
};

Naive naive(std::vector<std::uint64_t> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  long double sum = 0;
  for (auto x : v) sum += x;
  const double median = n % 2 ? double(v[n / 2]) : (double(v[n / 2 - 1]) + double(v[n / 2])) / 2;
  return {median, double(sum / n), double(v.front()), double(v.back())};
}

void spin_for(std::chrono::nanoseconds d) {
  const auto end = std::chrono::steady_clock::now() + d;
  while (std::chrono::steady_clock::now() < end) {
  }
}

TimingStats stats(const std::string& op, double median) {
  TimingStats s;
  s.op_name = op;
  s.iterations = 1;
  s.median = s.mean = s.min = s.max = median;
  return s;
}

BenchReport synthetic(const std::string& scheme, int level, Backend backend, std::vector<double> medians,
                      bool verified) {
  BenchReport r;
  r.scheme = scheme;
  r.level = level;
  r.backend = std::string(to_string(backend));
  r.equivalence_verified = verified;
  const std::vector<std::string> ops = scheme == "kyber" ? std::vector<std::string>{"gen", "enc", "dec"}
                                                         : std::vector<std::string>{"gen", "sign", "verify"};
  for (std::size_t i = 0; i < ops.size(); ++i) r.rows.push_back(stats(ops[i], medians[i]));
  return r;
}

std::size_t count_lines(const std::string& s) { return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n')); }

}  // namespace

TEST(BenchStats, PlantedOddSampleSet) {
  const auto s = summarize("op", {9, 1, 5, 7, 3}, TimeUnit::cycles);
  EXPECT_EQ(s.iterations, 5u);
  EXPECT_EQ(s.median, 5.0);
  EXPECT_EQ(s.mean, 5.0);
  EXPECT_EQ(s.min, 1.0);
  EXPECT_EQ(s.max, 9.0);
}

TEST(BenchStats, PlantedEvenSampleSetAveragesMiddlePair) {
  const auto s = summarize("op", {4, 1, 3, 2}, TimeUnit::cycles);
  EXPECT_EQ(s.median, 2.5);
  EXPECT_EQ(s.mean, 2.5);
}

TEST(BenchStats, RandomSampleSetsMatchNaiveRecomputation) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<std::uint64_t> v(1 + rng() % 2000);
    for (auto& x : v) x = rng() % 10'000'000;
    const auto s = summarize("op", v, TimeUnit::cycles);
    const Naive n = naive(v);
    ASSERT_EQ(s.median, n.median);
    ASSERT_EQ(s.min, n.min);
    ASSERT_EQ(s.max, n.max);
    ASSERT_DOUBLE_EQ(s.mean, n.mean);
    ASSERT_LE(s.min, s.median);
    ASSERT_LE(s.median, s.max);
    ASSERT_LE(s.min, s.mean);
    ASSERT_LE(s.mean, s.max);
  }
}

TEST(BenchStats, EmptySampleSetIsRejected) {
  EXPECT_THROW(summarize("op", {}, TimeUnit::cycles), InputError);
}

TEST(BenchMeasure, RecordsExactlyTheRequestedIterations) {
  std::size_t calls = 0;
  const auto s = measure("count", [&] { ++calls; }, 37, 5);
  EXPECT_EQ(s.iterations, 37u);
  EXPECT_EQ(calls, 42u);
  EXPECT_LE(s.min, s.median);
  EXPECT_LE(s.median, s.max);
}

TEST(BenchMeasure, SingleIterationCollapsesStatistics) {
  const auto s = measure("one", [] {}, 1, 0);
  EXPECT_EQ(s.iterations, 1u);
  EXPECT_EQ(s.median, s.mean);
  EXPECT_EQ(s.min, s.max);
  EXPECT_EQ(s.median, s.min);
}

TEST(BenchMeasure, ZeroIterationsIsRejected) {
  EXPECT_THROW(measure("none", [] {}, 0), InputError);
  EXPECT_THROW(measure("none", Work{}, 1), InputError);
}

TEST(BenchMeasure, CalibratedMillisecondLoopOnMonotonicClock) {
  const auto s = measure("spin", [] { spin_for(std::chrono::milliseconds(1)); }, 1000, 10, ClockSource::monotonic);
  EXPECT_EQ(s.unit, TimeUnit::nanoseconds);
  EXPECT_NEAR(s.mean, 1e6, 0.2e6);
}

TEST(BenchMeasure, CalibratedLoopOnCycleCounter) {
  if (!cycle_counter_available()) GTEST_SKIP() << "no cycle counter";
  const double hz = estimate_cycle_counter_hz(100);
  ASSERT_GT(hz, 0);
  const auto s = measure("spin", [] { spin_for(std::chrono::microseconds(200)); }, 500, 10, ClockSource::cycle_counter);
  EXPECT_EQ(s.unit, TimeUnit::cycles);
  EXPECT_NEAR(cycles_to_ms(s.mean, hz), 0.2, 0.04);
}

TEST(BenchConversion, PublishedClockExamples) {
  EXPECT_DOUBLE_EQ(cycles_to_ms(3'300'000, 3.3e9), 1.0);
  EXPECT_DOUBLE_EQ(cycles_to_ms(115'500, 3.3e9), 0.035);
  EXPECT_EQ(cycles_to_ms(0, 3.3e9), 0.0);
}

TEST(BenchConversion, NonPositiveClockIsRejected) {
  EXPECT_THROW(cycles_to_ms(1, 0), InputError);
  EXPECT_THROW(cycles_to_ms(1, -3.3e9), InputError);
  EXPECT_THROW(cycles_to_ms(1, std::nan("")), InputError);
}

TEST(BenchConversion, IsLinear) {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 10000; ++i) {
    const double a = double(rng() % 100'000'000), b = double(rng() % 100'000'000);
    const double lhs = cycles_to_ms(a + b, 3.3e9);
    const double rhs = cycles_to_ms(a, 3.3e9) + cycles_to_ms(b, 3.3e9);
    ASSERT_NEAR(lhs, rhs, 4 * std::numeric_limits<double>::epsilon() * std::max(1.0, lhs));
  }
}

TEST(BenchSpeedup, ReproducesPublishedRatios) {
  EXPECT_NEAR(speedup_rate(stats("dec", 0.052), stats("dec", 0.008)), 6.50, 1e-9);
  EXPECT_NEAR(speedup_rate(stats("sign", 0.840), stats("sign", 0.144)), 5.8333333333, 1e-9);
  EXPECT_EQ(speedup_rate(stats("gen", 42), stats("gen", 42)), 1.0);
}

TEST(BenchSpeedup, RendersTwoDecimals) {
  std::vector<BenchReport> reports = {
      synthetic("kyber", 512, Backend::reference, {0.035, 0.040, 0.052}, false),
      synthetic("kyber", 512, Backend::accelerated, {0.007, 0.008, 0.008}, true),
  };
  // medians are given in ms; store them as nanoseconds so no clock is involved
  for (auto& r : reports) {
    r.unit = TimeUnit::nanoseconds;
    for (auto& row : r.rows) {
      row.unit = TimeUnit::nanoseconds;
      row.median *= 1e6;
    }
  }
  const std::string text = render_report(reports, Format::text, Shape::table1);
  EXPECT_NE(text.find("6.50"), std::string::npos) << text;
  EXPECT_NE(text.find("5.00"), std::string::npos) << text;
}

TEST(BenchSpeedup, MismatchedOperationsAreAContractViolation) {
  EXPECT_THROW(speedup_rate(stats("enc", 1), stats("dec", 1)), ContractViolation);
  auto ns = stats("enc", 1);
  ns.unit = TimeUnit::nanoseconds;
  EXPECT_THROW(speedup_rate(stats("enc", 1), ns), ContractViolation);
  EXPECT_THROW(speedup_rate(stats("enc", 1), stats("enc", 0)), InputError);
}

TEST(BenchReport, TotalIsSumOfRows) {
  auto r = synthetic("dilithium", 3, Backend::reference, {1e5, 2e6, 3.3e5}, false);
  double sum = 0;
  for (const auto& row : r.rows) sum += row_ms(r, row);
  EXPECT_NEAR(total_ms(r), sum, 1e-9 * sum);
  r.weights = {2, 1, 1};
  EXPECT_NEAR(total_ms(r), sum + row_ms(r, r.rows[0]), 1e-9 * sum);
}

TEST(BenchReport, DisplayNames) {
  BenchReport r;
  r.scheme = "ecdsa";
  r.level = 521;
  EXPECT_EQ(display_name(r), "ECDSA(P-512)");
  r.scheme = "ecdh";
  EXPECT_EQ(display_name(r), "ECDH(P-521)");
  r.scheme = "kyber";
  r.level = 768;
  EXPECT_EQ(display_name(r), "Kyber-768");
}

TEST(BenchRender, UnknownFormatOrShapeIsRejected) {
  EXPECT_THROW(format_from_string("xml"), InputError);
  EXPECT_THROW(shape_from_string("table4"), InputError);
  EXPECT_THROW(render_report({}, Format::text, static_cast<Shape>(9)), InputError);
}

TEST(BenchRender, EmptyTable3IsHeaderOnly) {
  const std::string text = render_report({}, Format::text, Shape::table3);
  EXPECT_NE(text.find("Algorithm"), std::string::npos);
  EXPECT_EQ(count_lines(text), 2u) << text;  // header and rule
  EXPECT_EQ(count_lines(render_report({}, Format::csv, Shape::table3)), 1u);
  EXPECT_EQ(render_report({}, Format::json, Shape::table3), "[]\n");
}

class BenchCampaign : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    CampaignConfig c;
    c.iterations = 5;
    c.warmup = 1;
    reports_ = new std::vector<BenchReport>();
    for (const std::string scheme : {"kyber", "dilithium"}) {
      for (int level : scheme == "kyber" ? std::vector<int>{512, 768, 1024} : std::vector<int>{2, 3, 5}) {
        reports_->push_back(run_pqc(scheme, level, Backend::reference, c));
        if (accelerated_available()) {
          auto r = run_pqc(scheme, level, Backend::accelerated, c);
          r.equivalence_verified = true;
          reports_->push_back(std::move(r));
        }
      }
    }
  }
  static void TearDownTestSuite() { delete reports_; }
  static std::vector<BenchReport>* reports_;
};

std::vector<BenchReport>* BenchCampaign::reports_ = nullptr;

TEST_F(BenchCampaign, Table1CarriesPublishedSizes) {
  const std::string text = render_report(*reports_, Format::text, Shape::table1);
  for (const char* cell : {"sk: 1632", "pk: 800", "ct: 768", "sk: 2400", "pk: 1184", "ct: 1088", "sk: 3168",
                           "pk: 1568", "ct: 1568", "KYBER 512", "KYBER 1024", "Total"}) {
    EXPECT_NE(text.find(cell), std::string::npos) << cell << "\n" << text;
  }
  EXPECT_EQ(text.find("DILITHIUM"), std::string::npos);
}

TEST_F(BenchCampaign, Table2CarriesPublishedSizes) {
  const std::string text = render_report(*reports_, Format::text, Shape::table2);
  for (const char* cell : {"pk: 1312", "sig: 2420", "pk: 1952", "sig: 3293", "pk: 2592", "sig: 4595"}) {
    EXPECT_NE(text.find(cell), std::string::npos) << cell << "\n" << text;
  }
}

TEST_F(BenchCampaign, RowsHaveRequestedIterations) {
  for (const auto& r : *reports_) {
    ASSERT_EQ(r.rows.size(), 3u);
    for (const auto& row : r.rows) EXPECT_EQ(row.iterations, 5u);
  }
}

TEST_F(BenchCampaign, CsvRowCounts) {
  const std::size_t per_level = accelerated_available() ? 2 : 1;
  // header + (3 ops + total) per report
  EXPECT_EQ(count_lines(render_report(*reports_, Format::csv, Shape::table1)), 1 + 3 * per_level * 4);
  EXPECT_EQ(count_lines(render_report(*reports_, Format::csv, Shape::table3)), 1u + 6);
}

TEST_F(BenchCampaign, JsonRoundTripIsValueIdentical) {
  for (auto shape : {Shape::table1, Shape::table2}) {
    const auto parsed = parse_reports_json(render_report(*reports_, Format::json, shape));
    const std::string scheme = shape == Shape::table1 ? "kyber" : "dilithium";
    std::vector<BenchReport> expected;
    for (const auto& r : *reports_) {
      if (r.scheme == scheme) expected.push_back(r);
    }
    EXPECT_EQ(parsed, expected);
  }
}

TEST_F(BenchCampaign, TextValuesComeFromCsvValues) {
  const std::string text = render_report(*reports_, Format::text, Shape::table1);
  const std::string csv = render_report(*reports_, Format::csv, Shape::table1);
  std::istringstream in(csv);
  std::string line;
  std::getline(in, line);
  while (std::getline(in, line)) {
    std::vector<std::string> f;
    std::istringstream ls(line);
    for (std::string cell; std::getline(ls, cell, ',');) f.push_back(cell);
    ASSERT_GE(f.size(), 9u);
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3f", std::stod(f[7]));
    const std::string cell = f[3] == "total" ? std::string(buf) : f[3] + ": " + buf;
    EXPECT_NE(text.find(cell), std::string::npos) << cell;
  }
}

TEST(BenchGate, SpeedupNeedsVerifiedEquivalence) {
  const std::vector<BenchReport> reports = {
      synthetic("dilithium", 2, Backend::reference, {300, 900, 300}, false),
      synthetic("dilithium", 2, Backend::accelerated, {100, 300, 100}, false),
  };
  const std::string text = render_report(reports, Format::text, Shape::table2);
  EXPECT_EQ(text.find("3.00"), std::string::npos) << text;
  EXPECT_NE(text.find("unavailable"), std::string::npos);
  auto verified = reports;
  verified[1].equivalence_verified = true;
  EXPECT_NE(render_report(verified, Format::text, Shape::table2).find("3.00"), std::string::npos);
}

TEST(BenchGate, BackendsAreEquivalentOnSharedSeeds) {
  for (const auto& [scheme, level] : std::vector<std::pair<std::string, int>>{
           {"kyber", 512}, {"kyber", 768}, {"kyber", 1024}, {"dilithium", 2}, {"dilithium", 3}, {"dilithium", 5}}) {
    const auto r = check_backend_equivalence(scheme, level, 3);
    EXPECT_EQ(r.passed, accelerated_available()) << scheme << level << ": " << r.detail;
  }
}

TEST(BenchCampaignInput, UnknownSchemeIsRejected) {
  EXPECT_THROW(run_pqc("frodo", 640, Backend::reference, {}), InputError);
  EXPECT_THROW(run_pqc("kyber", 513, Backend::reference, {}), InputError);
}
