// Table, csv and json renderers for bench reports. Text tables print
// medians rounded for display; csv and json carry the full values.

#include "pqbench/bench.hpp"
#include "pqbench/errors.hpp"

#include "json.hpp"

#include <algorithm>
#include <cstdio>
#include <charconv>
#include <map>

namespace pqbench::bench {

namespace {

using nlohmann::json;

std::string fixed(double v, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
  return buf;
}

// Shortest fixed-notation text that reads back to the same double.
std::string exact(double v) {
  char buf[400];
  const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::fixed);
  return std::string(buf, res.ptr);
}

bool is_pqc(const BenchReport& r) { return r.scheme == "kyber" || r.scheme == "dilithium"; }

// Position in the published comparison table.
int table3_rank(const BenchReport& r) {
  static const std::map<std::pair<std::string, int>, int> order = {
      {{"kyber", 512}, 0},  {{"kyber", 768}, 1},     {{"kyber", 1024}, 2}, {{"dilithium", 2}, 3},
      {{"dilithium", 3}, 4}, {{"dilithium", 5}, 5},  {{"ecdsa", 256}, 6},  {{"ecdsa", 384}, 7},
      {{"ecdsa", 521}, 8},   {{"rsa", 2048}, 9},     {{"rsa", 3072}, 10},  {{"ecdh", 256}, 11},
      {{"ecdh", 384}, 12},   {{"ecdh", 521}, 13},
  };
  const auto it = order.find({r.scheme, r.level});
  return it == order.end() ? 100 : it->second;
}

struct Pair {
  int level = 0;
  const BenchReport* reference = nullptr;
  const BenchReport* accelerated = nullptr;
};

std::vector<Pair> pair_up(const std::vector<BenchReport>& reports, std::string_view scheme) {
  std::vector<Pair> pairs;
  for (const auto& r : reports) {
    if (r.scheme != scheme) continue;
    auto it = std::find_if(pairs.begin(), pairs.end(), [&](const Pair& p) { return p.level == r.level; });
    if (it == pairs.end()) {
      pairs.push_back({r.level, nullptr, nullptr});
      it = pairs.end() - 1;
    }
    if (r.backend == to_string(Backend::reference)) it->reference = &r;
    if (r.backend == to_string(Backend::accelerated)) it->accelerated = &r;
  }
  std::sort(pairs.begin(), pairs.end(), [](const Pair& a, const Pair& b) { return a.level < b.level; });
  return pairs;
}

const TimingStats* find_row(const BenchReport* r, const std::string& op) {
  if (r == nullptr || r->unavailable) return nullptr;
  for (const auto& row : r->rows) {
    if (row.op_name == op) return &row;
  }
  return nullptr;
}

bool speedup_allowed(const Pair& p) {
  return p.reference != nullptr && p.accelerated != nullptr && p.accelerated->equivalence_verified &&
         !p.reference->unavailable && !p.accelerated->unavailable;
}

std::optional<double> row_speedup(const Pair& p, const std::string& op) {
  if (!speedup_allowed(p)) return std::nullopt;
  const TimingStats* ref = find_row(p.reference, op);
  const TimingStats* acc = find_row(p.accelerated, op);
  if (ref == nullptr || acc == nullptr || ref->unit != acc->unit || !(acc->median > 0)) return std::nullopt;
  return speedup_rate(*ref, *acc);
}

std::optional<double> total_speedup(const Pair& p) {
  if (!speedup_allowed(p)) return std::nullopt;
  const double acc = total_ms(*p.accelerated);
  if (!(acc > 0)) return std::nullopt;
  return total_ms(*p.reference) / acc;
}

// ---------------------------------------------------------------------------
// text

class TextTable {
 public:
  void row(std::vector<std::string> cells) { rows_.push_back(std::move(cells)); }
  void rule() { rows_.emplace_back(); }

  [[nodiscard]] std::string str() const {
    std::vector<std::size_t> width;
    for (const auto& r : rows_) {
      if (r.size() > width.size()) width.resize(r.size(), 0);
      for (std::size_t i = 0; i < r.size(); ++i) width[i] = std::max(width[i], r[i].size());
    }
    std::size_t line = 0;
    for (const auto w : width) line += w + 3;
    std::string out;
    for (const auto& r : rows_) {
      if (r.empty()) {
        out += std::string(line > 3 ? line - 3 : 0, '-') + "\n";
        continue;
      }
      std::string text;
      for (std::size_t i = 0; i < r.size(); ++i) {
        text += r[i];
        if (i + 1 < r.size()) text += std::string(width[i] - r[i].size(), ' ') + " | ";
      }
      out += text + "\n";
    }
    return out;
  }

 private:
  std::vector<std::vector<std::string>> rows_;
};

std::string ms_cell(const BenchReport* r, const TimingStats* row) {
  if (r == nullptr) return "n/a";
  if (r->unavailable) return "unavailable";
  if (row == nullptr) return "n/a";
  return fixed(row_ms(*r, *row), 3);
}

std::string footer(const std::vector<const BenchReport*>& shown) {
  std::size_t iterations = 0;
  double clock = 0;
  bool nanos = false;
  for (const auto* r : shown) {
    if (r == nullptr || r->unavailable) continue;
    for (const auto& row : r->rows) {
      iterations = std::max(iterations, row.iterations);
      nanos = nanos || row.unit == TimeUnit::nanoseconds;
    }
    clock = r->clock_hz;
  }
  if (iterations == 0) return "";
  std::string out = "medians over " + std::to_string(iterations) + (iterations == 1 ? " iteration; " : " iterations; ");
  out += nanos ? "monotonic nanosecond clock, no cycle conversion" : "cycles converted at " + fixed(clock / 1e9, 2) + " GHz";
  return out + "\n";
}

std::string text_pqc(const std::vector<BenchReport>& reports, std::string_view scheme) {
  const bool kyber = scheme == "kyber";
  const std::vector<std::string> ops = kyber ? std::vector<std::string>{"gen", "enc", "dec"}
                                             : std::vector<std::string>{"gen", "sign", "verify"};
  std::string out;
  std::vector<const BenchReport*> shown;
  for (const auto& p : pair_up(reports, scheme)) {
    shown.push_back(p.reference);
    shown.push_back(p.accelerated);
    const BenchReport* any = p.reference != nullptr ? p.reference : p.accelerated;
    TextTable t;
    std::string title = kyber ? "KYBER " : "DILITHIUM ";
    t.row({title + std::to_string(p.level)});
    t.rule();
    t.row({"Sizes (Bytes)", "Reference (ms)", "AVX2 (ms)", "AVX2 Speedup Rate"});
    t.rule();
    for (std::size_t i = 0; i < ops.size(); ++i) {
      std::string size;
      if (any != nullptr && i < any->sizes.size()) {
        size = any->sizes[i].name + ": " + std::to_string(any->sizes[i].bytes);
      }
      const auto sp = row_speedup(p, ops[i]);
      t.row({size, ops[i] + ": " + ms_cell(p.reference, find_row(p.reference, ops[i])),
             ops[i] + ": " + ms_cell(p.accelerated, find_row(p.accelerated, ops[i])),
             sp ? fixed(*sp, 2) : "unavailable"});
    }
    t.rule();
    const auto total_cell = [](const BenchReport* r) {
      if (r == nullptr) return std::string("n/a");
      if (r->unavailable) return std::string("unavailable");
      return fixed(total_ms(*r), 3);
    };
    const auto sp = total_speedup(p);
    t.row({"Total", total_cell(p.reference), total_cell(p.accelerated), sp ? fixed(*sp, 2) : "unavailable"});
    out += t.str() + "\n";
  }
  return out + footer(shown);
}

std::vector<const BenchReport*> table3_rows(const std::vector<BenchReport>& reports) {
  std::vector<const BenchReport*> rows;
  for (const auto& r : reports) {
    const bool pqc_ref = is_pqc(r) && r.backend == to_string(Backend::reference);
    const bool classical = !is_pqc(r) && r.backend == kProviderBackend;
    if (pqc_ref || classical) rows.push_back(&r);
  }
  std::stable_sort(rows.begin(), rows.end(),
                   [](const BenchReport* a, const BenchReport* b) { return table3_rank(*a) < table3_rank(*b); });
  return rows;
}

std::string text_table3(const std::vector<BenchReport>& reports) {
  TextTable t;
  t.row({"Algorithm", "Security Level", "Total Time (ms)"});
  t.rule();
  bool p512 = false;
  const auto rows = table3_rows(reports);
  for (const auto* r : rows) {
    std::string name = display_name(*r);
    if (r->scheme == "ecdsa" && r->level == 521) {
      name += "*";
      p512 = true;
    }
    const std::string time = r->unavailable ? "unavailable (" + *r->unavailable + ")" : fixed(total_ms(*r), 3);
    t.row({name, std::to_string(r->security_bits) + "-bit", time});
  }
  std::string out = t.str();
  if (p512) out += "* P-512 is the label as published; the measurement uses the standard curve P-521.\n";
  return out + footer(rows);
}

// ---------------------------------------------------------------------------
// csv

const char* kCsvHeader = "scheme,level,backend,op,iterations,median_cycles,mean_cycles,median_ms,mean_ms,speedup,unit\n";

std::string csv_row(const BenchReport& r, const std::string& op, const std::string& iterations, double median,
                    double mean, double median_ms, double mean_ms, std::optional<double> speedup) {
  std::string line = r.scheme + "," + std::to_string(r.level) + "," + r.backend + "," + op + ",";
  if (r.unavailable) return line + ",,,,,,\n";
  line += iterations + "," + exact(median) + "," + exact(mean) + "," + exact(median_ms) + "," + exact(mean_ms) + ",";
  line += speedup ? exact(*speedup) : "";
  std::string unit = r.rows.empty() ? "" : std::string(to_string(r.rows.front().unit));
  return line + "," + unit + "\n";
}

// Weighted totals over the rows, in the rows' own unit.
struct Totals {
  double median = 0;
  double mean = 0;
  double mean_ms = 0;
  std::size_t iterations = 0;
};

Totals totals(const BenchReport& r) {
  Totals t;
  for (std::size_t i = 0; i < r.rows.size(); ++i) {
    const unsigned w = i < r.weights.size() ? r.weights[i] : 1;
    t.median += w * r.rows[i].median;
    t.mean += w * r.rows[i].mean;
    t.mean_ms += w * row_ms(r, r.rows[i], true);
    t.iterations = std::max(t.iterations, r.rows[i].iterations);
  }
  return t;
}

std::string csv_pqc(const std::vector<BenchReport>& reports, std::string_view scheme) {
  std::string out = kCsvHeader;
  for (const auto& p : pair_up(reports, scheme)) {
    for (const BenchReport* r : {p.reference, p.accelerated}) {
      if (r == nullptr) continue;
      const bool acc = r == p.accelerated;
      for (const auto& row : r->rows) {
        out += csv_row(*r, row.op_name, std::to_string(row.iterations), row.median, row.mean, row_ms(*r, row),
                       row_ms(*r, row, true), acc ? row_speedup(p, row.op_name) : std::nullopt);
      }
      const Totals t = totals(*r);
      out += csv_row(*r, "total", std::to_string(t.iterations), t.median, t.mean, total_ms(*r), t.mean_ms,
                     acc ? total_speedup(p) : std::nullopt);
    }
  }
  return out;
}

std::string csv_table3(const std::vector<BenchReport>& reports) {
  std::string out = kCsvHeader;
  for (const auto* r : table3_rows(reports)) {
    const Totals t = totals(*r);
    out += csv_row(*r, "total", std::to_string(t.iterations), t.median, t.mean, r->unavailable ? 0 : total_ms(*r),
                   t.mean_ms, std::nullopt);
  }
  return out;
}

// ---------------------------------------------------------------------------
// json

json stats_to_json(const BenchReport& r, const TimingStats& s, std::optional<double> speedup) {
  json j = {{"op", s.op_name},
            {"iterations", s.iterations},
            {"median_cycles", s.median},
            {"mean_cycles", s.mean},
            {"min_cycles", s.min},
            {"max_cycles", s.max},
            {"unit", std::string(to_string(s.unit))},
            {"median_ms", row_ms(r, s)},
            {"mean_ms", row_ms(r, s, true)}};
  j["speedup"] = speedup ? json(*speedup) : json(nullptr);
  return j;
}

json report_to_json(const BenchReport& r, const Pair* pair) {
  json sizes = json::array();
  for (const auto& s : r.sizes) sizes.push_back({{"name", s.name}, {"bytes", s.bytes}});
  json rows = json::array();
  const bool acc = pair != nullptr && r.backend == to_string(Backend::accelerated);
  for (const auto& s : r.rows) rows.push_back(stats_to_json(r, s, acc ? row_speedup(*pair, s.op_name) : std::nullopt));
  json j = {{"scheme", r.scheme},
            {"level", r.level},
            {"backend", r.backend},
            {"display_name", display_name(r)},
            {"security_bits", r.security_bits},
            {"clock_hz", r.clock_hz},
            {"unit", std::string(to_string(r.unit))},
            {"sizes", sizes},
            {"rows", rows},
            {"weights", r.weights},
            {"equivalence_verified", r.equivalence_verified}};
  j["unavailable"] = r.unavailable ? json(*r.unavailable) : json(nullptr);
  j["total_ms"] = r.unavailable ? json(nullptr) : json(total_ms(r));
  const auto sp = acc ? total_speedup(*pair) : std::nullopt;
  j["total_speedup"] = sp ? json(*sp) : json(nullptr);
  return j;
}

std::string json_render(const std::vector<BenchReport>& reports, Shape shape) {
  json arr = json::array();
  if (shape == Shape::table3) {
    for (const auto* r : table3_rows(reports)) arr.push_back(report_to_json(*r, nullptr));
  } else {
    const auto pairs = pair_up(reports, shape == Shape::table1 ? "kyber" : "dilithium");
    for (const auto& p : pairs) {
      for (const BenchReport* r : {p.reference, p.accelerated}) {
        if (r != nullptr) arr.push_back(report_to_json(*r, &p));
      }
    }
  }
  return arr.dump(2) + "\n";
}

TimeUnit unit_from_string(const std::string& s) {
  if (s == "cycles") return TimeUnit::cycles;
  if (s == "nanoseconds") return TimeUnit::nanoseconds;
  throw InputError("unknown time unit '" + s + "'");
}

}  // namespace

std::string render_report(const std::vector<BenchReport>& reports, Format format, Shape shape) {
  if (shape != Shape::table1 && shape != Shape::table2 && shape != Shape::table3) {
    throw InputError("unknown report shape");
  }
  const std::string_view scheme = shape == Shape::table1 ? "kyber" : "dilithium";
  switch (format) {
    case Format::text:
      return shape == Shape::table3 ? text_table3(reports) : text_pqc(reports, scheme);
    case Format::csv:
      return shape == Shape::table3 ? csv_table3(reports) : csv_pqc(reports, scheme);
    case Format::json:
      return json_render(reports, shape);
  }
  throw InputError("unknown report format");
}

std::vector<BenchReport> parse_reports_json(std::string_view text) {
  std::vector<BenchReport> out;
  try {
    const json arr = json::parse(text);
    if (!arr.is_array()) throw InputError("report json must be an array");
    for (const auto& j : arr) {
      BenchReport r;
      r.scheme = j.at("scheme").get<std::string>();
      r.level = j.at("level").get<int>();
      r.backend = j.at("backend").get<std::string>();
      r.security_bits = j.at("security_bits").get<int>();
      r.clock_hz = j.at("clock_hz").get<double>();
      r.unit = unit_from_string(j.at("unit").get<std::string>());
      for (const auto& s : j.at("sizes")) r.sizes.push_back({s.at("name").get<std::string>(), s.at("bytes").get<std::size_t>()});
      for (const auto& s : j.at("rows")) {
        TimingStats t;
        t.op_name = s.at("op").get<std::string>();
        t.iterations = s.at("iterations").get<std::size_t>();
        t.median = s.at("median_cycles").get<double>();
        t.mean = s.at("mean_cycles").get<double>();
        t.min = s.at("min_cycles").get<double>();
        t.max = s.at("max_cycles").get<double>();
        t.unit = unit_from_string(s.at("unit").get<std::string>());
        r.rows.push_back(std::move(t));
      }
      r.weights = j.at("weights").get<std::vector<unsigned>>();
      r.equivalence_verified = j.at("equivalence_verified").get<bool>();
      if (!j.at("unavailable").is_null()) r.unavailable = j.at("unavailable").get<std::string>();
      out.push_back(std::move(r));
    }
  } catch (const json::exception& e) {
    throw InputError(std::string("malformed report json: ") + e.what());
  }
  return out;
}

}  // namespace pqbench::bench
