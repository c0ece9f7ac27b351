#include "kat_file.hpp"

#include "pqbench/errors.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>

namespace pqbench::cli {

namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(first, last - first + 1));
}

}  // namespace

void KatRecord::set(std::string key, std::string value, std::size_t line) {
  auto it = std::find_if(fields_.begin(), fields_.end(), [&](const auto& f) { return f.first == key; });
  if (it != fields_.end()) {
    it->second = std::move(value);
    lines_[static_cast<std::size_t>(it - fields_.begin())] = line;
  } else {
    fields_.emplace_back(std::move(key), std::move(value));
    lines_.push_back(line);
  }
}

std::size_t KatRecord::line(const std::string& key) const {
  for (std::size_t i = 0; i < fields_.size(); ++i) {
    if (fields_[i].first == key) return lines_[i];
  }
  return lines_.empty() ? 0 : lines_.front();
}

bool KatRecord::has(const std::string& key) const {
  return std::any_of(fields_.begin(), fields_.end(), [&](const auto& f) { return f.first == key; });
}

const std::string& KatRecord::text(const std::string& key) const {
  for (const auto& [k, v] : fields_) {
    if (k == key) return v;
  }
  throw InputError("test vector record has no field '" + key + "'");
}

Bytes KatRecord::bytes(const std::string& key) const { return from_hex(text(key)); }

long long KatRecord::integer(const std::string& key) const {
  const std::string& v = text(key);
  long long out = 0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc{} || ptr != v.data() + v.size()) {
    throw InputError("field '" + key + "' is not an integer: " + v);
  }
  return out;
}

std::vector<KatRecord> parse_kat(std::istream& in) {
  std::vector<KatRecord> records;
  KatRecord current;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string t = trim(line);
    if (t.empty()) {
      if (!current.empty()) records.push_back(std::move(current));
      current = KatRecord{};
      continue;
    }
    if (t.front() == '#' || t.front() == '[') continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos) {
      throw InputError("malformed test vector line " + std::to_string(line_no) + ": " + t);
    }
    current.set(trim(std::string_view(t).substr(0, eq)), trim(std::string_view(t).substr(eq + 1)), line_no);
  }
  if (!current.empty()) records.push_back(std::move(current));
  return records;
}

std::vector<KatRecord> load_kat(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open test vector file " + path.string());
  return parse_kat(in);
}

}  // namespace pqbench::cli
