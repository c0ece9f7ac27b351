#pragma once

// Reader for NIST-style "key = value" test-vector files (.rsp and the
// Keccak ShortMsgKAT files). Records are separated by blank lines; lines
// starting with '#' or '[' are ignored.

#include "pqbench/bytes.hpp"

#include <filesystem>
#include <istream>
#include <string>
#include <utility>
#include <vector>

namespace pqbench::cli {

class KatRecord {
 public:
  /// `line` is the 1-based source line, 0 when built in memory.
  void set(std::string key, std::string value, std::size_t line = 0);

  bool has(const std::string& key) const;
  const std::string& text(const std::string& key) const;  // throws InputError
  Bytes bytes(const std::string& key) const;
  long long integer(const std::string& key) const;

  const std::vector<std::pair<std::string, std::string>>& fields() const { return fields_; }
  bool empty() const { return fields_.empty(); }
  /// Source line of a field, or of the record's first field when `key`
  /// is empty or unknown.
  std::size_t line(const std::string& key = {}) const;

 private:
  std::vector<std::size_t> lines_;
  std::vector<std::pair<std::string, std::string>> fields_;
};

std::vector<KatRecord> parse_kat(std::istream& in);
std::vector<KatRecord> load_kat(const std::filesystem::path& path);

}  // namespace pqbench::cli
