#pragma once

#include <json.hpp>

#include <cstdio>
#include <stdexcept>
#include <string>
#include <vector>

namespace nanorod {

using json = nlohmann::json;

/// Invalid or unreadable configuration (exit code 2).
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Parses a JSON scenario file. Parse errors carry the line number.
json load_config(const std::string& path);

/// Applies NANOROD_<A>__<B>=value overrides from `env` ("KEY=value" strings):
/// the key path is lower-cased and split on double underscores; values are
/// parsed as JSON when possible, otherwise taken as strings.
void apply_env_overrides(json& cfg, const std::vector<std::string>& env,
                         const std::string& prefix = "NANOROD_");
/// Same, reading the process environment.
void apply_env_overrides(json& cfg);

/// Shortest round-trip decimal (%.17g).
std::string fmt(double v);

/// Comma-separated CSV writer with LF endings.
class CsvWriter {
 public:
  CsvWriter(const std::string& path, const std::vector<std::string>& header);
  ~CsvWriter();
  CsvWriter(const CsvWriter&) = delete;
  CsvWriter& operator=(const CsvWriter&) = delete;

  void row(const std::vector<std::string>& cells);

 private:
  std::FILE* f_ = nullptr;
};

void write_text(const std::string& path, const std::string& text);
void ensure_dir(const std::string& path);

}  // namespace nanorod
