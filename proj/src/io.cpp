#include "nanorod/io.hpp"

#include <algorithm>
#include <cctype>
#include <filesystem>
#include <fstream>
#include <sstream>

extern char** environ;

namespace nanorod {

json load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  const std::string text = ss.str();
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    const std::size_t at = std::min<std::size_t>(e.byte, text.size());
    const long line = 1 + std::count(text.begin(), text.begin() + long(at), '\n');
    throw ConfigError(path + ":" + std::to_string(line) + ": " + e.what());
  }
}

void apply_env_overrides(json& cfg, const std::vector<std::string>& env,
                         const std::string& prefix) {
  for (const auto& kv : env) {
    if (kv.rfind(prefix, 0) != 0) continue;
    const auto eq = kv.find('=');
    if (eq == std::string::npos) continue;
    std::string key = kv.substr(prefix.size(), eq - prefix.size());
    const std::string value = kv.substr(eq + 1);
    std::transform(key.begin(), key.end(), key.begin(),
                   [](unsigned char c) { return char(std::tolower(c)); });
    json* node = &cfg;
    std::size_t pos = 0;
    while (true) {
      const auto next = key.find("__", pos);
      const std::string part = key.substr(pos, next == std::string::npos ? next : next - pos);
      if (part.empty()) throw ConfigError("malformed override " + kv);
      if (next == std::string::npos) {
        json parsed = json::parse(value, nullptr, false);
        (*node)[part] = parsed.is_discarded() ? json(value) : parsed;
        break;
      }
      if (!(*node)[part].is_object()) (*node)[part] = json::object();
      node = &(*node)[part];
      pos = next + 2;
    }
  }
}

void apply_env_overrides(json& cfg) {
  std::vector<std::string> env;
  for (char** e = environ; e && *e; ++e) env.emplace_back(*e);
  std::sort(env.begin(), env.end());
  apply_env_overrides(cfg, env);
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

CsvWriter::CsvWriter(const std::string& path, const std::vector<std::string>& header) {
  f_ = std::fopen(path.c_str(), "w");
  if (!f_) throw std::runtime_error("cannot write " + path);
  row(header);
}

CsvWriter::~CsvWriter() {
  if (f_) std::fclose(f_);
}

void CsvWriter::row(const std::vector<std::string>& cells) {
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) std::fputc(',', f_);
    std::fputs(cells[i].c_str(), f_);
  }
  std::fputc('\n', f_);
  std::fflush(f_);
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
}

void ensure_dir(const std::string& path) { std::filesystem::create_directories(path); }

}  // namespace nanorod
