#include "core/config.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace loclab {

namespace {

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

}  // namespace

LabConfig LabConfig::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("config: cannot open '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return from_text(buf.str());
}

LabConfig LabConfig::from_text(const std::string& text) {
  LabConfig cfg;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("config: expected key=value, got '" + line + "'");
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw std::invalid_argument("config: empty key in '" + line + "'");
    cfg.kv_[key] = value;
  }
  return cfg;
}

std::string LabConfig::get_string(const std::string& key, const std::string& fallback) const {
  auto it = kv_.find(key);
  return it == kv_.end() ? fallback : it->second;
}

double LabConfig::get_double(const std::string& key, double fallback) const {
  auto it = kv_.find(key);
  if (it == kv_.end()) return fallback;
  try {
    return std::stod(it->second);
  } catch (...) {
    throw std::invalid_argument("config: bad number for '" + key + "': " + it->second);
  }
}

std::size_t LabConfig::get_size(const std::string& key, std::size_t fallback) const {
  auto it = kv_.find(key);
  if (it == kv_.end()) return fallback;
  try {
    return static_cast<std::size_t>(std::stoull(it->second));
  } catch (...) {
    throw std::invalid_argument("config: bad integer for '" + key + "': " + it->second);
  }
}

std::uint64_t LabConfig::get_u64(const std::string& key, std::uint64_t fallback) const {
  auto it = kv_.find(key);
  if (it == kv_.end()) return fallback;
  try {
    return std::stoull(it->second);
  } catch (...) {
    throw std::invalid_argument("config: bad integer for '" + key + "': " + it->second);
  }
}

double LabConfig::require_double(const std::string& key) const {
  if (!has(key)) throw std::invalid_argument("config: missing required key '" + key + "'");
  return get_double(key, 0.0);
}

std::vector<double> LabConfig::get_double_list(const std::string& key,
                                               const std::vector<double>& fallback) const {
  auto it = kv_.find(key);
  if (it == kv_.end()) return fallback;
  return parse_double_list(it->second);
}

std::vector<double> parse_double_list(const std::string& text) {
  std::vector<double> out;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, ',')) {
    item = trim(item);
    if (item.empty()) continue;
    try {
      out.push_back(std::stod(item));
    } catch (...) {
      throw std::invalid_argument("config: bad number in list: " + item);
    }
  }
  return out;
}

}  // namespace loclab
