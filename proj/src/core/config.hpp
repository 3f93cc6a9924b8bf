#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace loclab {

// Plain-text key=value configuration ('#' starts a comment). CLI flags are
// merged on top of file values.
class LabConfig {
 public:
  LabConfig() = default;
  static LabConfig from_file(const std::string& path);
  static LabConfig from_text(const std::string& text);

  void set(const std::string& key, const std::string& value) { kv_[key] = value; }
  bool has(const std::string& key) const { return kv_.count(key) > 0; }

  std::string get_string(const std::string& key, const std::string& fallback) const;
  double get_double(const std::string& key, double fallback) const;
  std::size_t get_size(const std::string& key, std::size_t fallback) const;
  std::uint64_t get_u64(const std::string& key, std::uint64_t fallback) const;
  // Throws std::invalid_argument naming the key when absent.
  double require_double(const std::string& key) const;

  std::vector<double> get_double_list(const std::string& key,
                                      const std::vector<double>& fallback) const;

  const std::map<std::string, std::string>& entries() const { return kv_; }

 private:
  std::map<std::string, std::string> kv_;
};

std::vector<double> parse_double_list(const std::string& text);

}  // namespace loclab
