#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

namespace mrtcli {

std::string sha256_hex(const std::string& bytes);

// Header shared by every table and the manifest. Nothing here depends on
// timing or thread count, so reproducible runs give identical bytes.
struct RunHeader {
  std::string command;
  std::string config_sha256;
  std::uint64_t seed = 0;
  long precision = 128;
  bool reproducible = true;
};

// Tables go to --out DIR when given, else to stdout. finish() writes
// manifest.json next to them (or to stderr).
class Output {
 public:
  Output(RunHeader header, std::optional<std::filesystem::path> dir);

  void csv(const std::string& name, const std::vector<std::string>& columns,
           const std::vector<std::vector<std::string>>& rows);
  void json(const std::string& name, nlohmann::json body);
  void text(const std::string& name, const std::string& body);
  void finish();

 private:
  void emit(const std::string& name, const std::string& bytes);

  RunHeader header_;
  std::optional<std::filesystem::path> dir_;
  nlohmann::json checksums_ = nlohmann::json::object();
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

std::string num(double x);

}  // namespace mrtcli
