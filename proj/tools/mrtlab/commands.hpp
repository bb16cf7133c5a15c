#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <string>

#include "json.hpp"
#include "mrtlab/summation.hpp"
#include "output.hpp"

namespace mrtcli {

struct Context {
  nlohmann::json params;  // effective parameter block for the command
  std::uint64_t seed = 0;
  long precision = 128;
  mrtlab::ParallelOptions parallel;
  std::filesystem::path base_dir;  // relative paths in the config resolve here
};

using Command = std::function<void(const Context&, Output&)>;

// Name -> handler. Every handler validates its block before computing.
const std::map<std::string, Command>& commands();

}  // namespace mrtcli
