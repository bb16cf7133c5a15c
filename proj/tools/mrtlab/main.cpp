// mrtlab: batch front end for the experiments in the core library.
//
//   mrtlab [--config FILE] [--seed U64] [--threads N] [--precision BITS]
//          [--reproducible] [--out DIR] COMMAND [key=value ...]
//
// Parameters for COMMAND come from the config file's COMMAND block, then from
// key=value arguments (values are JSON, bare words are strings).

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "commands.hpp"
#include "json.hpp"
#include "mrtlab/error.hpp"
#include "output.hpp"

namespace {

enum Exit {
  exit_ok = 0,
  exit_other = 1,
  exit_validation = 2,
  exit_resource = 3,
  exit_precision = 4,
  exit_io = 5,
  exit_search_exhausted = 6,
  exit_certificate_refused = 7,
  exit_state = 8,
};

nlohmann::json parse_value(const std::string& text) {
  try {
    return nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception&) {
    return text;
  }
}

int run(int argc, char** argv) {
  CLI::App app{"mrtlab: MRT functions, nu_d processes and their statistics"};
  app.require_subcommand(1);
  std::string config_path, out_dir;
  std::uint64_t seed = 1;
  unsigned threads = 1;
  long precision = 128;
  bool reproducible = false;
  app.add_option("--config", config_path, "JSON config with one block per command");
  app.add_option("--seed", seed, "seed for sampling commands");
  app.add_option("--threads", threads, "worker threads")->check(CLI::Range(1u, 1024u));
  app.add_option("--precision", precision, "MPFR working precision in bits")->check(CLI::Range(53L, 1L << 20));
  app.add_flag("--reproducible", reproducible, "fixed chunking, bit-identical for any thread count");
  app.add_option("--out", out_dir, "directory for tables and manifest.json (default stdout)");

  std::map<std::string, std::vector<std::string>> kv;
  for (const auto& [name, fn] : mrtcli::commands()) {
    auto* sub = app.add_subcommand(name);
    sub->add_option("params", kv[name], "key=value parameters");
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? exit_ok : exit_validation;
  }
  const std::string command = app.get_subcommands().front()->get_name();

  nlohmann::json file = nlohmann::json::object();
  std::filesystem::path base = std::filesystem::current_path();
  if (!config_path.empty()) {
    std::ifstream f(config_path);
    if (!f) throw mrtlab::IoError("cannot open config " + config_path);
    try {
      file = nlohmann::json::parse(f);
    } catch (const nlohmann::json::exception& e) {
      throw mrtlab::IoError("config " + config_path + " is not valid JSON: " + e.what());
    }
    if (!file.is_object()) throw mrtlab::ArgumentError("config must be a JSON object");
    base = std::filesystem::absolute(config_path).parent_path();
  }
  mrtcli::Context ctx;
  ctx.params = file.value(command, nlohmann::json::object());
  if (!ctx.params.is_object()) throw mrtlab::ArgumentError("config block '" + command + "' must be an object");
  for (const auto& item : kv[command]) {
    const auto eq = item.find('=');
    if (eq == std::string::npos || eq == 0) throw mrtlab::ArgumentError("expected key=value, got '" + item + "'");
    ctx.params[item.substr(0, eq)] = parse_value(item.substr(eq + 1));
  }
  ctx.seed = seed;
  ctx.precision = precision;
  ctx.parallel.threads = threads;
  ctx.parallel.reproducible = reproducible;
  ctx.base_dir = base;

  // Thread count is left out: results do not depend on it.
  const nlohmann::json effective = {{"command", command},       {"params", ctx.params},
                                    {"seed", seed},             {"precision", precision},
                                    {"reproducible", reproducible}};
  mrtcli::RunHeader header{command, mrtcli::sha256_hex(effective.dump()), seed, precision, reproducible};
  mrtcli::Output out(header, out_dir.empty() ? std::nullopt : std::optional<std::filesystem::path>(out_dir));
  mrtcli::commands().at(command)(ctx, out);
  out.finish();
  return exit_ok;
}

}  // namespace

int main(int argc, char** argv) {
  auto fail = [](int code, const char* kind, const std::exception& e) {
    std::fprintf(stderr, "mrtlab: %s: %s\n", kind, e.what());
    return code;
  };
  try {
    return run(argc, argv);
  } catch (const mrtlab::SearchExhausted& e) {
    return fail(exit_search_exhausted, "search exhausted", e);
  } catch (const mrtlab::ArgumentError& e) {
    return fail(exit_validation, "invalid argument", e);
  } catch (const mrtlab::DomainError& e) {
    return fail(exit_validation, "domain error", e);
  } catch (const mrtlab::InvariantError& e) {
    return fail(exit_validation, "invalid parameters", e);
  } catch (const mrtlab::ResourceError& e) {
    return fail(exit_resource, "resource limit", e);
  } catch (const mrtlab::PrecisionError& e) {
    return fail(exit_precision, "precision", e);
  } catch (const mrtlab::IoError& e) {
    return fail(exit_io, "file error", e);
  } catch (const mrtlab::CertificateRefused& e) {
    return fail(exit_certificate_refused, "certificate refused", e);
  } catch (const mrtlab::StateError& e) {
    return fail(exit_state, "state error", e);
  } catch (const std::exception& e) {
    return fail(exit_other, "error", e);
  }
}
