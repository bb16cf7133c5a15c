#include "output.hpp"

#include <openssl/evp.h>

#include <cstdio>
#include <fstream>
#include <iostream>

#include "mrtlab/error.hpp"

namespace mrtcli {

std::string sha256_hex(const std::string& bytes) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (!EVP_Digest(bytes.data(), bytes.size(), md, &len, EVP_sha256(), nullptr))
    throw mrtlab::Error("sha256 failed");
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned i = 0; i < len; ++i) {
    out += hex[md[i] >> 4];
    out += hex[md[i] & 15];
  }
  return out;
}

std::string num(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

Output::Output(RunHeader header, std::optional<std::filesystem::path> dir)
    : header_(std::move(header)), dir_(std::move(dir)) {
  if (dir_) {
    std::error_code ec;
    std::filesystem::create_directories(*dir_, ec);
    if (ec) throw mrtlab::IoError("cannot create output directory " + dir_->string() + ": " + ec.message());
  }
}

static nlohmann::json header_json(const RunHeader& h) {
  return {{"tool", "mrtlab"},        {"version", MRTLAB_VERSION}, {"command", h.command},
          {"config_sha256", h.config_sha256}, {"seed", h.seed},          {"precision", h.precision},
          {"reproducible", h.reproducible}};
}

void Output::emit(const std::string& name, const std::string& bytes) {
  checksums_[name] = sha256_hex(bytes);
  if (!dir_) {
    std::cout << bytes;
    if (!bytes.empty() && bytes.back() != '\n') std::cout << '\n';
    return;
  }
  std::ofstream f(*dir_ / name, std::ios::binary);
  f << bytes;
  if (!f) throw mrtlab::IoError("cannot write " + (*dir_ / name).string());
}

void Output::csv(const std::string& name, const std::vector<std::string>& columns,
                 const std::vector<std::vector<std::string>>& rows) {
  std::string s = "# " + header_json(header_).dump() + "\n";
  for (std::size_t i = 0; i < columns.size(); ++i) s += (i ? "," : "") + columns[i];
  s += '\n';
  for (const auto& r : rows) {
    for (std::size_t i = 0; i < r.size(); ++i) s += (i ? "," : "") + r[i];
    s += '\n';
  }
  emit(name, s);
}

void Output::json(const std::string& name, nlohmann::json body) {
  body["manifest"] = header_json(header_);
  emit(name, body.dump(2) + "\n");
}

void Output::text(const std::string& name, const std::string& body) { emit(name, body); }

void Output::finish() {
  auto m = header_json(header_);
  m["tables"] = checksums_;
  m["wall_seconds"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  const std::string bytes = m.dump(2) + "\n";
  if (!dir_) {
    std::cerr << bytes;
    return;
  }
  std::ofstream f(*dir_ / "manifest.json");
  f << bytes;
  if (!f) throw mrtlab::IoError("cannot write manifest");
}

}  // namespace mrtcli
