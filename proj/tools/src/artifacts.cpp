#include "fracmaps/cli/artifacts.hpp"

#include <array>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <openssl/evp.h>

#include "fracmaps/errors.hpp"

namespace fracmaps::cli {

namespace {

constexpr std::string_view kTool = "fracmaps 0.1.0";

void write_file(const std::filesystem::path& path, std::string_view text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw Error("cannot write " + path.string());
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Json payload_of(const Json& doc) {
  Json payload = Json::object();
  for (auto it = doc.begin(); it != doc.end(); ++it)
    if (it.key() != "provenance") payload[it.key()] = it.value();
  return payload;
}

}  // namespace

std::string sha256_hex(std::string_view data) {
  std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), md.data(), &len, EVP_sha256(), nullptr) != 1)
    throw Error("SHA-256 failed");
  static constexpr char hex[] = "0123456789abcdef";
  std::string out;
  out.reserve(2 * len);
  for (unsigned int i = 0; i < len; ++i) {
    out += hex[md[i] >> 4];
    out += hex[md[i] & 0xf];
  }
  return out;
}

std::string csv_header(const Provenance& p, std::string_view body) {
  std::string out = "# " + std::string(kTool) + " " + p.command + "\n";
  for (const auto& [k, v] : p.config) out += "# config " + k + " = " + v + "\n";
  out += "# content_sha256 " + sha256_hex(body) + "\n";
  return out;
}

void write_csv_artifact(const std::filesystem::path& path, const Provenance& p, std::string_view body) {
  write_file(path, csv_header(p, body) + std::string(body));
}

Json json_document(const Provenance& p, const Json& payload) {
  Json config = Json::object();
  for (const auto& [k, v] : p.config) config[k] = v;
  Json doc = Json::object();
  doc["provenance"] = {{"tool", kTool},
                       {"command", p.command},
                       {"config", config},
                       {"content_sha256", sha256_hex(payload.dump())}};
  for (auto it = payload.begin(); it != payload.end(); ++it) doc[it.key()] = it.value();
  return doc;
}

void write_json_artifact(const std::filesystem::path& path, const Provenance& p, const Json& payload) {
  write_file(path, json_document(p, payload).dump(2) + "\n");
}

bool verify_artifact(const std::filesystem::path& path) {
  const std::string text = read_file(path);
  if (path.extension() == ".json") {
    const Json doc = Json::parse(text);
    return doc.at("provenance").at("content_sha256").get<std::string>() == sha256_hex(payload_of(doc).dump());
  }
  // CSV: header lines up to and including the hash line.
  const std::string tag = "# content_sha256 ";
  const auto at = text.find(tag);
  if (at == std::string::npos) return false;
  const auto eol = text.find('\n', at);
  if (eol == std::string::npos) return false;
  const std::string recorded = text.substr(at + tag.size(), eol - at - tag.size());
  return recorded == sha256_hex(std::string_view(text).substr(eol + 1));
}

}  // namespace fracmaps::cli
