#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

// Artifact files. Every artifact records the command, the full resolved
// configuration and the SHA-256 of its content:
//   CSV  - '#' header lines, then the body; the hash covers the body.
//   JSON - a leading "provenance" object; the hash covers the remaining
//          members serialized as compact JSON in file order.
namespace fracmaps::cli {

using Json = nlohmann::ordered_json;

struct Provenance {
  std::string command;
  std::vector<std::pair<std::string, std::string>> config;
};

std::string sha256_hex(std::string_view data);

/// Header text (each line starting with '#') for a CSV body.
std::string csv_header(const Provenance& p, std::string_view body);

void write_csv_artifact(const std::filesystem::path& path, const Provenance& p, std::string_view body);

/// Returns the document as written: provenance first, then `payload`.
Json json_document(const Provenance& p, const Json& payload);
void write_json_artifact(const std::filesystem::path& path, const Provenance& p, const Json& payload);

/// Recomputes the content hash of an artifact file and compares it with the
/// recorded one.
bool verify_artifact(const std::filesystem::path& path);

}  // namespace fracmaps::cli
