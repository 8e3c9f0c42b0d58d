#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

namespace reckon {

/// Parses a line-delimited file of JSON objects. Blank lines are skipped;
/// a malformed line raises ErrorKind::corruption naming the file and line.
std::vector<nlohmann::json> read_jsonl(const std::filesystem::path& path);

void append_jsonl(const std::filesystem::path& path, const nlohmann::json& record);
void write_jsonl(const std::filesystem::path& path, const std::vector<nlohmann::json>& records);

/// Write-temp-then-rename so readers never observe a partial file.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

std::string read_file(const std::filesystem::path& path);

}  // namespace reckon
