#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "sgcn/data/example.hpp"

namespace sgcn::data {

/// Reads a JSON list of records. Field names follow RawExample; the TACRED
/// keys `token`, `stanford_pos` and `stanford_ner` are accepted as aliases.
/// Every record is validated; a DatasetError lists each bad record's id and reason.
std::vector<RawExample> load_dataset(const std::filesystem::path& path);
std::vector<RawExample> parse_dataset(const std::string& json_text, const std::string& source = "<memory>");

/// Writes records with the canonical field names, one record per line.
void save_dataset(const std::filesystem::path& path, const std::vector<RawExample>& examples);
std::string serialize_dataset(const std::vector<RawExample>& examples);

}  // namespace sgcn::data
