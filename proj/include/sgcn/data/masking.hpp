#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "sgcn/data/example.hpp"

namespace sgcn::data {

std::string subject_mask_token(std::string_view entity_type);
std::string object_mask_token(std::string_view entity_type);
bool is_mask_token(std::string_view token);

/// Replaces every subject position with SUBJ-<type> and every object position
/// with OBJ-<type>. Sequence length and span indices are preserved.
/// Throws DatasetError when the spans overlap or are out of range.
std::vector<std::string> mask_entities(const RawExample& ex);

/// Lowercases ordinary tokens for embedding lookup; mask tokens keep their case.
std::string normalize_token(std::string_view token);

}  // namespace sgcn::data
