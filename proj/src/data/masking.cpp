#include "sgcn/data/masking.hpp"

#include <algorithm>
#include <cctype>

namespace sgcn::data {

namespace {

std::string upper(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
  return out;
}

}  // namespace

std::string subject_mask_token(std::string_view entity_type) { return "SUBJ-" + upper(entity_type); }

std::string object_mask_token(std::string_view entity_type) { return "OBJ-" + upper(entity_type); }

bool is_mask_token(std::string_view token) {
  return token.starts_with("SUBJ-") || token.starts_with("OBJ-");
}

std::vector<std::string> mask_entities(const RawExample& ex) {
  const std::size_t n = ex.tokens.size();
  const Span subj = ex.subj();
  const Span obj = ex.obj();
  if (subj.start > subj.end || subj.end >= n || obj.start > obj.end || obj.end >= n) {
    throw DatasetError("mask_entities: span out of range in record " + ex.id);
  }
  if (subj.overlaps(obj)) {
    throw DatasetError("mask_entities: subject and object spans overlap in record " + ex.id);
  }
  std::vector<std::string> out = ex.tokens;
  const std::string s = subject_mask_token(ex.subj_type);
  const std::string o = object_mask_token(ex.obj_type);
  for (std::size_t i = subj.start; i <= subj.end; ++i) out[i] = s;
  for (std::size_t i = obj.start; i <= obj.end; ++i) out[i] = o;
  return out;
}

std::string normalize_token(std::string_view token) {
  if (is_mask_token(token)) return std::string(token);
  std::string out(token);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

}  // namespace sgcn::data
