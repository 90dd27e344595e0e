#include "sgcn/data/dataset.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"

namespace sgcn::data {

using nlohmann::json;

std::string validate_example(const RawExample& ex) {
  const std::size_t n = ex.tokens.size();
  if (n == 0) return "empty token list";
  auto check_span = [n](const char* name, std::size_t s, std::size_t e) -> std::string {
    if (s > e) return std::string(name) + " span start after end";
    if (e >= n) {
      return std::string(name) + "_end " + std::to_string(e) + " out of bounds for " +
             std::to_string(n) + " tokens";
    }
    return {};
  };
  if (auto r = check_span("subj", ex.subj_start, ex.subj_end); !r.empty()) return r;
  if (auto r = check_span("obj", ex.obj_start, ex.obj_end); !r.empty()) return r;
  if (ex.pos_tags.size() != n) {
    return "pos_tags length " + std::to_string(ex.pos_tags.size()) + " != " + std::to_string(n);
  }
  if (ex.ner_tags.size() != n) {
    return "ner_tags length " + std::to_string(ex.ner_tags.size()) + " != " + std::to_string(n);
  }
  if (ex.relation.empty()) return "missing relation";
  return {};
}

namespace {

const json& field(const json& rec, std::initializer_list<const char*> names) {
  for (const char* name : names) {
    if (auto it = rec.find(name); it != rec.end()) return *it;
  }
  throw DatasetError(std::string("missing field '") + *names.begin() + "'");
}

RawExample from_json(const json& rec) {
  RawExample ex;
  ex.id = field(rec, {"id"}).get<std::string>();
  ex.tokens = field(rec, {"tokens", "token"}).get<std::vector<std::string>>();
  ex.subj_start = field(rec, {"subj_start"}).get<std::size_t>();
  ex.subj_end = field(rec, {"subj_end"}).get<std::size_t>();
  ex.obj_start = field(rec, {"obj_start"}).get<std::size_t>();
  ex.obj_end = field(rec, {"obj_end"}).get<std::size_t>();
  ex.subj_type = field(rec, {"subj_type"}).get<std::string>();
  ex.obj_type = field(rec, {"obj_type"}).get<std::string>();
  ex.pos_tags = field(rec, {"pos_tags", "stanford_pos"}).get<std::vector<std::string>>();
  ex.ner_tags = field(rec, {"ner_tags", "stanford_ner"}).get<std::vector<std::string>>();
  ex.relation = field(rec, {"relation"}).get<std::string>();
  return ex;
}

json to_json(const RawExample& ex) {
  json rec = json::object();
  rec["id"] = ex.id;
  rec["relation"] = ex.relation;
  rec["tokens"] = ex.tokens;
  rec["subj_start"] = ex.subj_start;
  rec["subj_end"] = ex.subj_end;
  rec["obj_start"] = ex.obj_start;
  rec["obj_end"] = ex.obj_end;
  rec["subj_type"] = ex.subj_type;
  rec["obj_type"] = ex.obj_type;
  rec["pos_tags"] = ex.pos_tags;
  rec["ner_tags"] = ex.ner_tags;
  return rec;
}

}  // namespace

std::vector<RawExample> parse_dataset(const std::string& json_text, const std::string& source) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw DatasetError(source + ": parse failure: " + e.what());
  }
  if (!doc.is_array()) throw DatasetError(source + ": expected a list of records");

  std::vector<RawExample> out;
  out.reserve(doc.size());
  std::ostringstream problems;
  std::size_t bad = 0;
  for (std::size_t i = 0; i < doc.size(); ++i) {
    const json& rec = doc[i];
    std::string id = "#" + std::to_string(i);
    if (rec.is_object() && rec.contains("id") && rec["id"].is_string()) id = rec["id"].get<std::string>();
    std::string reason;
    try {
      if (!rec.is_object()) throw DatasetError("record is not an object");
      RawExample ex = from_json(rec);
      reason = validate_example(ex);
      if (reason.empty()) out.push_back(std::move(ex));
    } catch (const json::exception& e) {
      reason = std::string("bad field type: ") + e.what();
    } catch (const DatasetError& e) {
      reason = e.what();
    }
    if (!reason.empty()) {
      if (bad < 20) problems << "\n  record " << id << ": " << reason;
      ++bad;
    }
  }
  if (bad > 0) {
    throw DatasetError(source + ": " + std::to_string(bad) + " malformed record(s)" + problems.str());
  }
  return out;
}

std::vector<RawExample> load_dataset(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DatasetError("cannot open dataset file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_dataset(buf.str(), path.string());
}

std::string serialize_dataset(const std::vector<RawExample>& examples) {
  std::string out = "[";
  for (std::size_t i = 0; i < examples.size(); ++i) {
    out += i == 0 ? "\n" : ",\n";
    out += to_json(examples[i]).dump();
  }
  out += examples.empty() ? "]\n" : "\n]\n";
  return out;
}

void save_dataset(const std::filesystem::path& path, const std::vector<RawExample>& examples) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DatasetError("cannot write dataset file " + path.string());
  out << serialize_dataset(examples);
}

}  // namespace sgcn::data
