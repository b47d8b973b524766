#include "clsvm/core/dataset.hpp"

#include <sstream>

#include "clsvm/core/error.hpp"

namespace clsvm {

Sample sample_from_json(const Json& j, const AttributeSchema& schema, std::size_t dim,
                        const ScoreRange& range) {
  if (!j.is_object()) throw SchemaError("dataset record is not a JSON object");
  Sample s;
  if (!j.contains("id") || !j["id"].is_string()) throw SchemaError("dataset record without string \"id\"");
  s.id = j["id"].get<std::string>();
  if (!j.contains("x")) throw SchemaError("sample '" + s.id + "': missing \"x\"");
  s.x = vector_from_json(j["x"], "sample '" + s.id + "' x");
  if (j.contains("a") && !j["a"].is_null()) s.a = vector_from_json(j["a"], "sample '" + s.id + "' a");
  if (j.contains("y") && !j["y"].is_null()) {
    if (!j["y"].is_number()) throw SchemaError("sample '" + s.id + "': \"y\" is not a number");
    s.y = j["y"].get<double>();
  }
  validate_sample(s, schema.size(), dim, range);
  return s;
}

Json sample_to_json(const Sample& s) {
  Json j;
  j["id"] = s.id;
  j["x"] = vector_to_json(s.x);
  if (s.a) j["a"] = vector_to_json(*s.a);
  if (s.y) j["y"] = *s.y;
  return j;
}

std::vector<Sample> load_dataset(const std::string& path, const AttributeSchema& expected_schema,
                                 const ScoreRange& range) {
  std::vector<Sample> samples;
  std::size_t dim = 0;
  for_each_jsonl(path, [&](const Json& j, std::size_t line) {
    try {
      samples.push_back(sample_from_json(j, expected_schema, dim, range));
    } catch (const Error& e) {
      throw_error(e.category(), "'" + path + "' line " + std::to_string(line) + ": " + e.what());
    }
    if (dim == 0) dim = static_cast<std::size_t>(samples.back().x.size());
  });
  return samples;
}

void save_dataset(const std::string& path, std::span<const Sample> samples) {
  std::ostringstream out;
  for (const auto& s : samples) out << sample_to_json(s).dump() << '\n';
  write_file_atomic(path, out.str());
}

}  // namespace clsvm
