#pragma once

#include <functional>
#include <string>

#include <json.hpp>

#include "clsvm/core/types.hpp"

namespace clsvm {

using Json = nlohmann::json;

Json vector_to_json(const Vector& v);
/// Throws SchemaError naming `what` on non-arrays or non-numeric entries.
Vector vector_from_json(const Json& j, const std::string& what);

/// Row-major nested arrays.
Json matrix_to_json(const Matrix& m);
Matrix matrix_from_json(const Json& j, const std::string& what);

Json read_json_file(const std::string& path);

/// Calls `on_record(json, line_number)` for every non-blank line.
void for_each_jsonl(const std::string& path, const std::function<void(const Json&, std::size_t)>& on_record);

/// Write to a temporary sibling and rename over `path`.
void write_file_atomic(const std::string& path, const std::string& content);

/// Deterministic text form: 2-space indent for documents, compact for JSONL.
std::string dump_document(const Json& j);

}  // namespace clsvm
