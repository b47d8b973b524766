#pragma once

#include <span>
#include <string>
#include <vector>

#include "clsvm/core/json_util.hpp"
#include "clsvm/core/types.hpp"

namespace clsvm {

/// Parse one JSONL dataset record {"id", "x", "a"?, "y"?}. `dim` is the
/// expected feature dimension, or 0 to accept any.
Sample sample_from_json(const Json& j, const AttributeSchema& schema, std::size_t dim,
                        const ScoreRange& range = {});
Json sample_to_json(const Sample& s);

/// Load and validate a line-delimited JSON dataset. Every record must share
/// the first record's feature dimension and match the schema's slot count.
std::vector<Sample> load_dataset(const std::string& path, const AttributeSchema& expected_schema,
                                 const ScoreRange& range = {});

void save_dataset(const std::string& path, std::span<const Sample> samples);

}  // namespace clsvm
