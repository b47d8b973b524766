#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace clsvm {

/// A named group of consecutive attribute slots, e.g. the four age slots.
/// Exclusive families are one-hot encoded.
struct AttributeFamily {
  std::string name;
  std::size_t begin = 0;
  std::size_t end = 0;  // one past the last slot
  bool exclusive = false;

  bool operator==(const AttributeFamily&) const = default;
};

/// Ordered binary attribute slots and their grouping into families.
///
/// Invariants: slot names are unique and the family ranges partition
/// [0, size()) in order.
class AttributeSchema {
 public:
  AttributeSchema(std::vector<std::string> slots, std::vector<AttributeFamily> families);

  /// The 19-slot face attribute schema.
  static AttributeSchema default_schema();

  /// n independent slots named attr_00, attr_01, ...
  static AttributeSchema generic(std::size_t n);

  std::size_t size() const noexcept { return slots_.size(); }
  const std::vector<std::string>& slots() const noexcept { return slots_; }
  const std::vector<AttributeFamily>& families() const noexcept { return families_; }
  const std::string& slot(std::size_t i) const { return slots_.at(i); }
  std::optional<std::size_t> index_of(const std::string& name) const;

  bool operator==(const AttributeSchema&) const = default;

 private:
  std::vector<std::string> slots_;
  std::vector<AttributeFamily> families_;
};

nlohmann::json schema_to_json(const AttributeSchema& schema);
AttributeSchema schema_from_json(const nlohmann::json& j);
AttributeSchema load_schema(const std::string& path);

}  // namespace clsvm
