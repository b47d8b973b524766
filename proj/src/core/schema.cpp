#include "clsvm/core/schema.hpp"

#include <cstdio>
#include <fstream>
#include <set>

#include "clsvm/core/error.hpp"

namespace clsvm {

AttributeSchema::AttributeSchema(std::vector<std::string> slots,
                                 std::vector<AttributeFamily> families)
    : slots_(std::move(slots)), families_(std::move(families)) {
  std::set<std::string> seen;
  for (const auto& s : slots_) {
    if (s.empty()) throw SchemaError("attribute schema: empty slot name");
    if (!seen.insert(s).second) throw SchemaError("attribute schema: duplicate slot '" + s + "'");
  }
  std::size_t next = 0;
  for (const auto& f : families_) {
    if (f.begin != next || f.end <= f.begin) {
      throw SchemaError("attribute schema: family '" + f.name +
                        "' does not continue the partition of slot indices");
    }
    next = f.end;
  }
  if (next != slots_.size()) {
    throw SchemaError("attribute schema: families cover " + std::to_string(next) + " of " +
                      std::to_string(slots_.size()) + " slots");
  }
}

AttributeSchema AttributeSchema::default_schema() {
  std::vector<std::string> slots;
  std::vector<AttributeFamily> families;
  auto add = [&](std::string family, std::vector<std::string> names, bool exclusive) {
    AttributeFamily f{std::move(family), slots.size(), slots.size() + names.size(), exclusive};
    for (auto& n : names) slots.push_back(std::move(n));
    families.push_back(std::move(f));
  };
  add("Gender", {"gender"}, false);
  add("Age", {"age_young", "age_teen", "age_middle", "age_old"}, true);
  add("Eye", {"eye_open"}, false);
  add("MouthVariation", {"mouth_variation"}, false);
  add("Mouth", {"mouth_open"}, false);
  add("Teeth", {"teeth_visible"}, false);
  add("Smile", {"smile"}, false);
  add("Glasses", {"glasses"}, false);
  add("Beard", {"beard"}, false);
  add("SkinColor", {"skin_bright"}, false);
  add("HairColor", {"hair_black", "hair_blonde", "hair_other"}, true);
  add("HairOrnaments", {"hair_ornaments"}, false);
  add("FaceCover", {"face_cover"}, false);
  // Also called "cheek smoothness" in some figure captions; one slot.
  add("SkinSmoothness", {"skin_smoothness"}, false);
  return AttributeSchema(std::move(slots), std::move(families));
}

AttributeSchema AttributeSchema::generic(std::size_t n) {
  std::vector<std::string> slots;
  std::vector<AttributeFamily> families;
  for (std::size_t i = 0; i < n; ++i) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "attr_%02zu", i);
    slots.emplace_back(buf);
    families.push_back({buf, i, i + 1, false});
  }
  return AttributeSchema(std::move(slots), std::move(families));
}

std::optional<std::size_t> AttributeSchema::index_of(const std::string& name) const {
  for (std::size_t i = 0; i < slots_.size(); ++i) {
    if (slots_[i] == name) return i;
  }
  return std::nullopt;
}

nlohmann::json schema_to_json(const AttributeSchema& schema) {
  nlohmann::json families = nlohmann::json::array();
  for (const auto& f : schema.families()) {
    families.push_back({{"name", f.name}, {"begin", f.begin}, {"end", f.end},
                        {"exclusive", f.exclusive}});
  }
  return {{"slots", schema.slots()}, {"families", families}};
}

AttributeSchema schema_from_json(const nlohmann::json& j) {
  try {
    auto slots = j.at("slots").get<std::vector<std::string>>();
    std::vector<AttributeFamily> families;
    if (j.contains("families")) {
      for (const auto& f : j.at("families")) {
        families.push_back({f.at("name").get<std::string>(), f.at("begin").get<std::size_t>(),
                            f.at("end").get<std::size_t>(), f.value("exclusive", false)});
      }
    } else {
      for (std::size_t i = 0; i < slots.size(); ++i) families.push_back({slots[i], i, i + 1, false});
    }
    return AttributeSchema(std::move(slots), std::move(families));
  } catch (const nlohmann::json::exception& e) {
    throw SchemaError(std::string("attribute schema: ") + e.what());
  }
}

AttributeSchema load_schema(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open schema file '" + path + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw SchemaError("schema file '" + path + "': " + e.what());
  }
  return schema_from_json(j);
}

}  // namespace clsvm
