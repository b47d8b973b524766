#pragma once

#include <span>
#include <string>
#include <vector>

#include "clsvm/core/json_util.hpp"
#include "clsvm/core/types.hpp"

namespace clsvm::eval {

double mae(std::span<const double> pred, std::span<const double> truth);

/// Per-slot fraction of samples whose binarized prediction equals the
/// binarized truth. Rows are samples.
Vector attribute_accuracy(const Matrix& pred_binary, const Matrix& truth_binary);

struct WeightEntry {
  std::string slot;
  std::size_t index = 0;
  double weight = 0.0;
};

/// Slots sorted by descending a->y weight; ties keep slot order.
std::vector<WeightEntry> attribute_weight_report(const AttributeSchema& schema, const Vector& w_ay);
std::vector<WeightEntry> attribute_weight_report(const CLSVMModel& model);

std::string format_weight_table(const std::vector<WeightEntry>& report);
/// rank,slot,index,weight
std::string weight_csv(const std::vector<WeightEntry>& report);

/// Published MAE row for the four compared methods, carried as reference text.
struct PublishedMae {
  static constexpr double nn = 1.92;
  static constexpr double fs = 1.49;
  static constexpr double fas = 1.35;
  static constexpr double clsvm = 1.27;
};

Json published_reference_json();

}  // namespace clsvm::eval
