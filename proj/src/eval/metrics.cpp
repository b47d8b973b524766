#include "clsvm/eval/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <sstream>

#include "clsvm/core/error.hpp"

namespace clsvm::eval {

double mae(std::span<const double> pred, std::span<const double> truth) {
  if (pred.size() != truth.size()) throw SchemaError("mae: length mismatch");
  if (pred.empty()) throw ValidationError("mae: empty input");
  double total = 0.0;
  for (std::size_t i = 0; i < pred.size(); ++i) total += std::abs(pred[i] - truth[i]);
  return total / static_cast<double>(pred.size());
}

Vector attribute_accuracy(const Matrix& pred_binary, const Matrix& truth_binary) {
  if (pred_binary.rows() != truth_binary.rows() || pred_binary.cols() != truth_binary.cols()) {
    throw SchemaError("attribute_accuracy: shape mismatch");
  }
  if (pred_binary.rows() == 0) throw ValidationError("attribute_accuracy: no samples");
  const auto p = (pred_binary.array() >= kActivationThreshold);
  const auto t = (truth_binary.array() >= kActivationThreshold);
  const Matrix agree = (p == t).cast<double>().matrix();
  return agree.colwise().mean().transpose();
}

std::vector<WeightEntry> attribute_weight_report(const AttributeSchema& schema, const Vector& w_ay) {
  if (static_cast<std::size_t>(w_ay.size()) != schema.size()) throw SchemaError("weight report: dimension mismatch");
  std::vector<WeightEntry> out;
  for (std::size_t i = 0; i < schema.size(); ++i) out.push_back({schema.slot(i), i, w_ay(static_cast<Eigen::Index>(i))});
  std::stable_sort(out.begin(), out.end(), [](const WeightEntry& a, const WeightEntry& b) { return a.weight > b.weight; });
  return out;
}

std::vector<WeightEntry> attribute_weight_report(const CLSVMModel& model) {
  return attribute_weight_report(model.schema, model.predictors.w_ay);
}

std::string format_weight_table(const std::vector<WeightEntry>& report) {
  std::size_t width = 4;
  for (const auto& e : report) width = std::max(width, e.slot.size());
  std::ostringstream out;
  char line[256];
  std::snprintf(line, sizeof line, "%4s  %-*s  %12s\n", "rank", static_cast<int>(width), "slot", "weight");
  out << line;
  for (std::size_t r = 0; r < report.size(); ++r) {
    std::snprintf(line, sizeof line, "%4zu  %-*s  %12.6f\n", r + 1, static_cast<int>(width), report[r].slot.c_str(),
                  report[r].weight);
    out << line;
  }
  return out.str();
}

std::string weight_csv(const std::vector<WeightEntry>& report) {
  std::ostringstream out;
  out << "rank,slot,index,weight\n";
  char buf[64];
  for (std::size_t r = 0; r < report.size(); ++r) {
    std::snprintf(buf, sizeof buf, "%.17g", report[r].weight);
    out << (r + 1) << ',' << report[r].slot << ',' << report[r].index << ',' << buf << '\n';
  }
  return out.str();
}

Json published_reference_json() {
  return {{"NN", PublishedMae::nn}, {"F-S", PublishedMae::fs}, {"F-A-S", PublishedMae::fas},
          {"C-LSVM", PublishedMae::clsvm}};
}

}  // namespace clsvm::eval
