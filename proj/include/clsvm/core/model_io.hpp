#pragma once

#include <string>

#include "clsvm/core/json_util.hpp"
#include "clsvm/core/types.hpp"

namespace clsvm {

inline constexpr const char* kModelFormat = "clsvm-model";
inline constexpr int kModelFormatVersion = 1;

Json predictors_to_json(const LinearPredictors& p);
LinearPredictors predictors_from_json(const Json& j);

Json params_to_json(const TradeoffParams& p);
TradeoffParams params_from_json(const Json& j);

Json score_range_to_json(const ScoreRange& r);
ScoreRange score_range_from_json(const Json& j);

/// Full model document with "method": "clsvm". `extra` keys (for example the
/// resolved training config) are merged at top level.
Json model_to_json(const CLSVMModel& model, const Json& extra = Json::object());
CLSVMModel model_from_json(const Json& j);

void save_model(const std::string& path, const CLSVMModel& model, const Json& extra = Json::object());
CLSVMModel load_model(const std::string& path);

}  // namespace clsvm
