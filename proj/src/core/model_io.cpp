#include "clsvm/core/model_io.hpp"

#include "clsvm/core/error.hpp"

namespace clsvm {

namespace {

double number_at(const Json& j, const char* key, const std::string& what) {
  if (!j.contains(key) || !j[key].is_number()) throw SchemaError(what + ": missing number \"" + key + "\"");
  return j[key].get<double>();
}

const Json& field(const Json& j, const char* key, const std::string& what) {
  if (!j.is_object() || !j.contains(key)) throw SchemaError(what + ": missing \"" + key + "\"");
  return j[key];
}

}  // namespace

Json predictors_to_json(const LinearPredictors& p) {
  return {{"w_xy", vector_to_json(p.w_xy)}, {"b_xy", p.b_xy},
          {"W_xa", matrix_to_json(p.W_xa)}, {"b_xa", vector_to_json(p.b_xa)},
          {"w_ay", vector_to_json(p.w_ay)}, {"b_ay", p.b_ay}};
}

LinearPredictors predictors_from_json(const Json& j) {
  const std::string what = "predictors";
  LinearPredictors p;
  p.w_xy = vector_from_json(field(j, "w_xy", what), "w_xy");
  p.b_xy = number_at(j, "b_xy", what);
  p.W_xa = matrix_from_json(field(j, "W_xa", what), "W_xa");
  p.b_xa = vector_from_json(field(j, "b_xa", what), "b_xa");
  p.w_ay = vector_from_json(field(j, "w_ay", what), "w_ay");
  p.b_ay = number_at(j, "b_ay", what);
  // An n = 0 matrix round-trips as [] and loses its row count.
  if (p.W_xa.size() == 0) p.W_xa.resize(p.w_xy.size(), p.w_ay.size());
  p.validate();
  return p;
}

Json params_to_json(const TradeoffParams& p) {
  return {{"beta1", p.beta1}, {"beta2", p.beta2}, {"lambda", vector_to_json(p.lambda)},
          {"P", matrix_to_json(p.P)}};
}

TradeoffParams params_from_json(const Json& j) {
  const std::string what = "params";
  TradeoffParams p;
  p.beta1 = number_at(j, "beta1", what);
  p.beta2 = number_at(j, "beta2", what);
  p.lambda = vector_from_json(field(j, "lambda", what), "lambda");
  p.P = matrix_from_json(field(j, "P", what), "P");
  p.validate();
  return p;
}

Json score_range_to_json(const ScoreRange& r) { return Json::array({r.lo, r.hi}); }

ScoreRange score_range_from_json(const Json& j) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
    throw SchemaError("score_range must be [lo, hi]");
  }
  return {j[0].get<double>(), j[1].get<double>()};
}

Json model_to_json(const CLSVMModel& model, const Json& extra) {
  Json j = {{"format", kModelFormat},
            {"version", kModelFormatVersion},
            {"method", "clsvm"},
            {"schema", schema_to_json(model.schema)},
            {"score_range", score_range_to_json(model.score_range)},
            {"epsilon", model.epsilon},
            {"predictors", predictors_to_json(model.predictors)},
            {"params", params_to_json(model.params)},
            {"M", matrix_to_json(model.M.M)}};
  for (const auto& [k, v] : extra.items()) j[k] = v;
  return j;
}

CLSVMModel model_from_json(const Json& j) {
  if (j.value("method", std::string()) != "clsvm") throw SchemaError("model document is not a clsvm model");
  CLSVMModel m;
  m.schema = schema_from_json(field(j, "schema", "model"));
  m.score_range = score_range_from_json(field(j, "score_range", "model"));
  m.epsilon = number_at(j, "epsilon", "model");
  m.predictors = predictors_from_json(field(j, "predictors", "model"));
  m.params = params_from_json(field(j, "params", "model"));
  m.M.M = matrix_from_json(field(j, "M", "model"), "M");
  m.validate();
  return m;
}

void save_model(const std::string& path, const CLSVMModel& model, const Json& extra) {
  write_file_atomic(path, dump_document(model_to_json(model, extra)));
}

CLSVMModel load_model(const std::string& path) { return model_from_json(read_json_file(path)); }

}  // namespace clsvm
