#include "clsvm/eval/baselines.hpp"

#include "clsvm/core/error.hpp"
#include "clsvm/core/model_io.hpp"

namespace clsvm::eval {

double FsModel::predict(const Vector& x) const {
  if (x.size() != w.size()) throw SchemaError("F-S model: feature dimension mismatch");
  return range.clamp(w.dot(x) + b);
}

FsModel train_fs(std::span<const Sample> samples, const svr::SvrConfig& config, const ScoreRange& range) {
  const auto fit = svr::train_svr(feature_rows(samples), score_vector(samples), config);
  return {fit.w, fit.b, range};
}

Vector FasModel::predict_attributes(const Vector& x) const {
  if (x.size() != W_xa.rows()) throw SchemaError("F-A-S model: feature dimension mismatch");
  return (W_xa.transpose() * x + b_xa).cwiseMax(0.0).cwiseMin(1.0);
}

double FasModel::predict(const Vector& x) const { return range.clamp(w_ay.dot(predict_attributes(x)) + b_ay); }

FasModel train_fas(std::span<const Sample> samples, const AttributeSchema& schema,
                   const svr::SvrConfig& config, const FasOptions& options, const ScoreRange& range,
                   std::size_t threads) {
  if (schema.size() == 0) throw ConfigError("F-A-S needs at least one attribute slot");
  const Matrix X = feature_rows(samples);
  const Matrix A = attribute_rows(samples);
  if (static_cast<std::size_t>(A.cols()) != schema.size()) throw SchemaError("F-A-S: attribute dimension differs from schema");
  const Vector y = score_vector(samples);

  FasModel model;
  model.range = range;
  model.schema = schema;
  const auto stage1 = svr::train_attribute_regressors(X, A, config, threads);
  model.W_xa = stage1.W;
  model.b_xa = stage1.b;

  Matrix inputs = A;
  if (!options.stage2_on_truth) {
    for (Eigen::Index i = 0; i < X.rows(); ++i) inputs.row(i) = model.predict_attributes(X.row(i).transpose()).transpose();
  }
  const auto stage2 = svr::train_svr(inputs, y, config);
  model.w_ay = stage2.w;
  model.b_ay = stage2.b;
  return model;
}

Json fs_to_json(const FsModel& m, const Json& extra) {
  Json j = {{"format", kModelFormat}, {"version", kModelFormatVersion}, {"method", "f-s"},
            {"score_range", score_range_to_json(m.range)}, {"w", vector_to_json(m.w)}, {"b", m.b}};
  for (const auto& [k, v] : extra.items()) j[k] = v;
  return j;
}

FsModel fs_from_json(const Json& j) {
  if (j.value("method", std::string()) != "f-s") throw SchemaError("model document is not an F-S model");
  if (!j.contains("w") || !j.contains("b") || !j["b"].is_number()) throw SchemaError("F-S model: missing w or b");
  FsModel m;
  m.w = vector_from_json(j["w"], "w");
  m.b = j["b"].get<double>();
  if (j.contains("score_range")) m.range = score_range_from_json(j["score_range"]);
  return m;
}

Json fas_to_json(const FasModel& m, const Json& extra) {
  Json j = {{"format", kModelFormat},
            {"version", kModelFormatVersion},
            {"method", "f-a-s"},
            {"schema", schema_to_json(m.schema)},
            {"score_range", score_range_to_json(m.range)},
            {"W_xa", matrix_to_json(m.W_xa)},
            {"b_xa", vector_to_json(m.b_xa)},
            {"w_ay", vector_to_json(m.w_ay)},
            {"b_ay", m.b_ay}};
  for (const auto& [k, v] : extra.items()) j[k] = v;
  return j;
}

FasModel fas_from_json(const Json& j) {
  if (j.value("method", std::string()) != "f-a-s") throw SchemaError("model document is not an F-A-S model");
  for (const char* key : {"schema", "W_xa", "b_xa", "w_ay", "b_ay"}) {
    if (!j.contains(key)) throw SchemaError(std::string("F-A-S model: missing ") + key);
  }
  FasModel m;
  m.schema = schema_from_json(j["schema"]);
  m.W_xa = matrix_from_json(j["W_xa"], "W_xa");
  m.b_xa = vector_from_json(j["b_xa"], "b_xa");
  m.w_ay = vector_from_json(j["w_ay"], "w_ay");
  m.b_ay = j["b_ay"].get<double>();
  if (j.contains("score_range")) m.range = score_range_from_json(j["score_range"]);
  const auto n = static_cast<Eigen::Index>(m.schema.size());
  if (m.W_xa.cols() != n || m.b_xa.size() != n || m.w_ay.size() != n) throw SchemaError("F-A-S model: dimension mismatch");
  return m;
}

}  // namespace clsvm::eval
