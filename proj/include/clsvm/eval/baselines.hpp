#pragma once

#include <cstddef>
#include <span>

#include "clsvm/core/json_util.hpp"
#include "clsvm/core/types.hpp"
#include "clsvm/svr/svr.hpp"

namespace clsvm::eval {

/// Feature -> score: a single SVR, predictions clipped to the score range.
struct FsModel {
  Vector w;
  double b = 0.0;
  ScoreRange range;

  double predict(const Vector& x) const;
};

FsModel train_fs(std::span<const Sample> samples, const svr::SvrConfig& config,
                 const ScoreRange& range = {});

struct FasOptions {
  /// Train the second stage on annotated instead of predicted attributes.
  bool stage2_on_truth = false;
};

/// Feature -> attributes -> score with two SVR stages. Stage-1 outputs are
/// clipped to [0,1], the attribute confidence domain.
struct FasModel {
  Matrix W_xa;
  Vector b_xa;
  Vector w_ay;
  double b_ay = 0.0;
  ScoreRange range;
  AttributeSchema schema = AttributeSchema::default_schema();

  Vector predict_attributes(const Vector& x) const;
  double predict(const Vector& x) const;
};

FasModel train_fas(std::span<const Sample> samples, const AttributeSchema& schema,
                   const svr::SvrConfig& config, const FasOptions& options = {},
                   const ScoreRange& range = {}, std::size_t threads = 1);

Json fs_to_json(const FsModel& m, const Json& extra = Json::object());
FsModel fs_from_json(const Json& j);
Json fas_to_json(const FasModel& m, const Json& extra = Json::object());
FasModel fas_from_json(const Json& j);

}  // namespace clsvm::eval
