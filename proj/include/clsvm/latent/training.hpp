#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "clsvm/core/json_util.hpp"
#include "clsvm/core/types.hpp"
#include "clsvm/latent/inference.hpp"
#include "clsvm/numerics/subgradient.hpp"
#include "clsvm/svr/svr.hpp"

namespace clsvm::latent {

struct TrainConfig {
  double gamma = 0.01;        // weight of gamma/2 |z|^2
  double epsilon = 0.5;       // label tolerance: scores within epsilon count as correct
  double delta_scale = 1.0;   // Delta(y, y_bar) = delta_scale * |y - y_bar|
  std::size_t outer_rounds = 5;
  std::size_t subgrad_steps = 100;
  std::uint64_t seed = 0;
  bool pin_attributes = false;  // keep latent attributes equal to the annotations
  numerics::StepRule step_rule{0.1, 50.0};
  svr::SvrConfig svr;
  ScoreRange score_range;
  std::size_t threads = 1;  // does not affect results

  void validate() const;
  InferenceOptions inference_options() const;
};

/// Everything except `threads`.
Json train_config_to_json(const TrainConfig& c);
TrainConfig train_config_from_json(const Json& j, TrainConfig base = {});

AugmentedInference loss_augmented_infer(const Sample& sample, const CLSVMModel& model,
                                        const TrainConfig& config);

struct RiskEvaluation {
  double risk = 0.0;        // (1/m) sum_i max(0, augmented_i - truth_i)
  double loss = 0.0;        // gamma/2 |z|^2 + risk
  Vector subgradient;       // of loss, aligned with TradeoffParams::to_flat()
  std::size_t active = 0;   // samples with positive hinge
};

RiskEvaluation risk_and_subgradient(std::span<const Sample> samples, const CLSVMModel& model,
                                    const TrainConfig& config);

/// Projection onto the feasible trade-off set: beta >= floor, lambda >= 0.
Vector project_tradeoffs(const Vector& z, std::size_t n);

/// Fit w_xy, (W_xa, b_xa) and w_ay with the SVR trainer on (X, A, y).
LinearPredictors fit_predictors(const Matrix& X, const Matrix& A, const Vector& y,
                                const svr::SvrConfig& config, std::size_t threads = 1);

struct TrainingReport {
  std::vector<double> round_loss;  // best loss reached in each outer round
  std::vector<double> best_loss;   // best over all rounds so far
  std::size_t rounds_run = 0;
};

/// Alternates predictor refits, trade-off learning and latent attribute
/// updates. Returns the model with the lowest loss seen. With outer_rounds = 0
/// it returns the initial predictors and the initial trade-offs.
CLSVMModel train(std::span<const Sample> samples, const AttributeSchema& schema,
                 const std::optional<LinearPredictors>& predictors_init, const TrainConfig& config,
                 TrainingReport* report = nullptr);

}  // namespace clsvm::latent
