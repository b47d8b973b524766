#include "clsvm/latent/training.hpp"

#include <cmath>
#include <limits>

#include "clsvm/core/error.hpp"
#include "clsvm/core/parallel.hpp"
#include "clsvm/latent/potentials.hpp"

namespace clsvm::latent {

void TrainConfig::validate() const {
  if (!(gamma > 0.0)) throw ConfigError("train config: gamma must be positive");
  if (!(epsilon > 0.0)) throw ConfigError("train config: epsilon must be positive");
  if (!(delta_scale >= 0.0)) throw ConfigError("train config: delta_scale must be nonnegative");
  if (!(step_rule.eta0 > 0.0) || !(step_rule.tau > 0.0)) throw ConfigError("train config: bad step rule");
  if (!(score_range.lo < score_range.hi)) throw ConfigError("train config: empty score range");
  if (2.0 * epsilon >= score_range.hi - score_range.lo) {
    throw ConfigError("train config: epsilon leaves no incorrect scores in the range");
  }
  svr.validate();
}

InferenceOptions TrainConfig::inference_options() const {
  InferenceOptions o;
  o.qp.seed = seed;
  return o;
}

Json train_config_to_json(const TrainConfig& c) {
  return {{"gamma", c.gamma},
          {"epsilon", c.epsilon},
          {"delta_scale", c.delta_scale},
          {"outer_rounds", c.outer_rounds},
          {"subgrad_steps", c.subgrad_steps},
          {"seed", c.seed},
          {"pin_attributes", c.pin_attributes},
          {"eta0", c.step_rule.eta0},
          {"tau", c.step_rule.tau},
          {"score_range", Json::array({c.score_range.lo, c.score_range.hi})},
          {"svr", svr::svr_config_to_json(c.svr)}};
}

TrainConfig train_config_from_json(const Json& j, TrainConfig base) {
  try {
    base.gamma = j.value("gamma", base.gamma);
    base.epsilon = j.value("epsilon", base.epsilon);
    base.delta_scale = j.value("delta_scale", base.delta_scale);
    base.outer_rounds = j.value("outer_rounds", base.outer_rounds);
    base.subgrad_steps = j.value("subgrad_steps", base.subgrad_steps);
    base.seed = j.value("seed", base.seed);
    base.pin_attributes = j.value("pin_attributes", base.pin_attributes);
    base.step_rule.eta0 = j.value("eta0", base.step_rule.eta0);
    base.step_rule.tau = j.value("tau", base.step_rule.tau);
    if (j.contains("score_range")) {
      const auto& r = j["score_range"];
      base.score_range = {r.at(0).get<double>(), r.at(1).get<double>()};
    }
    if (j.contains("svr")) base.svr = svr::svr_config_from_json(j["svr"], base.svr);
  } catch (const Json::exception& e) {
    throw ConfigError(std::string("train config: ") + e.what());
  }
  base.validate();
  return base;
}

AugmentedInference loss_augmented_infer(const Sample& sample, const CLSVMModel& model,
                                        const TrainConfig& config) {
  if (!sample.y) throw ValidationError("loss_augmented_infer: sample '" + sample.id + "' has no score");
  const InferenceEngine engine(model, config.inference_options());
  return engine.loss_augmented(sample.x, *sample.y, config.epsilon, config.delta_scale);
}

RiskEvaluation risk_and_subgradient(std::span<const Sample> samples, const CLSVMModel& model,
                                    const TrainConfig& config) {
  if (samples.empty()) throw ValidationError("risk_and_subgradient: no samples");
  const InferenceEngine engine(model, config.inference_options());
  const auto dim = TradeoffParams::flat_size(model.attribute_dim());

  struct PerSample {
    double hinge = 0.0;
    Vector diff;
  };
  std::vector<PerSample> parts(samples.size());
  parallel_for(samples.size(), config.threads, [&](std::size_t i) {
    const Sample& s = samples[i];
    if (!s.y) throw ValidationError("risk_and_subgradient: sample '" + s.id + "' has no score");
    const double y = *s.y;
    const auto ctx = engine.context(s.x);
    const AugmentedInference aug = engine.loss_augmented(s.x, y, config.epsilon, config.delta_scale);
    const Vector truth_a = engine.infer_attributes(ctx, y);
    const double truth_value = engine.fitness(ctx, truth_a, y);
    const double hinge = aug.value - truth_value;
    if (hinge > 0.0) {
      parts[i].hinge = hinge;
      parts[i].diff = potentials(s.x, aug.a, aug.y, model.predictors, model.M).flat() -
                      potentials(s.x, truth_a, y, model.predictors, model.M).flat();
    }
  });

  const double inv_m = 1.0 / static_cast<double>(samples.size());
  const Vector z = model.params.to_flat();
  RiskEvaluation out;
  out.subgradient = Vector::Zero(static_cast<Eigen::Index>(dim));
  for (const auto& p : parts) {
    if (p.hinge > 0.0) {
      out.risk += p.hinge;
      out.subgradient += p.diff;
      ++out.active;
    }
  }
  out.risk *= inv_m;
  out.subgradient *= inv_m;
  out.subgradient += config.gamma * z;
  out.loss = 0.5 * config.gamma * z.squaredNorm() + out.risk;
  return out;
}

Vector project_tradeoffs(const Vector& z, std::size_t n) {
  Vector p = z;
  p(0) = std::max(p(0), kBetaFloor);
  p(1) = std::max(p(1), kBetaFloor);
  p.segment(2, static_cast<Eigen::Index>(n)) = p.segment(2, static_cast<Eigen::Index>(n)).cwiseMax(0.0);
  return p;
}

LinearPredictors fit_predictors(const Matrix& X, const Matrix& A, const Vector& y,
                                const svr::SvrConfig& config, std::size_t threads) {
  LinearPredictors p;
  const auto xy = svr::train_svr(X, y, config);
  p.w_xy = xy.w;
  p.b_xy = xy.b;
  const auto xa = svr::train_attribute_regressors(X, A, config, threads);
  p.W_xa = xa.W;
  p.b_xa = xa.b;
  const auto ay = svr::train_svr(A, y, config);
  p.w_ay = ay.w;
  p.b_ay = ay.b;
  return p;
}

CLSVMModel train(std::span<const Sample> samples, const AttributeSchema& schema,
                 const std::optional<LinearPredictors>& predictors_init, const TrainConfig& config,
                 TrainingReport* report) {
  config.validate();
  if (samples.size() < 2) throw ValidationError("train: need at least 2 samples");
  const std::size_t n = schema.size();
  if (n == 0) throw ConfigError("train: schema has no attribute slots");
  for (const auto& s : samples) {
    if (!s.a || !s.y) throw ValidationError("train: sample '" + s.id + "' lacks attribute or score annotations");
    validate_sample(s, n, static_cast<std::size_t>(samples.front().x.size()), config.score_range);
  }
  const Matrix X = feature_rows(samples);
  const Matrix A = attribute_rows(samples);
  const Vector Y = score_vector(samples);

  CLSVMModel model;
  model.schema = schema;
  model.score_range = config.score_range;
  model.epsilon = config.epsilon;
  model.M = compute_cooccurrence(samples);
  model.params = TradeoffParams::initial(n);
  model.predictors = predictors_init ? *predictors_init : fit_predictors(X, A, Y, config.svr, config.threads);
  model.validate();
  if (report) *report = {};
  if (config.outer_rounds == 0) return model;

  std::vector<Sample> latent(samples.begin(), samples.end());
  Matrix latent_A = A;
  bool latent_changed = false;

  CLSVMModel best = model;
  double best_loss = std::numeric_limits<double>::infinity();
  double previous = std::numeric_limits<double>::quiet_NaN();

  numerics::SubgradientOptions opts;
  opts.steps = config.subgrad_steps;
  opts.step_rule = config.step_rule;
  const auto projection = [n](const Vector& z) { return project_tradeoffs(z, n); };

  for (std::size_t round = 0; round < config.outer_rounds; ++round) {
    // (i) refit the attribute-dependent predictors on the current latent
    // attributes; w_xy only sees (x, y) and never changes.
    if (latent_changed) {
      const auto xa = svr::train_attribute_regressors(X, latent_A, config.svr, config.threads);
      model.predictors.W_xa = xa.W;
      model.predictors.b_xa = xa.b;
      const auto ay = svr::train_svr(latent_A, Y, config.svr);
      model.predictors.w_ay = ay.w;
      model.predictors.b_ay = ay.b;
    }

    // (ii) trade-off parameters by projected subgradient on the loss.
    CLSVMModel trial = model;
    const auto objective = [&](const Vector& z) {
      trial.params = TradeoffParams::from_flat(z, n);
      const RiskEvaluation r = risk_and_subgradient(latent, trial, config);
      return numerics::ObjectiveValue{r.loss, r.subgradient};
    };
    const auto solved = numerics::projected_subgradient(objective, model.params.to_flat(), projection, opts);
    model.params = TradeoffParams::from_flat(solved.best, n);
    const double loss = solved.best_value;
    if (loss < best_loss) {
      best_loss = loss;
      best = model;
    }
    if (report) {
      report->round_loss.push_back(loss);
      report->best_loss.push_back(best_loss);
      report->rounds_run = round + 1;
    }

    // (iii) latent attribute update at the true scores.
    if (!config.pin_attributes) {
      const InferenceEngine engine(model, config.inference_options());
      std::vector<Vector> updated(latent.size());
      parallel_for(latent.size(), config.threads, [&](std::size_t i) {
        updated[i] = engine.infer_attributes(engine.context(latent[i].x), *latent[i].y);
      });
      for (std::size_t i = 0; i < latent.size(); ++i) {
        latent_A.row(static_cast<Eigen::Index>(i)) = updated[i].transpose();
        latent[i].a = std::move(updated[i]);
      }
      latent_changed = true;
    }

    if (round > 0 && previous - loss < 1e-4 * std::abs(previous)) break;
    previous = loss;
  }
  return best;
}

}  // namespace clsvm::latent
