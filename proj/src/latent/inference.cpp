#include "clsvm/latent/inference.hpp"

#include <cmath>
#include <limits>

#include "clsvm/core/error.hpp"

namespace clsvm::latent {

namespace {

CLSVMModel checked(CLSVMModel m) {
  m.validate();
  return m;
}

Matrix attribute_hessian(const CLSVMModel& m, const Matrix& coupling, bool with_score) {
  const auto& z = m.params;
  Matrix H = -2.0 * Matrix(z.lambda.asDiagonal()) + coupling + coupling.transpose();
  if (with_score) H -= 2.0 * z.beta2 * m.predictors.w_ay * m.predictors.w_ay.transpose();
  return H;
}

/// Hessian over u = (a, y).
Matrix joint_hessian(const CLSVMModel& m, const Matrix& coupling) {
  const auto n = static_cast<Eigen::Index>(m.attribute_dim());
  const auto& z = m.params;
  const Vector& w = m.predictors.w_ay;
  Matrix H(n + 1, n + 1);
  H.topLeftCorner(n, n) = attribute_hessian(m, coupling, true);
  H.topRightCorner(n, 1) = 2.0 * z.beta2 * w;
  H.bottomLeftCorner(1, n) = 2.0 * z.beta2 * w.transpose();
  H(n, n) = -2.0 * (z.beta1 + z.beta2);
  return H;
}

}  // namespace

InferenceEngine::InferenceEngine(CLSVMModel model, InferenceOptions options)
    : model_(checked(std::move(model))),
      options_(options),
      coupling_(model_.params.P.cwiseProduct(model_.M.M)),
      attr_with_score_(attribute_hessian(model_, coupling_, true), options.qp),
      attr_only_(attribute_hessian(model_, coupling_, false), options.qp),
      joint_(joint_hessian(model_, coupling_), options.qp) {}

InferenceEngine::Context InferenceEngine::context(const Vector& x) const {
  if (static_cast<std::size_t>(x.size()) != model_.predictors.feature_dim()) {
    throw SchemaError("inference: feature dimension " + std::to_string(x.size()) + ", model expects " +
                      std::to_string(model_.predictors.feature_dim()));
  }
  return {model_.predictors.attributes_from_features(x), model_.predictors.score_from_features(x)};
}

double InferenceEngine::fitness(const Context& ctx, const Vector& a, double y) const {
  const auto& z = model_.params;
  const double rx = ctx.score_x - y;
  const double ra = model_.predictors.score_from_attributes(a) - y;
  const Vector r = ctx.attr_hat - a;
  return -z.beta1 * rx * rx - z.beta2 * ra * ra - z.lambda.dot(r.cwiseProduct(r)) + a.dot(coupling_ * a);
}

Vector InferenceEngine::infer_attributes(const Context& ctx, std::optional<double> y,
                                         const std::optional<Vector>& init) const {
  const auto& z = model_.params;
  const auto n = static_cast<Eigen::Index>(model_.attribute_dim());
  Vector g = 2.0 * z.lambda.cwiseProduct(ctx.attr_hat);
  const Vector lo = Vector::Zero(n);
  const Vector hi = Vector::Ones(n);
  if (y) {
    g -= 2.0 * z.beta2 * (model_.predictors.b_ay - *y) * model_.predictors.w_ay;
    return attr_with_score_.solve(g, lo, hi, init).argmax;
  }
  return attr_only_.solve(g, lo, hi, init).argmax;
}

double InferenceEngine::score_step(const Context& ctx, const Vector& a, double lo, double hi,
                                   double slope) const {
  const auto& z = model_.params;
  const double ya = model_.predictors.score_from_attributes(a);
  const double peak = (z.beta1 * ctx.score_x + z.beta2 * ya + 0.5 * slope) / (z.beta1 + z.beta2);
  return std::min(hi, std::max(lo, peak));
}

std::pair<Vector, double> InferenceEngine::maximize_joint(const Context& ctx, double lo, double hi,
                                                          double slope, std::size_t* rounds) const {
  Vector a = infer_attributes(ctx, std::nullopt);
  double y = score_step(ctx, a, lo, hi, slope);
  double value = fitness(ctx, a, y) + slope * y;
  std::size_t r = 0;
  while (r < options_.max_rounds) {
    ++r;
    a = infer_attributes(ctx, y, a);
    y = score_step(ctx, a, lo, hi, slope);
    const double next = fitness(ctx, a, y) + slope * y;
    const bool done = std::abs(next - value) < options_.tol;
    value = next;
    if (done) break;
  }
  if (rounds) *rounds = r;

  // Joint polish over u = (a, y).
  const auto& z = model_.params;
  const auto n = static_cast<Eigen::Index>(model_.attribute_dim());
  const Vector& w = model_.predictors.w_ay;
  const double b_ay = model_.predictors.b_ay;
  Vector g(n + 1);
  g.head(n) = 2.0 * z.lambda.cwiseProduct(ctx.attr_hat) - 2.0 * z.beta2 * b_ay * w;
  g(n) = 2.0 * z.beta1 * ctx.score_x + 2.0 * z.beta2 * b_ay + slope;
  Vector ulo = Vector::Zero(n + 1);
  Vector uhi = Vector::Ones(n + 1);
  ulo(n) = lo;
  uhi(n) = hi;
  Vector u0(n + 1);
  u0.head(n) = a;
  u0(n) = y;
  const auto polished = joint_.solve(g, ulo, uhi, u0);
  const Vector pa = polished.argmax.head(n);
  const double py = polished.argmax(n);
  if (fitness(ctx, pa, py) + slope * py > value) return {pa, py};
  return {a, y};
}

Prediction InferenceEngine::predict(const Vector& x) const {
  const Context ctx = context(x);
  const auto& range = model_.score_range;
  Prediction out;
  auto [a, y] = maximize_joint(ctx, range.lo, range.hi, 0.0, &out.rounds);
  out.a_confidence = a;
  out.y_relaxed = y;
  out.relaxed_fitness = fitness(ctx, a, y);
  out.a_binary = (a.array() >= kActivationThreshold).cast<double>().matrix();
  out.y = score_step(ctx, out.a_binary, range.lo, range.hi);
  return out;
}

AugmentedInference InferenceEngine::loss_augmented(const Vector& x, double y_true, double epsilon,
                                                   double delta_scale) const {
  if (!(epsilon > 0.0)) throw ConfigError("loss-augmented inference: epsilon must be positive");
  const Context ctx = context(x);
  const auto& range = model_.score_range;
  const double lower_hi = y_true - epsilon;
  const double upper_lo = y_true + epsilon;
  const bool has_lower = lower_hi >= range.lo;
  const bool has_upper = upper_lo <= range.hi;
  if (!has_lower && !has_upper) {
    throw ConfigError("loss-augmented inference: no score in range lies epsilon away from " +
                      std::to_string(y_true));
  }

  AugmentedInference best;
  best.value = -std::numeric_limits<double>::infinity();
  auto consider = [&](double lo, double hi, double slope, double toward) {
    auto [a, y] = maximize_joint(ctx, lo, hi, slope);
    // Rounding in y_true -/+ epsilon can land a hair inside the band.
    while (std::abs(y - y_true) < epsilon) y = std::nextafter(y, toward);
    const double value = fitness(ctx, a, y) + delta_scale * std::abs(y_true - y);
    if (value > best.value) best = {std::move(a), y, value};
  };
  // Delta = delta_scale * |y_true - y| is linear on each branch.
  if (has_lower) consider(range.lo, lower_hi, -delta_scale, -std::numeric_limits<double>::infinity());
  if (has_upper) consider(upper_lo, range.hi, delta_scale, std::numeric_limits<double>::infinity());
  return best;
}

Vector infer_attributes(const Vector& x, std::optional<double> y, const CLSVMModel& model) {
  const InferenceEngine engine(model);
  return engine.infer_attributes(engine.context(x), y);
}

double infer_score_given_attributes(const Vector& x, const Vector& a, const CLSVMModel& model) {
  model.validate();
  if (a.size() != static_cast<Eigen::Index>(model.attribute_dim())) {
    throw SchemaError("infer_score_given_attributes: attribute dimension mismatch");
  }
  if (x.size() != static_cast<Eigen::Index>(model.predictors.feature_dim())) {
    throw SchemaError("infer_score_given_attributes: feature dimension mismatch");
  }
  const auto& z = model.params;
  const double yx = model.predictors.score_from_features(x);
  const double ya = model.predictors.score_from_attributes(a);
  return model.score_range.clamp((z.beta1 * yx + z.beta2 * ya) / (z.beta1 + z.beta2));
}

Prediction predict(const Vector& x, const CLSVMModel& model) { return InferenceEngine(model).predict(x); }

}  // namespace clsvm::latent
