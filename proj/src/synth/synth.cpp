#include "clsvm/synth/synth.hpp"

#include <cmath>

#include "clsvm/core/error.hpp"
#include "clsvm/core/random.hpp"

namespace clsvm::synth {

namespace {

constexpr std::uint64_t kTruthStream = 0;
constexpr std::uint64_t kTrainStream = 1;
constexpr std::uint64_t kTestStream = 2;
constexpr double kAttributeSpread = 1.5;

Sample draw_sample(const SynthSpec& spec, const GroundTruth& truth, std::uint64_t stream, std::size_t index) {
  Rng rng(counter_seed(spec.seed, stream, index));
  const auto d = static_cast<Eigen::Index>(spec.d);
  const auto n = static_cast<Eigen::Index>(spec.n);
  Sample s;
  s.id = (stream == kTrainStream ? "train_" : "test_") + std::to_string(index);
  s.x.resize(d);
  for (Eigen::Index k = 0; k < d; ++k) s.x(k) = standard_normal(rng);
  Vector a(n);
  for (Eigen::Index j = 0; j < n; ++j) {
    const double raw = truth.W.col(j).dot(s.x) + truth.b(j) + spec.noise_a * standard_normal(rng);
    const double clipped = std::min(1.0, std::max(0.0, raw));
    a(j) = clipped >= kActivationThreshold ? 1.0 : 0.0;
  }
  const double mediated = truth.w.dot(a - Vector::Constant(n, 0.5));
  const double direct = truth.v.dot(s.x);
  const double mix = spec.attribute_mediation;
  const double y = 5.0 + 2.0 * (std::sqrt(mix) * mediated + std::sqrt(1.0 - mix) * direct) +
                   spec.noise_y * standard_normal(rng);
  s.a = std::move(a);
  s.y = std::min(10.0, std::max(0.0, y));
  return s;
}

}  // namespace

void SynthSpec::validate() const {
  if (d == 0 || n == 0) throw ConfigError("synth: dimensions must be at least 1");
  if (!(noise_a >= 0.0) || !(noise_y >= 0.0)) throw ConfigError("synth: noise levels must be nonnegative");
  if (!(attribute_mediation >= 0.0 && attribute_mediation <= 1.0)) {
    throw ConfigError("synth: attribute_mediation must lie in [0,1]");
  }
}

Json spec_to_json(const SynthSpec& s) {
  return {{"d", s.d}, {"n", s.n}, {"m_train", s.m_train}, {"m_test", s.m_test}, {"noise_a", s.noise_a},
          {"noise_y", s.noise_y}, {"seed", s.seed}, {"attribute_mediation", s.attribute_mediation}};
}

SynthSpec spec_from_json(const Json& j, SynthSpec base) {
  try {
    base.d = j.value("d", base.d);
    base.n = j.value("n", base.n);
    base.m_train = j.value("m_train", base.m_train);
    base.m_test = j.value("m_test", base.m_test);
    base.noise_a = j.value("noise_a", base.noise_a);
    base.noise_y = j.value("noise_y", base.noise_y);
    base.seed = j.value("seed", base.seed);
    base.attribute_mediation = j.value("attribute_mediation", base.attribute_mediation);
  } catch (const Json::exception& e) {
    throw ConfigError(std::string("synth spec: ") + e.what());
  }
  base.validate();
  return base;
}

Json ground_truth_to_json(const GroundTruth& g) {
  return {{"W", matrix_to_json(g.W)}, {"b", vector_to_json(g.b)}, {"w", vector_to_json(g.w)},
          {"v", vector_to_json(g.v)}};
}

GroundTruth draw_ground_truth(const SynthSpec& spec) {
  spec.validate();
  const auto d = static_cast<Eigen::Index>(spec.d);
  const auto n = static_cast<Eigen::Index>(spec.n);
  Rng rng(counter_seed(spec.seed, kTruthStream, 0));
  GroundTruth t;
  t.W.resize(d, n);
  const double sd = kAttributeSpread / std::sqrt(static_cast<double>(d));
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index k = 0; k < d; ++k) t.W(k, j) = sd * standard_normal(rng);
  }
  t.b.resize(n);
  for (Eigen::Index j = 0; j < n; ++j) t.b(j) = uniform(rng, -0.5, 1.5);
  t.w.resize(n);
  for (Eigen::Index j = 0; j < n; ++j) t.w(j) = standard_normal(rng);
  t.w *= 2.0 / t.w.norm();
  t.v.resize(d);
  for (Eigen::Index k = 0; k < d; ++k) t.v(k) = standard_normal(rng);
  t.v /= t.v.norm();
  return t;
}

SynthData generate(const SynthSpec& spec) {
  SynthData data;
  data.truth = draw_ground_truth(spec);
  data.schema = AttributeSchema::generic(spec.n);
  data.train.reserve(spec.m_train);
  for (std::size_t i = 0; i < spec.m_train; ++i) data.train.push_back(draw_sample(spec, data.truth, kTrainStream, i));
  data.test.reserve(spec.m_test);
  for (std::size_t i = 0; i < spec.m_test; ++i) data.test.push_back(draw_sample(spec, data.truth, kTestStream, i));
  return data;
}

Vector soft_attributes(const GroundTruth& truth, const Vector& x) {
  return (truth.W.transpose() * x + truth.b).cwiseMax(0.0).cwiseMin(1.0);
}

}  // namespace clsvm::synth
