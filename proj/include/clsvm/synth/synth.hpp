#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "clsvm/core/json_util.hpp"
#include "clsvm/core/types.hpp"

namespace clsvm::synth {

/// Attribute-mediated regression benchmark.
///
///   x ~ N(0, I_d)
///   a_j = 1 if clip(W*_j'x + b*_j + noise_a * e, 0, 1) >= 0.5 else 0
///   y = clip(5 + 2 (sqrt(mix) w*'(a - 1/2) + sqrt(1 - mix) v*'x) + noise_y * e, 0, 10)
///
/// with W*_j ~ N(0, (1.5^2 / d) I), b*_j ~ U(-0.5, 1.5), |w*| = 2 and |v*| = 1,
/// so each score component has unit scale before the factor 2.
struct SynthSpec {
  std::size_t d = 50;
  std::size_t n = 19;
  std::size_t m_train = 600;
  std::size_t m_test = 200;
  double noise_a = 0.2;
  double noise_y = 0.3;
  std::uint64_t seed = 0;
  double attribute_mediation = 0.9;

  void validate() const;
};

Json spec_to_json(const SynthSpec& s);
SynthSpec spec_from_json(const Json& j, SynthSpec base = {});

struct GroundTruth {
  Matrix W;  // d x n
  Vector b;  // n
  Vector w;  // n, attribute -> score
  Vector v;  // d, direct feature -> score
};

Json ground_truth_to_json(const GroundTruth& g);

struct SynthData {
  std::vector<Sample> train;
  std::vector<Sample> test;
  GroundTruth truth;
  AttributeSchema schema = AttributeSchema::generic(0);
};

/// Deterministic per seed. Sample i of a split draws from its own generator
/// seeded by (seed, split, i), so generation order does not matter.
SynthData generate(const SynthSpec& spec);

/// Generates the ground truth only (stream 0 of the seed).
GroundTruth draw_ground_truth(const SynthSpec& spec);

/// The noiseless, unthresholded attribute map clip(W*'x + b*, 0, 1).
Vector soft_attributes(const GroundTruth& truth, const Vector& x);

}  // namespace clsvm::synth
