#include <doctest.h>

#include <cmath>
#include <numbers>

#include "clsvm/core/error.hpp"
#include "clsvm/core/types.hpp"
#include "clsvm/synth/oracles.hpp"
#include "clsvm/synth/synth.hpp"
#include "fixtures.hpp"

using namespace clsvm;
using namespace clsvm::synth;

namespace {

// P(Z1 >= t1, Z2 >= t2) for a standard bivariate normal with correlation rho,
// by Simpson quadrature over z1 of phi(z1) * P(Z2 >= t2 | z1).
double bivariate_upper(double t1, double t2, double rho) {
  const int n = 4000;
  const double hi = 9.0;
  const double h = (hi - t1) / n;
  double acc = 0.0;
  for (int i = 0; i <= n; ++i) {
    const double z = t1 + i * h;
    const double pdf = std::exp(-0.5 * z * z) / std::sqrt(2.0 * std::numbers::pi);
    const double cond = 0.5 * std::erfc((t2 - rho * z) / std::sqrt(2.0 * (1.0 - rho * rho)));
    const double wgt = (i == 0 || i == n) ? 1.0 : (i % 2 ? 4.0 : 2.0);
    acc += wgt * pdf * cond;
  }
  return acc * h / 3.0;
}

}  // namespace

TEST_CASE("generated samples satisfy the core invariants") {
  SynthSpec spec;
  spec.m_train = 100;
  spec.m_test = 50;
  const auto data = generate(spec);
  CHECK(data.train.size() == 100);
  CHECK(data.test.size() == 50);
  CHECK(data.schema.size() == 19);
  for (const auto& s : data.train) {
    validate_sample(s, 19, 50);
    for (Eigen::Index j = 0; j < s.a->size(); ++j) CHECK(((*s.a)(j) == 0.0 || (*s.a)(j) == 1.0));
  }
  CHECK(std::abs(data.truth.w.norm() - 2.0) < 1e-12);
}

TEST_CASE("same seed gives bit-identical data; different seed differs") {
  SynthSpec spec;
  spec.m_train = 20;
  spec.m_test = 5;
  const auto a = generate(spec), b = generate(spec);
  for (std::size_t i = 0; i < 20; ++i) {
    CHECK(a.train[i].x == b.train[i].x);
    CHECK(*a.train[i].y == *b.train[i].y);
  }
  spec.seed = 1;
  CHECK(generate(spec).train[0].x != a.train[0].x);
}

TEST_CASE("noiseless fully mediated scores are an exact function of the attributes") {
  SynthSpec spec;
  spec.m_train = 200;
  spec.m_test = 0;
  spec.noise_a = spec.noise_y = 0.0;
  spec.attribute_mediation = 1.0;
  const auto data = generate(spec);
  const Eigen::Index n = static_cast<Eigen::Index>(spec.n);
  for (const auto& s : data.train) {
    const double y = 5.0 + 2.0 * data.truth.w.dot(*s.a - Vector::Constant(n, 0.5));
    CHECK(*s.y == doctest::Approx(std::min(10.0, std::max(0.0, y))).epsilon(1e-12));
  }
}

TEST_CASE("co-occurrence at m = 10000 matches the generative marginals within 3 sigma") {
  SynthSpec spec;
  spec.d = 8;
  spec.n = 3;
  spec.m_train = 10000;
  spec.m_test = 0;
  spec.seed = 5;
  const auto data = generate(spec);
  const auto M = compute_cooccurrence(data.train).M;
  // a_j = 1 iff W_j'x + b_j + noise_a e_j >= 0.5, a Gaussian threshold event.
  const auto& W = data.truth.W;
  const Eigen::Index n = 3;
  Vector sd(n), thr(n);
  for (Eigen::Index j = 0; j < n; ++j) {
    sd(j) = std::sqrt(W.col(j).squaredNorm() + spec.noise_a * spec.noise_a);
    thr(j) = (0.5 - data.truth.b(j)) / sd(j);
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      double p;
      if (i == j) {
        p = 0.5 * std::erfc(thr(i) / std::sqrt(2.0));
      } else {
        const double rho = W.col(i).dot(W.col(j)) / (sd(i) * sd(j));
        p = bivariate_upper(thr(i), thr(j), rho);
      }
      const double sigma = std::sqrt(p * (1.0 - p) / 10000.0);
      CHECK(std::abs(M(i, j) - p) <= 3.0 * sigma + 1e-12);
    }
  }
}

TEST_CASE("spec validation and JSON") {
  SynthSpec s;
  s.noise_y = -1.0;
  CHECK_THROWS_AS(s.validate(), ConfigError);
  s = SynthSpec{};
  s.attribute_mediation = 1.5;
  CHECK_THROWS_AS(s.validate(), ConfigError);
  s = SynthSpec{};
  s.seed = 99;
  CHECK(spec_from_json(spec_to_json(s)).seed == 99);
}

TEST_CASE("grid oracle: refinement never lowers the value") {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const CLSVMModel m = fixture::random_model(seed, {3, 2, 1.0});
    const Vector x = fixture::random_x(seed, 3);
    const auto coarse = grid_oracle_fitness(x, m, 0.02);
    const auto fine = grid_oracle_fitness(x, m, 0.01);
    CHECK(fine.value >= coarse.value);
  }
}

TEST_CASE("grid oracle: trade-offs only on the score pick y = y_x") {
  CLSVMModel m = fixture::random_model(1, {3, 1, 0.0});
  m.params.beta2 = kBetaFloor;
  m.params.lambda.setZero();
  m.params.P.setZero();
  const Vector x = fixture::random_x(1, 3);
  const double yx = m.predictors.score_from_features(x);
  REQUIRE(yx > 0.0);
  REQUIRE(yx < 10.0);
  const auto g = grid_oracle_fitness(x, m, 0.01);
  CHECK(std::abs(g.y - yx) <= 0.005 + 1e-4);
}

TEST_CASE("grid oracle: the concavity shortcut equals full enumeration") {
  for (std::uint64_t seed = 0; seed < 4; ++seed) {
    const CLSVMModel m = fixture::random_model(seed, {3, 2, 1.0});
    const Vector x = fixture::random_x(seed, 3);
    const double h = 0.05;
    double full = -1e300;
    for (int i = 0; i <= 20; ++i)
      for (int j = 0; j <= 20; ++j)
        for (int k = 0; k <= 200; ++k)
          full = std::max(full, oracle_fitness(x, (Vector(2) << i * h, j * h).finished(), k * h, m));
    CHECK(grid_oracle_fitness(x, m, h).value == doctest::Approx(full).epsilon(1e-12));

    const double y_true = 3.3, eps = 0.5;
    double full_aug = -1e300;
    for (int i = 0; i <= 20; ++i) {
      for (int j = 0; j <= 20; ++j) {
        const Vector a = (Vector(2) << i * h, j * h).finished();
        std::vector<double> ys = {y_true - eps, y_true + eps};
        for (int k = 0; k <= 200; ++k)
          if (std::abs(k * h - y_true) >= eps) ys.push_back(k * h);
        for (double y : ys) full_aug = std::max(full_aug, oracle_fitness(x, a, y, m) + std::abs(y - y_true));
      }
    }
    CHECK(grid_oracle_loss_augmented(x, y_true, m, eps, 1.0, h).value == doctest::Approx(full_aug).epsilon(1e-12));
  }
}

TEST_CASE("grid oracle refuses large attribute counts") {
  const CLSVMModel m = fixture::random_model(1, {3, 4, 1.0});
  CHECK_THROWS_AS(grid_oracle_fitness(fixture::random_x(1, 3), m, 0.1), ValidationError);
}
