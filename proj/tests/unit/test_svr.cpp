#include <doctest.h>

#include <cmath>

#include "clsvm/core/error.hpp"
#include "clsvm/svr/svr.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"

using namespace clsvm;
using namespace clsvm::svr;

namespace {

Matrix random_rows(Rng& rng, Eigen::Index m, Eigen::Index d) {
  Matrix X(m, d);
  for (Eigen::Index i = 0; i < m; ++i) X.row(i) = fixture::normal_vector(rng, d).transpose();
  return X;
}

}  // namespace

TEST_CASE("dual oracle closes its duality gap") {
  Rng rng(1);
  const Matrix X = random_rows(rng, 20, 2);
  const Vector y = X * Vector::Ones(2) + fixture::normal_vector(rng, 20, 0.5);
  const auto o = oracle::svr_dual_oracle(X, y, 1.0, 0.1);
  CHECK(o.primal - o.dual >= -1e-9);
  CHECK(o.primal - o.dual <= 1e-6 * std::max(1.0, o.primal));
}

TEST_CASE("primal objective matches the dual oracle on 20-point 2-D instances") {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    Rng rng(counter_seed(seed, 3, 0));
    const Matrix X = random_rows(rng, 20, 2);
    const Vector y = X * fixture::normal_vector(rng, 2) + fixture::normal_vector(rng, 20, 0.7);
    SvrConfig cfg;
    cfg.C = 1.0;
    const auto fit = train_svr(X, y, cfg);
    const auto o = oracle::svr_dual_oracle(X, y, cfg.C, cfg.epsilon_tube);
    CHECK(fit.objective == doctest::Approx(primal_objective(X, y, fit.w, fit.b, cfg.C, cfg.epsilon_tube)));
    CHECK(std::abs(fit.objective - o.primal) <= 1e-3 * o.primal);
  }
}

TEST_CASE("realizable noiseless targets land inside the tube") {
  Rng rng(5);
  const Matrix X = random_rows(rng, 100, 3);
  const Vector w = (Vector(3) << 1.0, -2.0, 0.5).finished();
  const Vector y = X * w + Vector::Constant(100, 4.0);
  SvrConfig cfg;
  cfg.C = 100.0;
  const auto fit = train_svr(X, y, cfg);
  int inside = 0;
  for (Eigen::Index i = 0; i < 100; ++i) inside += std::abs(fit.predict(X.row(i).transpose()) - y(i)) <= cfg.epsilon_tube + 1e-9;
  CHECK(inside >= 99);
}

TEST_CASE("constant targets give near-zero weights and the constant bias") {
  // The optimum is w = 0 with objective 0; a first-order solver gets close.
  Rng rng(6);
  const Matrix X = random_rows(rng, 50, 4);
  const auto fit = train_svr(X, Vector::Constant(50, 3.5), SvrConfig{});
  CHECK(fit.objective <= 1e-2);
  CHECK(fit.w.norm() < 0.15);
  CHECK(std::abs(fit.b - 3.5) <= 0.1 + 0.05);
}

TEST_CASE("best history is nonincreasing") {
  Rng rng(7);
  const Matrix X = random_rows(rng, 30, 2);
  const auto fit = train_svr(X, fixture::normal_vector(rng, 30), SvrConfig{});
  for (std::size_t i = 1; i < fit.best_history.size(); ++i) CHECK(fit.best_history[i] <= fit.best_history[i - 1]);
}

TEST_CASE("invalid configuration and shapes are rejected") {
  SvrConfig bad;
  bad.C = 0.0;
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  CHECK_THROWS(train_svr(Matrix::Zero(3, 2), Vector::Zero(4), SvrConfig{}));
  const auto back = svr_config_from_json(svr_config_to_json(SvrConfig{}));
  CHECK(back.max_epochs == SvrConfig{}.max_epochs);
}

TEST_CASE("attribute regressors: single column equals train_svr") {
  Rng rng(8);
  const Matrix X = random_rows(rng, 40, 3);
  Matrix A(40, 1);
  A.col(0) = (X.col(0).array() > 0.0).cast<double>();
  const auto reg = train_attribute_regressors(X, A, SvrConfig{});
  const auto direct = train_svr(X, A.col(0), SvrConfig{});
  CHECK(reg.W.col(0) == direct.w);
  CHECK(reg.b(0) == direct.b);
}

TEST_CASE("attribute regressors: duplicate columns give identical weights for any thread count") {
  Rng rng(9);
  const Matrix X = random_rows(rng, 40, 3);
  Matrix A(40, 3);
  A.col(0) = (X.col(0).array() > 0.0).cast<double>();
  A.col(1) = A.col(0);
  A.col(2) = (X.col(1).array() > 0.3).cast<double>();
  const auto one = train_attribute_regressors(X, A, SvrConfig{}, 1);
  const auto three = train_attribute_regressors(X, A, SvrConfig{}, 3);
  CHECK(one.W.col(0) == one.W.col(1));
  CHECK(one.W == three.W);
  CHECK(one.b == three.b);
}

TEST_CASE("attribute regressors recover noiseless soft attributes") {
  Rng rng(10);
  const Eigen::Index d = 5, n = 3, m = 300;
  const Matrix X = random_rows(rng, m, d);
  Matrix W(d, n);
  for (Eigen::Index j = 0; j < n; ++j) W.col(j) = fixture::normal_vector(rng, d, 0.04);
  const Vector b = fixture::uniform_vector(rng, n, 0.4, 0.6);
  const Matrix A = ((X * W).rowwise() + b.transpose()).cwiseMax(0.0).cwiseMin(1.0);
  SvrConfig cfg;
  cfg.epsilon_tube = 0.01;
  cfg.C = 10.0;
  const auto reg = train_attribute_regressors(X, A, cfg);
  const Matrix pred = (X * reg.W).rowwise() + reg.b.transpose();
  for (Eigen::Index j = 0; j < n; ++j) CHECK((pred.col(j) - A.col(j)).cwiseAbs().mean() <= 0.05);
}
