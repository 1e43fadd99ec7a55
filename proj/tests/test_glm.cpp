#include "doctest.h"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <vector>

#include "core/error.hpp"
#include "core/glm.hpp"
#include "core/rng.hpp"
#include "oracles.hpp"

using namespace ptb;

namespace {

struct Instance {
  std::vector<double> x;
  std::vector<int> y;
  std::size_t n = 0;
  std::size_t d = 0;
};

Instance random_instance(std::uint64_t seed, std::size_t n, std::size_t d) {
  Rng rng(seed);
  Instance inst;
  inst.n = n;
  inst.d = d;
  inst.x.resize(n * d);
  for (double& v : inst.x) v = rng.uniform(-2.0, 2.0);
  inst.y.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    // labels correlated with the first feature so the fit is nontrivial
    double p = 1.0 / (1.0 + std::exp(-1.5 * inst.x[i * d]));
    inst.y[i] = rng.uniform() < p ? +1 : -1;
  }
  return inst;
}

}  // namespace

TEST_SUITE_BEGIN("glm");

TEST_CASE("soft threshold shrinks toward zero") {
  CHECK(soft_threshold(3.0, 1.0) == 2.0);
  CHECK(soft_threshold(-0.5, 1.0) == 0.0);
  CHECK(soft_threshold(-3.0, 1.0) == -2.0);
  CHECK(soft_threshold(0.7, 0.0) == 0.7);
  CHECK_THROWS_AS(soft_threshold(1.0, -0.1), Error);
}

TEST_CASE("fitting above lambda_max returns the null model") {
  Instance inst = random_instance(21, 40, 4);
  double lmax = lambda_max(inst.x.data(), inst.n, inst.d, inst.y.data(), 1.0);
  REQUIRE(lmax > 0.0);

  GlmConfig cfg;
  cfg.alpha = 1.0;
  cfg.lambda_path = {1.01 * lmax};
  auto models = fit_glm(inst.x.data(), inst.n, inst.d, inst.y.data(), cfg);
  REQUIRE(models.size() == 1);
  CHECK(models[0].nonzeros() == 0);

  double pos = 0.0;
  for (int v : inst.y)
    if (v == +1) pos += 1.0;
  double frac = pos / inst.n;
  CHECK(models[0].intercept == doctest::Approx(std::log(frac / (1.0 - frac))).epsilon(1e-5));
}

TEST_CASE("balanced labels with huge penalty give a zero intercept") {
  Instance inst = random_instance(33, 30, 3);
  for (std::size_t i = 0; i < inst.n; ++i) inst.y[i] = i % 2 ? +1 : -1;
  GlmConfig cfg;
  cfg.alpha = 1.0;
  cfg.lambda_path = {1e6};
  auto models = fit_glm(inst.x.data(), inst.n, inst.d, inst.y.data(), cfg);
  CHECK(models[0].nonzeros() == 0);
  CHECK(models[0].intercept == doctest::Approx(0.0).epsilon(1e-9));
}

TEST_CASE("lambda_max matches a path scan for the first active coefficient") {
  Instance inst = random_instance(5, 50, 3);
  double lmax = lambda_max(inst.x.data(), inst.n, inst.d, inst.y.data(), 1.0);

  // just above: empty model; just below: at least one active coefficient
  GlmConfig above;
  above.alpha = 1.0;
  above.lambda_path = {lmax * 1.0001};
  CHECK(fit_glm(inst.x.data(), inst.n, inst.d, inst.y.data(), above)[0].nonzeros() == 0);

  GlmConfig below;
  below.alpha = 1.0;
  below.lambda_path = {lmax * 0.98};
  CHECK(fit_glm(inst.x.data(), inst.n, inst.d, inst.y.data(), below)[0].nonzeros() >= 1);
}

TEST_CASE("lasso solutions match the proximal-gradient oracle") {
  for (std::uint64_t seed : {101, 102, 103}) {
    Instance inst = random_instance(seed, 35, 5);
    double lmax = lambda_max(inst.x.data(), inst.n, inst.d, inst.y.data(), 1.0);
    double lambda = 0.25 * lmax;

    GlmConfig cfg;
    cfg.alpha = 1.0;
    cfg.lambda_path = {lambda};
    cfg.tol = 1e-10;
    GlmModel model = fit_glm(inst.x.data(), inst.n, inst.d, inst.y.data(), cfg)[0];
    double lib_obj = glm_objective(inst.x.data(), inst.n, inst.d, inst.y.data(), model);

    auto s = oracle::standardize(inst.x, inst.n, inst.d);
    auto fit = oracle::ista_logistic(s.xs, inst.n, inst.d, inst.y, lambda, 1.0);
    double orc_obj = oracle::l1_objective(s.xs, inst.n, inst.d, inst.y, fit, lambda, 1.0);

    CHECK(lib_obj == doctest::Approx(orc_obj).epsilon(1e-4));
    CHECK(lib_obj <= orc_obj + 1e-4);  // never meaningfully worse than the oracle
  }
}

TEST_CASE("a vanishing penalty recovers the unpenalized Newton fit") {
  Instance inst = random_instance(77, 60, 3);
  GlmConfig cfg;
  cfg.alpha = 1.0;
  cfg.lambda_path = {1e-9};
  cfg.tol = 1e-10;
  GlmModel model = fit_glm(inst.x.data(), inst.n, inst.d, inst.y.data(), cfg)[0];

  auto newton = oracle::newton_logistic(inst.x, inst.n, inst.d, inst.y);
  CHECK(model.intercept == doctest::Approx(newton.b0).epsilon(1e-3));
  for (std::size_t j = 0; j < inst.d; ++j)
    CHECK(model.beta[j] == doctest::Approx(newton.beta[j]).epsilon(1e-3));
}

TEST_CASE("collinear duplicates share their coefficient under the mixed penalty") {
  Instance base = random_instance(55, 50, 2);
  // append an exact copy of feature 0
  Instance inst;
  inst.n = base.n;
  inst.d = 3;
  inst.y = base.y;
  inst.x.resize(inst.n * 3);
  for (std::size_t i = 0; i < inst.n; ++i) {
    inst.x[i * 3 + 0] = base.x[i * 2 + 0];
    inst.x[i * 3 + 1] = base.x[i * 2 + 1];
    inst.x[i * 3 + 2] = base.x[i * 2 + 0];
  }
  double lmax = lambda_max(inst.x.data(), inst.n, inst.d, inst.y.data(), 0.5);
  GlmConfig cfg;
  cfg.alpha = 0.5;
  cfg.lambda_path = {0.1 * lmax};
  cfg.tol = 1e-12;
  cfg.max_iters = 5000;
  GlmModel model = fit_glm(inst.x.data(), inst.n, inst.d, inst.y.data(), cfg)[0];
  CHECK(model.beta[0] != 0.0);
  CHECK(model.beta[2] != 0.0);
  CHECK(model.beta[0] == doctest::Approx(model.beta[2]).epsilon(1e-6));
}

TEST_CASE("the penalized objective never increases across sweeps") {
  Instance inst = random_instance(31, 45, 4);
  std::vector<double> objectives;
  GlmConfig cfg;
  cfg.alpha = 0.6;
  cfg.path_length = 8;
  cfg.sweep_objectives = &objectives;
  fit_glm(inst.x.data(), inst.n, inst.d, inst.y.data(), cfg);
  REQUIRE(objectives.size() > 8);
  // each sweep minimizes a curvature-bound quadratic re-expanded at the
  // current point, so the true objective is nonincreasing within a lambda;
  // across a lambda switch the penalty only shrinks, so the whole recorded
  // series must be nonincreasing up to rounding
  int violations = 0;
  for (std::size_t i = 1; i < objectives.size(); ++i)
    if (objectives[i] > objectives[i - 1] + 1e-12) ++violations;
  CHECK(violations == 0);
}

TEST_CASE("warm-started paths end with much smaller penalties and denser models") {
  Instance inst = random_instance(91, 80, 5);
  GlmConfig cfg;
  cfg.alpha = 1.0;
  cfg.path_length = 20;
  auto models = fit_glm(inst.x.data(), inst.n, inst.d, inst.y.data(), cfg);
  REQUIRE(models.size() == 20);
  CHECK(models.front().nonzeros() == 0);  // path starts at lambda_max
  CHECK(models.back().lambda == doctest::Approx(models.front().lambda * 1e-3));
  CHECK(models.back().nonzeros() >= models.front().nonzeros());
  for (std::size_t i = 1; i < models.size(); ++i) CHECK(models[i].lambda < models[i - 1].lambda);
}

TEST_CASE("explicit paths must be positive and strictly decreasing") {
  Instance inst = random_instance(11, 20, 2);
  GlmConfig cfg;
  cfg.lambda_path = {1.0, 1.0};
  CHECK_THROWS_AS(fit_glm(inst.x.data(), inst.n, inst.d, inst.y.data(), cfg), Error);
  cfg.lambda_path = {1.0, -0.5};
  CHECK_THROWS_AS(fit_glm(inst.x.data(), inst.n, inst.d, inst.y.data(), cfg), Error);
}

TEST_CASE("probabilities and the 0.5 tie rule") {
  GlmModel model;
  model.beta = {0.0, 0.0};
  model.intercept = 0.0;
  std::vector<double> x = {3.0, -1.0};
  auto p = glm_probabilities(model, x.data(), 1, 2);
  CHECK(p[0] == doctest::Approx(0.5));
  CHECK(glm_predict(model, x.data(), 1, 2)[0] == +1);  // ties go positive

  model.intercept = 50.0;
  CHECK(glm_predict(model, x.data(), 1, 2)[0] == +1);
  model.intercept = -50.0;
  CHECK(glm_predict(model, x.data(), 1, 2)[0] == -1);

  model.beta = {1.0};
  CHECK_THROWS_AS(glm_probabilities(model, x.data(), 1, 2), Error);
}

TEST_CASE("hand-set weights give hand-computed probabilities") {
  GlmModel model;
  model.intercept = 0.5;
  model.beta = {1.0, -2.0};
  std::vector<double> x = {1.0, 1.0};
  auto p = glm_probabilities(model, x.data(), 1, 2);
  CHECK(p[0] == doctest::Approx(1.0 / (1.0 + std::exp(0.5))));
}

TEST_CASE("models survive a save/load round trip with sparsity intact") {
  GlmModel model;
  model.alpha = 0.5;
  model.lambda = 0.037;
  model.intercept = -1.25;
  model.beta = {0.0, 1.5, 0.0, -0.75, 0.0};

  std::string path = (std::filesystem::temp_directory_path() / "ptb_glm_rt.txt").string();
  save_glm(model, path);
  GlmModel again = load_glm(path);
  std::remove(path.c_str());

  CHECK(again.alpha == model.alpha);
  CHECK(again.lambda == model.lambda);
  CHECK(again.intercept == model.intercept);
  CHECK(again.beta == model.beta);
  CHECK_THROWS_AS(load_glm("/nonexistent/glm.txt"), Error);
}

TEST_CASE("input validation") {
  std::vector<double> x = {1.0, 2.0, 3.0, 4.0};
  std::vector<int> y = {+1, -1};
  GlmConfig cfg;
  cfg.alpha = 0.0;
  CHECK_THROWS_AS(fit_glm(x.data(), 2, 2, y.data(), cfg), Error);
  cfg.alpha = 1.0;
  std::vector<int> bad = {+1, 0};
  CHECK_THROWS_AS(fit_glm(x.data(), 2, 2, bad.data(), cfg), Error);
  std::vector<double> nanx = {1.0, std::nan(""), 3.0, 4.0};
  CHECK_THROWS_AS(fit_glm(nanx.data(), 2, 2, y.data(), cfg), Error);
  CHECK_THROWS_AS(lambda_max(x.data(), 2, 2, y.data(), 0.0), Error);
}

TEST_SUITE_END();
