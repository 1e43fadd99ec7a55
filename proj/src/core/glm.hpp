#pragma once

#include <string>
#include <vector>

namespace ptb {

struct GlmConfig {
  double alpha = 1.0;               // 1 = lasso, (0,1) = elastic net
  int path_length = 100;            // auto path: lambda_max down to ratio*lambda_max
  double lambda_min_ratio = 1e-3;
  std::vector<double> lambda_path;  // explicit path overrides the auto path
  double tol = 1e-7;
  int max_iters = 1000;             // coordinate-descent sweeps per lambda

  // when set, the penalized objective (standardized scale) is appended after
  // every inner coordinate-descent sweep; used by property tests
  std::vector<double>* sweep_objectives = nullptr;
};

struct GlmModel {
  double intercept = 0.0;
  std::vector<double> beta;  // original (unstandardized) scale
  double lambda = 0.0;
  double alpha = 1.0;
  bool converged = true;

  std::size_t nonzeros() const;
};

double soft_threshold(double z, double gamma);

/// Smallest penalty at which every penalized coefficient is zero, computed on
/// internally standardized columns from the null-model working response.
double lambda_max(const double* x, std::size_t n, std::size_t d, const int* y, double alpha);

/// Fits the full regularization path by cyclic coordinate descent on a
/// curvature-bound quadratic surrogate, re-expanded every sweep, with warm
/// starts; one model per lambda, decreasing order.
std::vector<GlmModel> fit_glm(const double* x, std::size_t n, std::size_t d, const int* y,
                              const GlmConfig& cfg);

/// Probabilities sigma(b0 + x.beta); label +1 when probability >= threshold.
std::vector<double> glm_probabilities(const GlmModel& model, const double* x, std::size_t n,
                                      std::size_t d);
std::vector<int> glm_predict(const GlmModel& model, const double* x, std::size_t n,
                             std::size_t d, double threshold = 0.5);

/// Penalized negative log-likelihood on the original scale, for diagnostics
/// and tests: (1/n) sum log(1+exp(-y f)) + lambda (alpha |beta|_1 + (1-alpha)/2 |beta|_2^2)
/// evaluated with standardized columns so it matches the fitted objective.
double glm_objective(const double* x, std::size_t n, std::size_t d, const int* y,
                     const GlmModel& model);

void save_glm(const GlmModel& model, const std::string& path);
GlmModel load_glm(const std::string& path);

}  // namespace ptb
