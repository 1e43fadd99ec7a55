#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace ptb {

struct KernelSpec {
  enum class Kind { Linear, Poly, Rbf };
  Kind kind = Kind::Linear;
  int degree = 2;       // poly: 2 or 3
  double gamma = 1.0;   // poly/rbf
  double coef0 = 1.0;   // poly

  std::string label() const;
};

/// K[i][j] = k(A_i, B_j); row-major n_a x n_b output.
std::vector<double> gram(const KernelSpec& kernel, const double* a, std::size_t n_a,
                         const double* b, std::size_t n_b, std::size_t d);

/// Class-balanced costs: C_neg = C, C_pos = C * n_neg / n_pos, so that
/// C_pos * n_pos == C_neg * n_neg exactly.
std::pair<double, double> class_costs(std::size_t n_pos, std::size_t n_neg, double c);

struct SvmConfig {
  double c = 1.0;
  double tol = 1e-3;
  long max_iters = 100000;
};

struct SvmModel {
  KernelSpec kernel;
  std::size_t dim = 0;
  std::vector<double> support;   // n_sv x dim, rows of the training matrix
  std::vector<double> alpha_y;   // alpha_i * y_i per support vector
  double bias = 0.0;
  bool converged = true;
  // training diagnostics
  double dual_objective = 0.0;
  long iterations = 0;
  double c_pos = 0.0;
  double c_neg = 0.0;

  std::size_t n_support() const { return alpha_y.size(); }
};

/// Maximizes the cost-weighted dual by pairwise coordinate ascent over the
/// maximal-violating pair, with per-class box bounds. A model that hits
/// max_iters is returned with converged = false.
SvmModel train_svm(const double* x, std::size_t n, std::size_t d, const int* y,
                   const KernelSpec& kernel, const SvmConfig& cfg);

/// Raw decision values f(x) = sum_i alpha_i y_i k(s_i, x) + b.
std::vector<double> svm_decision(const SvmModel& model, const double* x, std::size_t n,
                                 std::size_t d);

/// sign of the decision value; an exact 0 maps to +1.
std::vector<int> svm_predict(const SvmModel& model, const double* x, std::size_t n,
                             std::size_t d);

void save_svm(const SvmModel& model, const std::string& path);
SvmModel load_svm(const std::string& path);

}  // namespace ptb
