#include "core/glm.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>

#include "core/error.hpp"

namespace ptb {

std::size_t GlmModel::nonzeros() const {
  std::size_t n = 0;
  for (double b : beta)
    if (b != 0.0) ++n;
  return n;
}

double soft_threshold(double z, double gamma) {
  if (gamma < 0.0) fail_invalid("soft_threshold: gamma must be >= 0");
  if (z > gamma) return z - gamma;
  if (z < -gamma) return z + gamma;
  return 0.0;
}

namespace {

struct Standardized {
  std::vector<double> xs;    // standardized columns, row-major
  std::vector<double> mean;
  std::vector<double> sd;    // population sd; 0 marks a constant column
};

Standardized standardize(const double* x, std::size_t n, std::size_t d) {
  Standardized s;
  s.mean.assign(d, 0.0);
  s.sd.assign(d, 0.0);
  for (std::size_t j = 0; j < d; ++j) {
    double m = 0.0;
    for (std::size_t i = 0; i < n; ++i) m += x[i * d + j];
    m /= static_cast<double>(n);
    double v = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double c = x[i * d + j] - m;
      v += c * c;
    }
    s.mean[j] = m;
    s.sd[j] = std::sqrt(v / static_cast<double>(n));
  }
  s.xs.resize(n * d);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < d; ++j)
      s.xs[i * d + j] = s.sd[j] > 0.0 ? (x[i * d + j] - s.mean[j]) / s.sd[j] : 0.0;
  return s;
}

std::vector<double> to_y01(const int* y, std::size_t n) {
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (y[i] != +1 && y[i] != -1) fail_invalid("glm: labels must be +1/-1");
    out[i] = y[i] == +1 ? 1.0 : 0.0;
  }
  return out;
}

double sigmoid(double t) { return 1.0 / (1.0 + std::exp(-t)); }

double lambda_max_std(const std::vector<double>& xs, std::size_t n, std::size_t d,
                      const std::vector<double>& y01, double alpha) {
  if (!(alpha > 0.0)) fail_invalid("lambda_max: alpha must be positive");
  double pbar = 0.0;
  for (double v : y01) pbar += v;
  pbar /= static_cast<double>(n);
  double best = 0.0;
  for (std::size_t j = 0; j < d; ++j) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += xs[i * d + j] * (y01[i] - pbar);
    best = std::max(best, std::abs(s));
  }
  return best / (static_cast<double>(n) * alpha);
}

}  // namespace

double lambda_max(const double* x, std::size_t n, std::size_t d, const int* y, double alpha) {
  auto s = standardize(x, n, d);
  return lambda_max_std(s.xs, n, d, to_y01(y, n), alpha);
}

std::vector<GlmModel> fit_glm(const double* x, std::size_t n, std::size_t d, const int* y,
                              const GlmConfig& cfg) {
  if (!(cfg.alpha > 0.0 && cfg.alpha <= 1.0)) fail_invalid("fit_glm: alpha must be in (0,1]");
  if (n < 2) fail_invalid("fit_glm: need at least 2 rows");
  for (std::size_t i = 0; i < n * d; ++i)
    if (!std::isfinite(x[i])) fail_invalid("fit_glm: non-finite value in X");

  auto std_data = standardize(x, n, d);
  const std::vector<double>& xs = std_data.xs;
  auto y01 = to_y01(y, n);

  std::vector<double> path = cfg.lambda_path;
  if (path.empty()) {
    double lmax = lambda_max_std(xs, n, d, y01, cfg.alpha);
    if (!(lmax > 0.0)) lmax = 1e-3;  // degenerate design; any positive path works
    int len = std::max(1, cfg.path_length);
    double lmin = lmax * cfg.lambda_min_ratio;
    for (int t = 0; t < len; ++t) {
      double frac = len == 1 ? 0.0 : static_cast<double>(t) / static_cast<double>(len - 1);
      path.push_back(std::exp(std::log(lmax) + frac * (std::log(lmin) - std::log(lmax))));
    }
  } else {
    for (std::size_t t = 1; t < path.size(); ++t)
      if (!(path[t] < path[t - 1]) || !(path[t] > 0.0))
        fail_invalid("fit_glm: lambda path must be positive and strictly decreasing");
  }

  double pbar = 0.0;
  for (double v : y01) pbar += v;
  pbar /= static_cast<double>(n);
  pbar = std::clamp(pbar, 1e-12, 1.0 - 1e-12);

  // warm-started state in standardized space
  std::vector<double> beta(d, 0.0);
  double beta0 = std::log(pbar / (1.0 - pbar));
  std::vector<double> eta(n, beta0);  // linear predictor

  std::vector<GlmModel> models;
  models.reserve(path.size());
  const double nn = static_cast<double>(n);

  // per-column mean squares of the standardized design (exactly 1 for
  // non-constant columns, kept explicit for clarity)
  std::vector<double> colsq(d, 0.0);
  for (std::size_t j = 0; j < d; ++j) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += xs[i * d + j] * xs[i * d + j];
    colsq[j] = s / nn;
  }

  std::vector<double> r(n);
  for (double lambda : path) {
    bool converged = false;
    for (int sweep = 0; sweep < cfg.max_iters; ++sweep) {
      // quadratic bound on the logistic loss, re-expanded at the current
      // point before every sweep: curvature 1/4 dominates p(1-p), so each
      // sweep can only lower the true penalized objective
      for (std::size_t i = 0; i < n; ++i) r[i] = 4.0 * (y01[i] - sigmoid(eta[i]));

      double max_change = 0.0;
      for (std::size_t j = 0; j < d; ++j) {
        if (std_data.sd[j] == 0.0) continue;
        double dot = 0.0;
        for (std::size_t i = 0; i < n; ++i) dot += xs[i * d + j] * r[i];
        double num = 0.25 * (dot / nn + colsq[j] * beta[j]);
        double bj = soft_threshold(num, lambda * cfg.alpha) /
                    (0.25 * colsq[j] + lambda * (1.0 - cfg.alpha));
        double delta = bj - beta[j];
        if (delta != 0.0) {
          for (std::size_t i = 0; i < n; ++i) {
            r[i] -= delta * xs[i * d + j];
            eta[i] += delta * xs[i * d + j];
          }
          beta[j] = bj;
          max_change = std::max(max_change, std::abs(delta));
        }
      }
      // unpenalized intercept
      double d0 = 0.0;
      for (std::size_t i = 0; i < n; ++i) d0 += r[i];
      d0 /= nn;
      if (d0 != 0.0) {
        beta0 += d0;
        for (std::size_t i = 0; i < n; ++i) eta[i] += d0;
        max_change = std::max(max_change, std::abs(d0));
      }
      if (cfg.sweep_objectives) {
        double obj = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
          double m = (y01[i] > 0.5 ? 1.0 : -1.0) * eta[i];
          obj += m > 0.0 ? std::log1p(std::exp(-m)) : -m + std::log1p(std::exp(m));
        }
        obj /= nn;
        double l1 = 0.0, l2 = 0.0;
        for (double b : beta) {
          l1 += std::abs(b);
          l2 += b * b;
        }
        cfg.sweep_objectives->push_back(obj + lambda * (cfg.alpha * l1 +
                                                        0.5 * (1.0 - cfg.alpha) * l2));
      }
      if (max_change < cfg.tol) {
        converged = true;
        break;
      }
    }
    // refresh the linear predictor exactly; incremental updates accumulate
    // rounding over many sweeps
    for (std::size_t i = 0; i < n; ++i) {
      double e = beta0;
      const double* row = xs.data() + i * d;
      for (std::size_t j = 0; j < d; ++j) e += row[j] * beta[j];
      eta[i] = e;
    }

    GlmModel model;
    model.lambda = lambda;
    model.alpha = cfg.alpha;
    model.converged = converged;
    model.beta.assign(d, 0.0);
    double b0 = beta0;
    for (std::size_t j = 0; j < d; ++j) {
      if (std_data.sd[j] > 0.0) {
        model.beta[j] = beta[j] / std_data.sd[j];
        b0 -= model.beta[j] * std_data.mean[j];
      }
    }
    model.intercept = b0;
    models.push_back(std::move(model));
  }
  return models;
}

std::vector<double> glm_probabilities(const GlmModel& model, const double* x, std::size_t n,
                                      std::size_t d) {
  if (d != model.beta.size()) fail_invalid("glm_probabilities: dimension mismatch");
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    double e = model.intercept;
    for (std::size_t j = 0; j < d; ++j) e += x[i * d + j] * model.beta[j];
    out[i] = sigmoid(e);
  }
  return out;
}

std::vector<int> glm_predict(const GlmModel& model, const double* x, std::size_t n,
                             std::size_t d, double threshold) {
  auto p = glm_probabilities(model, x, n, d);
  std::vector<int> labels(n);
  for (std::size_t i = 0; i < n; ++i) labels[i] = p[i] >= threshold ? +1 : -1;
  return labels;
}

double glm_objective(const double* x, std::size_t n, std::size_t d, const int* y,
                     const GlmModel& model) {
  auto s = standardize(x, n, d);
  double nll = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double e = model.intercept;
    for (std::size_t j = 0; j < d; ++j) e += x[i * d + j] * model.beta[j];
    double m = static_cast<double>(y[i]) * e;
    // stable log(1+exp(-m))
    nll += m > 0.0 ? std::log1p(std::exp(-m)) : -m + std::log1p(std::exp(m));
  }
  nll /= static_cast<double>(n);
  double l1 = 0.0, l2 = 0.0;
  for (std::size_t j = 0; j < d; ++j) {
    double bs = model.beta[j] * s.sd[j];  // penalty applies on the standardized scale
    l1 += std::abs(bs);
    l2 += bs * bs;
  }
  return nll + model.lambda * (model.alpha * l1 + 0.5 * (1.0 - model.alpha) * l2);
}

void save_glm(const GlmModel& model, const std::string& path) {
  std::ofstream out(path);
  if (!out) fail_io("cannot write GLM model '" + path + "'");
  out << std::setprecision(17);
  out << "glm-model v1\n";
  out << "alpha " << model.alpha << "\n";
  out << "lambda " << model.lambda << "\n";
  out << "intercept " << model.intercept << "\n";
  out << "dim " << model.beta.size() << "\n";
  out << "coefficients";
  for (std::size_t j = 0; j < model.beta.size(); ++j)
    if (model.beta[j] != 0.0) out << " " << j << ":" << model.beta[j];
  out << "\n";
  if (!out) fail_io("failed writing GLM model '" + path + "'");
}

GlmModel load_glm(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail_io("cannot open GLM model '" + path + "'");
  std::string header, version, word;
  in >> header >> version;
  if (header != "glm-model" || version != "v1") fail_parse(path + ": not a GLM model file");
  GlmModel model;
  std::size_t dim = 0;
  in >> word >> model.alpha >> word >> model.lambda >> word >> model.intercept >> word >> dim;
  in >> word;
  if (word != "coefficients") fail_parse(path + ": malformed model file");
  model.beta.assign(dim, 0.0);
  std::string entry;
  while (in >> entry) {
    auto colon = entry.find(':');
    if (colon == std::string::npos) fail_parse(path + ": malformed coefficient '" + entry + "'");
    std::size_t j = std::stoul(entry.substr(0, colon));
    if (j >= dim) fail_parse(path + ": coefficient index out of range");
    model.beta[j] = std::stod(entry.substr(colon + 1));
  }
  return model;
}

}  // namespace ptb
