#include "core/svm.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>

#include "core/error.hpp"

namespace ptb {

std::string KernelSpec::label() const {
  std::ostringstream out;
  switch (kind) {
    case Kind::Linear: out << "linear"; break;
    case Kind::Poly: out << "poly" << degree << "(gamma=" << gamma << ",coef0=" << coef0 << ")"; break;
    case Kind::Rbf: out << "rbf(gamma=" << gamma << ")"; break;
  }
  return out.str();
}

namespace {

double kernel_eval(const KernelSpec& k, const double* a, const double* b, std::size_t d) {
  switch (k.kind) {
    case KernelSpec::Kind::Linear: {
      double s = 0.0;
      for (std::size_t j = 0; j < d; ++j) s += a[j] * b[j];
      return s;
    }
    case KernelSpec::Kind::Poly: {
      double s = 0.0;
      for (std::size_t j = 0; j < d; ++j) s += a[j] * b[j];
      double base = k.gamma * s + k.coef0;
      return k.degree == 2 ? base * base : base * base * base;
    }
    case KernelSpec::Kind::Rbf: {
      double s = 0.0;
      for (std::size_t j = 0; j < d; ++j) {
        double diff = a[j] - b[j];
        s += diff * diff;
      }
      return std::exp(-k.gamma * s);
    }
  }
  return 0.0;
}

void validate_kernel(const KernelSpec& k) {
  if (k.kind != KernelSpec::Kind::Linear && !(k.gamma > 0.0))
    fail_invalid("kernel: gamma must be positive");
  if (k.kind == KernelSpec::Kind::Poly && k.degree != 2 && k.degree != 3)
    fail_invalid("kernel: polynomial degree must be 2 or 3");
}

}  // namespace

std::vector<double> gram(const KernelSpec& kernel, const double* a, std::size_t n_a,
                         const double* b, std::size_t n_b, std::size_t d) {
  validate_kernel(kernel);
  std::vector<double> k(n_a * n_b);
  for (std::size_t i = 0; i < n_a; ++i)
    for (std::size_t j = 0; j < n_b; ++j)
      k[i * n_b + j] = kernel_eval(kernel, a + i * d, b + j * d, d);
  return k;
}

std::pair<double, double> class_costs(std::size_t n_pos, std::size_t n_neg, double c) {
  if (n_pos == 0 || n_neg == 0) fail_invalid("class_costs: zero-size class");
  if (!(c > 0.0)) fail_invalid("class_costs: C must be positive");
  double c_neg = c;
  double c_pos = c * static_cast<double>(n_neg) / static_cast<double>(n_pos);
  return {c_pos, c_neg};
}

SvmModel train_svm(const double* x, std::size_t n, std::size_t d, const int* y,
                   const KernelSpec& kernel, const SvmConfig& cfg) {
  validate_kernel(kernel);
  if (!(cfg.tol > 0.0)) fail_invalid("train_svm: tol must be positive");
  std::size_t n_pos = 0, n_neg = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (y[i] == +1) ++n_pos;
    else if (y[i] == -1) ++n_neg;
    else fail_invalid("train_svm: labels must be +1/-1");
  }
  if (n_pos == 0 || n_neg == 0) fail_invalid("train_svm: both classes must be present");

  auto [c_pos, c_neg] = class_costs(n_pos, n_neg, cfg.c);
  auto box = [&](std::size_t i) { return y[i] == +1 ? c_pos : c_neg; };

  std::vector<double> k = gram(kernel, x, n, x, n, d);

  // dual minimization form: 1/2 a'Qa - sum a, Q_ij = y_i y_j K_ij
  std::vector<double> alpha(n, 0.0);
  std::vector<double> grad(n, -1.0);  // Q a - 1

  long iter = 0;
  bool converged = false;
  double m_val = 0.0, big_m_val = 0.0;
  while (iter < cfg.max_iters) {
    // maximal violating pair; -y_k grad_k == y_k - f_k
    long best_i = -1, best_j = -1;
    m_val = -std::numeric_limits<double>::infinity();
    big_m_val = std::numeric_limits<double>::infinity();
    for (std::size_t t = 0; t < n; ++t) {
      double v = -static_cast<double>(y[t]) * grad[t];
      bool in_up = (y[t] == +1 && alpha[t] < box(t)) || (y[t] == -1 && alpha[t] > 0.0);
      bool in_low = (y[t] == -1 && alpha[t] < box(t)) || (y[t] == +1 && alpha[t] > 0.0);
      if (in_up && v > m_val) {
        m_val = v;
        best_i = static_cast<long>(t);
      }
      if (in_low && v < big_m_val) {
        big_m_val = v;
        best_j = static_cast<long>(t);
      }
    }
    if (best_i < 0 || best_j < 0 || m_val - big_m_val <= cfg.tol) {
      converged = true;
      break;
    }
    std::size_t i = static_cast<std::size_t>(best_i);
    std::size_t j = static_cast<std::size_t>(best_j);

    double ci = box(i), cj = box(j);
    double ai_old = alpha[i], aj_old = alpha[j];
    double s = static_cast<double>(y[i] * y[j]);
    double lo, hi;
    if (y[i] != y[j]) {
      lo = std::max(0.0, aj_old - ai_old);
      hi = std::min(cj, ci + aj_old - ai_old);
    } else {
      lo = std::max(0.0, ai_old + aj_old - ci);
      hi = std::min(cj, ai_old + aj_old);
    }

    double kii = k[i * n + i], kjj = k[j * n + j], kij = k[i * n + j];
    double eta = kii + kjj - 2.0 * kij;
    double fi = static_cast<double>(y[i]) * (grad[i] + 1.0);
    double fj = static_cast<double>(y[j]) * (grad[j] + 1.0);
    double aj_new;
    if (eta > 1e-12) {
      aj_new = aj_old + static_cast<double>(y[j]) * ((fi - y[i]) - (fj - y[j])) / eta;
      aj_new = std::clamp(aj_new, lo, hi);
    } else {
      // flat direction: evaluate the dual at both box ends
      auto obj_delta = [&](double aj) {
        double ai = ai_old + s * (aj_old - aj);
        double dai = ai - ai_old, daj = aj - aj_old;
        // change of 1/2 a'Qa - sum a restricted to the pair
        double lin = dai * grad[i] + daj * grad[j];
        double quad = 0.5 * (dai * dai * kii + daj * daj * kjj) +
                      dai * daj * s * kij;
        return lin + quad;
      };
      aj_new = obj_delta(lo) < obj_delta(hi) ? lo : hi;
    }
    double ai_new = ai_old + s * (aj_old - aj_new);
    // rounding in the pair update can leave an alpha a few ulps off its bound,
    // which would keep it in the working set with a degenerate feasible range
    auto snap = [](double a, double cap) {
      double eps = 1e-12 * cap;
      if (a < eps) return 0.0;
      if (a > cap - eps) return cap;
      return a;
    };
    ai_new = snap(ai_new, ci);
    aj_new = snap(aj_new, cj);
    double dai = ai_new - ai_old, daj = aj_new - aj_old;
    if (std::abs(dai) < 1e-15 && std::abs(daj) < 1e-15) {
      // violating pair admits no progress; stop and flag
      break;
    }
    alpha[i] = ai_new;
    alpha[j] = aj_new;
    for (std::size_t t = 0; t < n; ++t)
      grad[t] += static_cast<double>(y[t]) *
                 (dai * y[i] * k[i * n + t] + daj * y[j] * k[j * n + t]);
    ++iter;
  }

  SvmModel model;
  model.kernel = kernel;
  model.dim = d;
  model.converged = converged;
  model.iterations = iter;
  model.c_pos = c_pos;
  model.c_neg = c_neg;

  // f_k without bias, from the maintained gradient
  std::vector<double> f(n);
  for (std::size_t t = 0; t < n; ++t) f[t] = static_cast<double>(y[t]) * (grad[t] + 1.0);

  // bias from interior support vectors, midpoint of the KKT bounds otherwise
  double b_sum = 0.0;
  std::size_t b_n = 0;
  for (std::size_t t = 0; t < n; ++t) {
    double c_t = box(t);
    if (alpha[t] > 1e-8 * c_t && alpha[t] < c_t * (1.0 - 1e-8)) {
      b_sum += static_cast<double>(y[t]) - f[t];
      ++b_n;
    }
  }
  if (b_n > 0) {
    model.bias = b_sum / static_cast<double>(b_n);
  } else {
    double m2 = -std::numeric_limits<double>::infinity();
    double bm2 = std::numeric_limits<double>::infinity();
    for (std::size_t t = 0; t < n; ++t) {
      double v = static_cast<double>(y[t]) - f[t];
      bool in_up = (y[t] == +1 && alpha[t] < box(t)) || (y[t] == -1 && alpha[t] > 0.0);
      bool in_low = (y[t] == -1 && alpha[t] < box(t)) || (y[t] == +1 && alpha[t] > 0.0);
      if (in_up) m2 = std::max(m2, v);
      if (in_low) bm2 = std::min(bm2, v);
    }
    model.bias = (m2 + bm2) / 2.0;
  }

  // dual objective (maximization form): sum a - 1/2 a'Qa = 1/2 sum a_k (1 - grad_k)
  double obj = 0.0;
  for (std::size_t t = 0; t < n; ++t) obj += 0.5 * alpha[t] * (1.0 - grad[t]);
  model.dual_objective = obj;

  for (std::size_t t = 0; t < n; ++t) {
    if (alpha[t] > 1e-12) {
      model.alpha_y.push_back(alpha[t] * static_cast<double>(y[t]));
      model.support.insert(model.support.end(), x + t * d, x + (t + 1) * d);
    }
  }
  return model;
}

std::vector<double> svm_decision(const SvmModel& model, const double* x, std::size_t n,
                                 std::size_t d) {
  if (d != model.dim) fail_invalid("svm_decision: dimension mismatch");
  std::vector<double> out(n, model.bias);
  const std::size_t n_sv = model.n_support();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t s = 0; s < n_sv; ++s)
      out[i] += model.alpha_y[s] *
                kernel_eval(model.kernel, model.support.data() + s * d, x + i * d, d);
  return out;
}

std::vector<int> svm_predict(const SvmModel& model, const double* x, std::size_t n,
                             std::size_t d) {
  auto dec = svm_decision(model, x, n, d);
  std::vector<int> labels(n);
  for (std::size_t i = 0; i < n; ++i) labels[i] = dec[i] >= 0.0 ? +1 : -1;
  return labels;
}

void save_svm(const SvmModel& model, const std::string& path) {
  std::ofstream out(path);
  if (!out) fail_io("cannot write SVM model '" + path + "'");
  out << std::setprecision(17);
  out << "svm-model v1\n";
  out << "kernel ";
  switch (model.kernel.kind) {
    case KernelSpec::Kind::Linear: out << "linear\n"; break;
    case KernelSpec::Kind::Poly:
      out << "poly " << model.kernel.degree << " " << model.kernel.gamma << " "
          << model.kernel.coef0 << "\n";
      break;
    case KernelSpec::Kind::Rbf: out << "rbf " << model.kernel.gamma << "\n"; break;
  }
  out << "dim " << model.dim << "\n";
  out << "bias " << model.bias << "\n";
  out << "converged " << (model.converged ? 1 : 0) << "\n";
  out << "nsv " << model.n_support() << "\n";
  for (std::size_t s = 0; s < model.n_support(); ++s) {
    out << model.alpha_y[s];
    for (std::size_t j = 0; j < model.dim; ++j) out << " " << model.support[s * model.dim + j];
    out << "\n";
  }
  if (!out) fail_io("failed writing SVM model '" + path + "'");
}

SvmModel load_svm(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail_io("cannot open SVM model '" + path + "'");
  std::string word;
  SvmModel model;
  std::string header, version;
  in >> header >> version;
  if (header != "svm-model" || version != "v1") fail_parse(path + ": not an SVM model file");
  std::string kind;
  in >> word >> kind;
  if (word != "kernel") fail_parse(path + ": malformed model file");
  if (kind == "linear") {
    model.kernel.kind = KernelSpec::Kind::Linear;
  } else if (kind == "poly") {
    model.kernel.kind = KernelSpec::Kind::Poly;
    in >> model.kernel.degree >> model.kernel.gamma >> model.kernel.coef0;
  } else if (kind == "rbf") {
    model.kernel.kind = KernelSpec::Kind::Rbf;
    in >> model.kernel.gamma;
  } else {
    fail_parse(path + ": unknown kernel '" + kind + "'");
  }
  std::size_t n_sv = 0;
  int conv = 1;
  in >> word >> model.dim >> word >> model.bias >> word >> conv >> word >> n_sv;
  model.converged = conv != 0;
  model.alpha_y.resize(n_sv);
  model.support.resize(n_sv * model.dim);
  for (std::size_t s = 0; s < n_sv; ++s) {
    in >> model.alpha_y[s];
    for (std::size_t j = 0; j < model.dim; ++j) in >> model.support[s * model.dim + j];
  }
  if (!in) fail_parse(path + ": truncated model file");
  return model;
}

}  // namespace ptb
