// Acceptance gate: each criterion prints a single pass/fail line and the
// process exit code reports the verdict, so every criterion can run as its
// own test entry.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "core/adasyn.hpp"
#include "core/cohort.hpp"
#include "core/config.hpp"
#include "core/eval.hpp"
#include "core/glm.hpp"
#include "core/metrics.hpp"
#include "core/rng.hpp"
#include "core/rpd.hpp"
#include "core/runner.hpp"
#include "core/schema.hpp"
#include "core/svm.hpp"
#include "core/synth.hpp"
#include "oracles.hpp"

using namespace ptb;

namespace {

struct Verdict {
  bool pass = true;
  std::string detail;

  void fail(const std::string& why) {
    pass = false;
    if (!detail.empty()) detail += "; ";
    detail += why;
  }
};

// ---------------------------------------------------------------------------
// criterion 1: published-table arithmetic
// |sqrt(sens*spec) - g| <= max(0.05, std) for every transcribed row
// ---------------------------------------------------------------------------

constexpr double kNA = -1.0;

struct PublishedRow {
  const char* variant;
  const char* algorithm;
  double sens[3];  // per tick
  double spec[3];
  double g[3];
  double sd[3];
};

const PublishedRow kPublished[] = {
    // cohort: everyone
    {"all", "lasso", {.59, .52, .50}, {.59, .67, .73}, {.59, .59, .60}, {.02, .02, .03}},
    {"all", "elastic-net", {.59, .51, .50}, {.59, .67, .73}, {.59, .59, .60}, {.02, .02, .03}},
    {"all", "linear-svm", {.40, .43, .45}, {.83, .82, .84}, {.58, .59, .62}, {.04, .02, .03}},
    {"all", "poly2-svm", {.56, .62, .67}, {.63, .65, .66}, {.59, .64, .60}, {.03, .01, .04}},
    {"all", "poly3-svm", {.55, .27, .23}, {.62, .87, .93}, {.57, .49, .46}, {.03, .02, .07}},
    {"all", "rbf-svm", {.58, .55, .59}, {.62, .72, .72}, {.60, .63, .65}, {.04, .03, .03}},
    {"all", "random-forest", {.30, .30, .30}, {.86, .88, .93}, {.51, .48, .50}, {.07, .09, .10}},
    {"all", "creasy-7", {.30, .22, .21}, {.88, .91, .93}, {.52, .45, .44}, {.04, .03, .03}},
    {"all", "creasy-13", {.29, .31, .31}, {.86, .89, .91}, {.50, .52, .53}, {.04, .06, .03}},
    // cohort: spontaneous outcomes only
    {"spontaneous", "lasso", {.53, .35, .36}, {.54, .66, .67}, {.53, .48, .48}, {.02, .04, .05}},
    {"spontaneous", "elastic-net", {.52, .36, .36}, {.55, .65, .67}, {.53, .48, .49},
     {.03, .04, .05}},
    {"spontaneous", "linear-svm", {.50, .53, .47}, {.50, .51, .57}, {.49, .52, .52},
     {.02, .03, .02}},
    {"spontaneous", "poly2-svm", {.56, .44, .41}, {.48, .58, .60}, {.51, .50, .49},
     {.03, .02, .03}},
    {"spontaneous", "poly3-svm", {.42, .17, .02}, {.62, .86, .93}, {.51, .38, .11},
     {.01, .08, .10}},
    {"spontaneous", "rbf-svm", {.40, .40, .43}, {.59, .60, .58}, {.49, .49, .50},
     {.04, .04, .02}},
    {"spontaneous", "random-forest", {.08, .03, .03}, {.95, .97, .98}, {.20, .13, .14},
     {.10, .10, .10}},
    {"spontaneous", "creasy-7", {.09, .10, .10}, {.88, .89, .92}, {.28, .30, .30},
     {.03, .02, .03}},
    {"spontaneous", "creasy-13", {.07, .11, .08}, {.88, .90, .91}, {.25, .30, .26},
     {.08, .05, .07}},
    // cohort: first pregnancies only
    {"nulliparous", "lasso", {.36, .35, .31}, {.58, .68, .75}, {.46, .48, .47},
     {.06, .05, .11}},
    {"nulliparous", "elastic-net", {.35, .35, .30}, {.58, .69, .76}, {.45, .49, .47},
     {.07, .06, .06}},
    {"nulliparous", "linear-svm", {.40, .40, .42}, {.59, .60, .66}, {.48, .49, .52},
     {.03, .06, .07}},
    {"nulliparous", "poly2-svm", {.49, .38, .38}, {.46, .63, .73}, {.46, .48, .52},
     {.04, .04, .05}},
    {"nulliparous", "poly3-svm", {.38, .15, .18}, {.61, .88, .93}, {.48, .36, .40},
     {.05, .05, .06}},
    {"nulliparous", "rbf-svm", {.41, .34, .42}, {.64, .64, .68}, {.50, .46, .53},
     {.05, .06, .08}},
    {"nulliparous", "random-forest", {.12, .09, .03}, {.92, .93, .98}, {.31, .25, .14},
     {.09, .14, .10}},
    {"nulliparous", "creasy-7", {.02, .13, .13}, {.87, .88, .92}, {.06, .34, .35},
     {.13, .05, .05}},
    {"nulliparous", "creasy-13", {kNA, .10, .14}, {kNA, .88, .90}, {kNA, .22, .27},
     {kNA, .21, .25}},
};

Verdict criterion1() {
  Verdict v;
  int checked = 0;
  for (const PublishedRow& row : kPublished) {
    for (int t = 0; t < 3; ++t) {
      if (row.g[t] == kNA) continue;
      ++checked;
      double exact = std::sqrt(row.sens[t] * row.spec[t]);
      double slack = std::max(0.05, row.sd[t]);
      double diff = std::abs(exact - row.g[t]);
      if (diff > slack + 1e-12) {
        char buf[160];
        std::snprintf(buf, sizeof buf,
                      "%s/%s tick %d: sqrt(%.2f*%.2f)=%.4f vs %.2f (diff %.4f > slack %.2f)",
                      row.variant, row.algorithm, t, row.sens[t], row.spec[t], exact, row.g[t],
                      diff, slack);
        v.fail(buf);
      }
    }
  }
  if (v.pass) v.detail = std::to_string(checked) + " table cells within slack";
  return v;
}

// ---------------------------------------------------------------------------
// criterion 2: trained dual objective vs a brute-force QP oracle
// ---------------------------------------------------------------------------

// Matches full-matrix rows back to support rows to recover every alpha_i.
std::vector<double> recover_alpha(const SvmModel& model, const double* x, std::size_t n,
                                  std::size_t d, const int* y) {
  std::vector<double> alpha(n, 0.0);
  for (std::size_t s = 0; s < model.n_support(); ++s) {
    for (std::size_t i = 0; i < n; ++i) {
      if (alpha[i] != 0.0) continue;
      bool same = true;
      for (std::size_t j = 0; j < d; ++j)
        if (model.support[s * d + j] != x[i * d + j]) { same = false; break; }
      if (same && (model.alpha_y[s] > 0) == (y[i] > 0)) {
        alpha[i] = std::abs(model.alpha_y[s]);
        break;
      }
    }
  }
  return alpha;
}

double max_kkt_violation(const SvmModel& model, const double* x, std::size_t n, std::size_t d,
                         const int* y) {
  std::vector<double> alpha = recover_alpha(model, x, n, d, y);
  std::vector<double> f = svm_decision(model, x, n, d);
  double worst = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double cap = y[i] > 0 ? model.c_pos : model.c_neg;
    double margin = y[i] * f[i];
    double viol = 0.0;
    if (alpha[i] <= 1e-10) {
      viol = std::max(0.0, 1.0 - margin);
    } else if (alpha[i] >= cap - 1e-10) {
      viol = std::max(0.0, margin - 1.0);
    } else {
      viol = std::abs(margin - 1.0);
    }
    worst = std::max(worst, viol);
  }
  return worst;
}

Verdict criterion2() {
  Verdict v;
  const KernelSpec kernels[4] = {
      {KernelSpec::Kind::Linear, 2, 1.0, 1.0},
      {KernelSpec::Kind::Poly, 2, 0.7, 1.0},
      {KernelSpec::Kind::Poly, 3, 0.4, 1.0},
      {KernelSpec::Kind::Rbf, 2, 0.9, 1.0},
  };
  int instances = 0;
  double worst_obj = 0.0, worst_kkt = 0.0;
  for (int rep = 0; rep < 6; ++rep) {
    for (int kk = 0; kk < 4; ++kk) {
      ++instances;
      Rng rng(mix_seed(202, rep, kk));
      std::size_t n = 8 + rng.below(5);           // 8..12
      std::size_t d = 1 + rng.below(3);           // 1..3
      std::size_t n_pos = 2 + rng.below(n / 2 - 1);
      std::vector<double> x(n * d);
      for (double& e : x) e = rng.uniform(-1.5, 1.5);
      std::vector<int> y(n, -1);
      for (std::size_t i = 0; i < n_pos; ++i) y[i] = +1;

      SvmConfig cfg;
      cfg.c = 0.5 + rng.uniform() * 4.0;
      cfg.tol = 1e-6;
      cfg.max_iters = 2000000;
      SvmModel model = train_svm(x.data(), n, d, y.data(), kernels[kk], cfg);
      if (!model.converged) {
        v.fail("instance " + std::to_string(instances) + " did not converge");
        continue;
      }
      auto [c_pos, c_neg] = class_costs(n_pos, n - n_pos, cfg.c);
      std::vector<double> K = gram(kernels[kk], x.data(), n, x.data(), n, d);
      auto orc = oracle::solve_svm_dual(K, y, c_pos, c_neg);
      double obj_err = std::abs(model.dual_objective - orc.objective) /
                       std::max(1.0, std::abs(orc.objective));
      double kkt = max_kkt_violation(model, x.data(), n, d, y.data());
      worst_obj = std::max(worst_obj, obj_err);
      worst_kkt = std::max(worst_kkt, kkt);
      if (obj_err > 1e-6)
        v.fail("instance " + std::to_string(instances) + ": objective error " +
               std::to_string(obj_err));
      if (kkt > 1e-4)
        v.fail("instance " + std::to_string(instances) + ": KKT violation " +
               std::to_string(kkt));
    }
  }
  if (v.pass) {
    char buf[120];
    std::snprintf(buf, sizeof buf, "%d instances, worst objective err %.2e, worst KKT %.2e",
                  instances, worst_obj, worst_kkt);
    v.detail = buf;
  }
  return v;
}

// ---------------------------------------------------------------------------
// criterion 3: duplicating positives k times == multiplying their cost by k
// (training rebalances costs internally, so the duplicated problem solves the
// k-fold-cost problem exactly)
// ---------------------------------------------------------------------------

Verdict criterion3() {
  Verdict v;
  Rng rng(303);
  const std::size_t n_pos = 4, n_neg = 8, d = 2;
  std::vector<double> x((n_pos + n_neg) * d);
  std::vector<int> y(n_pos + n_neg);
  for (std::size_t i = 0; i < n_pos; ++i) {
    x[i * d] = rng.uniform(-1.0, 0.2);
    x[i * d + 1] = rng.uniform(-1.0, 0.2);
    y[i] = +1;
  }
  for (std::size_t i = n_pos; i < n_pos + n_neg; ++i) {
    x[i * d] = rng.uniform(-0.2, 1.0);
    x[i * d + 1] = rng.uniform(-0.2, 1.0);
    y[i] = -1;
  }

  KernelSpec kernel;
  kernel.kind = KernelSpec::Kind::Rbf;
  kernel.gamma = 0.8;
  SvmConfig cfg;
  cfg.c = 2.0;
  cfg.tol = 1e-8;
  cfg.max_iters = 2000000;
  SvmModel base = train_svm(x.data(), n_pos + n_neg, d, y.data(), kernel, cfg);

  std::vector<double> grid;
  for (int gi = 0; gi < 9; ++gi)
    for (int gj = 0; gj < 9; ++gj) {
      grid.push_back(-1.2 + 0.3 * gi);
      grid.push_back(-1.2 + 0.3 * gj);
    }
  std::vector<double> f_base = svm_decision(base, grid.data(), 81, d);

  double worst = 0.0;
  for (int k : {2, 3, 5}) {
    std::vector<double> xk;
    std::vector<int> yk;
    for (std::size_t i = 0; i < n_pos; ++i)
      for (int c = 0; c < k; ++c) {
        xk.insert(xk.end(), x.begin() + i * d, x.begin() + (i + 1) * d);
        yk.push_back(+1);
      }
    for (std::size_t i = n_pos; i < n_pos + n_neg; ++i) {
      xk.insert(xk.end(), x.begin() + i * d, x.begin() + (i + 1) * d);
      yk.push_back(-1);
    }
    SvmModel dup = train_svm(xk.data(), yk.size(), d, yk.data(), kernel, cfg);
    std::vector<double> f_dup = svm_decision(dup, grid.data(), 81, d);
    for (std::size_t i = 0; i < 81; ++i)
      worst = std::max(worst, std::abs(f_dup[i] - f_base[i]));
  }
  if (worst > 1e-4) {
    v.fail("max decision difference " + std::to_string(worst));
  } else {
    char buf[80];
    std::snprintf(buf, sizeof buf, "k in {2,3,5}, max grid difference %.2e", worst);
    v.detail = buf;
  }
  return v;
}

// ---------------------------------------------------------------------------
// criterion 4: penalized logistic regression checks
// ---------------------------------------------------------------------------

Verdict criterion4() {
  Verdict v;
  // (a) 50 random instances: lambda at or above lambda_max zeroes everything
  for (int rep = 0; rep < 50; ++rep) {
    Rng rng(mix_seed(404, rep));
    std::size_t n = 20 + rng.below(30);
    std::size_t d = 2 + rng.below(5);
    std::vector<double> x(n * d);
    for (double& e : x) e = rng.uniform(-2.0, 2.0);
    std::vector<int> y(n);
    for (std::size_t i = 0; i < n; ++i)
      y[i] = rng.uniform() < 1.0 / (1.0 + std::exp(-x[i * d])) ? +1 : -1;
    bool two_class = false;
    for (std::size_t i = 1; i < n; ++i) two_class |= y[i] != y[0];
    if (!two_class) y[0] = -y[0];

    double alpha = rep % 2 ? 1.0 : 0.5;
    double lmax = lambda_max(x.data(), n, d, y.data(), alpha);
    GlmConfig cfg;
    cfg.alpha = alpha;
    cfg.lambda_path = {lmax * (1.0 + rng.uniform())};
    auto models = fit_glm(x.data(), n, d, y.data(), cfg);
    if (models[0].nonzeros() != 0)
      v.fail("instance " + std::to_string(rep) + ": nonzero fit above lambda_max");
  }

  // (b) lasso objective vs a high-precision proximal-gradient oracle
  double worst_gap = 0.0;
  for (int rep = 0; rep < 5; ++rep) {
    Rng rng(mix_seed(414, rep));
    std::size_t n = 40, d = 5;
    std::vector<double> x(n * d);
    for (double& e : x) e = rng.uniform(-2.0, 2.0);
    std::vector<int> y(n);
    for (std::size_t i = 0; i < n; ++i)
      y[i] = rng.uniform() < 1.0 / (1.0 + std::exp(-1.2 * x[i * d])) ? +1 : -1;

    double lambda = 0.3 * lambda_max(x.data(), n, d, y.data(), 1.0);
    GlmConfig cfg;
    cfg.alpha = 1.0;
    cfg.lambda_path = {lambda};
    cfg.tol = 1e-10;
    GlmModel model = fit_glm(x.data(), n, d, y.data(), cfg)[0];
    double lib_obj = glm_objective(x.data(), n, d, y.data(), model);

    auto s = oracle::standardize(x, n, d);
    auto fit = oracle::ista_logistic(s.xs, n, d, y, lambda, 1.0);
    double orc_obj = oracle::l1_objective(s.xs, n, d, y, fit, lambda, 1.0);
    double gap = std::abs(lib_obj - orc_obj);
    worst_gap = std::max(worst_gap, gap);
    if (gap > 1e-4)
      v.fail("oracle instance " + std::to_string(rep) + ": objective gap " +
             std::to_string(gap));
  }

  // (c) exact duplicate features share their coefficient under alpha = 0.5
  {
    Rng rng(424);
    std::size_t n = 60;
    std::vector<double> x(n * 3);
    std::vector<int> y(n);
    for (std::size_t i = 0; i < n; ++i) {
      double a = rng.uniform(-2.0, 2.0), b = rng.uniform(-2.0, 2.0);
      x[i * 3] = a;
      x[i * 3 + 1] = b;
      x[i * 3 + 2] = a;
      y[i] = rng.uniform() < 1.0 / (1.0 + std::exp(-1.5 * a)) ? +1 : -1;
    }
    GlmConfig cfg;
    cfg.alpha = 0.5;
    cfg.lambda_path = {0.1 * lambda_max(x.data(), n, 3, y.data(), 0.5)};
    cfg.tol = 1e-12;
    cfg.max_iters = 5000;
    GlmModel model = fit_glm(x.data(), n, 3, y.data(), cfg)[0];
    double diff = std::abs(model.beta[0] - model.beta[2]);
    if (model.beta[0] == 0.0 || diff > 1e-6)
      v.fail("duplicate-feature coefficients differ by " + std::to_string(diff));
  }

  if (v.pass) {
    char buf[100];
    std::snprintf(buf, sizeof buf,
                  "50 null fits, 5 oracle fits (worst gap %.2e), duplicates tied", worst_gap);
    v.detail = buf;
  }
  return v;
}

// ---------------------------------------------------------------------------
// criterion 5: adaptive oversampling invariants
// ---------------------------------------------------------------------------

bool on_some_segment(const double* p, const std::vector<const double*>& minority,
                     std::size_t d) {
  for (std::size_t a = 0; a < minority.size(); ++a) {
    for (std::size_t b = 0; b < minority.size(); ++b) {
      if (a == b) continue;
      // solve p = m_a + t (m_b - m_a) on the first differing axis, verify all
      double t = -1.0;
      bool degenerate = true;
      for (std::size_t j = 0; j < d; ++j) {
        double den = minority[b][j] - minority[a][j];
        if (std::abs(den) > 1e-12) {
          t = (p[j] - minority[a][j]) / den;
          degenerate = false;
          break;
        }
      }
      if (degenerate) t = 0.0;
      if (t < -1e-9 || t > 1.0 + 1e-9) continue;
      bool all = true;
      for (std::size_t j = 0; j < d; ++j) {
        double expect = minority[a][j] + t * (minority[b][j] - minority[a][j]);
        if (std::abs(expect - p[j]) > 1e-9) { all = false; break; }
      }
      if (all) return true;
    }
  }
  return false;
}

Verdict criterion5() {
  Verdict v;
  Rng rng(505);
  const std::size_t n_min = 10, n_maj = 30, d = 3;
  std::vector<double> x((n_min + n_maj) * d);
  std::vector<int> y(n_min + n_maj);
  for (std::size_t i = 0; i < n_min; ++i) {
    for (std::size_t j = 0; j < d; ++j) x[i * d + j] = rng.uniform(0.0, 2.0);
    y[i] = +1;
  }
  for (std::size_t i = n_min; i < n_min + n_maj; ++i) {
    for (std::size_t j = 0; j < d; ++j) x[i * d + j] = rng.uniform(1.0, 4.0);
    y[i] = -1;
  }

  AdasynConfig cfg;
  cfg.k = 5;
  cfg.beta = 1.0;
  cfg.seed = 9;
  AdasynResult r = adasyn(x.data(), n_min + n_maj, d, y.data(), cfg);

  std::size_t pos = 0, neg = 0;
  for (std::size_t i = 0; i < r.n_rows; ++i) (r.y[i] > 0 ? pos : neg)++;
  if (pos != neg)
    v.fail("beta=1 left classes at " + std::to_string(pos) + "/" + std::to_string(neg));

  std::vector<const double*> minority;
  for (std::size_t i = 0; i < n_min; ++i) minority.push_back(&x[i * d]);
  std::size_t off_segment = 0;
  for (std::size_t i = n_min + n_maj; i < r.n_rows; ++i)
    if (!on_some_segment(&r.x[i * d], minority, d)) ++off_segment;
  if (off_segment > 0)
    v.fail(std::to_string(off_segment) + " synthetics off minority segments");

  // balanced input comes back unchanged
  std::vector<double> xb(x.begin(), x.begin() + 2 * n_min * d);
  std::vector<int> yb(n_min, +1);
  yb.resize(2 * n_min, -1);
  AdasynResult rb = adasyn(xb.data(), 2 * n_min, d, yb.data(), cfg);
  if (rb.n_synthetic != 0 || rb.n_rows != 2 * n_min || rb.x != xb)
    v.fail("balanced input was modified");

  if (v.pass)
    v.detail = std::to_string(r.n_synthetic) + " synthetics, all on segments, balance exact";
  return v;
}

// ---------------------------------------------------------------------------
// criterion 6: rule-based scorer fixtures and monotonicity
// ---------------------------------------------------------------------------

Verdict criterion6() {
  Verdict v;
  FeatureRegistry registry = default_schema();
  RpdTable table = default_factor_table(registry);

  auto set_cell = [&](Patient& p, const char* name, const char* value) {
    p.cells[*registry.find(name)] = value;
  };

  // worked fixture: profound deprivation (3) + hypertension (2); the in-utero
  // exposure factor has no mapped feature and is discounted, contributing 0
  Patient p;
  p.cells.assign(registry.size(), "");
  set_cell(p, "BPPHONE", "no");
  set_cell(p, "BPCAR", "no");
  set_cell(p, "BPINCOME", "1");
  set_cell(p, "BPWORK", "no");
  set_cell(p, "SCHOOLYR", "10");
  set_cell(p, "BPHYPER", "yes");
  int score = score_patient(p, Tick::T3, table, registry).score;
  if (score != 5) v.fail("worked fixture scored " + std::to_string(score) + ", expected 5");

  if (classify_original(5) != RiskBand::Low) v.fail("band: 5 should be low");
  if (classify_original(6) != RiskBand::Medium) v.fail("band: 6 should be medium");
  if (classify_original(10) != RiskBand::High) v.fail("band: 10 should be high");
  if (classify_cutoff(5, 7) != RiskBand::Low) v.fail("cutoff 7: 5 should be low");
  if (classify_cutoff(7, 7) != RiskBand::High) v.fail("cutoff 7: 7 should be high");
  if (classify_cutoff(12, 13) != RiskBand::Low) v.fail("cutoff 13: 12 should be low");
  if (classify_cutoff(13, 13) != RiskBand::High) v.fail("cutoff 13: 13 should be high");

  // 1000 randomized perturbations: blanking any one cell never raises the
  // score (comparisons on MISSING are false), and later visits never lower it
  SynthConfig scfg;
  scfg.n_patients = 100;
  scfg.seed = 606;
  Cohort cohort = generate_cohort(scfg, registry);
  Rng rng(616);
  int perturbations = 0;
  while (perturbations < 1000 && v.pass) {
    const Patient& base = cohort.patients[rng.below(cohort.patients.size())];
    int s0 = score_patient(base, Tick::T0, table, registry).score;
    int s1 = score_patient(base, Tick::T1, table, registry).score;
    int s3 = score_patient(base, Tick::T3, table, registry).score;
    if (s0 < 0 || s0 > s1 || s1 > s3) {
      v.fail("tick monotonicity broken at perturbation " + std::to_string(perturbations));
      break;
    }
    Patient blanked = base;
    std::size_t cell = rng.below(registry.size());
    blanked.cells[cell].clear();
    int s3b = score_patient(blanked, Tick::T3, table, registry).score;
    if (s3b > s3) {
      v.fail("blanking cell " + registry.at(cell).name + " raised the score");
      break;
    }
    ++perturbations;
  }
  if (v.pass) v.detail = "fixtures exact, " + std::to_string(perturbations) +
                         " perturbations monotone";
  return v;
}

// ---------------------------------------------------------------------------
// criterion 7: evaluation-protocol fidelity and leakage audit
// ---------------------------------------------------------------------------

Verdict criterion7() {
  Verdict v;
  // split arithmetic at the published class sizes
  std::vector<int> labels;
  labels.insert(labels.end(), 434, +1);
  labels.insert(labels.end(), 2568, -1);
  SplitPlan plan;
  auto [train, test] = stratified_split(labels, plan, 0);
  std::size_t pos = 0, neg = 0;
  for (std::size_t i : test) (labels[i] > 0 ? pos : neg)++;
  if (pos != 87 || neg != 514)
    v.fail("test split " + std::to_string(pos) + "/" + std::to_string(neg) +
           ", expected 87/514");

  // per-class fold balance
  auto folds = stratified_kfold(labels, 5, 3);
  for (int cls : {+1, -1}) {
    std::vector<int> per(5, 0);
    for (std::size_t i = 0; i < labels.size(); ++i)
      if (labels[i] == cls) ++per[folds[i]];
    int lo = *std::min_element(per.begin(), per.end());
    int hi = *std::max_element(per.begin(), per.end());
    if (hi - lo > 1) v.fail("fold sizes differ by " + std::to_string(hi - lo));
  }

  // leakage audit: rows touched while fitting or selecting must never include
  // rows later used for evaluation in the same run
  FeatureRegistry registry = default_schema();
  SynthConfig scfg;
  scfg.n_patients = 100;
  scfg.seed = 707;
  Cohort cohort = generate_cohort(scfg, registry);
  RpdTable table = default_factor_table(registry);

  ExperimentConfig cfg;
  cfg.ticks = {Tick::T0};
  cfg.variants = {Variant::All};
  cfg.algorithms = {Algorithm::Lasso, Algorithm::Creasy7};
  cfg.plan.repeat_count = 2;
  cfg.plan.fold_count = 3;
  cfg.c_grid = {1.0};
  cfg.gamma_scale = {1.0};

  std::map<std::pair<int, int>, std::set<std::size_t>> fit_rows, eval_rows;
  AccessObserver observer = [&](Variant, Tick, Algorithm a, const AccessEvent& e) {
    auto key = std::make_pair(static_cast<int>(a), e.run);
    auto& dst = e.phase == AccessPhase::Evaluate ? eval_rows[key] : fit_rows[key];
    dst.insert(e.rows.begin(), e.rows.end());
  };
  auto reports = run_experiments(cfg, cohort, registry, table, observer);
  for (const auto& r : reports)
    if (r.skipped) v.fail("audit cell skipped: " + r.skip_reason);
  if (eval_rows.empty()) v.fail("no evaluation accesses observed");
  std::size_t leaks = 0;
  for (const auto& [key, eval] : eval_rows) {
    const auto& fit = fit_rows[key];
    for (std::size_t row : eval)
      if (fit.count(row)) ++leaks;
  }
  if (leaks > 0) v.fail(std::to_string(leaks) + " test-row reads during fit/selection");

  if (v.pass) v.detail = "87/514 split, folds balanced, zero test-row reads while fitting";
  return v;
}

// ---------------------------------------------------------------------------
// criterion 8: end-to-end scale, runtime, and qualitative ordering
// ---------------------------------------------------------------------------

Verdict criterion8() {
  Verdict v;
  FeatureRegistry registry = default_schema();
  RpdTable table = default_factor_table(registry);

  auto cell_gmean = [](const std::vector<ExperimentReport>& reports, Algorithm a) {
    for (const auto& r : reports)
      if (r.algorithm == a && !r.skipped) return r.mean.g_mean;
    return -1.0;
  };

  // full 8-algorithm pass at one tick on the default-size cohort, timed
  ExperimentConfig cfg;
  cfg.ticks = {Tick::T0};
  cfg.variants = {Variant::All};
  cfg.seed = 11;
  cfg.plan.seed = cfg.seed;
  cfg.adasyn.seed = cfg.seed;
  cfg.synth.seed = cfg.seed;

  auto t0 = std::chrono::steady_clock::now();
  Cohort cohort = generate_cohort(cfg.synth, registry);
  inject_missingness(cohort, registry, cfg.synth.missing_rate, mix_seed(cfg.synth.seed, 0x315A));
  auto reports = run_experiments(cfg, cohort, registry, table);
  double elapsed =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (elapsed >= 600.0)
    v.fail("full pass took " + std::to_string(elapsed) + "s (budget 600s)");
  if (reports.size() != 8) v.fail("expected 8 reports, got " + std::to_string(reports.size()));
  for (const auto& r : reports)
    if (r.skipped) v.fail(std::string(algorithm_name(r.algorithm)) + " skipped");

  // qualitative ordering across 5 cohort seeds with an amplified prior-PTB
  // signal: the linear SVM's mean test g-mean clears the no-signal level by
  // 0.05 and beats the point-table rule. The comparison runs at the second
  // tick, where the learned model also sees the cervical measurements that
  // the point table has no factor for.
  double svm_sum = 0.0;
  double creasy_sum = 0.0;
  for (std::uint64_t seed : {11, 12, 13, 14, 15}) {
    ExperimentConfig small = cfg;
    small.ticks = {Tick::T1};
    small.seed = seed;
    small.plan.seed = seed;
    small.adasyn.seed = seed;
    small.synth.seed = seed;
    small.synth.effect_sizes["prior_ptb"] = 15.0;
    small.algorithms = {Algorithm::SvmLinear, Algorithm::Creasy7};
    Cohort c = generate_cohort(small.synth, registry);
    inject_missingness(c, registry, small.synth.missing_rate, mix_seed(seed, 0x315A));
    auto rep = run_experiments(small, c, registry, table);
    svm_sum += cell_gmean(rep, Algorithm::SvmLinear);
    creasy_sum += cell_gmean(rep, Algorithm::Creasy7);
  }
  double svm_mean = svm_sum / 5.0;
  double creasy_mean = creasy_sum / 5.0;
  if (svm_mean < 0.55)
    v.fail("linear-svm mean g-mean " + std::to_string(svm_mean) + " < 0.55");
  if (svm_mean <= creasy_mean)
    v.fail("linear-svm " + std::to_string(svm_mean) + " did not beat the point table " +
           std::to_string(creasy_mean));

  if (v.pass) {
    char buf[140];
    std::snprintf(buf, sizeof buf,
                  "8 algorithms in %.0fs; linear-svm %.3f vs point table %.3f over 5 seeds",
                  elapsed, svm_mean, creasy_mean);
    v.detail = buf;
  }
  return v;
}

// ---------------------------------------------------------------------------
// criterion 9: byte-identical reruns
// ---------------------------------------------------------------------------

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

Verdict criterion9() {
  Verdict v;
  auto dir = std::filesystem::temp_directory_path() / "ptb_acceptance_rerun";
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);

  std::string text =
      "[experiment]\n"
      "ticks = T0, T1\n"
      "variants = all, nulliparous_only\n"
      "algorithms = lasso, creasy7\n"
      "runs = 2\n"
      "seed = 9\n"
      "[synth]\n"
      "n_patients = 200\n"
      "[output]\n"
      "dir = " + dir.string() + "\n"
      "formats = csv, jsonl, table\n";
  ExperimentConfig cfg = parse_experiment_config(text);

  const char* files[] = {"report.csv", "report.jsonl", "report.txt", "manifest.json"};
  run_batch(cfg, text);
  std::map<std::string, std::string> first;
  for (const char* f : files) first[f] = slurp(dir / f);

  run_batch(cfg, text);
  for (const char* f : files) {
    if (first[f].empty()) v.fail(std::string(f) + " missing or empty");
    if (slurp(dir / f) != first[f]) v.fail(std::string(f) + " differs across reruns");
  }
  std::filesystem::remove_all(dir);
  if (v.pass) v.detail = "4 report files byte-identical across reruns";
  return v;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc != 2) {
    std::fprintf(stderr, "usage: %s <criterion 1-9>\n", argv[0]);
    return 2;
  }
  int which = std::atoi(argv[1]);
  Verdict v;
  switch (which) {
    case 1: v = criterion1(); break;
    case 2: v = criterion2(); break;
    case 3: v = criterion3(); break;
    case 4: v = criterion4(); break;
    case 5: v = criterion5(); break;
    case 6: v = criterion6(); break;
    case 7: v = criterion7(); break;
    case 8: v = criterion8(); break;
    case 9: v = criterion9(); break;
    default:
      std::fprintf(stderr, "usage: %s <criterion 1-9>\n", argv[0]);
      return 2;
  }
  std::printf("criterion %d: %s (%s)\n", which, v.pass ? "PASS" : "FAIL", v.detail.c_str());
  return v.pass ? 0 : 1;
}
