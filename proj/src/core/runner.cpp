#include "core/runner.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

#include "json.hpp"

#include "core/error.hpp"
#include "core/eval.hpp"
#include "core/glm.hpp"
#include "core/preprocess.hpp"
#include "core/rng.hpp"
#include "core/svm.hpp"

namespace ptb {

void parallel_for(std::size_t n_tasks, int jobs, const std::function<void(std::size_t)>& fn) {
  if (jobs < 1) fail_invalid("parallel_for: jobs must be >= 1");
  std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(jobs), n_tasks);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n_tasks; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  std::exception_ptr first_error;
  std::mutex err_mu;
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (;;) {
        std::size_t i = next.fetch_add(1);
        if (i >= n_tasks) return;
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(err_mu);
          if (!first_error) first_error = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

namespace {

std::vector<double> gather(const EncodedMatrix& m, const std::vector<std::size_t>& rows) {
  std::vector<double> out(rows.size() * m.n_cols);
  for (std::size_t i = 0; i < rows.size(); ++i)
    std::copy_n(m.values.data() + rows[i] * m.n_cols, m.n_cols, out.data() + i * m.n_cols);
  return out;
}

std::vector<int> gather_labels(const std::vector<int>& labels,
                               const std::vector<std::size_t>& rows) {
  std::vector<int> out(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) out[i] = labels[rows[i]];
  return out;
}

ConfusionMatrix confusion(const std::vector<int>& truth, const std::vector<int>& pred) {
  ConfusionMatrix cm;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    if (truth[i] == +1)
      (pred[i] == +1 ? cm.tp : cm.fn)++;
    else
      (pred[i] == -1 ? cm.tn : cm.fp)++;
  }
  return cm;
}

struct TrainSet {
  std::vector<double> x;
  std::vector<int> y;
  std::size_t n = 0;
};

TrainSet maybe_resample(std::vector<double> x, std::vector<int> y, std::size_t d,
                        bool enabled, const AdasynConfig& base, std::uint64_t seed) {
  TrainSet out;
  if (!enabled) {
    out.n = y.size();
    out.x = std::move(x);
    out.y = std::move(y);
    return out;
  }
  AdasynConfig cfg = base;
  cfg.seed = seed;
  AdasynResult r = adasyn(x.data(), y.size(), d, y.data(), cfg);
  out.n = r.n_rows;
  out.x = std::move(r.x);
  out.y = std::move(r.y);
  return out;
}

struct SvmGridPoint {
  KernelSpec kernel;
  double c = 1.0;
};

std::vector<SvmGridPoint> svm_grid(Algorithm a, const ExperimentConfig& cfg, std::size_t d) {
  std::vector<SvmGridPoint> grid;
  auto push_kernels = [&](KernelSpec::Kind kind, int degree) {
    for (double gs : cfg.gamma_scale) {
      KernelSpec k;
      k.kind = kind;
      k.degree = degree;
      k.gamma = gs / static_cast<double>(d);
      for (double c : cfg.c_grid) grid.push_back({k, c});
    }
  };
  switch (a) {
    case Algorithm::SvmLinear: {
      KernelSpec k;
      k.kind = KernelSpec::Kind::Linear;
      for (double c : cfg.c_grid) grid.push_back({k, c});
      break;
    }
    case Algorithm::SvmPoly2: push_kernels(KernelSpec::Kind::Poly, 2); break;
    case Algorithm::SvmPoly3: push_kernels(KernelSpec::Kind::Poly, 3); break;
    case Algorithm::SvmRbf: push_kernels(KernelSpec::Kind::Rbf, 2); break;
    default: fail_invalid("svm_grid: not an SVM algorithm");
  }
  return grid;
}

std::string fmt_param(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

std::vector<double> glm_path(double lmax, int length, double min_ratio) {
  std::vector<double> path(static_cast<std::size_t>(length));
  for (int i = 0; i < length; ++i)
    path[static_cast<std::size_t>(i)] =
        lmax * std::pow(min_ratio, static_cast<double>(i) / static_cast<double>(length - 1));
  return path;
}

struct CellContext {
  const ExperimentConfig* cfg = nullptr;
  const FeatureRegistry* registry = nullptr;
  const RpdTable* table = nullptr;
  const LabeledRaw* labeled = nullptr;
  const EncodedMatrix* base = nullptr;
  Variant variant = Variant::All;
  Tick tick = Tick::T0;
  Algorithm algorithm = Algorithm::Lasso;
  const AccessObserver* observer = nullptr;
};

void notify(const CellContext& ctx, AccessPhase phase, int run,
            const std::vector<std::size_t>& rows) {
  if (ctx.observer && *ctx.observer)
    (*ctx.observer)(ctx.variant, ctx.tick, ctx.algorithm, AccessEvent{phase, run, rows});
}

RunOutcome run_creasy(const CellContext& ctx, int run, const std::vector<std::size_t>& test) {
  int cutoff = ctx.algorithm == Algorithm::Creasy7 ? 7 : 13;
  const LabeledRaw& lab = *ctx.labeled;
  std::vector<int> truth = gather_labels(lab.labels, test);
  std::vector<int> pred(test.size());
  for (std::size_t i = 0; i < test.size(); ++i) {
    RpdAssessment a = score_patient(lab.view.patient(test[i]), ctx.tick, *ctx.table,
                                    *ctx.registry);
    pred[i] = classify_cutoff(a.score, cutoff) == RiskBand::High ? +1 : -1;
  }
  notify(ctx, AccessPhase::Evaluate, run, test);
  RunOutcome out;
  out.metrics = metrics(confusion(truth, pred));
  out.params = "cutoff=" + std::to_string(cutoff);
  return out;
}

RunOutcome run_svm_cell(const CellContext& ctx, int run, const EncodedMatrix& m,
                        const std::vector<std::size_t>& train,
                        const std::vector<std::size_t>& test) {
  const ExperimentConfig& cfg = *ctx.cfg;
  std::size_t d = m.n_cols;
  std::vector<double> xtr = gather(m, train);
  std::vector<int> ytr = gather_labels(ctx.labeled->labels, train);

  auto grid = svm_grid(ctx.algorithm, cfg, d);
  int fold_count = cfg.plan.fold_count;
  std::vector<int> folds = stratified_kfold(ytr, fold_count,
                                            mix_seed(cfg.seed, 0xCF1D, static_cast<std::uint64_t>(run)));

  // per-fold train/validation sets, shared across grid points
  std::vector<TrainSet> fold_train(static_cast<std::size_t>(fold_count));
  std::vector<std::vector<double>> fold_val_x(static_cast<std::size_t>(fold_count));
  std::vector<std::vector<int>> fold_val_y(static_cast<std::size_t>(fold_count));
  for (int f = 0; f < fold_count; ++f) {
    std::vector<double> fx;
    std::vector<int> fy;
    for (std::size_t i = 0; i < ytr.size(); ++i) {
      if (folds[i] == f) {
        fold_val_x[f].insert(fold_val_x[f].end(), xtr.begin() + static_cast<long>(i * d),
                             xtr.begin() + static_cast<long>((i + 1) * d));
        fold_val_y[f].push_back(ytr[i]);
      } else {
        fx.insert(fx.end(), xtr.begin() + static_cast<long>(i * d),
                  xtr.begin() + static_cast<long>((i + 1) * d));
        fy.push_back(ytr[i]);
      }
    }
    fold_train[f] = maybe_resample(std::move(fx), std::move(fy), d, cfg.resample_svm,
                                   cfg.adasyn,
                                   mix_seed(cfg.seed, 0xADA0, static_cast<std::uint64_t>(run),
                                            static_cast<std::uint64_t>(f)));
  }

  notify(ctx, AccessPhase::CvSelect, run, train);
  std::size_t n_tasks = grid.size() * static_cast<std::size_t>(fold_count);
  std::vector<double> fold_score(n_tasks, 0.0);
  parallel_for(n_tasks, cfg.jobs, [&](std::size_t t) {
    std::size_t g = t / static_cast<std::size_t>(fold_count);
    std::size_t f = t % static_cast<std::size_t>(fold_count);
    const TrainSet& ts = fold_train[f];
    SvmConfig sc;
    sc.c = grid[g].c;
    SvmModel model = train_svm(ts.x.data(), ts.n, d, ts.y.data(), grid[g].kernel, sc);
    auto pred = svm_predict(model, fold_val_x[f].data(), fold_val_y[f].size(), d);
    fold_score[t] = metrics(confusion(fold_val_y[f], pred)).g_mean;
  });

  std::vector<double> mean_score(grid.size(), 0.0);
  for (std::size_t g = 0; g < grid.size(); ++g) {
    for (int f = 0; f < fold_count; ++f)
      mean_score[g] += fold_score[g * static_cast<std::size_t>(fold_count) +
                                  static_cast<std::size_t>(f)];
    mean_score[g] /= static_cast<double>(fold_count);
  }
  std::size_t best = pick_best_index(mean_score);

  notify(ctx, AccessPhase::FinalFit, run, train);
  TrainSet full = maybe_resample(std::move(xtr), std::move(ytr), d, cfg.resample_svm,
                                 cfg.adasyn,
                                 mix_seed(cfg.seed, 0xADA0, static_cast<std::uint64_t>(run),
                                          0xFFFF));
  SvmConfig sc;
  sc.c = grid[best].c;
  SvmModel model = train_svm(full.x.data(), full.n, d, full.y.data(), grid[best].kernel, sc);

  std::vector<double> xte = gather(m, test);
  std::vector<int> yte = gather_labels(ctx.labeled->labels, test);
  auto pred = svm_predict(model, xte.data(), yte.size(), d);
  notify(ctx, AccessPhase::Evaluate, run, test);

  RunOutcome out;
  out.metrics = metrics(confusion(yte, pred));
  out.params = "C=" + fmt_param(grid[best].c);
  if (grid[best].kernel.kind != KernelSpec::Kind::Linear)
    out.params += ",gamma=" + fmt_param(grid[best].kernel.gamma);
  return out;
}

RunOutcome run_glm_cell(const CellContext& ctx, int run, const EncodedMatrix& m,
                        const std::vector<std::size_t>& train,
                        const std::vector<std::size_t>& test) {
  const ExperimentConfig& cfg = *ctx.cfg;
  std::size_t d = m.n_cols;
  std::vector<double> xtr = gather(m, train);
  std::vector<int> ytr = gather_labels(ctx.labeled->labels, train);
  double alpha = ctx.algorithm == Algorithm::Lasso ? 1.0 : cfg.elastic_net_alpha;

  GlmConfig base_cfg;
  base_cfg.alpha = alpha;
  double lmax = lambda_max(xtr.data(), ytr.size(), d, ytr.data(), alpha);
  std::vector<double> path = glm_path(lmax, base_cfg.path_length, base_cfg.lambda_min_ratio);
  base_cfg.lambda_path = path;

  int fold_count = cfg.plan.fold_count;
  std::vector<int> folds = stratified_kfold(ytr, fold_count,
                                            mix_seed(cfg.seed, 0xCF1D, static_cast<std::uint64_t>(run)));
  notify(ctx, AccessPhase::CvSelect, run, train);

  std::vector<std::vector<double>> scores(static_cast<std::size_t>(fold_count));
  parallel_for(static_cast<std::size_t>(fold_count), cfg.jobs, [&](std::size_t f) {
    std::vector<double> fx, vx;
    std::vector<int> fy, vy;
    for (std::size_t i = 0; i < ytr.size(); ++i) {
      auto* xs = folds[i] == static_cast<int>(f) ? &vx : &fx;
      auto* ys = folds[i] == static_cast<int>(f) ? &vy : &fy;
      xs->insert(xs->end(), xtr.begin() + static_cast<long>(i * d),
                 xtr.begin() + static_cast<long>((i + 1) * d));
      ys->push_back(ytr[i]);
    }
    TrainSet ts = maybe_resample(std::move(fx), std::move(fy), d, cfg.resample_glm, cfg.adasyn,
                                 mix_seed(cfg.seed, 0xADA0, static_cast<std::uint64_t>(run), f));
    auto models = fit_glm(ts.x.data(), ts.n, d, ts.y.data(), base_cfg);
    scores[f].resize(models.size(), 0.0);
    for (std::size_t l = 0; l < models.size(); ++l) {
      auto pred = glm_predict(models[l], vx.data(), vy.size(), d);
      scores[f][l] = metrics(confusion(vy, pred)).g_mean;
    }
  });

  std::vector<double> mean_score(path.size(), 0.0);
  for (std::size_t l = 0; l < path.size(); ++l) {
    for (int f = 0; f < fold_count; ++f) mean_score[l] += scores[static_cast<std::size_t>(f)][l];
    mean_score[l] /= static_cast<double>(fold_count);
  }
  std::size_t best = pick_best_index(mean_score);

  notify(ctx, AccessPhase::FinalFit, run, train);
  TrainSet full = maybe_resample(std::move(xtr), std::move(ytr), d, cfg.resample_glm,
                                 cfg.adasyn,
                                 mix_seed(cfg.seed, 0xADA0, static_cast<std::uint64_t>(run),
                                          0xFFFF));
  auto models = fit_glm(full.x.data(), full.n, d, full.y.data(), base_cfg);
  const GlmModel& model = models[best];

  std::vector<double> xte = gather(m, test);
  std::vector<int> yte = gather_labels(ctx.labeled->labels, test);
  auto pred = glm_predict(model, xte.data(), yte.size(), d);
  notify(ctx, AccessPhase::Evaluate, run, test);

  RunOutcome out;
  out.metrics = metrics(confusion(yte, pred));
  out.params = "alpha=" + fmt_param(alpha) + ",lambda=" + fmt_param(model.lambda);
  return out;
}

ExperimentReport run_cell(const CellContext& ctx) {
  const ExperimentConfig& cfg = *ctx.cfg;
  ExperimentReport report;
  report.variant = ctx.variant;
  report.tick = ctx.tick;
  report.algorithm = ctx.algorithm;

  for (int r = 0; r < cfg.plan.repeat_count; ++r) {
    try {
      auto [train, test] = stratified_split(ctx.labeled->labels, cfg.plan, r);
      RunOutcome outcome;
      if (ctx.algorithm == Algorithm::Creasy7 || ctx.algorithm == Algorithm::Creasy13) {
        outcome = run_creasy(ctx, r, test);
      } else {
        // preprocessing statistics come from the training rows only
        EncodedMatrix m = drop_sparse(*ctx.base, cfg.sparse_threshold, nullptr, train);
        notify(ctx, AccessPhase::PreprocessFit, r, train);
        ImputerState imputer = fit_imputer(m, train, *ctx.registry);
        impute(imputer, m);
        NormalizerState norm = fit_normalizer(m, train);
        normalize(norm, m);
        if (ctx.algorithm == Algorithm::Lasso || ctx.algorithm == Algorithm::ElasticNet)
          outcome = run_glm_cell(ctx, r, m, train, test);
        else
          outcome = run_svm_cell(ctx, r, m, train, test);
      }
      report.runs.push_back(std::move(outcome));
    } catch (const Error& e) {
      if (e.code() == Error::Code::Degenerate || e.code() == Error::Code::Invalid) {
        report.skipped = true;
        report.skip_reason = "run " + std::to_string(r) + ": " + e.what();
        report.runs.clear();
        return report;
      }
      fail_runtime("run " + std::to_string(r) + ": " + e.what());
    }
  }

  auto agg = [&](auto pick) {
    double mean = 0.0;
    for (const auto& run : report.runs) mean += pick(run.metrics);
    mean /= static_cast<double>(report.runs.size());
    double var = 0.0;
    for (const auto& run : report.runs) {
      double dv = pick(run.metrics) - mean;
      var += dv * dv;
    }
    double sd = report.runs.size() > 1
                    ? std::sqrt(var / static_cast<double>(report.runs.size() - 1))
                    : 0.0;
    return std::pair<double, double>(mean, sd);
  };
  auto [sm, ss] = agg([](const MetricSet& m) { return m.sensitivity; });
  auto [pm, ps] = agg([](const MetricSet& m) { return m.specificity; });
  auto [gm, gs] = agg([](const MetricSet& m) { return m.g_mean; });
  report.mean = {sm, pm, gm, false};
  report.stddev = {ss, ps, gs, false};
  return report;
}

}  // namespace

std::vector<ExperimentReport> run_experiments(const ExperimentConfig& cfg, const Cohort& cohort,
                                              const FeatureRegistry& registry,
                                              const RpdTable& table,
                                              const AccessObserver& observer) {
  cfg.validate();
  std::vector<ExperimentReport> reports;
  for (Variant variant : cfg.variants) {
    for (Tick tick : cfg.ticks) {
      LabeledRaw labeled;
      EncodedMatrix base;
      bool cell_ok = true;
      std::string reason;
      try {
        labeled = derive_labels(slice_by_tick(cohort, registry, tick), variant);
        base = encode(labeled.view, registry);
      } catch (const Error& e) {
        if (e.code() != Error::Code::Degenerate && e.code() != Error::Code::Invalid) throw;
        cell_ok = false;
        reason = e.what();
      }
      for (Algorithm algorithm : cfg.algorithms) {
        if (!cell_ok) {
          ExperimentReport r;
          r.variant = variant;
          r.tick = tick;
          r.algorithm = algorithm;
          r.skipped = true;
          r.skip_reason = reason;
          reports.push_back(std::move(r));
          continue;
        }
        CellContext ctx;
        ctx.cfg = &cfg;
        ctx.registry = &registry;
        ctx.table = &table;
        ctx.labeled = &labeled;
        ctx.base = &base;
        ctx.variant = variant;
        ctx.tick = tick;
        ctx.algorithm = algorithm;
        ctx.observer = &observer;
        reports.push_back(run_cell(ctx));
      }
    }
  }
  return reports;
}

namespace {

std::string fmt2(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string fmt4(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4f", v);
  return buf;
}

}  // namespace

std::string render_csv(const std::vector<ExperimentReport>& reports) {
  std::ostringstream out;
  out << "variant,tick,algorithm,status,sens_mean,sens_std,spec_mean,spec_std,"
         "gmean_mean,gmean_std\n";
  for (const auto& r : reports) {
    out << variant_name(r.variant) << "," << tick_name(r.tick) << ","
        << algorithm_name(r.algorithm) << ",";
    if (r.skipped) {
      out << "skipped,,,,,,\n";
    } else {
      out << "ok," << fmt4(r.mean.sensitivity) << "," << fmt4(r.stddev.sensitivity) << ","
          << fmt4(r.mean.specificity) << "," << fmt4(r.stddev.specificity) << ","
          << fmt4(r.mean.g_mean) << "," << fmt4(r.stddev.g_mean) << "\n";
    }
  }
  return out.str();
}

std::string render_jsonl(const std::vector<ExperimentReport>& reports) {
  std::ostringstream out;
  for (const auto& r : reports) {
    nlohmann::json j;
    j["variant"] = variant_name(r.variant);
    j["tick"] = tick_name(r.tick);
    j["algorithm"] = algorithm_name(r.algorithm);
    j["skipped"] = r.skipped;
    if (r.skipped) {
      j["reason"] = r.skip_reason;
    } else {
      nlohmann::json runs = nlohmann::json::array();
      for (const auto& run : r.runs)
        runs.push_back({{"sensitivity", run.metrics.sensitivity},
                        {"specificity", run.metrics.specificity},
                        {"g_mean", run.metrics.g_mean},
                        {"params", run.params}});
      j["runs"] = runs;
      j["mean"] = {{"sensitivity", r.mean.sensitivity},
                   {"specificity", r.mean.specificity},
                   {"g_mean", r.mean.g_mean}};
      j["std"] = {{"sensitivity", r.stddev.sensitivity},
                  {"specificity", r.stddev.specificity},
                  {"g_mean", r.stddev.g_mean}};
    }
    out << j.dump() << "\n";
  }
  return out.str();
}

std::string render_table(const std::vector<ExperimentReport>& reports,
                         const std::vector<Tick>& ticks) {
  std::ostringstream out;
  out << "Results on synthetic (non-clinical) data\n";

  std::vector<Variant> variants;
  std::vector<Algorithm> algorithms;
  std::map<std::tuple<int, int, int>, const ExperimentReport*> index;
  for (const auto& r : reports) {
    if (std::find(variants.begin(), variants.end(), r.variant) == variants.end())
      variants.push_back(r.variant);
    if (std::find(algorithms.begin(), algorithms.end(), r.algorithm) == algorithms.end())
      algorithms.push_back(r.algorithm);
    index[{static_cast<int>(r.variant), static_cast<int>(r.tick),
           static_cast<int>(r.algorithm)}] = &r;
  }

  auto pad = [](std::string s, std::size_t w) {
    if (s.size() < w) s.append(w - s.size(), ' ');
    return s;
  };

  for (Variant v : variants) {
    out << "\n[" << variant_name(v) << "]\n";
    out << pad("algorithm", 14);
    for (const char* block : {"sens", "spec"})
      for (Tick t : ticks) out << pad(std::string(block) + " " + tick_name(t), 10);
    for (Tick t : ticks) out << pad(std::string("g-mean ") + tick_name(t), 16);
    out << "\n";
    for (Algorithm a : algorithms) {
      out << pad(algorithm_name(a), 14);
      std::string sens, spec, g;
      for (int block = 0; block < 3; ++block) {
        for (Tick t : ticks) {
          auto it = index.find({static_cast<int>(v), static_cast<int>(t), static_cast<int>(a)});
          bool ok = it != index.end() && !it->second->skipped;
          std::size_t w = block == 2 ? 16 : 10;
          if (!ok) {
            out << pad("N/A", w);
          } else if (block == 0) {
            out << pad(fmt2(it->second->mean.sensitivity), w);
          } else if (block == 1) {
            out << pad(fmt2(it->second->mean.specificity), w);
          } else {
            out << pad(fmt2(it->second->mean.g_mean) + " \xC2\xB1 " +
                           fmt2(it->second->stddev.g_mean),
                       w + 1);  // the sign is two bytes, one column
          }
        }
      }
      out << "\n";
    }
  }
  return out.str();
}

void write_file_atomic(const std::string& path, const std::string& content) {
  std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) fail_io("cannot write '" + tmp + "'");
    out << content;
    if (!out) fail_io("failed writing '" + tmp + "'");
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) fail_io("cannot rename '" + tmp + "' to '" + path + "': " + ec.message());
}

std::uint64_t fnv1a_hash(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

std::vector<ExperimentReport> run_batch(const ExperimentConfig& cfg,
                                        const std::string& config_text) {
  cfg.validate();
  FeatureRegistry registry =
      cfg.schema_path.empty() ? default_schema() : load_schema(cfg.schema_path);
  Cohort cohort;
  if (cfg.cohort_path.empty()) {
    cohort = generate_cohort(cfg.synth, registry);
    inject_missingness(cohort, registry, cfg.synth.missing_rate,
                       mix_seed(cfg.synth.seed, 0x315A));
  } else {
    cohort = load_cohort_csv(cfg.cohort_path, registry);
  }
  RpdTable table = cfg.factor_table_path.empty()
                       ? default_factor_table(registry)
                       : load_factor_table(cfg.factor_table_path, registry);

  auto reports = run_experiments(cfg, cohort, registry, table);

  std::filesystem::create_directories(cfg.out_dir);
  auto out_path = [&](const char* name) {
    return (std::filesystem::path(cfg.out_dir) / name).string();
  };
  for (const auto& f : cfg.formats) {
    if (f == "csv") write_file_atomic(out_path("report.csv"), render_csv(reports));
    else if (f == "jsonl") write_file_atomic(out_path("report.jsonl"), render_jsonl(reports));
    else write_file_atomic(out_path("report.txt"), render_table(reports, cfg.ticks));
  }

  char hash[32];
  std::snprintf(hash, sizeof hash, "%016llx",
                static_cast<unsigned long long>(fnv1a_hash(config_text)));
  nlohmann::json manifest;
  manifest["config_hash"] = hash;
  manifest["seed"] = cfg.seed;
  manifest["version"] = ptb_version_string();
  manifest["data"] = cfg.cohort_path.empty() ? "synthetic" : cfg.cohort_path;
  write_file_atomic(out_path("manifest.json"), manifest.dump(2) + "\n");
  return reports;
}

}  // namespace ptb
