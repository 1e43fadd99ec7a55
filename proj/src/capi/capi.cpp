#include "ptb/ptb.h"

#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"

#include "core/adasyn.hpp"
#include "core/cohort.hpp"
#include "core/config.hpp"
#include "core/error.hpp"
#include "core/glm.hpp"
#include "core/metrics.hpp"
#include "core/rng.hpp"
#include "core/rpd.hpp"
#include "core/runner.hpp"
#include "core/schema.hpp"
#include "core/svm.hpp"
#include "core/synth.hpp"

using namespace ptb;

namespace {

thread_local std::string g_last_error;

ptb_status status_of(const Error& e) {
  switch (e.code()) {
    case Error::Code::Invalid: return PTB_E_INVALID;
    case Error::Code::Degenerate: return PTB_E_INVALID;
    case Error::Code::Parse: return PTB_E_PARSE;
    case Error::Code::Io: return PTB_E_IO;
    default: return PTB_E_RUNTIME;
  }
}

template <typename Fn>
ptb_status guarded(Fn&& fn) {
  try {
    fn();
    return PTB_OK;
  } catch (const Error& e) {
    g_last_error = e.what();
    return status_of(e);
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return PTB_E_RUNTIME;
  } catch (...) {
    g_last_error = "unknown failure";
    return PTB_E_RUNTIME;
  }
}

void require(bool cond, const char* msg) {
  if (!cond) fail_invalid(msg);
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) fail_runtime("out of memory");
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

}  // namespace

struct ptb_schema {
  FeatureRegistry registry;
};
struct ptb_cohort {
  Cohort cohort;
};
struct ptb_svm_model {
  SvmModel model;
};
struct ptb_glm_model {
  GlmModel model;
};
struct ptb_rpd_table {
  RpdTable table;
};

extern "C" {

const char* ptb_version(void) { return ptb_version_string(); }

const char* ptb_last_error(void) { return g_last_error.c_str(); }

void ptb_free(void* p) { std::free(p); }

/* ---- schema ---------------------------------------------------------- */

ptb_status ptb_schema_load(const char* path, ptb_schema** out) {
  return guarded([&] {
    require(path && out, "null argument");
    *out = new ptb_schema{load_schema(path)};
  });
}

ptb_status ptb_schema_default(ptb_schema** out) {
  return guarded([&] {
    require(out != nullptr, "null argument");
    *out = new ptb_schema{default_schema()};
  });
}

void ptb_schema_free(ptb_schema* schema) { delete schema; }

ptb_status ptb_schema_feature_count(const ptb_schema* schema, const char* tick, size_t* out) {
  return guarded([&] {
    require(schema && tick && out, "null argument");
    *out = schema->registry.feature_count(parse_tick(tick));
  });
}

/* ---- cohort ---------------------------------------------------------- */

ptb_status ptb_cohort_load_csv(const char* path, const ptb_schema* schema, ptb_cohort** out) {
  return guarded([&] {
    require(path && schema && out, "null argument");
    *out = new ptb_cohort{load_cohort_csv(path, schema->registry)};
  });
}

ptb_status ptb_cohort_write_csv(const ptb_cohort* cohort, const ptb_schema* schema,
                                const char* path) {
  return guarded([&] {
    require(cohort && schema && path, "null argument");
    write_cohort_csv(cohort->cohort, schema->registry, path);
  });
}

void ptb_cohort_free(ptb_cohort* cohort) { delete cohort; }

size_t ptb_cohort_size(const ptb_cohort* cohort) {
  return cohort ? cohort->cohort.patients.size() : 0;
}

ptb_status ptb_cohort_synth(const ptb_schema* schema, size_t n_patients, double missing_rate,
                            uint64_t seed, ptb_cohort** out) {
  return guarded([&] {
    require(schema && out, "null argument");
    SynthConfig cfg;
    cfg.n_patients = n_patients;
    cfg.missing_rate = missing_rate;
    cfg.seed = seed;
    Cohort c = generate_cohort(cfg, schema->registry);
    inject_missingness(c, schema->registry, missing_rate, mix_seed(seed, 0x315A));
    *out = new ptb_cohort{std::move(c)};
  });
}

/* ---- oversampling ---------------------------------------------------- */

ptb_status ptb_adasyn(const double* x, size_t n, size_t d, const int* y, int k, double beta,
                      uint64_t seed, double** x_out, int** y_out, size_t* n_out) {
  return guarded([&] {
    require(x && y && x_out && y_out && n_out, "null argument");
    AdasynConfig cfg;
    cfg.k = k;
    cfg.beta = beta;
    cfg.seed = seed;
    AdasynResult r = adasyn(x, n, d, y, cfg);
    double* xs = static_cast<double*>(std::malloc(r.x.size() * sizeof(double)));
    int* ys = static_cast<int*>(std::malloc(r.y.size() * sizeof(int)));
    if (!xs || !ys) {
      std::free(xs);
      std::free(ys);
      fail_runtime("out of memory");
    }
    std::memcpy(xs, r.x.data(), r.x.size() * sizeof(double));
    std::memcpy(ys, r.y.data(), r.y.size() * sizeof(int));
    *x_out = xs;
    *y_out = ys;
    *n_out = r.n_rows;
  });
}

/* ---- metrics --------------------------------------------------------- */

ptb_status ptb_metrics(long tp, long fp, long tn, long fn, double* sensitivity,
                       double* specificity, double* g_mean) {
  return guarded([&] {
    require(tp >= 0 && fp >= 0 && tn >= 0 && fn >= 0, "negative count");
    MetricSet m = metrics(ConfusionMatrix{tp, fp, tn, fn});
    if (sensitivity) *sensitivity = m.sensitivity;
    if (specificity) *specificity = m.specificity;
    if (g_mean) *g_mean = m.g_mean;
  });
}

/* ---- support vector machine ------------------------------------------ */

ptb_status ptb_svm_train(const double* x, size_t n, size_t d, const int* y, const char* kernel,
                         int degree, double gamma, double c, ptb_svm_model** out) {
  return guarded([&] {
    require(x && y && kernel && out, "null argument");
    KernelSpec k;
    std::string kind = kernel;
    if (kind == "linear") {
      k.kind = KernelSpec::Kind::Linear;
    } else if (kind == "poly") {
      k.kind = KernelSpec::Kind::Poly;
      k.degree = degree;
      k.gamma = gamma;
    } else if (kind == "rbf") {
      k.kind = KernelSpec::Kind::Rbf;
      k.gamma = gamma;
    } else {
      fail_invalid("unknown kernel '" + kind + "'");
    }
    SvmConfig cfg;
    cfg.c = c;
    *out = new ptb_svm_model{train_svm(x, n, d, y, k, cfg)};
  });
}

ptb_status ptb_svm_decision(const ptb_svm_model* model, const double* x, size_t n, size_t d,
                            double* out) {
  return guarded([&] {
    require(model && x && out, "null argument");
    auto dec = svm_decision(model->model, x, n, d);
    std::copy(dec.begin(), dec.end(), out);
  });
}

ptb_status ptb_svm_predict(const ptb_svm_model* model, const double* x, size_t n, size_t d,
                           int* labels_out) {
  return guarded([&] {
    require(model && x && labels_out, "null argument");
    auto pred = svm_predict(model->model, x, n, d);
    std::copy(pred.begin(), pred.end(), labels_out);
  });
}

ptb_status ptb_svm_save(const ptb_svm_model* model, const char* path) {
  return guarded([&] {
    require(model && path, "null argument");
    save_svm(model->model, path);
  });
}

ptb_status ptb_svm_load(const char* path, ptb_svm_model** out) {
  return guarded([&] {
    require(path && out, "null argument");
    *out = new ptb_svm_model{load_svm(path)};
  });
}

void ptb_svm_free(ptb_svm_model* model) { delete model; }

/* ---- penalized logistic regression ----------------------------------- */

ptb_status ptb_glm_fit(const double* x, size_t n, size_t d, const int* y, double alpha,
                       double lambda, ptb_glm_model** out) {
  return guarded([&] {
    require(x && y && out, "null argument");
    require(lambda >= 0.0, "lambda must be nonnegative");
    GlmConfig cfg;
    cfg.alpha = alpha;
    cfg.lambda_path = {lambda};
    auto models = fit_glm(x, n, d, y, cfg);
    *out = new ptb_glm_model{models.back()};
  });
}

ptb_status ptb_glm_probabilities(const ptb_glm_model* model, const double* x, size_t n,
                                 size_t d, double* out) {
  return guarded([&] {
    require(model && x && out, "null argument");
    auto p = glm_probabilities(model->model, x, n, d);
    std::copy(p.begin(), p.end(), out);
  });
}

ptb_status ptb_glm_predict(const ptb_glm_model* model, const double* x, size_t n, size_t d,
                           double threshold, int* labels_out) {
  return guarded([&] {
    require(model && x && labels_out, "null argument");
    auto pred = glm_predict(model->model, x, n, d, threshold);
    std::copy(pred.begin(), pred.end(), labels_out);
  });
}

ptb_status ptb_glm_save(const ptb_glm_model* model, const char* path) {
  return guarded([&] {
    require(model && path, "null argument");
    save_glm(model->model, path);
  });
}

ptb_status ptb_glm_load(const char* path, ptb_glm_model** out) {
  return guarded([&] {
    require(path && out, "null argument");
    *out = new ptb_glm_model{load_glm(path)};
  });
}

void ptb_glm_free(ptb_glm_model* model) { delete model; }

/* ---- rule-based risk scoring ----------------------------------------- */

ptb_status ptb_rpd_default(const ptb_schema* schema, ptb_rpd_table** out) {
  return guarded([&] {
    require(schema && out, "null argument");
    *out = new ptb_rpd_table{default_factor_table(schema->registry)};
  });
}

ptb_status ptb_rpd_load(const char* path, const ptb_schema* schema, ptb_rpd_table** out) {
  return guarded([&] {
    require(path && schema && out, "null argument");
    *out = new ptb_rpd_table{load_factor_table(path, schema->registry)};
  });
}

void ptb_rpd_free(ptb_rpd_table* table) { delete table; }

ptb_status ptb_rpd_score(const ptb_rpd_table* table, const ptb_cohort* cohort,
                         const ptb_schema* schema, size_t patient, const char* tick,
                         int* score_out) {
  return guarded([&] {
    require(table && cohort && schema && tick && score_out, "null argument");
    require(patient < cohort->cohort.patients.size(), "patient index out of range");
    RpdAssessment a = score_patient(cohort->cohort.patients[patient], parse_tick(tick),
                                    table->table, schema->registry);
    *score_out = a.score;
  });
}

/* ---- batch entry points ---------------------------------------------- */

ptb_status ptb_run_config(const char* config_path, int jobs_override, long long seed_override,
                          const char* format_override) {
  return guarded([&] {
    require(config_path != nullptr, "null argument");
    std::ifstream in(config_path);
    if (!in) fail_io(std::string("cannot open config '") + config_path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    ExperimentConfig cfg = parse_experiment_config(buf.str(), config_path);
    if (jobs_override > 0) cfg.jobs = jobs_override;
    if (seed_override >= 0) {
      cfg.seed = static_cast<std::uint64_t>(seed_override);
      cfg.plan.seed = cfg.seed;
      cfg.adasyn.seed = cfg.seed;
    }
    if (format_override) {
      cfg.formats.clear();
      std::istringstream fs(format_override);
      std::string f;
      while (std::getline(fs, f, ',')) cfg.formats.push_back(f);
      cfg.validate();
    }
    run_batch(cfg, buf.str());
  });
}

ptb_status ptb_synth_to_dir(const char* config_path, const char* out_dir,
                            long long seed_override) {
  return guarded([&] {
    require(config_path && out_dir, "null argument");
    std::ifstream in(config_path);
    if (!in) fail_io(std::string("cannot open config '") + config_path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    ExperimentConfig cfg = parse_experiment_config(buf.str(), config_path);
    if (seed_override >= 0) cfg.synth.seed = static_cast<std::uint64_t>(seed_override);
    FeatureRegistry registry =
        cfg.schema_path.empty() ? default_schema() : load_schema(cfg.schema_path);
    Cohort cohort = generate_cohort(cfg.synth, registry);
    inject_missingness(cohort, registry, cfg.synth.missing_rate,
                       mix_seed(cfg.synth.seed, 0x315A));
    std::filesystem::create_directories(out_dir);
    auto dir = std::filesystem::path(out_dir);
    write_file_atomic((dir / "schema.txt").string(), schema_to_text(registry));
    std::string tmp = (dir / "cohort.csv.tmp").string();
    write_cohort_csv(cohort, registry, tmp);
    std::error_code ec;
    std::filesystem::rename(tmp, dir / "cohort.csv", ec);
    if (ec) fail_io("cannot rename cohort file: " + ec.message());
  });
}

ptb_status ptb_rpd_score_csv(const char* cohort_csv, int cutoff, const char* tick,
                             const char* format, char** out_text) {
  return guarded([&] {
    require(cohort_csv && tick && format && out_text, "null argument");
    require(cutoff == 0 || cutoff == 7 || cutoff == 13, "cutoff must be 7, 13 or 0 (original)");
    Tick t = parse_tick(tick);
    FeatureRegistry registry = default_schema();
    Cohort cohort = load_cohort_csv(cohort_csv, registry);
    RpdTable table = default_factor_table(registry);

    auto band_name = [&](int score) -> const char* {
      RiskBand band = cutoff == 0 ? classify_original(score) : classify_cutoff(score, cutoff);
      switch (band) {
        case RiskBand::Low: return "low";
        case RiskBand::Medium: return "medium";
        default: return "high";
      }
    };

    std::ostringstream out;
    std::string fmt = format;
    if (fmt == "csv") {
      out << "patient,score,band\n";
      for (std::size_t i = 0; i < cohort.patients.size(); ++i) {
        RpdAssessment a = score_patient(cohort.patients[i], t, table, registry);
        out << i << "," << a.score << "," << band_name(a.score) << "\n";
      }
    } else if (fmt == "jsonl") {
      for (std::size_t i = 0; i < cohort.patients.size(); ++i) {
        RpdAssessment a = score_patient(cohort.patients[i], t, table, registry);
        nlohmann::json j;
        j["patient"] = i;
        j["score"] = a.score;
        j["band"] = band_name(a.score);
        j["triggered"] = a.triggered;
        out << j.dump() << "\n";
      }
    } else if (fmt == "table") {
      out << "patient  score  band\n";
      for (std::size_t i = 0; i < cohort.patients.size(); ++i) {
        RpdAssessment a = score_patient(cohort.patients[i], t, table, registry);
        char line[64];
        std::snprintf(line, sizeof line, "%-8zu %-6d %s\n", i, a.score, band_name(a.score));
        out << line;
      }
    } else {
      fail_invalid("unknown format '" + fmt + "'");
    }
    *out_text = dup_string(out.str());
  });
}

}  // extern "C"
