#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "core/adasyn.hpp"
#include "core/cohort.hpp"
#include "core/eval.hpp"
#include "core/synth.hpp"

namespace ptb {

enum class Algorithm {
  Lasso,
  ElasticNet,
  SvmLinear,
  SvmPoly2,
  SvmPoly3,
  SvmRbf,
  Creasy7,
  Creasy13,
};

Algorithm parse_algorithm(const std::string& s);
const char* algorithm_name(Algorithm a);

struct ExperimentConfig {
  // data source: explicit files, or the built-in synthetic generator
  std::string schema_path;        // empty -> bundled default schema
  std::string cohort_path;        // empty -> generate from `synth`
  std::string factor_table_path;  // empty -> built-in point table
  SynthConfig synth;

  std::vector<Tick> ticks = {Tick::T0, Tick::T1, Tick::T3};
  std::vector<Variant> variants = {Variant::All, Variant::SpontaneousOnly,
                                   Variant::NulliparousOnly};
  std::vector<Algorithm> algorithms = {
      Algorithm::Lasso,    Algorithm::ElasticNet, Algorithm::SvmLinear,
      Algorithm::SvmPoly2, Algorithm::SvmPoly3,   Algorithm::SvmRbf,
      Algorithm::Creasy7,  Algorithm::Creasy13};

  SplitPlan plan;                  // 0.2 / 5 folds / 5 runs
  double sparse_threshold = 0.5;   // drop columns with more missing than this
  bool resample_glm = true;        // oversample minority inside training folds
  bool resample_svm = false;       // svm uses class costs instead
  AdasynConfig adasyn;
  double elastic_net_alpha = 0.5;

  std::vector<double> c_grid = {0.01, 0.1, 1.0, 10.0};
  std::vector<double> gamma_scale = {0.1, 1.0, 10.0};  // divided by feature count

  std::uint64_t seed = 0;
  int jobs = 1;
  std::vector<std::string> formats = {"csv", "jsonl", "table"};
  std::string out_dir = ".";

  void validate() const;
};

/// Parses the declarative key/value config (ini-style sections [data], [synth],
/// [experiment], [grids], [output]). Unknown keys are errors.
ExperimentConfig parse_experiment_config(const std::string& text,
                                         const std::string& origin = "<memory>");
ExperimentConfig load_experiment_config(const std::string& path);

}  // namespace ptb
