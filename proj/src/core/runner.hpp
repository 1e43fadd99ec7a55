#pragma once

#include <functional>
#include <string>
#include <vector>

#include "core/config.hpp"
#include "core/metrics.hpp"
#include "core/rpd.hpp"

namespace ptb {

inline const char* ptb_version_string() { return "0.1.0"; }

struct RunOutcome {
  MetricSet metrics;
  std::string params;  // chosen hyperparameters, e.g. "C=1,gamma=0.003"
};

struct ExperimentReport {
  Variant variant = Variant::All;
  Tick tick = Tick::T0;
  Algorithm algorithm = Algorithm::Lasso;
  bool skipped = false;
  std::string skip_reason;
  std::vector<RunOutcome> runs;
  MetricSet mean;
  MetricSet stddev;
};

enum class AccessPhase { PreprocessFit, CvSelect, FinalFit, Evaluate };

/// Row-access notification for leakage auditing: `rows` index the labeled
/// view of the current cell.
struct AccessEvent {
  AccessPhase phase = AccessPhase::PreprocessFit;
  int run = 0;
  std::vector<std::size_t> rows;
};
using AccessObserver = std::function<void(Variant, Tick, Algorithm, const AccessEvent&)>;

/// Runs fn(0..n_tasks) on up to `jobs` worker threads; callers index into
/// preallocated result slots, so scheduling cannot reorder output.
void parallel_for(std::size_t n_tasks, int jobs, const std::function<void(std::size_t)>& fn);

std::vector<ExperimentReport> run_experiments(const ExperimentConfig& cfg, const Cohort& cohort,
                                              const FeatureRegistry& registry,
                                              const RpdTable& table,
                                              const AccessObserver& observer = {});

std::string render_table(const std::vector<ExperimentReport>& reports,
                         const std::vector<Tick>& ticks);
std::string render_csv(const std::vector<ExperimentReport>& reports);
std::string render_jsonl(const std::vector<ExperimentReport>& reports);

/// Writes via a temp file + rename so readers never see partial content.
void write_file_atomic(const std::string& path, const std::string& content);

std::uint64_t fnv1a_hash(const std::string& bytes);

/// Resolves the data source (files or built-in synthesis), runs every
/// configured cell, and writes reports plus a manifest into cfg.out_dir.
std::vector<ExperimentReport> run_batch(const ExperimentConfig& cfg,
                                        const std::string& config_text);

}  // namespace ptb
