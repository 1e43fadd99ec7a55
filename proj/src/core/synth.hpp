#pragma once

#include <cstdint>
#include <map>
#include <string>

#include "core/cohort.hpp"
#include "core/schema.hpp"

namespace ptb {

/// Knobs for the synthetic cohort generator. Rates default to the published
/// cohort marginals; effect sizes are odds multipliers applied when the named
/// risk condition holds for a patient.
struct SynthConfig {
  std::size_t n_patients = 3000;
  double overall_sptb = 0.103;
  double nulliparous_sptb = 0.082;
  double multiparous_sptb = 0.119;
  double indicated_ptb = 0.04;
  double nulliparous_fraction = 1218.0 / 2929.0;
  double dropout_t0 = 0.02;  // P(last visit = T0)
  double dropout_t1 = 0.03;  // P(last visit = T1)
  double missing_rate = 0.05;
  std::map<std::string, double> effect_sizes = {
      {"prior_ptb", 7.4}, {"short_cervix", 3.0}, {"smoking", 1.8}, {"age_extreme", 1.5}};
  std::uint64_t seed = 0;
};

/// Bundled schema descriptor: 50 baseline features, 205 cumulative by the
/// second visit, 316 by the third, grouped the way the study instruments were.
const char* default_schema_text();
FeatureRegistry default_schema();

/// Draws a fully-observed cohort (no MISSING cells except structurally absent
/// prior-pregnancy fields for nulliparous patients). Outcomes come from a
/// per-parity logistic model whose intercept is calibrated so the realized
/// mean probability hits the configured class rate.
Cohort generate_cohort(const SynthConfig& cfg, const FeatureRegistry& registry);

/// Blanks cells at the given rate: structurally-default groups all-or-none per
/// patient, every other imputable cell independently.
void inject_missingness(Cohort& cohort, const FeatureRegistry& registry, double rate,
                        std::uint64_t seed);

}  // namespace ptb
