#pragma once

#include <memory>
#include <string>
#include <vector>

#include "core/cohort.hpp"
#include "core/schema.hpp"

namespace ptb {

enum class RpdCategory { Socioeconomic, PastHistory, DailyHabits, CurrentPregnancy };

RpdCategory parse_rpd_category(const std::string& s);
const char* rpd_category_name(RpdCategory c);

struct PredicateNode;
using PredicatePtr = std::shared_ptr<const PredicateNode>;

/// One scored risk factor. Discounted factors always evaluate false.
struct RpdFactor {
  std::string name;
  RpdCategory category = RpdCategory::Socioeconomic;
  int points = 0;
  Tick available_from = Tick::T0;
  bool discounted = false;
  PredicatePtr predicate;       // null for discounted factors
  std::string predicate_text;
};

struct RpdTable {
  std::vector<RpdFactor> factors;
};

struct RpdAssessment {
  int score = 0;
  std::vector<std::string> triggered;
};

enum class RiskBand { Low, Medium, High };

/// Parses a factor-table descriptor (pipe-separated columns: name, category,
/// points, available_from, predicate). Predicates must reference schema
/// features; "auto" availability derives from the latest referenced tick.
RpdTable load_factor_table(const std::string& path, const FeatureRegistry& registry);
RpdTable parse_factor_table_text(const std::string& text, const FeatureRegistry& registry,
                                 const std::string& origin = "<memory>");

/// The built-in transcription of the Creasy point table and its MFMU feature
/// mapping. Requires a registry that declares the mapped features (the bundled
/// default schema does).
RpdTable default_factor_table(const FeatureRegistry& registry);
const char* default_factor_table_text();

/// Evaluates every active factor available at the tick. MISSING or unparseable
/// referenced values make a comparison false. Total function.
RpdAssessment score_patient(const Patient& patient, Tick tick, const RpdTable& table,
                            const FeatureRegistry& registry);

/// Two-band rule: score >= cutoff is high risk.
RiskBand classify_cutoff(int score, int cutoff);

/// Original three-band rule: 0-5 low, 6-9 medium, >= 10 high.
RiskBand classify_original(int score);

}  // namespace ptb
