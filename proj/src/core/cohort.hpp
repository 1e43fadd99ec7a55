#pragma once

#include <string>
#include <vector>

#include "core/schema.hpp"

namespace ptb {

enum class Outcome { Fullterm, Preterm };
enum class Subtype { None, Spontaneous, Indicated };
enum class Parity { Nulliparous, Multiparous };
enum class Variant { All, SpontaneousOnly, NulliparousOnly };

Variant parse_variant(const std::string& s);
const char* variant_name(Variant v);

struct Patient {
  std::vector<std::string> cells;  // aligned with registry order; "" means MISSING
  Outcome outcome = Outcome::Fullterm;
  Subtype subtype = Subtype::None;
  Parity parity = Parity::Multiparous;
  Tick last_tick = Tick::T3;  // enrollment attrition: last visit reached
};

struct Cohort {
  std::vector<Patient> patients;
};

/// Reads a cohort CSV: header row of feature names plus the reserved columns
/// OUTCOME, SUBTYPE, PARITY, LAST_TICK. Empty cells are MISSING.
Cohort load_cohort_csv(const std::string& path, const FeatureRegistry& registry);
void write_cohort_csv(const Cohort& cohort, const FeatureRegistry& registry,
                      const std::string& path);

/// Cumulative view: all features with tick <= requested, patients still enrolled.
struct RawView {
  const Cohort* cohort = nullptr;
  Tick tick = Tick::T0;
  std::vector<std::size_t> patient_rows;  // indices into cohort->patients
  std::vector<std::size_t> feature_ids;   // indices into the registry

  std::size_t rows() const { return patient_rows.size(); }
  std::size_t cols() const { return feature_ids.size(); }
  const Patient& patient(std::size_t r) const { return cohort->patients[patient_rows[r]]; }
};

RawView slice_by_tick(const Cohort& cohort, const FeatureRegistry& registry, Tick tick);

struct LabeledRaw {
  RawView view;
  std::vector<int> labels;  // +1 preterm / -1 fullterm, aligned with view.patient_rows
  std::size_t excluded = 0; // patients removed by the variant (indicated PTB under spontaneous_only)

  std::size_t positives() const;
  std::size_t negatives() const;
};

/// Applies the problem-variant labeling. Throws a degenerate-dataset error when
/// a variant yields zero positives or zero negatives.
LabeledRaw derive_labels(const RawView& view, Variant variant);

}  // namespace ptb
