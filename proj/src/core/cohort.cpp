#include "core/cohort.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "core/error.hpp"

namespace ptb {

Variant parse_variant(const std::string& s) {
  if (s == "all") return Variant::All;
  if (s == "spontaneous_only") return Variant::SpontaneousOnly;
  if (s == "nulliparous_only") return Variant::NulliparousOnly;
  fail_parse("unknown variant '" + s + "'");
}

const char* variant_name(Variant v) {
  switch (v) {
    case Variant::All: return "all";
    case Variant::SpontaneousOnly: return "spontaneous_only";
    default: return "nulliparous_only";
  }
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : line) {
    if (ch == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (ch != '\r') {
      cur += ch;
    }
  }
  out.push_back(cur);
  return out;
}

}  // namespace

Cohort load_cohort_csv(const std::string& path, const FeatureRegistry& registry) {
  std::ifstream in(path);
  if (!in) fail_io("cannot open cohort CSV '" + path + "'");

  std::string line;
  if (!std::getline(in, line)) fail_parse(path + ": empty file");
  auto header = split_csv_line(line);

  // column index -> registry feature id (or reserved column)
  const int kOutcome = -1, kSubtype = -2, kParity = -3, kLastTick = -4;
  std::vector<long> mapping(header.size());
  bool saw_outcome = false, saw_parity = false;
  for (std::size_t c = 0; c < header.size(); ++c) {
    const std::string& name = header[c];
    if (name == "OUTCOME") { mapping[c] = kOutcome; saw_outcome = true; }
    else if (name == "SUBTYPE") { mapping[c] = kSubtype; }
    else if (name == "PARITY") { mapping[c] = kParity; saw_parity = true; }
    else if (name == "LAST_TICK") { mapping[c] = kLastTick; }
    else {
      auto id = registry.find(name);
      if (!id) fail_parse(path + ": header names unknown feature '" + name + "'");
      mapping[c] = static_cast<long>(*id);
    }
  }
  if (!saw_outcome) fail_parse(path + ": missing OUTCOME column");
  if (!saw_parity) fail_parse(path + ": missing PARITY column");

  Cohort cohort;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    auto cells = split_csv_line(line);
    if (cells.size() != header.size())
      fail_parse(path + ":" + std::to_string(lineno) + ": wrong cell count");

    Patient p;
    p.cells.assign(registry.size(), "");
    std::string where = path + ":" + std::to_string(lineno);
    for (std::size_t c = 0; c < cells.size(); ++c) {
      const std::string& v = cells[c];
      switch (mapping[c]) {
        case kOutcome:
          if (v == "preterm") p.outcome = Outcome::Preterm;
          else if (v == "fullterm") p.outcome = Outcome::Fullterm;
          else fail_parse(where + ": bad OUTCOME '" + v + "'");
          break;
        case kSubtype:
          if (v == "spontaneous") p.subtype = Subtype::Spontaneous;
          else if (v == "indicated") p.subtype = Subtype::Indicated;
          else if (v.empty() || v == "n/a") p.subtype = Subtype::None;
          else fail_parse(where + ": bad SUBTYPE '" + v + "'");
          break;
        case kParity:
          if (v == "nulliparous") p.parity = Parity::Nulliparous;
          else if (v == "multiparous") p.parity = Parity::Multiparous;
          else fail_parse(where + ": bad PARITY '" + v + "'");
          break;
        case kLastTick:
          p.last_tick = v.empty() ? Tick::T3 : parse_tick(v);
          break;
        default:
          p.cells[static_cast<std::size_t>(mapping[c])] = v;
      }
    }
    if ((p.subtype == Subtype::None) != (p.outcome == Outcome::Fullterm))
      fail_parse(where + ": SUBTYPE must be n/a exactly when OUTCOME is fullterm");
    cohort.patients.push_back(std::move(p));
  }
  return cohort;
}

void write_cohort_csv(const Cohort& cohort, const FeatureRegistry& registry,
                      const std::string& path) {
  std::ofstream out(path);
  if (!out) fail_io("cannot write cohort CSV '" + path + "'");
  for (std::size_t i = 0; i < registry.size(); ++i) out << registry.at(i).name << ",";
  out << "OUTCOME,SUBTYPE,PARITY,LAST_TICK\n";
  for (const Patient& p : cohort.patients) {
    for (const auto& cell : p.cells) out << cell << ",";
    out << (p.outcome == Outcome::Preterm ? "preterm" : "fullterm") << ",";
    switch (p.subtype) {
      case Subtype::Spontaneous: out << "spontaneous"; break;
      case Subtype::Indicated: out << "indicated"; break;
      case Subtype::None: break;
    }
    out << "," << (p.parity == Parity::Nulliparous ? "nulliparous" : "multiparous") << ","
        << tick_name(p.last_tick) << "\n";
  }
  if (!out) fail_io("failed writing cohort CSV '" + path + "'");
}

RawView slice_by_tick(const Cohort& cohort, const FeatureRegistry& registry, Tick tick) {
  RawView view;
  view.cohort = &cohort;
  view.tick = tick;
  view.feature_ids = registry.features_at(tick);
  for (std::size_t i = 0; i < cohort.patients.size(); ++i)
    if (static_cast<int>(cohort.patients[i].last_tick) >= static_cast<int>(tick))
      view.patient_rows.push_back(i);
  return view;
}

std::size_t LabeledRaw::positives() const {
  return static_cast<std::size_t>(std::count(labels.begin(), labels.end(), +1));
}

std::size_t LabeledRaw::negatives() const {
  return static_cast<std::size_t>(std::count(labels.begin(), labels.end(), -1));
}

LabeledRaw derive_labels(const RawView& view, Variant variant) {
  LabeledRaw out;
  out.view.cohort = view.cohort;
  out.view.tick = view.tick;
  out.view.feature_ids = view.feature_ids;

  for (std::size_t row : view.patient_rows) {
    const Patient& p = view.cohort->patients[row];
    switch (variant) {
      case Variant::All:
        out.view.patient_rows.push_back(row);
        out.labels.push_back(p.outcome == Outcome::Preterm ? +1 : -1);
        break;
      case Variant::SpontaneousOnly:
        // indicated-PTB patients are excluded entirely, not relabeled
        if (p.outcome == Outcome::Preterm && p.subtype == Subtype::Indicated) {
          ++out.excluded;
          break;
        }
        out.view.patient_rows.push_back(row);
        out.labels.push_back(p.outcome == Outcome::Preterm ? +1 : -1);
        break;
      case Variant::NulliparousOnly:
        if (p.parity != Parity::Nulliparous) break;
        out.view.patient_rows.push_back(row);
        out.labels.push_back(p.outcome == Outcome::Preterm ? +1 : -1);
        break;
    }
  }
  if (out.positives() == 0 || out.negatives() == 0)
    fail_degenerate(std::string("variant ") + variant_name(variant) + " at " +
                    tick_name(view.tick) + " yields a single-class dataset");
  return out;
}

}  // namespace ptb
