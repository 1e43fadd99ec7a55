#include "core/synth.hpp"

#include <cmath>
#include <cstdio>
#include <set>
#include <sstream>

#include "core/error.hpp"
#include "core/rng.hpp"

namespace ptb {

namespace {

void append_fillers(std::ostream& out, const std::string& stem, const std::string& group,
                    const char* tick, int from, int to, const std::string& kind,
                    const std::string& policy) {
  for (int i = from; i <= to; ++i) {
    char num[16];
    std::snprintf(num, sizeof num, "%02d", i);
    out << stem << num << " " << group << " " << tick << " " << kind << " " << policy << "\n";
  }
}

std::string build_default_schema_text() {
  std::ostringstream s;
  s << "# NAME GROUP TICK KIND POLICY\n";

  // enrollment visit: demographics and habits
  s << "AGEMOM DMG T0 ordinal(18,40) mode\n"
       "SCHOOLYR DMG T0 ordinal(0,20) mode\n"
       "BPMARITL DMG T0 categorical(married,single,divorced,widowed) mode\n"
       "BPINCOME DMG T0 ordinal(1,5) mode\n"
       "BPPHONE DMG T0 yesno mode\n"
       "BPCAR DMG T0 yesno mode\n"
       "BPWORK DMG T0 yesno mode\n"
       "BPKIDS DMG T0 ordinal(0,8) mode\n"
       "BPJOB DMG T0 yesno mode\n"
       "BPSMOKE DMG T0 yesno mode\n"
       "CIGSPRE DMG T0 ordinal(0,60) mode replace(pack=20)\n"
       "BPSTAND DMG T0 yesno mode\n"
       "BPBREAK DMG T0 yesno mode\n"
       "BPVIBES DMG T0 yesno mode\n"
       "BPHRS DMG T0 ordinal(0,80) mode\n"
       "HEIGHT DMG T0 numeric(50,78) mean\n"
       "WGTPRE DMG T0 numeric(35,150) mean\n"
       "BPABD DMG T0 yesno mode\n"
       "RACE DMG T0 categorical(white,black,hispanic,other) mode\n"
       "BPDRINK DMG T0 yesno mode\n";

  // prior pregnancy history: structurally absent for nulliparous patients
  s << "PRETERM PPH T0 yesno default=0\n"
       "BPINDUCE PPH T0 ordinal(0,5) default=0\n"
       "LASTPREG PPH T0 ordinal(0,20) default=0\n"
       "SECAB PPH T0 ordinal(0,3) default=0\n"
       "BPFIBR PPH T0 yesno default=0\n"
       "BPLOWER PPH T0 categorical(normal,anomalous,scarred) default=1\n"
       "NPREV PPH T0 ordinal(0,10) default=0\n"
       "PPROM PPH T0 yesno default=0\n";
  append_fillers(s, "PPH", "PPH", "T0", 8, 11, "yesno", "default=0");

  // obstetric / medical conditions at enrollment
  s << "BPHYPER OBST T0 yesno mode\n"
       "BPURINE OBST T0 ordinal(0,3) mode\n"
       "BPINFEC OBST T0 yesno mode\n"
       "PYELO OBST T0 yesno mode\n"
       "BPVAG2ND OBST T0 yesno mode\n"
       "PERBLD OBST T0 yesno mode\n"
       "BACTER OBST T0 yesno mode\n"
       "HERPES OBST T0 yesno mode\n"
       "CYS OBST T0 yesno mode\n"
       "BPDIAB OBST T0 yesno mode\n";

  // substance/abuse screen: asked as a block, absent as a block
  append_fillers(s, "SAD", "SAD", "T0", 1, 8, "yesno", "default=0");

  // second visit
  append_fillers(s, "CPH", "CPH", "T1", 1, 20, "yesno", "mode");
  s << "VHERPES INFEC T1 yesno mode\n"
       "VCYS INFEC T1 yesno mode\n"
       "OLIGO INFEC T1 yesno mode\n";
  append_fillers(s, "INFEC", "INFEC", "T1", 4, 10, "yesno", "mode");
  append_fillers(s, "JOB", "JOB", "T1", 1, 10, "yesno", "mode");
  append_fillers(s, "MEDT", "MEDT", "T1", 1, 15, "yesno", "mode");
  append_fillers(s, "SYMP", "SYMP", "T1", 1, 20, "yesno", "mode");
  s << "WEIGHTV1 CPM T1 numeric(35,160) derived=gain(WGTPRE)\n";
  append_fillers(s, "CPM", "CPM", "T1", 2, 4, "numeric(0,100)", "mean");
  append_fillers(s, "CPM", "CPM", "T1", 5, 7, "numeric(0,100)", "drop");
  append_fillers(s, "CPM", "CPM", "T1", 8, 11, "ordinal(0,5)", "mode");
  append_fillers(s, "SPEC", "SPEC", "T1", 1, 10, "yesno", "mode");
  s << "BPCRVLT CRVM T1 numeric(10,60) mean\n";
  append_fillers(s, "CRVM", "CRVM", "T1", 2, 10, "numeric(0,50)", "mean");
  append_fillers(s, "FFN", "FFN", "T1", 1, 4, "yesno", "mode");
  append_fillers(s, "BUA", "BUA", "T1", 1, 15, "numeric(0,10)", "mean");
  append_fillers(s, "PSYCH", "PSYCH", "T1", 1, 28, "ordinal(1,5)", "mode");
  s << "VISIT2A VISIT2 T1 yesno mode\n"
       "VISIT2B VISIT2 T1 yesno mode\n";

  // third visit
  append_fillers(s, "CPH3", "CPH3", "T3", 1, 15, "yesno", "mode");
  append_fillers(s, "INFEC3", "INFEC3", "T3", 1, 10, "yesno", "mode");
  append_fillers(s, "MEDT3", "MEDT3", "T3", 1, 12, "yesno", "mode");
  append_fillers(s, "SYMP3", "SYMP3", "T3", 1, 20, "yesno", "mode");
  s << "WEIGHTV3 CPM3 T3 numeric(35,170) derived=gain(WEIGHTV1)\n";
  append_fillers(s, "CPM3", "CPM3", "T3", 2, 11, "numeric(0,100)", "mean");
  append_fillers(s, "SPEC3", "SPEC3", "T3", 1, 10, "yesno", "mode");
  append_fillers(s, "CRVM3", "CRVM3", "T3", 1, 10, "numeric(0,50)", "mean");
  append_fillers(s, "FFN3", "FFN3", "T3", 1, 4, "yesno", "mode");
  append_fillers(s, "BUA3", "BUA3", "T3", 1, 15, "numeric(0,10)", "mean");
  append_fillers(s, "SAD3", "SAD3", "T3", 1, 4, "yesno", "default=0");
  return s.str();
}

std::string fmt_num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string fmt_int(long v) { return std::to_string(v); }

double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

// intercept b such that mean_i sigmoid(b + s_i) = target
double calibrate_intercept(const std::vector<double>& signal, double target) {
  double lo = -20.0, hi = 20.0;
  for (int iter = 0; iter < 100; ++iter) {
    double mid = 0.5 * (lo + hi);
    double mean = 0.0;
    for (double s : signal) mean += sigmoid(mid + s);
    mean /= static_cast<double>(signal.size());
    (mean < target ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

const char* default_schema_text() {
  static const std::string text = build_default_schema_text();
  return text.c_str();
}

FeatureRegistry default_schema() {
  return parse_schema_text(default_schema_text(), "<built-in>");
}

Cohort generate_cohort(const SynthConfig& cfg, const FeatureRegistry& registry) {
  if (cfg.n_patients < 1) fail_invalid("generate_cohort: n_patients must be >= 1");
  for (double r : {cfg.overall_sptb, cfg.nulliparous_sptb, cfg.multiparous_sptb,
                   cfg.indicated_ptb, cfg.nulliparous_fraction, cfg.dropout_t0,
                   cfg.dropout_t1, cfg.missing_rate})
    if (!(r >= 0.0 && r <= 1.0)) fail_invalid("generate_cohort: rates must lie in [0,1]");
  if (cfg.dropout_t0 + cfg.dropout_t1 >= 1.0)
    fail_invalid("generate_cohort: dropout rates leave no completers");
  if (registry.size() == 0) fail_invalid("generate_cohort: empty registry");
  double q_indicated = cfg.indicated_ptb / (1.0 - cfg.overall_sptb);
  if (q_indicated > 1.0)
    fail_invalid("generate_cohort: indicated rate infeasible given spontaneous rate");

  auto effect = [&](const char* name) {
    auto it = cfg.effect_sizes.find(name);
    return it == cfg.effect_sizes.end() ? 1.0 : it->second;
  };
  if (effect("prior_ptb") <= 0 || effect("short_cervix") <= 0 || effect("smoking") <= 0 ||
      effect("age_extreme") <= 0)
    fail_invalid("generate_cohort: effect sizes must be positive odds multipliers");

  Cohort cohort;
  cohort.patients.resize(cfg.n_patients);
  std::vector<double> signal(cfg.n_patients, 0.0);

  for (std::size_t i = 0; i < cfg.n_patients; ++i) {
    Patient& p = cohort.patients[i];
    Rng rng(mix_seed(cfg.seed, 0x5EED, i));
    p.parity = rng.uniform() < cfg.nulliparous_fraction ? Parity::Nulliparous
                                                        : Parity::Multiparous;
    p.cells.assign(registry.size(), "");

    std::vector<double> value(registry.size(), 0.0);
    for (std::size_t f = 0; f < registry.size(); ++f) {
      const FeatureSpec& spec = registry.at(f);
      if (spec.group == "PPH" && p.parity == Parity::Nulliparous) continue;
      const std::string& n = spec.name;
      double v;
      if (n == "AGEMOM") v = 18 + static_cast<double>(rng.below(23));
      else if (n == "SCHOOLYR") v = 8 + static_cast<double>(rng.below(13));
      else if (n == "BPINCOME") v = rng.bernoulli(0.25) ? 1 : 2 + static_cast<double>(rng.below(4));
      else if (n == "BPPHONE") v = rng.bernoulli(0.90);
      else if (n == "BPCAR") v = rng.bernoulli(0.85);
      else if (n == "BPWORK") v = rng.bernoulli(0.60);
      else if (n == "BPJOB") v = rng.bernoulli(0.55);
      else if (n == "BPKIDS") v = static_cast<double>(rng.below(4));
      else if (n == "BPSMOKE") v = rng.bernoulli(0.15);
      else if (n == "CIGSPRE") v = value[*registry.find("BPSMOKE")] > 0.5
                                       ? 5 + static_cast<double>(rng.below(26)) : 0;
      else if (n == "BPHRS") v = static_cast<double>(rng.below(61));
      else if (n == "HEIGHT") v = rng.uniform(55.0, 72.0);
      else if (n == "WGTPRE") v = rng.uniform(40.0, 100.0);
      else if (n == "BPMARITL") v = rng.bernoulli(0.70) ? 1 : 2 + static_cast<double>(rng.below(3));
      else if (n == "PRETERM") v = rng.bernoulli(0.12);
      else if (n == "BPINDUCE") v = rng.bernoulli(0.20) ? 1 + static_cast<double>(rng.below(3)) : 0;
      else if (n == "LASTPREG") v = static_cast<double>(rng.below(8));
      else if (n == "SECAB") v = rng.bernoulli(0.05) ? 1 + static_cast<double>(rng.below(3)) : 0;
      else if (n == "NPREV") v = 1 + static_cast<double>(rng.below(4));
      else if (n == "BPCRVLT") v = rng.uniform(22.0, 50.0);
      else if (n == "WEIGHTV1") v = value[*registry.find("WGTPRE")] + rng.uniform(2.0, 10.0);
      else if (n == "WEIGHTV3") v = value[*registry.find("WEIGHTV1")] + rng.uniform(10.0, 20.0);
      else if (n == "HERPES" || n == "CYS" || n == "VHERPES" || n == "VCYS") v = rng.bernoulli(0.03);
      else if (n == "BPHYPER") v = rng.bernoulli(0.08);
      else if (n == "BPINFEC") v = rng.bernoulli(0.10);
      else if (n == "PYELO") v = rng.bernoulli(0.03);
      else if (n == "BACTER") v = rng.bernoulli(0.06);
      else if (n == "BPVAG2ND") v = rng.bernoulli(0.06);
      else if (n == "PERBLD") v = rng.bernoulli(0.05);
      else if (n == "BPURINE") v = rng.bernoulli(0.10) ? 1 + static_cast<double>(rng.below(3)) : 0;
      else if (n == "BPABD") v = rng.bernoulli(0.04);
      else {
        switch (spec.kind) {
          case FeatureKind::YesNo: v = rng.bernoulli(0.08); break;
          case FeatureKind::Categorical:
            v = 1 + static_cast<double>(rng.below(spec.levels.size()));
            break;
          case FeatureKind::Ordinal:
            v = spec.min + static_cast<double>(
                               rng.below(static_cast<std::uint64_t>(spec.max - spec.min) + 1));
            break;
          case FeatureKind::Numeric: v = rng.uniform(spec.min, spec.max); break;
        }
      }
      value[f] = v;
      switch (spec.kind) {
        case FeatureKind::YesNo: p.cells[f] = v > 0.5 ? "1" : "0"; break;
        case FeatureKind::Categorical:
          p.cells[f] = spec.levels[static_cast<std::size_t>(v) - 1];
          break;
        case FeatureKind::Ordinal: p.cells[f] = fmt_int(static_cast<long>(v)); break;
        case FeatureKind::Numeric: p.cells[f] = fmt_num(v); break;
      }
    }

    double s = 0.0;
    if (p.parity == Parity::Multiparous && value[*registry.find("PRETERM")] > 0.5)
      s += std::log(effect("prior_ptb"));
    if (value[*registry.find("BPCRVLT")] < 25.0) s += std::log(effect("short_cervix"));
    if (value[*registry.find("BPSMOKE")] > 0.5) s += std::log(effect("smoking"));
    double age = value[*registry.find("AGEMOM")];
    if (age <= 19.0 || age >= 38.0) s += std::log(effect("age_extreme"));
    signal[i] = s;
  }

  // calibrate per-parity intercepts on the realized sample
  std::vector<double> sig_null, sig_multi;
  for (std::size_t i = 0; i < cfg.n_patients; ++i)
    (cohort.patients[i].parity == Parity::Nulliparous ? sig_null : sig_multi)
        .push_back(signal[i]);
  double b_null = sig_null.empty() ? 0.0 : calibrate_intercept(sig_null, cfg.nulliparous_sptb);
  double b_multi = sig_multi.empty() ? 0.0 : calibrate_intercept(sig_multi, cfg.multiparous_sptb);

  for (std::size_t i = 0; i < cfg.n_patients; ++i) {
    Patient& p = cohort.patients[i];
    Rng rng(mix_seed(cfg.seed, 0x0DD5, i));
    double b = p.parity == Parity::Nulliparous ? b_null : b_multi;
    bool sptb = rng.uniform() < sigmoid(b + signal[i]);
    bool indicated = !sptb && rng.uniform() < q_indicated;
    if (sptb) {
      p.outcome = Outcome::Preterm;
      p.subtype = Subtype::Spontaneous;
    } else if (indicated) {
      p.outcome = Outcome::Preterm;
      p.subtype = Subtype::Indicated;
    } else {
      p.outcome = Outcome::Fullterm;
      p.subtype = Subtype::None;
    }
    double u = rng.uniform();
    p.last_tick = u < cfg.dropout_t0            ? Tick::T0
                  : u < cfg.dropout_t0 + cfg.dropout_t1 ? Tick::T1
                                                        : Tick::T3;
    // visits the patient never reached have no measurements
    for (std::size_t f = 0; f < registry.size(); ++f)
      if (static_cast<int>(registry.at(f).tick) > static_cast<int>(p.last_tick))
        p.cells[f].clear();
  }
  return cohort;
}

void inject_missingness(Cohort& cohort, const FeatureRegistry& registry, double rate,
                        std::uint64_t seed) {
  if (!(rate >= 0.0 && rate < 1.0)) fail_invalid("inject_missingness: rate must be in [0,1)");
  if (rate == 0.0) return;

  // groups whose every feature carries a fixed default are absent all-or-none
  std::vector<std::string> groups = registry.groups_at(Tick::T3);
  std::set<std::string> structural;
  for (const auto& g : groups) {
    bool all_default = true;
    for (std::size_t f : registry.features_in_group(g))
      if (registry.at(f).missing != MissingPolicy::Default) all_default = false;
    if (all_default) structural.insert(g);
  }

  for (std::size_t i = 0; i < cohort.patients.size(); ++i) {
    Patient& p = cohort.patients[i];
    Rng rng(mix_seed(seed, 0x3155, i));
    for (const auto& g : groups) {
      auto members = registry.features_in_group(g);
      if (structural.count(g)) {
        if (rng.bernoulli(rate))
          for (std::size_t f : members) p.cells[f].clear();
      } else {
        for (std::size_t f : members)
          if (rng.bernoulli(rate)) p.cells[f].clear();
      }
    }
  }
}

}  // namespace ptb
