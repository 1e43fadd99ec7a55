#include "core/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "core/error.hpp"

namespace ptb {

Algorithm parse_algorithm(const std::string& s) {
  if (s == "lasso") return Algorithm::Lasso;
  if (s == "elastic_net") return Algorithm::ElasticNet;
  if (s == "svm_linear") return Algorithm::SvmLinear;
  if (s == "svm_poly2") return Algorithm::SvmPoly2;
  if (s == "svm_poly3") return Algorithm::SvmPoly3;
  if (s == "svm_rbf") return Algorithm::SvmRbf;
  if (s == "creasy7") return Algorithm::Creasy7;
  if (s == "creasy13") return Algorithm::Creasy13;
  fail_invalid("unknown algorithm '" + s + "'");
}

const char* algorithm_name(Algorithm a) {
  switch (a) {
    case Algorithm::Lasso: return "lasso";
    case Algorithm::ElasticNet: return "elastic_net";
    case Algorithm::SvmLinear: return "svm_linear";
    case Algorithm::SvmPoly2: return "svm_poly2";
    case Algorithm::SvmPoly3: return "svm_poly3";
    case Algorithm::SvmRbf: return "svm_rbf";
    case Algorithm::Creasy7: return "creasy7";
    default: return "creasy13";
  }
}

void ExperimentConfig::validate() const {
  if (ticks.empty()) fail_invalid("config: empty tick list");
  if (variants.empty()) fail_invalid("config: empty variant list");
  if (algorithms.empty()) fail_invalid("config: empty algorithm list");
  if (!(plan.test_fraction > 0.0 && plan.test_fraction < 1.0))
    fail_invalid("config: test_fraction must be in (0,1)");
  if (plan.fold_count < 2) fail_invalid("config: folds must be >= 2");
  if (plan.repeat_count < 1) fail_invalid("config: runs must be >= 1");
  if (!(sparse_threshold >= 0.0 && sparse_threshold <= 1.0))
    fail_invalid("config: sparse_threshold must be in [0,1]");
  if (c_grid.empty()) fail_invalid("config: empty C grid");
  if (gamma_scale.empty()) fail_invalid("config: empty gamma grid");
  for (double c : c_grid)
    if (!(c > 0.0)) fail_invalid("config: C values must be positive");
  for (double g : gamma_scale)
    if (!(g > 0.0)) fail_invalid("config: gamma scales must be positive");
  if (!(elastic_net_alpha > 0.0 && elastic_net_alpha < 1.0))
    fail_invalid("config: elastic_net_alpha must be in (0,1)");
  if (adasyn.k < 1) fail_invalid("config: adasyn_k must be >= 1");
  if (!(adasyn.beta > 0.0 && adasyn.beta <= 1.0))
    fail_invalid("config: adasyn_beta must be in (0,1]");
  if (jobs < 1) fail_invalid("config: jobs must be >= 1");
  for (const auto& f : formats)
    if (f != "csv" && f != "jsonl" && f != "table")
      fail_invalid("config: unknown output format '" + f + "'");
}

namespace {

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : s) {
    if (ch == ',') {
      out.push_back(trim(cur));
      cur.clear();
    } else {
      cur += ch;
    }
  }
  out.push_back(trim(cur));
  out.erase(std::remove(out.begin(), out.end(), std::string()), out.end());
  return out;
}

double parse_double(const std::string& v, const std::string& where) {
  try {
    std::size_t pos = 0;
    double d = std::stod(v, &pos);
    if (pos != v.size() || !std::isfinite(d)) throw std::invalid_argument(v);
    return d;
  } catch (...) {
    fail_parse(where + ": malformed number '" + v + "'");
  }
}

long parse_long(const std::string& v, const std::string& where) {
  try {
    std::size_t pos = 0;
    long d = std::stol(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return d;
  } catch (...) {
    fail_parse(where + ": malformed integer '" + v + "'");
  }
}

bool parse_bool(const std::string& v, const std::string& where) {
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  fail_parse(where + ": malformed boolean '" + v + "'");
}

}  // namespace

ExperimentConfig parse_experiment_config(const std::string& text, const std::string& origin) {
  ExperimentConfig cfg;
  std::istringstream in(text);
  std::string line, section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string s = trim(line);
    if (s.empty() || s[0] == '#' || s[0] == ';') continue;
    std::string where = origin + ":" + std::to_string(lineno);
    if (s.front() == '[' && s.back() == ']') {
      section = trim(s.substr(1, s.size() - 2));
      if (section != "data" && section != "synth" && section != "experiment" &&
          section != "grids" && section != "output")
        fail_parse(where + ": unknown section [" + section + "]");
      continue;
    }
    auto eq = s.find('=');
    if (eq == std::string::npos) fail_parse(where + ": expected key = value");
    std::string key = trim(s.substr(0, eq));
    std::string val = trim(s.substr(eq + 1));
    if (section.empty()) fail_parse(where + ": key outside any section");

    if (section == "data") {
      if (key == "schema") cfg.schema_path = val;
      else if (key == "cohort") cfg.cohort_path = val;
      else if (key == "factor_table") cfg.factor_table_path = val;
      else fail_parse(where + ": unknown key '" + key + "' in [data]");
    } else if (section == "synth") {
      if (key == "n_patients") cfg.synth.n_patients = static_cast<std::size_t>(parse_long(val, where));
      else if (key == "overall_sptb") cfg.synth.overall_sptb = parse_double(val, where);
      else if (key == "nulliparous_sptb") cfg.synth.nulliparous_sptb = parse_double(val, where);
      else if (key == "multiparous_sptb") cfg.synth.multiparous_sptb = parse_double(val, where);
      else if (key == "indicated_ptb") cfg.synth.indicated_ptb = parse_double(val, where);
      else if (key == "nulliparous_fraction") cfg.synth.nulliparous_fraction = parse_double(val, where);
      else if (key == "dropout_t0") cfg.synth.dropout_t0 = parse_double(val, where);
      else if (key == "dropout_t1") cfg.synth.dropout_t1 = parse_double(val, where);
      else if (key == "missing_rate") cfg.synth.missing_rate = parse_double(val, where);
      else if (key == "seed") cfg.synth.seed = static_cast<std::uint64_t>(parse_long(val, where));
      else if (key.rfind("effect.", 0) == 0)
        cfg.synth.effect_sizes[key.substr(7)] = parse_double(val, where);
      else fail_parse(where + ": unknown key '" + key + "' in [synth]");
    } else if (section == "experiment") {
      if (key == "ticks") {
        cfg.ticks.clear();
        for (const auto& t : split_list(val)) cfg.ticks.push_back(parse_tick(t));
      } else if (key == "variants") {
        cfg.variants.clear();
        for (const auto& v : split_list(val)) cfg.variants.push_back(parse_variant(v));
      } else if (key == "algorithms") {
        cfg.algorithms.clear();
        for (const auto& a : split_list(val)) cfg.algorithms.push_back(parse_algorithm(a));
      } else if (key == "test_fraction") {
        cfg.plan.test_fraction = parse_double(val, where);
      } else if (key == "folds") {
        cfg.plan.fold_count = static_cast<int>(parse_long(val, where));
      } else if (key == "runs") {
        cfg.plan.repeat_count = static_cast<int>(parse_long(val, where));
      } else if (key == "seed") {
        cfg.seed = static_cast<std::uint64_t>(parse_long(val, where));
      } else if (key == "sparse_threshold") {
        cfg.sparse_threshold = parse_double(val, where);
      } else if (key == "resample.glm") {
        cfg.resample_glm = parse_bool(val, where);
      } else if (key == "resample.svm") {
        cfg.resample_svm = parse_bool(val, where);
      } else if (key == "adasyn_k") {
        cfg.adasyn.k = static_cast<int>(parse_long(val, where));
      } else if (key == "adasyn_beta") {
        cfg.adasyn.beta = parse_double(val, where);
      } else if (key == "elastic_net_alpha") {
        cfg.elastic_net_alpha = parse_double(val, where);
      } else if (key == "jobs") {
        cfg.jobs = static_cast<int>(parse_long(val, where));
      } else {
        fail_parse(where + ": unknown key '" + key + "' in [experiment]");
      }
    } else if (section == "grids") {
      if (key == "c") {
        cfg.c_grid.clear();
        for (const auto& c : split_list(val)) cfg.c_grid.push_back(parse_double(c, where));
      } else if (key == "gamma_scale") {
        cfg.gamma_scale.clear();
        for (const auto& g : split_list(val)) cfg.gamma_scale.push_back(parse_double(g, where));
      } else {
        fail_parse(where + ": unknown key '" + key + "' in [grids]");
      }
    } else {  // output
      if (key == "dir") cfg.out_dir = val;
      else if (key == "formats") cfg.formats = split_list(val);
      else fail_parse(where + ": unknown key '" + key + "' in [output]");
    }
  }
  cfg.plan.seed = cfg.seed;
  cfg.adasyn.seed = cfg.seed;
  cfg.validate();
  return cfg;
}

ExperimentConfig load_experiment_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail_io("cannot open config '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_experiment_config(buf.str(), path);
}

}  // namespace ptb
