#include "core/preprocess.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>

#include "core/error.hpp"

namespace ptb {

namespace {

std::vector<std::size_t> all_rows(std::size_t n) {
  std::vector<std::size_t> rows(n);
  std::iota(rows.begin(), rows.end(), 0);
  return rows;
}

}  // namespace

EncodedMatrix encode(const RawView& view, const FeatureRegistry& registry) {
  EncodedMatrix m;
  // column layout: one column per yes/no-numeric-ordinal feature, k per categorical
  for (std::size_t fid : view.feature_ids) {
    const FeatureSpec& spec = registry.at(fid);
    if (spec.kind == FeatureKind::Categorical) {
      for (std::size_t l = 0; l < spec.levels.size(); ++l)
        m.columns.push_back({spec.name + "_" + std::to_string(l + 1), fid,
                             static_cast<int>(l + 1), spec.missing});
    } else {
      m.columns.push_back({spec.name, fid, -1, spec.missing});
    }
  }
  m.resize(view.rows(), m.columns.size());

  for (std::size_t r = 0; r < view.rows(); ++r) {
    const Patient& p = view.patient(r);
    std::size_t c = 0;
    for (std::size_t fid : view.feature_ids) {
      const FeatureSpec& spec = registry.at(fid);
      std::optional<double> v = normalize_token(spec, p.cells[fid], /*strict=*/true);
      if (spec.kind == FeatureKind::Categorical) {
        for (std::size_t l = 0; l < spec.levels.size(); ++l, ++c) {
          if (!v) {
            m.set_missing(r, c, true);
          } else {
            m.at(r, c) = (*v == static_cast<double>(l + 1)) ? 1.0 : 0.0;
          }
        }
      } else {
        if (!v)
          m.set_missing(r, c, true);
        else
          m.at(r, c) = *v;
        ++c;
      }
    }
  }
  return m;
}

EncodedMatrix drop_sparse(const EncodedMatrix& m, double threshold, DropReport* report,
                          const std::vector<std::size_t>& rows) {
  if (!(threshold > 0.0 && threshold <= 1.0)) fail_invalid("drop_sparse: threshold must be in (0,1]");
  const std::vector<std::size_t>& rr = rows.empty() && m.n_rows > 0 ? all_rows(m.n_rows) : rows;

  std::vector<bool> keep(m.n_cols, true);
  for (std::size_t c = 0; c < m.n_cols; ++c) {
    std::size_t miss = 0;
    for (std::size_t r : rr)
      if (m.is_missing(r, c)) ++miss;
    double frac = rr.empty() ? 0.0 : static_cast<double>(miss) / static_cast<double>(rr.size());
    if (frac > threshold) keep[c] = false;
    if (m.columns[c].policy == MissingPolicy::Drop && miss > 0) keep[c] = false;
  }
  if (report)
    for (std::size_t c = 0; c < m.n_cols; ++c)
      if (!keep[c]) report->dropped.push_back(m.columns[c].name);

  EncodedMatrix out;
  for (std::size_t c = 0; c < m.n_cols; ++c)
    if (keep[c]) out.columns.push_back(m.columns[c]);
  out.resize(m.n_rows, out.columns.size());
  std::size_t oc = 0;
  for (std::size_t c = 0; c < m.n_cols; ++c) {
    if (!keep[c]) continue;
    for (std::size_t r = 0; r < m.n_rows; ++r) {
      out.at(r, oc) = m.at(r, c);
      out.set_missing(r, oc, m.is_missing(r, c));
    }
    ++oc;
  }
  return out;
}

ImputerState fit_imputer(const EncodedMatrix& m, const std::vector<std::size_t>& train_rows,
                         const FeatureRegistry& registry) {
  const std::vector<std::size_t>& rows = train_rows.empty() ? all_rows(m.n_rows) : train_rows;
  ImputerState state;
  state.layout = m.columns;
  state.columns.resize(m.n_cols);

  // per-feature modal level for categorical one-hot groups
  std::map<std::size_t, int> modal_level;
  for (std::size_t c = 0; c < m.n_cols; ++c) {
    const ColumnInfo& col = m.columns[c];
    if (col.level != 1) continue;  // handle each categorical feature once
    const FeatureSpec& spec = registry.at(col.feature_id);
    std::vector<std::size_t> counts(spec.levels.size(), 0);
    for (std::size_t r : rows) {
      if (m.is_missing(r, c)) continue;
      // reconstruct the observed level from the one-hot block
      for (std::size_t l = 0; l < spec.levels.size(); ++l)
        if (m.at(r, c + l) == 1.0) {
          ++counts[l];
          break;
        }
    }
    std::size_t best = 0;
    for (std::size_t l = 1; l < counts.size(); ++l)
      if (counts[l] > counts[best]) best = l;
    modal_level[col.feature_id] = static_cast<int>(best + 1);
  }

  for (std::size_t c = 0; c < m.n_cols; ++c) {
    const ColumnInfo& col = m.columns[c];
    const FeatureSpec& spec = registry.at(col.feature_id);
    ImputerState::Column& sc = state.columns[c];

    std::size_t observed = 0;
    double sum = 0.0;
    for (std::size_t r : rows)
      if (!m.is_missing(r, c)) {
        ++observed;
        sum += m.at(r, c);
      }

    switch (spec.missing) {
      case MissingPolicy::Default:
        sc.rule = ImputerState::Rule::Fixed;
        if (col.level > 0)
          sc.value = (static_cast<double>(col.level) == spec.default_value) ? 1.0 : 0.0;
        else
          sc.value = spec.default_value;
        break;
      case MissingPolicy::Mode: {
        if (col.level > 0) {
          sc.rule = ImputerState::Rule::Mode;
          sc.mode_level = modal_level[col.feature_id];
          sc.value = (col.level == sc.mode_level) ? 1.0 : 0.0;
        } else {
          // mode of a binary/ordinal column: most frequent observed value
          if (observed == 0)
            fail_invalid("fit_imputer: column '" + col.name + "' has no observed values");
          std::map<double, std::size_t> counts;
          for (std::size_t r : rows)
            if (!m.is_missing(r, c)) ++counts[m.at(r, c)];
          auto best = counts.begin();
          for (auto it = counts.begin(); it != counts.end(); ++it)
            if (it->second > best->second) best = it;
          sc.rule = ImputerState::Rule::Fixed;
          sc.value = best->first;
        }
        break;
      }
      case MissingPolicy::Mean:
        if (observed == 0)
          fail_invalid("fit_imputer: column '" + col.name + "' has no observed values");
        sc.rule = ImputerState::Rule::Mean;
        sc.value = sum / static_cast<double>(observed);
        break;
      case MissingPolicy::Derived: {
        auto base_id = registry.find(spec.derived_base);
        if (!base_id)
          fail_invalid("fit_imputer: derived rule for '" + spec.name +
                       "' references unknown feature '" + spec.derived_base + "'");
        std::size_t base_col = m.n_cols;
        for (std::size_t bc = 0; bc < m.n_cols; ++bc)
          if (m.columns[bc].feature_id == *base_id && m.columns[bc].level <= 0) base_col = bc;
        if (base_col == m.n_cols)
          fail_invalid("fit_imputer: derived base column '" + spec.derived_base +
                       "' not present in matrix");
        double gain_sum = 0.0;
        std::size_t gain_n = 0;
        for (std::size_t r : rows)
          if (!m.is_missing(r, c) && !m.is_missing(r, base_col)) {
            gain_sum += m.at(r, c) - m.at(r, base_col);
            ++gain_n;
          }
        sc.rule = ImputerState::Rule::Derived;
        sc.base_col = base_col;
        sc.mean_gain = gain_n ? gain_sum / static_cast<double>(gain_n) : 0.0;
        // fallback fill when the base is missing too
        sc.value = observed ? sum / static_cast<double>(observed) : 0.0;
        break;
      }
      case MissingPolicy::Drop:
        // drop-policy columns that survived drop_sparse had no missing cells;
        // fall back to the column mean so impute() stays total
        sc.rule = ImputerState::Rule::Mean;
        sc.value = observed ? sum / static_cast<double>(observed) : 0.0;
        break;
    }
    if (!std::isfinite(sc.value) || !std::isfinite(sc.mean_gain))
      fail_runtime("fit_imputer: non-finite statistic for column '" + col.name + "'");
  }
  return state;
}

void impute(const ImputerState& state, EncodedMatrix& m) {
  if (state.layout.size() != m.n_cols) fail_invalid("impute: column-set mismatch");
  for (std::size_t c = 0; c < m.n_cols; ++c)
    if (state.layout[c].name != m.columns[c].name) fail_invalid("impute: column-set mismatch");

  for (std::size_t r = 0; r < m.n_rows; ++r) {
    for (std::size_t c = 0; c < m.n_cols; ++c) {
      if (!m.is_missing(r, c)) continue;
      const ImputerState::Column& sc = state.columns[c];
      switch (sc.rule) {
        case ImputerState::Rule::Mean:
        case ImputerState::Rule::Fixed:
        case ImputerState::Rule::Mode:
          m.at(r, c) = sc.value;
          break;
        case ImputerState::Rule::Derived:
          if (!m.is_missing(r, sc.base_col))
            m.at(r, c) = m.at(r, sc.base_col) + sc.mean_gain;
          else
            m.at(r, c) = sc.value;
          break;
      }
      m.set_missing(r, c, false);
    }
  }
}

NormalizerState fit_normalizer(const EncodedMatrix& m, const std::vector<std::size_t>& train_rows) {
  const std::vector<std::size_t>& rows = train_rows.empty() ? all_rows(m.n_rows) : train_rows;
  NormalizerState state;
  state.min.assign(m.n_cols, 0.0);
  state.max.assign(m.n_cols, 0.0);
  state.constant.assign(m.n_cols, 0);
  for (std::size_t c = 0; c < m.n_cols; ++c) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    for (std::size_t r : rows) {
      lo = std::min(lo, m.at(r, c));
      hi = std::max(hi, m.at(r, c));
    }
    if (rows.empty()) lo = hi = 0.0;
    state.min[c] = lo;
    state.max[c] = hi;
    if (lo == hi) state.constant[c] = 1;
  }
  return state;
}

void normalize(const NormalizerState& state, EncodedMatrix& m) {
  if (state.min.size() != m.n_cols) fail_invalid("normalize: column-set mismatch");
  for (std::size_t r = 0; r < m.n_rows; ++r) {
    for (std::size_t c = 0; c < m.n_cols; ++c) {
      if (state.constant[c]) {
        m.at(r, c) = 0.0;
        continue;
      }
      double v = (m.at(r, c) - state.min[c]) / (state.max[c] - state.min[c]);
      m.at(r, c) = std::clamp(v, 0.0, 1.0);
    }
  }
}

}  // namespace ptb
