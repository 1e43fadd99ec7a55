#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

namespace ptb {

enum class Tick { T0 = 0, T1 = 1, T3 = 2 };

Tick parse_tick(const std::string& s);
const char* tick_name(Tick t);

enum class FeatureKind { YesNo, Categorical, Numeric, Ordinal };
enum class MissingPolicy { Default, Mode, Mean, Derived, Drop };

/// Metadata for one raw feature as declared in the schema descriptor.
struct FeatureSpec {
  std::string name;
  std::string group;
  Tick tick = Tick::T0;
  FeatureKind kind = FeatureKind::YesNo;
  std::vector<std::string> levels;  // categorical only
  double min = 0.0;                 // numeric/ordinal
  double max = 0.0;
  MissingPolicy missing = MissingPolicy::Mode;
  double default_value = 0.0;       // Default policy
  std::string derived_base;         // Derived policy: feature supplying the base value
  std::map<std::string, double> replacements;  // unusual token -> value

  bool is_range_kind() const { return kind == FeatureKind::Numeric || kind == FeatureKind::Ordinal; }
};

/// Ordered collection of feature specs; declaration order is the canonical order.
class FeatureRegistry {
 public:
  void add(const FeatureSpec& spec);

  std::size_t size() const { return specs_.size(); }
  const FeatureSpec& at(std::size_t i) const { return specs_[i]; }
  std::optional<std::size_t> find(const std::string& name) const;

  // Features visible at a tick (cumulative: tick <= requested), declaration order.
  std::vector<std::size_t> features_at(Tick tick) const;
  std::size_t feature_count(Tick tick) const;

  std::vector<std::string> groups_at(Tick tick) const;
  std::vector<std::size_t> features_in_group(const std::string& group) const;

 private:
  std::vector<FeatureSpec> specs_;
  std::unordered_map<std::string, std::size_t> index_;
};

/// Parses the flat schema descriptor (one feature per line). Throws Error::Parse
/// with the offending line number on malformed input.
FeatureRegistry load_schema(const std::string& path);
FeatureRegistry parse_schema_text(const std::string& text, const std::string& origin = "<memory>");

/// Renders a registry back to descriptor text (round-trips through the parser).
std::string schema_to_text(const FeatureRegistry& registry);

/// Converts one raw cell token to its numeric value under the feature's rules:
/// yes/no to 1/0, categorical to the 1-based level ordinal, replacement map,
/// clamped extremes for range-coded tokens. Empty token means MISSING and maps
/// to nullopt. Unknown tokens map to nullopt when strict is false, otherwise
/// raise a parse error naming the feature and token.
std::optional<double> normalize_token(const FeatureSpec& spec, const std::string& token,
                                      bool strict);

}  // namespace ptb
