#include "core/schema.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "core/error.hpp"

namespace ptb {

Tick parse_tick(const std::string& s) {
  if (s == "T0") return Tick::T0;
  if (s == "T1") return Tick::T1;
  if (s == "T3") return Tick::T3;
  fail_parse("unknown tick '" + s + "' (expected T0, T1 or T3)");
}

const char* tick_name(Tick t) {
  switch (t) {
    case Tick::T0: return "T0";
    case Tick::T1: return "T1";
    default: return "T3";
  }
}

void FeatureRegistry::add(const FeatureSpec& spec) {
  if (spec.name.empty()) fail_parse("feature with empty name");
  if (index_.count(spec.name)) fail_parse("duplicate feature name '" + spec.name + "'");
  if (spec.is_range_kind() && !(spec.min < spec.max))
    fail_parse("feature '" + spec.name + "': range requires min < max");
  if (spec.kind == FeatureKind::Categorical) {
    if (spec.levels.empty()) fail_parse("feature '" + spec.name + "': empty level list");
    for (std::size_t i = 0; i < spec.levels.size(); ++i)
      for (std::size_t j = i + 1; j < spec.levels.size(); ++j)
        if (spec.levels[i] == spec.levels[j])
          fail_parse("feature '" + spec.name + "': duplicate level '" + spec.levels[i] + "'");
  }
  // every group belongs to exactly one tick
  for (const auto& s : specs_)
    if (s.group == spec.group && s.tick != spec.tick)
      fail_parse("group '" + spec.group + "' declared at two different ticks");
  index_.emplace(spec.name, specs_.size());
  specs_.push_back(spec);
}

std::optional<std::size_t> FeatureRegistry::find(const std::string& name) const {
  auto it = index_.find(name);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::vector<std::size_t> FeatureRegistry::features_at(Tick tick) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < specs_.size(); ++i)
    if (static_cast<int>(specs_[i].tick) <= static_cast<int>(tick)) out.push_back(i);
  return out;
}

std::size_t FeatureRegistry::feature_count(Tick tick) const { return features_at(tick).size(); }

std::vector<std::string> FeatureRegistry::groups_at(Tick tick) const {
  std::vector<std::string> out;
  for (const auto& s : specs_) {
    if (static_cast<int>(s.tick) > static_cast<int>(tick)) continue;
    if (std::find(out.begin(), out.end(), s.group) == out.end()) out.push_back(s.group);
  }
  return out;
}

std::vector<std::size_t> FeatureRegistry::features_in_group(const std::string& group) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < specs_.size(); ++i)
    if (specs_[i].group == group) out.push_back(i);
  return out;
}

namespace {

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : s) {
    if (ch == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += ch;
    }
  }
  out.push_back(cur);
  return out;
}

std::optional<double> parse_number(const std::string& s) {
  std::string t = trim(s);
  if (t.empty()) return std::nullopt;
  char* end = nullptr;
  double v = std::strtod(t.c_str(), &end);
  if (end != t.c_str() + t.size()) return std::nullopt;
  if (!std::isfinite(v)) return std::nullopt;
  return v;
}

std::string unquote(const std::string& s) {
  if (s.size() >= 2 && ((s.front() == '"' && s.back() == '"') || (s.front() == '\'' && s.back() == '\'')))
    return s.substr(1, s.size() - 2);
  return s;
}

void parse_kind(const std::string& tok, FeatureSpec& spec, const std::string& where) {
  if (tok == "yesno") {
    spec.kind = FeatureKind::YesNo;
    return;
  }
  auto open = tok.find('(');
  if (open == std::string::npos || tok.back() != ')')
    fail_parse(where + ": unknown kind '" + tok + "'");
  std::string head = tok.substr(0, open);
  std::string body = tok.substr(open + 1, tok.size() - open - 2);
  if (head == "categorical") {
    spec.kind = FeatureKind::Categorical;
    for (const auto& level : split(body, ',')) {
      std::string l = trim(level);
      if (l.empty()) fail_parse(where + ": empty categorical level");
      spec.levels.push_back(unquote(l));
    }
  } else if (head == "numeric" || head == "ordinal") {
    spec.kind = head == "numeric" ? FeatureKind::Numeric : FeatureKind::Ordinal;
    auto parts = split(body, ',');
    if (parts.size() != 2) fail_parse(where + ": malformed range '" + tok + "'");
    auto lo = parse_number(parts[0]);
    auto hi = parse_number(parts[1]);
    if (!lo || !hi) fail_parse(where + ": malformed range '" + tok + "'");
    spec.min = *lo;
    spec.max = *hi;
  } else {
    fail_parse(where + ": unknown kind '" + tok + "'");
  }
}

void parse_policy(const std::string& tok, FeatureSpec& spec, const std::string& where) {
  if (tok == "mode") {
    spec.missing = MissingPolicy::Mode;
  } else if (tok == "mean") {
    spec.missing = MissingPolicy::Mean;
  } else if (tok == "drop") {
    spec.missing = MissingPolicy::Drop;
  } else if (tok.rfind("default=", 0) == 0) {
    spec.missing = MissingPolicy::Default;
    auto v = parse_number(tok.substr(8));
    if (!v) fail_parse(where + ": malformed default value '" + tok + "'");
    spec.default_value = *v;
  } else if (tok.rfind("derived=gain(", 0) == 0 && tok.back() == ')') {
    spec.missing = MissingPolicy::Derived;
    spec.derived_base = tok.substr(13, tok.size() - 14);
    if (spec.derived_base.empty()) fail_parse(where + ": derived rule needs a base feature");
  } else {
    fail_parse(where + ": unknown missing policy '" + tok + "'");
  }
}

void parse_replace(const std::string& tok, FeatureSpec& spec, const std::string& where) {
  // replace(TOKEN=VALUE,...)
  std::string body = tok.substr(8, tok.size() - 9);
  for (const auto& entry : split(body, ',')) {
    auto eq = entry.rfind('=');
    if (eq == std::string::npos) fail_parse(where + ": malformed replacement '" + entry + "'");
    std::string key = unquote(trim(entry.substr(0, eq)));
    auto v = parse_number(entry.substr(eq + 1));
    if (key.empty() || !v) fail_parse(where + ": malformed replacement '" + entry + "'");
    spec.replacements[key] = *v;
  }
}

}  // namespace

FeatureRegistry parse_schema_text(const std::string& text, const std::string& origin) {
  FeatureRegistry reg;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string stripped = trim(line);
    if (stripped.empty() || stripped[0] == '#') continue;
    std::string where = origin + ":" + std::to_string(lineno);

    std::istringstream fields(stripped);
    std::vector<std::string> toks;
    std::string tok;
    while (fields >> tok) toks.push_back(tok);
    if (toks.size() < 5) fail_parse(where + ": expected NAME GROUP TICK KIND POLICY");

    FeatureSpec spec;
    spec.name = toks[0];
    spec.group = toks[1];
    try {
      spec.tick = parse_tick(toks[2]);
      parse_kind(toks[3], spec, where);
      parse_policy(toks[4], spec, where);
      for (std::size_t i = 5; i < toks.size(); ++i) {
        if (toks[i].rfind("replace(", 0) == 0 && toks[i].back() == ')')
          parse_replace(toks[i], spec, where);
        else
          fail_parse(where + ": unexpected token '" + toks[i] + "'");
      }
      reg.add(spec);
    } catch (const Error& e) {
      if (std::string(e.what()).rfind(origin, 0) == 0) throw;
      fail_parse(where + ": " + e.what());
    }
  }
  return reg;
}

FeatureRegistry load_schema(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail_io("cannot open schema descriptor '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_schema_text(buf.str(), path);
}

std::string schema_to_text(const FeatureRegistry& registry) {
  std::ostringstream out;
  out << "# NAME GROUP TICK KIND POLICY [replace(...)]\n";
  for (std::size_t i = 0; i < registry.size(); ++i) {
    const FeatureSpec& s = registry.at(i);
    out << s.name << " " << s.group << " " << tick_name(s.tick) << " ";
    switch (s.kind) {
      case FeatureKind::YesNo: out << "yesno"; break;
      case FeatureKind::Categorical: {
        out << "categorical(";
        for (std::size_t j = 0; j < s.levels.size(); ++j) out << (j ? "," : "") << s.levels[j];
        out << ")";
        break;
      }
      case FeatureKind::Numeric: out << "numeric(" << s.min << "," << s.max << ")"; break;
      case FeatureKind::Ordinal: out << "ordinal(" << s.min << "," << s.max << ")"; break;
    }
    out << " ";
    switch (s.missing) {
      case MissingPolicy::Mode: out << "mode"; break;
      case MissingPolicy::Mean: out << "mean"; break;
      case MissingPolicy::Drop: out << "drop"; break;
      case MissingPolicy::Default: out << "default=" << s.default_value; break;
      case MissingPolicy::Derived: out << "derived=gain(" << s.derived_base << ")"; break;
    }
    if (!s.replacements.empty()) {
      out << " replace(";
      bool first = true;
      for (const auto& [k, v] : s.replacements) {
        out << (first ? "" : ",") << k << "=" << v;
        first = false;
      }
      out << ")";
    }
    out << "\n";
  }
  return out.str();
}

namespace {

// strips one leading comparison marker; returns the marker kind
enum class Extreme { None, AtMost, AtLeast, Below, Above };

Extreme strip_extreme(std::string& t) {
  auto starts = [&](const char* p) { return t.rfind(p, 0) == 0; };
  if (starts("<=")) { t = t.substr(2); return Extreme::AtMost; }
  if (starts(">=")) { t = t.substr(2); return Extreme::AtLeast; }
  if (starts("\xE2\x89\xA4")) { t = t.substr(3); return Extreme::AtMost; }   // ≤
  if (starts("\xE2\x89\xA5")) { t = t.substr(3); return Extreme::AtLeast; }  // ≥
  if (starts("<")) { t = t.substr(1); return Extreme::Below; }
  if (starts(">")) { t = t.substr(1); return Extreme::Above; }
  return Extreme::None;
}

}  // namespace

std::optional<double> normalize_token(const FeatureSpec& spec, const std::string& token,
                                      bool strict) {
  std::string t = trim(token);
  if (t.empty()) return std::nullopt;  // MISSING

  auto rep = spec.replacements.find(t);
  if (rep != spec.replacements.end()) return rep->second;

  auto unknown = [&]() -> std::optional<double> {
    if (strict)
      fail_parse("feature '" + spec.name + "': unknown token '" + token + "'");
    return std::nullopt;
  };

  switch (spec.kind) {
    case FeatureKind::YesNo: {
      if (t == "1" || t == "yes" || t == "Yes" || t == "Y" || t == "y") return 1.0;
      if (t == "0" || t == "no" || t == "No" || t == "N" || t == "n") return 0.0;
      return unknown();
    }
    case FeatureKind::Categorical: {
      for (std::size_t i = 0; i < spec.levels.size(); ++i)
        if (spec.levels[i] == t) return static_cast<double>(i + 1);
      return unknown();
    }
    case FeatureKind::Numeric:
    case FeatureKind::Ordinal: {
      std::string body = t;
      Extreme ext = strip_extreme(body);
      auto clamp = [&](double v) { return std::min(spec.max, std::max(spec.min, v)); };
      if (ext != Extreme::None) {
        auto v = parse_number(body);
        if (!v) return unknown();
        bool ordinal = spec.kind == FeatureKind::Ordinal;
        switch (ext) {
          case Extreme::AtMost:
          case Extreme::AtLeast: return clamp(*v);
          case Extreme::Below: return clamp(ordinal ? *v - 1 : *v);
          case Extreme::Above: return clamp(ordinal ? *v + 1 : *v);
          default: break;
        }
      }
      if (auto v = parse_number(body)) return clamp(*v);
      // "a-b" interval token -> midpoint
      auto dash = body.find('-', 1);
      if (dash != std::string::npos) {
        auto lo = parse_number(body.substr(0, dash));
        auto hi = parse_number(body.substr(dash + 1));
        if (lo && hi) return clamp((*lo + *hi) / 2.0);
      }
      return unknown();
    }
  }
  return unknown();
}

}  // namespace ptb
