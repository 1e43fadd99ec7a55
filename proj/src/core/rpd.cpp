#include "core/rpd.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

#include "core/error.hpp"

namespace ptb {

RpdCategory parse_rpd_category(const std::string& s) {
  if (s == "socioeconomic") return RpdCategory::Socioeconomic;
  if (s == "past_history") return RpdCategory::PastHistory;
  if (s == "daily_habits") return RpdCategory::DailyHabits;
  if (s == "current_pregnancy") return RpdCategory::CurrentPregnancy;
  fail_parse("unknown RPD category '" + s + "'");
}

const char* rpd_category_name(RpdCategory c) {
  switch (c) {
    case RpdCategory::Socioeconomic: return "socioeconomic";
    case RpdCategory::PastHistory: return "past_history";
    case RpdCategory::DailyHabits: return "daily_habits";
    default: return "current_pregnancy";
  }
}

// ---- predicate grammar -----------------------------------------------------
//
//   expr       := term ('or' term)*
//   term       := atom ('and' atom)*
//   atom       := '(' expr ')' | comparison
//   comparison := operand op number
//   operand    := NAME | NAME '-' NAME
//   op         := == != < <= > >=
//
// A comparison whose referenced values are MISSING evaluates to false.

struct PredicateNode {
  enum class Kind { And, Or, Compare } kind = Kind::Compare;
  std::vector<PredicatePtr> children;  // And / Or

  // Compare
  std::size_t feature_a = 0;
  bool has_b = false;
  std::size_t feature_b = 0;  // operand = a - b when present
  enum class Op { Eq, Ne, Lt, Le, Gt, Ge } op = Op::Eq;
  double value = 0.0;
};

namespace {

struct Token {
  enum class Kind { Name, Number, Op, LParen, RParen, And, Or, Minus, End } kind;
  std::string text;
  double number = 0.0;
};

class Lexer {
 public:
  Lexer(const std::string& s, const std::string& where) : s_(s), where_(where) { advance(); }

  const Token& peek() const { return cur_; }
  Token take() {
    Token t = cur_;
    advance();
    return t;
  }
  const std::string& where() const { return where_; }

 private:
  void advance() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    if (pos_ >= s_.size()) {
      cur_ = {Token::Kind::End, ""};
      return;
    }
    char c = s_[pos_];
    if (c == '(') { cur_ = {Token::Kind::LParen, "("}; ++pos_; return; }
    if (c == ')') { cur_ = {Token::Kind::RParen, ")"}; ++pos_; return; }
    if (c == '-' ) {
      // minus binds as the operand subtraction unless it starts a number
      if (pos_ + 1 < s_.size() && (std::isdigit(static_cast<unsigned char>(s_[pos_ + 1])) || s_[pos_ + 1] == '.')) {
        std::size_t start = pos_++;
        while (pos_ < s_.size() && (std::isdigit(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '.')) ++pos_;
        cur_ = {Token::Kind::Number, s_.substr(start, pos_ - start)};
        cur_.number = std::stod(cur_.text);
        return;
      }
      cur_ = {Token::Kind::Minus, "-"};
      ++pos_;
      return;
    }
    if (c == '=' || c == '!' || c == '<' || c == '>') {
      std::size_t start = pos_++;
      if (pos_ < s_.size() && s_[pos_] == '=') ++pos_;
      cur_ = {Token::Kind::Op, s_.substr(start, pos_ - start)};
      return;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      std::size_t start = pos_;
      while (pos_ < s_.size() && (std::isdigit(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '.')) ++pos_;
      cur_ = {Token::Kind::Number, s_.substr(start, pos_ - start)};
      cur_.number = std::stod(cur_.text);
      return;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t start = pos_;
      while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
      std::string word = s_.substr(start, pos_ - start);
      if (word == "and") cur_ = {Token::Kind::And, word};
      else if (word == "or") cur_ = {Token::Kind::Or, word};
      else cur_ = {Token::Kind::Name, word};
      return;
    }
    fail_parse(where_ + ": unexpected character '" + std::string(1, c) + "' in predicate");
  }

  std::string s_;
  std::string where_;
  std::size_t pos_ = 0;
  Token cur_{Token::Kind::End, ""};
};

class PredicateParser {
 public:
  PredicateParser(Lexer& lex, const FeatureRegistry& reg) : lex_(lex), reg_(reg) {}

  PredicatePtr parse() {
    auto e = expr();
    if (lex_.peek().kind != Token::Kind::End)
      fail_parse(lex_.where() + ": trailing tokens in predicate");
    return e;
  }

 private:
  PredicatePtr expr() {
    auto node = term();
    if (lex_.peek().kind != Token::Kind::Or) return node;
    auto out = std::make_shared<PredicateNode>();
    out->kind = PredicateNode::Kind::Or;
    out->children.push_back(node);
    while (lex_.peek().kind == Token::Kind::Or) {
      lex_.take();
      out->children.push_back(term());
    }
    return out;
  }

  PredicatePtr term() {
    auto node = atom();
    if (lex_.peek().kind != Token::Kind::And) return node;
    auto out = std::make_shared<PredicateNode>();
    out->kind = PredicateNode::Kind::And;
    out->children.push_back(node);
    while (lex_.peek().kind == Token::Kind::And) {
      lex_.take();
      out->children.push_back(atom());
    }
    return out;
  }

  PredicatePtr atom() {
    if (lex_.peek().kind == Token::Kind::LParen) {
      lex_.take();
      auto e = expr();
      if (lex_.peek().kind != Token::Kind::RParen)
        fail_parse(lex_.where() + ": expected ')' in predicate");
      lex_.take();
      return e;
    }
    return comparison();
  }

  PredicatePtr comparison() {
    auto node = std::make_shared<PredicateNode>();
    node->kind = PredicateNode::Kind::Compare;
    node->feature_a = feature();
    if (lex_.peek().kind == Token::Kind::Minus) {
      lex_.take();
      node->has_b = true;
      node->feature_b = feature();
    }
    Token op = lex_.take();
    if (op.kind != Token::Kind::Op)
      fail_parse(lex_.where() + ": expected comparison operator, got '" + op.text + "'");
    if (op.text == "==" || op.text == "=") node->op = PredicateNode::Op::Eq;
    else if (op.text == "!=") node->op = PredicateNode::Op::Ne;
    else if (op.text == "<") node->op = PredicateNode::Op::Lt;
    else if (op.text == "<=") node->op = PredicateNode::Op::Le;
    else if (op.text == ">") node->op = PredicateNode::Op::Gt;
    else if (op.text == ">=") node->op = PredicateNode::Op::Ge;
    else fail_parse(lex_.where() + ": unknown operator '" + op.text + "'");
    Token num = lex_.take();
    if (num.kind != Token::Kind::Number)
      fail_parse(lex_.where() + ": expected number, got '" + num.text + "'");
    node->value = num.number;
    return node;
  }

  std::size_t feature() {
    Token t = lex_.take();
    if (t.kind != Token::Kind::Name)
      fail_parse(lex_.where() + ": expected feature name, got '" + t.text + "'");
    auto id = reg_.find(t.text);
    if (!id) fail_parse(lex_.where() + ": predicate references unknown feature '" + t.text + "'");
    return *id;
  }

  Lexer& lex_;
  const FeatureRegistry& reg_;
};

void collect_features(const PredicatePtr& node, std::vector<std::size_t>& out) {
  if (!node) return;
  if (node->kind == PredicateNode::Kind::Compare) {
    out.push_back(node->feature_a);
    if (node->has_b) out.push_back(node->feature_b);
  } else {
    for (const auto& c : node->children) collect_features(c, out);
  }
}

bool eval_predicate(const PredicateNode& node, const Patient& patient,
                    const FeatureRegistry& registry) {
  switch (node.kind) {
    case PredicateNode::Kind::And:
      for (const auto& c : node.children)
        if (!eval_predicate(*c, patient, registry)) return false;
      return true;
    case PredicateNode::Kind::Or:
      for (const auto& c : node.children)
        if (eval_predicate(*c, patient, registry)) return true;
      return false;
    case PredicateNode::Kind::Compare: {
      auto va = normalize_token(registry.at(node.feature_a), patient.cells[node.feature_a], false);
      if (!va) return false;  // a factor cannot be asserted without evidence
      double lhs = *va;
      if (node.has_b) {
        auto vb = normalize_token(registry.at(node.feature_b), patient.cells[node.feature_b], false);
        if (!vb) return false;
        lhs -= *vb;
      }
      switch (node.op) {
        case PredicateNode::Op::Eq: return lhs == node.value;
        case PredicateNode::Op::Ne: return lhs != node.value;
        case PredicateNode::Op::Lt: return lhs < node.value;
        case PredicateNode::Op::Le: return lhs <= node.value;
        case PredicateNode::Op::Gt: return lhs > node.value;
        case PredicateNode::Op::Ge: return lhs >= node.value;
      }
      return false;
    }
  }
  return false;
}

std::string trim_copy(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

}  // namespace

RpdTable parse_factor_table_text(const std::string& text, const FeatureRegistry& registry,
                                 const std::string& origin) {
  RpdTable table;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string stripped = trim_copy(line);
    if (stripped.empty() || stripped[0] == '#') continue;
    std::string where = origin + ":" + std::to_string(lineno);

    std::vector<std::string> cols;
    std::string cur;
    for (char ch : stripped) {
      if (ch == '|') {
        cols.push_back(trim_copy(cur));
        cur.clear();
      } else {
        cur += ch;
      }
    }
    cols.push_back(trim_copy(cur));
    if (cols.size() != 5)
      fail_parse(where + ": expected name | category | points | available_from | predicate");

    RpdFactor factor;
    factor.name = cols[0];
    factor.category = parse_rpd_category(cols[1]);
    try {
      factor.points = std::stoi(cols[2]);
    } catch (...) {
      fail_parse(where + ": malformed points '" + cols[2] + "'");
    }
    if (factor.points < 0) fail_parse(where + ": points must be nonnegative");

    factor.predicate_text = cols[4];
    if (cols[4] == "N/A") {
      factor.discounted = true;
    } else {
      Lexer lex(cols[4], where);
      PredicateParser parser(lex, registry);
      factor.predicate = parser.parse();
    }

    if (cols[3] == "auto") {
      Tick latest = Tick::T0;
      std::vector<std::size_t> feats;
      collect_features(factor.predicate, feats);
      for (std::size_t f : feats)
        if (static_cast<int>(registry.at(f).tick) > static_cast<int>(latest))
          latest = registry.at(f).tick;
      factor.available_from = latest;
    } else {
      factor.available_from = parse_tick(cols[3]);
    }
    table.factors.push_back(std::move(factor));
  }
  return table;
}

RpdTable load_factor_table(const std::string& path, const FeatureRegistry& registry) {
  std::ifstream in(path);
  if (!in) fail_io("cannot open factor table '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_factor_table_text(buf.str(), registry, path);
}

const char* default_factor_table_text() {
  // Creasy point table with its MFMU feature mapping; N/A rows are factors
  // discounted as no longer prevalent or unavailable in the dataset.
  return R"(# name | category | points | available_from | predicate
two_children_at_home          | socioeconomic     | 1  | auto | BPKIDS >= 2
low_ses                       | socioeconomic     | 1  | auto | BPINCOME == 1 and (SCHOOLYR == 13 or SCHOOLYR == 14)
younger_than_20               | socioeconomic     | 2  | auto | AGEMOM < 20 and AGEMOM != 18
older_than_40                 | socioeconomic     | 2  | auto | AGEMOM == 40
single_parent                 | socioeconomic     | 2  | auto | BPMARITL == 2 or BPMARITL == 3
very_low_ses                  | socioeconomic     | 3  | auto | BPPHONE == 0 and BPCAR == 0 and BPINCOME == 1 and BPWORK == 0 and SCHOOLYR < 13
shorter_than_150cm            | socioeconomic     | 3  | auto | HEIGHT < 59
lighter_than_45kg             | socioeconomic     | 3  | auto | WGTPRE < 45
younger_than_18               | socioeconomic     | 4  | auto | AGEMOM == 18
one_abortion                  | past_history      | 1  | auto | BPINDUCE == 1
under_1yr_since_last_birth    | past_history      | 1  | auto | LASTPREG == 0
two_abortions                 | past_history      | 2  | auto | BPINDUCE == 2
three_abortions               | past_history      | 3  | auto | BPINDUCE > 2
pyelonephritis                | past_history      | 4  | auto | BPINFEC == 1 and PYELO == 1
uterine_anomaly               | past_history      | 5  | auto | BPFIBR == 1 or BPLOWER == 2
second_trimester_abortion     | past_history      | 5  | auto | SECAB > 0
des_exposure                  | past_history      | 5  | T0   | N/A
premature_delivery            | past_history      | 10 | auto | PRETERM == 1
repeated_2nd_trim_abortion    | past_history      | 10 | T0   | N/A
work_outside_home             | daily_habits      | 1  | auto | BPJOB == 1
over_10_cigarettes_per_day    | daily_habits      | 2  | auto | BPSMOKE == 1 and CIGSPRE >= 10
heavy_work                    | daily_habits      | 3  | T0   | N/A
long_tiring_trip              | daily_habits      | 3  | T0   | N/A
unusual_fatigue               | current_pregnancy | 1  | auto | BPSTAND == 1 or BPBREAK == 0 or BPVIBES == 1 or BPHRS > 50
under_13kg_gain_by_32wk       | current_pregnancy | 2  | auto | WEIGHTV3 - WEIGHTV1 < 13
albuminuria                   | current_pregnancy | 2  | auto | BPURINE > 0
hypertension                  | current_pregnancy | 2  | auto | BPHYPER == 1
bacteriuria                   | current_pregnancy | 2  | auto | BACTER == 1
breech_at_32wk                | current_pregnancy | 3  | T0   | N/A
weight_loss_of_2kg            | current_pregnancy | 3  | auto | WEIGHTV3 - WEIGHTV1 < -2
head_engaged                  | current_pregnancy | 3  | T0   | N/A
febrile_illness               | current_pregnancy | 3  | auto | HERPES == 1 or VHERPES == 1 or CYS == 1 or VCYS == 1
metrorrhagia_after_12wk       | current_pregnancy | 4  | auto | BPVAG2ND == 1 or PERBLD == 1
effacement                    | current_pregnancy | 4  | T0   | N/A
dilatation                    | current_pregnancy | 4  | auto | BPCRVLT < 25
uterine_irritability          | current_pregnancy | 4  | T0   | N/A
placenta_previa               | current_pregnancy | 5  | T0   | N/A
hydramnios                    | current_pregnancy | 5  | auto | OLIGO == 1
twins                         | current_pregnancy | 10 | T0   | N/A
abdominal_surgery             | current_pregnancy | 10 | auto | BPABD == 1
)";
}

RpdTable default_factor_table(const FeatureRegistry& registry) {
  return parse_factor_table_text(default_factor_table_text(), registry, "<built-in>");
}

RpdAssessment score_patient(const Patient& patient, Tick tick, const RpdTable& table,
                            const FeatureRegistry& registry) {
  RpdAssessment out;
  for (const RpdFactor& factor : table.factors) {
    if (factor.discounted) continue;
    if (static_cast<int>(factor.available_from) > static_cast<int>(tick)) continue;
    if (eval_predicate(*factor.predicate, patient, registry)) {
      out.score += factor.points;
      out.triggered.push_back(factor.name);
    }
  }
  return out;
}

RiskBand classify_cutoff(int score, int cutoff) {
  if (cutoff <= 0) fail_invalid("classify_cutoff: cutoff must be positive");
  return score >= cutoff ? RiskBand::High : RiskBand::Low;
}

RiskBand classify_original(int score) {
  if (score < 0) fail_invalid("classify_original: score must be nonnegative");
  if (score <= 5) return RiskBand::Low;
  if (score <= 9) return RiskBand::Medium;
  return RiskBand::High;
}

}  // namespace ptb
