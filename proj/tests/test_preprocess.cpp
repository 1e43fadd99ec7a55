#include "doctest.h"

#include <cmath>

#include "core/cohort.hpp"
#include "core/error.hpp"
#include "core/preprocess.hpp"
#include "core/schema.hpp"

using namespace ptb;

namespace {

const char* kSchema = R"(
WGT   body  T0 numeric(35,150) mean
RACE  demo  T0 categorical(white,black,hispanic,other) mode
SMOKE habit T0 yesno default=0
FRAG  lab   T0 numeric(0,9) drop
V1    gain  T1 numeric(35,160) derived=gain(WGT)
)";

FeatureRegistry fixture() { return parse_schema_text(kSchema, "fixture"); }

Cohort make_cohort(const std::vector<std::vector<std::string>>& rows) {
  Cohort cohort;
  for (const auto& cells : rows) {
    Patient p;
    p.cells = cells;
    p.outcome = Outcome::Fullterm;
    cohort.patients.push_back(p);
  }
  return cohort;
}

}  // namespace

TEST_SUITE_BEGIN("preprocess");

TEST_CASE("encoding produces one-hot blocks and a missingness mask") {
  FeatureRegistry reg = fixture();
  Cohort cohort = make_cohort({
      {"80", "black", "1", "3", "90"},
      {"", "other", "", "", ""},
  });
  EncodedMatrix m = encode(slice_by_tick(cohort, reg, Tick::T1), reg);

  // WGT, RACE_1..4, SMOKE, FRAG, V1
  REQUIRE(m.n_cols == 8);
  CHECK(m.columns[1].name == "RACE_1");
  CHECK(m.columns[4].name == "RACE_4");
  CHECK(m.at(0, 0) == 80.0);
  // "black" is level 2 of 4 -> (0,1,0,0)
  CHECK(m.at(0, 1) == 0.0);
  CHECK(m.at(0, 2) == 1.0);
  CHECK(m.at(0, 3) == 0.0);
  CHECK(m.at(0, 4) == 0.0);
  CHECK(m.at(1, 4) == 1.0);
  CHECK(m.is_missing(1, 0));
  CHECK(m.is_missing(1, 5));  // SMOKE
  CHECK_FALSE(m.is_missing(0, 5));
}

TEST_CASE("encoding rejects unknown tokens, naming the feature") {
  FeatureRegistry reg = fixture();
  Cohort cohort = make_cohort({{"80", "purple", "1", "3", "90"}});
  try {
    encode(slice_by_tick(cohort, reg, Tick::T1), reg);
    FAIL("expected a parse error");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("RACE") != std::string::npos);
    CHECK(std::string(e.what()).find("purple") != std::string::npos);
  }
}

TEST_CASE("sparse columns and incomplete drop-policy columns are removed") {
  FeatureRegistry reg = fixture();
  // WGT missing in 2 of 3 rows (0.67 > 0.5); FRAG has one missing cell
  Cohort cohort = make_cohort({
      {"", "white", "1", "3", "90"},
      {"", "white", "0", "", "91"},
      {"80", "white", "1", "4", "92"},
  });
  EncodedMatrix m = encode(slice_by_tick(cohort, reg, Tick::T1), reg);

  DropReport report;
  EncodedMatrix kept = drop_sparse(m, 0.5, &report);
  CHECK(report.dropped == std::vector<std::string>{"WGT", "FRAG"});
  CHECK(kept.n_cols == m.n_cols - 2);
  CHECK(kept.columns[0].name == "RACE_1");

  // statistics restricted to the given rows: over row 2 alone nothing is sparse
  DropReport r2;
  EncodedMatrix kept2 = drop_sparse(m, 0.5, &r2, {2});
  CHECK(r2.dropped.empty());
  CHECK(kept2.n_cols == m.n_cols);

  CHECK_THROWS_AS(drop_sparse(m, 0.0, nullptr), Error);
}

TEST_CASE("imputation fills by mean, mode, fixed default and derived gain") {
  FeatureRegistry reg = fixture();
  Cohort cohort = make_cohort({
      {"60", "white", "1", "1", "64"},    // gain 4
      {"80", "white", "", "2", "85"},     // gain 5
      {"100", "black", "0", "3", ""},     // V1 missing
      {"", "", "0", "4", "90"},           // WGT and RACE missing
  });
  EncodedMatrix m = encode(slice_by_tick(cohort, reg, Tick::T1), reg);
  ImputerState state = fit_imputer(m, {}, reg);
  impute(state, m);

  for (std::size_t r = 0; r < m.n_rows; ++r)
    for (std::size_t c = 0; c < m.n_cols; ++c) CHECK_FALSE(m.is_missing(r, c));

  CHECK(m.at(3, 0) == doctest::Approx(80.0));          // mean of 60,80,100
  CHECK(m.at(3, 1) == 1.0);                             // modal race is white
  CHECK(m.at(3, 2) == 0.0);
  CHECK(m.at(1, 5) == 0.0);                             // SMOKE default=0
  CHECK(m.at(2, 7) == doctest::Approx(100.0 + 4.5));    // base + mean gain
}

TEST_CASE("derived fill falls back to the column mean when the base is missing") {
  FeatureRegistry reg = fixture();
  Cohort cohort = make_cohort({
      {"60", "white", "1", "1", "64"},
      {"80", "white", "1", "2", "86"},
      {"", "white", "0", "3", ""},  // both WGT and V1 missing
  });
  EncodedMatrix m = encode(slice_by_tick(cohort, reg, Tick::T1), reg);
  // fit on the complete rows only; row 2 is imputed from their statistics
  ImputerState state = fit_imputer(m, {0, 1}, reg);
  impute(state, m);
  // WGT filled with the train mean 70, then V1 = filled base + mean gain 5?
  // no: the base cell was missing at fit time, so V1 uses its own mean 75
  CHECK(m.at(2, 0) == doctest::Approx(70.0));
  CHECK(m.at(2, 7) == doctest::Approx(75.0));
}

TEST_CASE("imputer statistics come from the training rows only") {
  FeatureRegistry reg = fixture();
  Cohort cohort = make_cohort({
      {"60", "white", "1", "1", "65"},
      {"", "white", "1", "2", "66"},
      {"900", "white", "1", "3", "67"},  // out-of-range value clamps to 150
  });
  EncodedMatrix m = encode(slice_by_tick(cohort, reg, Tick::T1), reg);
  ImputerState state = fit_imputer(m, {0}, reg);
  impute(state, m);
  CHECK(m.at(1, 0) == 60.0);  // train mean ignores the held-out row 2
}

TEST_CASE("imputation refuses a mismatched column layout") {
  FeatureRegistry reg = fixture();
  Cohort cohort = make_cohort({{"60", "white", "1", "1", "64"}});
  EncodedMatrix m = encode(slice_by_tick(cohort, reg, Tick::T1), reg);
  ImputerState state = fit_imputer(m, {}, reg);
  EncodedMatrix narrowed = drop_sparse(m, 1.0, nullptr);
  narrowed.columns.pop_back();
  narrowed.n_cols -= 1;
  CHECK_THROWS_AS(impute(state, narrowed), Error);
}

TEST_CASE("min-max scaling maps the train range onto the unit interval") {
  EncodedMatrix m;
  m.columns = {{"a", 0, -1, MissingPolicy::Mean}, {"b", 1, -1, MissingPolicy::Mean}};
  m.resize(4, 2);
  double vals[4][2] = {{10, 7}, {20, 7}, {30, 7}, {60, 7}};
  for (std::size_t r = 0; r < 4; ++r)
    for (std::size_t c = 0; c < 2; ++c) m.at(r, c) = vals[r][c];

  NormalizerState state = fit_normalizer(m, {0, 1, 2});
  normalize(state, m);

  CHECK(m.at(0, 0) == doctest::Approx(0.0));
  CHECK(m.at(1, 0) == doctest::Approx(0.5));
  CHECK(m.at(2, 0) == doctest::Approx(1.0));
  CHECK(m.at(3, 0) == doctest::Approx(1.0));  // out-of-range clamps
  for (std::size_t r = 0; r < 4; ++r) CHECK(m.at(r, 1) == 0.0);  // constant column
}

TEST_SUITE_END();
