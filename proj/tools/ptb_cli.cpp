// Command-line front end for the experiment runner. Links only the shared
// C API, keeping the binary a plain consumer of the library contract.
#include <cstdio>
#include <string>

#include "CLI11.hpp"
#include "ptb/ptb.h"

namespace {

int exit_code(ptb_status status) {
  switch (status) {
    case PTB_OK: return 0;
    case PTB_E_INVALID:
    case PTB_E_PARSE: return 1;
    default: return 2;
  }
}

int report(ptb_status status) {
  if (status != PTB_OK) std::fprintf(stderr, "error: %s\n", ptb_last_error());
  return exit_code(status);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Preterm-birth risk modeling pipeline"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(ptb_version()));

  int jobs = 0;
  long long seed = -1;
  app.add_option("--jobs", jobs, "Worker thread count");
  app.add_option("--seed", seed, "Override the configured seed");

  // run <config>
  auto* run = app.add_subcommand("run", "Run the configured experiments");
  std::string run_config, run_format;
  run->add_option("config", run_config, "Experiment config file")->required();
  run->add_option("--format", run_format, "Output formats (csv, jsonl, table)");

  // synth <config> -o dir
  auto* synth = app.add_subcommand("synth", "Generate a synthetic cohort");
  std::string synth_config, synth_out = ".";
  synth->add_option("config", synth_config, "Config file with a [synth] section")->required();
  synth->add_option("-o,--out", synth_out, "Output directory");

  // score-rpd <cohort.csv> --cutoff {7|13|original} --tick
  auto* score = app.add_subcommand("score-rpd", "Score a cohort with the point table");
  std::string score_csv, score_cutoff = "7", score_tick = "T0", score_format = "table";
  score->add_option("cohort", score_csv, "Cohort CSV file")->required();
  score->add_option("--cutoff", score_cutoff, "High-risk cutoff: 7, 13 or original")
      ->check(CLI::IsMember({"7", "13", "original"}));
  score->add_option("--tick", score_tick, "Measurement tick: T0, T1 or T3")
      ->check(CLI::IsMember({"T0", "T1", "T3"}));
  score->add_option("--format", score_format, "Output format")
      ->check(CLI::IsMember({"csv", "jsonl", "table"}));

  CLI11_PARSE(app, argc, argv);

  if (run->parsed()) {
    return report(ptb_run_config(run_config.c_str(), jobs, seed,
                                 run_format.empty() ? nullptr : run_format.c_str()));
  }
  if (synth->parsed()) {
    return report(ptb_synth_to_dir(synth_config.c_str(), synth_out.c_str(), seed));
  }
  // score-rpd
  int cutoff = score_cutoff == "original" ? 0 : std::stoi(score_cutoff);
  char* text = nullptr;
  ptb_status status = ptb_rpd_score_csv(score_csv.c_str(), cutoff, score_tick.c_str(),
                                        score_format.c_str(), &text);
  if (status == PTB_OK) {
    std::fputs(text, stdout);
    ptb_free(text);
  }
  return report(status);
}
