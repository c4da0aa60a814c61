#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "atomnli/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"atomic-level natural language inference toolkit"};
  app.require_subcommand(1);

  atomnli::GlobalArgs global;
  app.add_option("--workdir", global.workdir, "Base directory for relative paths")
      ->capture_default_str();
  app.add_option("--config", global.config_path, "Run configuration (JSON)");

  std::string input;
  std::string output;

  auto* decompose = app.add_subcommand(
      "decompose", "Split SNLI-style pairs into atoms and print the atom-count histogram");
  decompose->add_option("--input", input, "SNLI-style JSON Lines input")->required();
  decompose->add_option("--output", output, "Grouped JSON Lines output")->required();

  auto* build =
      app.add_subcommand("build", "Run the construction pipelines described by the config");

  atomnli::EvalArgs eval_args;
  auto* eval = app.add_subcommand("eval", "Evaluate a classifier over a grouped test file");
  eval->add_option("--test", eval_args.test_path, "Grouped JSON Lines test file")->required();
  eval->add_option("--mode", eval_args.mode, "strict, sum or sentence")->capture_default_str();
  eval->add_flag("--compare", eval_args.compare, "Run all three modes side by side");
  eval->add_option("--output", eval_args.output_json, "Write the JSON report here");
  eval->add_option("--csv", eval_args.output_csv, "Write the CSV report here");

  atomnli::JudgeArgs judge_args;
  auto* judge = app.add_subcommand("judge", "Explain one premise/hypothesis pair atom by atom");
  judge->add_option("--premise", judge_args.premise, "Premise text")->required();
  judge->add_option("--hypothesis", judge_args.hypothesis, "Hypothesis text")->required();
  judge->add_option("--mode", judge_args.mode, "strict or sum")->capture_default_str();
  judge->add_flag("--json", judge_args.as_json, "Emit the verdict as JSON");

  std::string stats_output;
  auto* stats = app.add_subcommand("stats", "Report split statistics for a JSON Lines file");
  stats->add_option("--input", input, "Atomic or grouped JSON Lines file")->required();
  stats->add_option("--output", stats_output, "Write the stats JSON here");

  CLI11_PARSE(app, argc, argv);

  if (decompose->parsed()) {
    return atomnli::cmd_decompose(global, input, output, std::cout, std::cerr);
  }
  if (build->parsed()) {
    return atomnli::cmd_build(global, std::cout, std::cerr);
  }
  if (eval->parsed()) {
    return atomnli::cmd_eval(global, eval_args, std::cout, std::cerr);
  }
  if (judge->parsed()) {
    return atomnli::cmd_judge(global, judge_args, std::cout, std::cerr);
  }
  if (stats->parsed()) {
    return atomnli::cmd_stats(global, input, stats_output, std::cout, std::cerr);
  }
  return 1;
}
