#include <spdlog/sinks/stdout_sinks.h>
#include <spdlog/spdlog.h>

#include <CLI11.hpp>
#include <cstdlib>
#include <iostream>

#include "actint/errors.hpp"
#include "actint/version.hpp"
#include "commands.hpp"

namespace {

void setup_logging() {
  auto logger = spdlog::stderr_logger_st("actint");
  logger->set_pattern("%l: %v");
  spdlog::set_default_logger(logger);
  spdlog::set_level(spdlog::level::warn);
  if (const char* level = std::getenv("AI_LOG")) {
    const auto parsed = spdlog::level::from_str(level);
    // from_str maps unknown names to off; only accept a real match.
    if (parsed != spdlog::level::off || std::string(level) == "off") spdlog::set_level(parsed);
  }
}

}  // namespace

int main(int argc, char** argv) {
  using namespace actint::cli;
  setup_logging();

  CLI::App app{"Actionable interpretation of black-box time-series classifiers"};
  app.set_version_flag("--version", actint::kVersion);
  app.require_subcommand(1);

  Common common;
  std::uint64_t seed = 0;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", common.config_path, "Run configuration JSON")->check(CLI::ExistingFile);
    sub->add_option("--seed", seed, "Seed for every random choice");
    sub->add_option("--jobs", common.jobs, "Worker threads")->check(CLI::PositiveNumber);
  };

  SimulateOptions sim;
  auto* simulate = app.add_subcommand("simulate", "Generate a synthetic dataset with planted triggers");
  add_common(simulate);
  simulate->add_option("--scenario", sim.scenario_path, "Scenario spec JSON (default: built-in)")
      ->check(CLI::ExistingFile);
  simulate->add_option("--out", sim.out_dir, "Output directory")->required();
  simulate->add_flag("--csv", sim.csv, "Also export per-channel CSV files");

  IngestOptions ing;
  auto* ingest = app.add_subcommand("ingest", "Cut labeled windows out of per-channel CSV streams");
  add_common(ingest);
  ingest->add_option("--input", ing.input_dir, "Directory of <channel>.csv files and labels.csv")->required();
  ingest->add_option("--out", ing.out_path, "Dataset file to write")->required();

  TrainOptions tr;
  auto* train = app.add_subcommand("train", "Train the baseline classifier on a dataset's train split");
  add_common(train);
  train->add_option("--dataset", tr.dataset_path, "Dataset file")->required();
  train->add_option("--out", tr.out_path, "Model file to write")->required();

  InterpretOptions in;
  bool positives_only = true;
  auto* interpret = app.add_subcommand("interpret", "Rank predictors, extract behaviors and recommend actions");
  add_common(interpret);
  interpret->add_option("--dataset", in.dataset_path, "Dataset file");
  interpret->add_option("--observation", in.observation_path, "Single observation in wire JSON");
  interpret->add_option("--split", in.split, "Dataset split to interpret")->check(CLI::IsMember({"all", "train", "test"}));
  interpret->add_option("--model", in.model_path, "Baseline model file");
  interpret->add_option("--external-cmd", in.external_cmd, "External model command line");
  interpret->add_option("--rules", in.rules_path, "Rule file (default: built-in)");
  interpret->add_option("--repeats", in.repeats, "Shuffles per predictor")->check(CLI::PositiveNumber);
  auto* pos_flag = interpret->add_flag("--positives-only,!--all", positives_only,
                                       "Interpret only positive predictions (default) or all");
  interpret->add_option("--plots", in.plots_dir, "Directory for per-observation SVG plots");
  interpret->add_option("--out", in.out_path, "Report file (ndjson); default stdout");

  EvaluateOptions ev;
  auto* evaluate = app.add_subcommand("evaluate", "Stratified k-fold evaluation");
  add_common(evaluate);
  evaluate->add_option("--dataset", ev.dataset_path, "Dataset file")->required();
  evaluate->add_option("--model", ev.model_path, "Baseline model whose training recipe is reused");
  evaluate->add_option("--external-cmd", ev.external_cmd, "External model command line (scored without retraining)");
  evaluate->add_option("--truth", ev.truth_path, "Ground truth from simulate; enables recovery scoring");
  evaluate->add_option("--rules", ev.rules_path, "Rule file (default: built-in)");
  evaluate->add_option("--folds", ev.folds, "Number of folds")->check(CLI::Range(2, 100));
  evaluate->add_option("--out", ev.out_path, "Metrics JSON to write");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kInputError;
  }

  for (auto* sub : {simulate, ingest, train, interpret, evaluate}) {
    if (sub->parsed() && sub->count("--seed") > 0) common.seed = seed;
  }
  if (pos_flag->count() > 0) in.positives_only = positives_only;

  try {
    if (simulate->parsed()) return cmd_simulate(common, sim);
    if (ingest->parsed()) return cmd_ingest(common, ing);
    if (train->parsed()) return cmd_train(common, tr);
    if (interpret->parsed()) return cmd_interpret(common, in);
    if (evaluate->parsed()) return cmd_evaluate(common, ev);
  } catch (const actint::TransportError& e) {
    spdlog::error("{}", e.what());
    return kPartial;
  } catch (const actint::Error& e) {
    spdlog::error("{}", e.what());
    return kInputError;
  } catch (const std::exception& e) {
    spdlog::error("{}", e.what());
    return kInputError;
  }
  return kInputError;
}
