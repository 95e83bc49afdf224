#pragma once

#include <optional>
#include <string>
#include <vector>

#include "actint/run_config.hpp"

namespace actint::cli {

enum ExitCode { kOk = 0, kPartial = 1, kInputError = 2 };

/// Options shared by every subcommand. Flags override the config file.
struct Common {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  int jobs = 1;
};

RunConfig resolve_config(const Common& common);

struct SimulateOptions {
  std::string scenario_path;
  std::string out_dir;
  bool csv = false;
};
int cmd_simulate(const Common& common, const SimulateOptions& opt);

struct IngestOptions {
  std::string input_dir;
  std::string out_path;
};
int cmd_ingest(const Common& common, const IngestOptions& opt);

struct TrainOptions {
  std::string dataset_path;
  std::string out_path;
};
int cmd_train(const Common& common, const TrainOptions& opt);

struct InterpretOptions {
  std::string dataset_path;
  std::string observation_path;
  std::string model_path;
  std::string external_cmd;
  std::string rules_path;
  std::optional<int> repeats;
  std::optional<bool> positives_only;
  std::string plots_dir;
  std::string out_path;
  std::string split = "all";
};
int cmd_interpret(const Common& common, const InterpretOptions& opt);

struct EvaluateOptions {
  std::string dataset_path;
  std::string model_path;
  std::string external_cmd;
  std::string truth_path;
  std::string rules_path;
  std::string out_path;
  int folds = 5;
};
int cmd_evaluate(const Common& common, const EvaluateOptions& opt);

/// Splits a command line on whitespace, honoring single and double quotes.
std::vector<std::string> split_command(const std::string& cmd);

}  // namespace actint::cli
