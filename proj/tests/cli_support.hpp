#pragma once

#include <sys/wait.h>

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "actint/dataset.hpp"
#include "actint/synth.hpp"

namespace actint::test {

struct RunResult {
  int status = -1;
  std::string out;
  std::string err;
};

inline std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

inline std::string quote(const std::string& s) {
  std::string q = "'";
  for (char c : s) q += c == '\'' ? std::string("'\\''") : std::string(1, c);
  return q + "'";
}

/// Runs the CLI with `args`; stdout and stderr go through files under `scratch`.
inline RunResult run_cli(const std::vector<std::string>& args, const std::string& scratch) {
  std::string cmd = quote(ACTINT_CLI_PATH);
  for (const auto& a : args) cmd += " " + quote(a);
  const std::string out = scratch + "/.stdout";
  const std::string err = scratch + "/.stderr";
  cmd += " >" + quote(out) + " 2>" + quote(err);
  const int raw = std::system(cmd.c_str());
  RunResult r;
  r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  r.out = slurp(out);
  r.err = slurp(err);
  return r;
}

inline std::string stub_cmd(const std::string& mode_args) { return quote(ACTINT_STUB_PATH) + " " + mode_args; }

/// A smaller copy of the default scenario for quick end-to-end runs.
inline ScenarioSpec small_scenario(int positives, int negatives, int window, std::uint64_t seed) {
  auto spec = default_scenario();
  spec.positive_count = positives;
  spec.negative_count = negatives;
  spec.window_length_samples = window;
  spec.seed = seed;
  return spec;
}

/// One constant "echo" channel holding the probability the echo stub returns,
/// so shuffling it changes nothing.
inline Dataset echo_dataset(const std::vector<double>& probabilities, const std::vector<Label>& labels) {
  Dataset ds;
  for (std::size_t i = 0; i < probabilities.size(); ++i) {
    std::vector<double> v(16, probabilities[i]);
    std::map<std::string, TimeSeries> ch;
    ch.emplace("echo", TimeSeries(std::move(v), 1.0, "echo"));
    char id[16];
    std::snprintf(id, sizeof id, "obs-%03zu", i);
    ds.entries.push_back(
        {Observation::from_channels(id, std::move(ch), 12.0, SmoothingConfig{}), labels[i], Split::Train, false});
  }
  return ds;
}

}  // namespace actint::test
