#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <regex>

#include <nlohmann/json.hpp>

#include "actint/external_model.hpp"
#include "actint/report.hpp"
#include "cli_support.hpp"
#include "support.hpp"

namespace actint {
namespace {

namespace fs = std::filesystem;
using test::run_cli;
using test::slurp;

void write(const std::string& path, const std::string& text) { std::ofstream(path) << text; }

TEST(Cli, HelpAndUsageErrors) {
  test::TempDir dir("cli-usage");
  EXPECT_EQ(run_cli({"--help"}, dir.path()).status, 0);
  EXPECT_EQ(run_cli({"frobnicate"}, dir.path()).status, 2);
  EXPECT_EQ(run_cli({"train", "--dataset", dir / "x.json"}, dir.path()).status, 2);
  EXPECT_EQ(run_cli({"evaluate", "--dataset", dir / "x.json", "--folds", "1"}, dir.path()).status, 2);
}

TEST(Cli, MissingDatasetIsAConfigError) {
  test::TempDir dir("cli-missing");
  const auto r = run_cli({"interpret", "--dataset", dir / "absent.json", "--external-cmd",
                          test::stub_cmd("constant 0.9")},
                         dir.path());
  EXPECT_EQ(r.status, 2);
  EXPECT_NE(r.err.find("absent.json"), std::string::npos) << r.err;
}

TEST(Cli, InvalidScenarioIsRejected) {
  test::TempDir dir("cli-scenario");
  auto doc = nlohmann::json::parse(scenario_to_json(test::small_scenario(2, 2, 64, 1)));
  doc["positive_count"] = -3;
  write(dir / "bad.json", doc.dump());
  write(dir / "garbage.json", "{");
  EXPECT_EQ(run_cli({"simulate", "--scenario", dir / "bad.json", "--out", dir / "o"}, dir.path()).status, 2);
  EXPECT_EQ(run_cli({"simulate", "--scenario", dir / "garbage.json", "--out", dir / "o"}, dir.path()).status, 2);
  EXPECT_FALSE(fs::exists(dir / "o/dataset.json"));
}

TEST(Cli, ModelSourcesAreExclusive) {
  test::TempDir dir("cli-sources");
  save_dataset(test::echo_dataset({0.2, 0.9}, {Label::Negative, Label::Positive}), dir / "d.json");
  EXPECT_EQ(run_cli({"interpret", "--dataset", dir / "d.json"}, dir.path()).status, 2);
  EXPECT_EQ(run_cli({"interpret", "--dataset", dir / "d.json", "--model", dir / "m.json", "--external-cmd",
                     test::stub_cmd("echo")},
                    dir.path())
                .status,
            2);
}

TEST(Cli, AllNegativeDatasetSucceedsWithNoReports) {
  test::TempDir dir("cli-neg");
  save_dataset(test::echo_dataset({0.1, 0.2, 0.3}, {Label::Negative, Label::Negative, Label::Positive}),
               dir / "d.json");
  const auto r = run_cli({"interpret", "--dataset", dir / "d.json", "--external-cmd", test::stub_cmd("echo"),
                          "--out", dir / "r.ndjson"},
                         dir.path());
  EXPECT_EQ(r.status, 0) << r.err;
  EXPECT_TRUE(fs::exists(dir / "r.ndjson"));
  EXPECT_TRUE(slurp(dir / "r.ndjson").empty());

  const auto all = run_cli({"interpret", "--dataset", dir / "d.json", "--external-cmd", test::stub_cmd("echo"),
                            "--all", "--repeats", "2"},
                           dir.path());
  EXPECT_EQ(all.status, 0) << all.err;
  const auto reports = reports_from_ndjson(all.out);
  ASSERT_EQ(reports.size(), 3u);
  for (const auto& rep : reports) EXPECT_TRUE(rep.suggestions.empty());
}

TEST(Cli, DyingModelIsAPartialFailure) {
  test::TempDir dir("cli-dying");
  save_dataset(test::echo_dataset({0.9, 0.9}, {Label::Positive, Label::Positive}), dir / "d.json");
  const auto r = run_cli({"interpret", "--dataset", dir / "d.json", "--external-cmd",
                          test::stub_cmd("exit-after 2")},
                         dir.path());
  EXPECT_EQ(r.status, 1);
  EXPECT_NE(r.err.find("2 of 2"), std::string::npos) << r.err;
}

TEST(Cli, SingleObservationInput) {
  test::TempDir dir("cli-single");
  const auto data = test::step_dataset({"light", "noise"}, "light", 6, 12, 128, 2);
  train_baseline(data, TrainingConfig{}, SmoothingConfig{}).save(dir / "model.json");
  write(dir / "kitchen.json", observation_to_wire_json(data[0].observation));
  const auto r = run_cli({"interpret", "--observation", dir / "kitchen.json", "--model", dir / "model.json",
                          "--all", "--repeats", "2"},
                         dir.path());
  ASSERT_EQ(r.status, 0) << r.err;
  const auto reports = reports_from_ndjson(r.out);
  ASSERT_EQ(reports.size(), 1u);
  EXPECT_EQ(reports[0].observation_id, "kitchen");
  EXPECT_EQ(reports[0].ranking.repeats, 2);
}

struct PipelineRun {
  std::string dataset, truth, model, reports;
  std::map<std::string, std::string> plots;
};

PipelineRun run_pipeline(const test::TempDir& dir, const std::string& scenario) {
  const auto out = dir / "sim";
  EXPECT_EQ(run_cli({"simulate", "--scenario", scenario, "--out", out, "--seed", "11"}, dir.path()).status, 0);
  EXPECT_EQ(run_cli({"train", "--dataset", out + "/dataset.json", "--out", dir / "model.json", "--seed", "11"},
                    dir.path())
                .status,
            0);
  const auto r = run_cli({"interpret", "--dataset", out + "/dataset.json", "--model", dir / "model.json", "--split",
                          "test", "--seed", "11", "--jobs", "2", "--plots", dir / "plots", "--out",
                          dir / "reports.ndjson"},
                         dir.path());
  EXPECT_EQ(r.status, 0) << r.err;
  PipelineRun p{slurp(out + "/dataset.json"), slurp(out + "/truth.json"), slurp(dir / "model.json"),
                slurp(dir / "reports.ndjson"), {}};
  if (fs::exists(dir / "plots")) {
    for (const auto& e : fs::directory_iterator(dir / "plots")) p.plots[e.path().filename()] = slurp(e.path());
  }
  return p;
}

TEST(Cli, PipelineIsByteDeterministic) {
  test::TempDir scratch("cli-det");
  write(scratch / "scenario.json", scenario_to_json(test::small_scenario(10, 40, 600, 3)));
  test::TempDir a("cli-det-a");
  test::TempDir b("cli-det-b");
  const auto ra = run_pipeline(a, scratch / "scenario.json");
  const auto rb = run_pipeline(b, scratch / "scenario.json");
  EXPECT_FALSE(ra.reports.empty());
  EXPECT_EQ(ra.dataset, rb.dataset);
  EXPECT_EQ(ra.truth, rb.truth);
  EXPECT_EQ(ra.model, rb.model);
  EXPECT_EQ(ra.reports, rb.reports);
  EXPECT_EQ(ra.plots, rb.plots);

  const auto reports = reports_from_ndjson(ra.reports);
  ASSERT_EQ(ra.plots.size(), reports.size());
  for (const auto& r : reports) {
    const auto& svg = ra.plots.at(r.observation_id + ".svg");
    EXPECT_EQ(svg.rfind("<svg", 0), 0u);
    EXPECT_NE(svg.find("</svg>"), std::string::npos);
  }
}

TEST(Cli, ConfigFileAndFlagsShareAFingerprint) {
  test::TempDir dir("cli-config");
  save_dataset(test::echo_dataset({0.9}, {Label::Positive}), dir / "d.json");
  write(dir / "run.json", R"({"repeats":2,"z_threshold":2.5})");
  const auto a = run_cli({"interpret", "--dataset", dir / "d.json", "--external-cmd", test::stub_cmd("echo"),
                          "--config", dir / "run.json"},
                         dir.path());
  const auto b = run_cli({"interpret", "--dataset", dir / "d.json", "--external-cmd", test::stub_cmd("echo"),
                          "--config", dir / "run.json", "--repeats", "3"},
                         dir.path());
  ASSERT_EQ(a.status, 0) << a.err;
  ASSERT_EQ(b.status, 0) << b.err;
  const auto ra = reports_from_ndjson(a.out).at(0);
  const auto rb = reports_from_ndjson(b.out).at(0);
  EXPECT_EQ(ra.ranking.repeats, 2);
  EXPECT_EQ(rb.ranking.repeats, 3);
  EXPECT_NE(ra.config_fingerprint, rb.config_fingerprint);
  write(dir / "typo.json", R"({"repeat":2})");
  EXPECT_EQ(run_cli({"interpret", "--dataset", dir / "d.json", "--external-cmd", test::stub_cmd("echo"), "--config",
                     dir / "typo.json"},
                    dir.path())
                .status,
            2);
}

TEST(Cli, EvaluatePrintsTableFormat) {
  test::TempDir dir("cli-eval");
  std::vector<double> p;
  std::vector<Label> y;
  Rng rng(6);
  for (int i = 0; i < 30; ++i) {
    y.push_back(i < 10 ? Label::Positive : Label::Negative);
    p.push_back(rng.uniform01());
  }
  save_dataset(test::echo_dataset(p, y), dir / "d.json");
  const auto r = run_cli({"evaluate", "--dataset", dir / "d.json", "--external-cmd", test::stub_cmd("echo"),
                          "--out", dir / "metrics.json"},
                         dir.path());
  ASSERT_EQ(r.status, 0) << r.err;
  EXPECT_TRUE(std::regex_search(r.out, std::regex(R"(Accuracy: \d+(\.\d+)? ± \d+\.\d\d Weighted F1: \d+(\.\d+)? ± \d+\.\d\d)")))
      << r.out;
  const auto m = nlohmann::json::parse(slurp(dir / "metrics.json"));
  EXPECT_EQ(m.at("folds").size(), 5u);
}

TEST(Cli, SimulateThenEvaluateWithTruth) {
  test::TempDir dir("cli-truth");
  write(dir / "scenario.json", scenario_to_json(test::small_scenario(10, 40, 600, 8)));
  ASSERT_EQ(run_cli({"simulate", "--scenario", dir / "scenario.json", "--out", dir / "sim"}, dir.path()).status, 0);
  const auto r = run_cli({"evaluate", "--dataset", dir / "sim/dataset.json", "--truth", dir / "sim/truth.json",
                          "--config", ACTINT_SOURCE_DIR "/tests/fixtures/fast.json", "--out", dir / "m.json"},
                         dir.path());
  ASSERT_EQ(r.status, 0) << r.err;
  EXPECT_NE(r.out.find("Channel recovery: "), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("Common causes:"), std::string::npos) << r.out;
  const auto m = nlohmann::json::parse(slurp(dir / "m.json"));
  EXPECT_TRUE(m.contains("recovery"));
}

}  // namespace
}  // namespace actint
