#include "commands.hpp"

#include <spdlog/spdlog.h>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include <nlohmann/json.hpp>

#include "actint/dataset.hpp"
#include "actint/errors.hpp"
#include "actint/external_model.hpp"
#include "actint/ingest.hpp"
#include "actint/metrics.hpp"
#include "actint/pipeline.hpp"
#include "actint/plot.hpp"
#include "actint/synth.hpp"
#include "actint/version.hpp"

namespace actint::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open '" + path + "'");
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void write_file(const std::string& path, const std::string& text) {
  if (const auto parent = fs::path(path).parent_path(); !parent.empty()) fs::create_directories(parent);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ConfigError("cannot write '" + path + "'");
  out << text;
  if (!out) throw ConfigError("write to '" + path + "' failed");
}

void emit(const std::string& out_path, const std::string& text) {
  if (out_path.empty() || out_path == "-") {
    std::cout << text << std::flush;
  } else {
    write_file(out_path, text);
  }
}

ConfusionMatrix score(BaselineModel& model, const std::vector<LabeledObservation>& items) {
  ConfusionMatrix m;
  for (const auto& it : items) m.add(it.label, model.predict_proba(it.observation).label);
  return m;
}

struct ModelSource {
  ModelFactory factory;
  std::vector<ChannelStats> stats;
  std::optional<SmoothingConfig> smoothing;
  /// Hashed into the report fingerprint.
  std::string identity;
  std::optional<BaselineModel> baseline;
};

ModelSource open_model(const RunConfig& cfg) {
  cfg.validate_model_source();
  ModelSource src;
  if (cfg.baseline_path) {
    const std::string text = read_file(*cfg.baseline_path);
    BaselineModel model = BaselineModel::from_json(text).with_threshold(cfg.decision_threshold);
    src.stats = model.training_stats();
    src.smoothing = model.smoothing();
    src.identity = text;
    src.baseline = model;
    src.factory = [model] { return std::make_unique<BaselineModel>(model); };
  } else {
    ExternalModelConfig ec;
    ec.args = cfg.external->args;
    ec.handshake_timeout = std::chrono::milliseconds(cfg.handshake_timeout_ms);
    ec.request_timeout = std::chrono::milliseconds(cfg.request_timeout_ms);
    ec.decision_threshold = cfg.decision_threshold;
    src.smoothing = cfg.smoothing;
    src.identity = cfg.external->executable;
    for (const auto& a : cfg.external->args) src.identity += " " + a;
    const std::string exe = cfg.external->executable;
    src.factory = [exe, ec] { return std::unique_ptr<ModelAdapter>(external_model_session(exe, ec)); };
  }
  return src;
}

void apply_model_flags(RunConfig& cfg, const std::string& model_path, const std::string& external_cmd) {
  if (!model_path.empty()) {
    cfg.baseline_path = model_path;
    if (external_cmd.empty()) cfg.external.reset();
  }
  if (!external_cmd.empty()) {
    auto parts = split_command(external_cmd);
    if (parts.empty()) throw ConfigError("--external-cmd is empty");
    cfg.external = ExternalCommand{parts.front(), {parts.begin() + 1, parts.end()}};
    if (model_path.empty()) cfg.baseline_path.reset();
  }
}

std::pair<RuleSet, std::string> open_rules(const RunConfig& cfg) {
  if (cfg.rules_path.empty()) return {default_rules(), default_rules_json()};
  const std::string text = read_file(cfg.rules_path);
  return {parse_rules(text, cfg.rules_path), text};
}

std::string percent(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.1f%%", v * 100.0);
  return buf;
}

json recovery_json(const RecoveryMetrics& m) {
  json causes = json::array();
  for (const auto& c : m.causes) {
    causes.push_back({{"predictor", c.predictor},
                      {"behavior", to_string(c.behavior)},
                      {"count", c.count},
                      {"fraction", c.fraction}});
  }
  return {{"true_positive_count", m.true_positive_count},
          {"channel_hits", m.channel_hits},
          {"behavior_hits", m.behavior_hits},
          {"channel_rate", m.channel_rate ? json(*m.channel_rate) : json("n/a")},
          {"behavior_rate", m.behavior_rate ? json(*m.behavior_rate) : json("n/a")},
          {"causes", causes}};
}

void print_recovery(const RecoveryMetrics& m) {
  std::cout << "Channel recovery: " << format_rate(m.channel_rate) << "  Behavior recovery: "
            << format_rate(m.behavior_rate) << "  (" << m.true_positive_count << " true positives)\n";
  std::cout << "Common causes:\n";
  for (const auto& c : m.causes) {
    std::cout << "  " << PredictorId::parse(c.predictor).display() << " / " << to_string(c.behavior) << ": "
              << percent(c.fraction) << " (" << c.count << ")\n";
  }
}

}  // namespace

std::vector<std::string> split_command(const std::string& cmd) {
  std::vector<std::string> out;
  std::string cur;
  bool have = false;
  char quote = 0;
  for (char c : cmd) {
    if (quote) {
      if (c == quote) {
        quote = 0;
      } else {
        cur += c;
      }
    } else if (c == '\'' || c == '"') {
      quote = c;
      have = true;
    } else if (std::isspace(static_cast<unsigned char>(c))) {
      if (have) out.push_back(cur);
      cur.clear();
      have = false;
    } else {
      cur += c;
      have = true;
    }
  }
  if (quote) throw ConfigError("unterminated quote in command '" + cmd + "'");
  if (have) out.push_back(cur);
  return out;
}

RunConfig resolve_config(const Common& common) {
  RunConfig cfg = common.config_path.empty() ? RunConfig{} : load_run_config(common.config_path);
  if (common.seed) cfg.seed = *common.seed;
  if (common.jobs < 1) throw ConfigError("--jobs must be >= 1");
  cfg.validate();
  return cfg;
}

int cmd_simulate(const Common& common, const SimulateOptions& opt) {
  ScenarioSpec spec = opt.scenario_path.empty() ? default_scenario() : scenario_from_json(read_file(opt.scenario_path));
  if (common.seed) spec.seed = *common.seed;
  spec.validate();
  spdlog::info("generating {} positives and {} negatives (seed {})", spec.positive_count, spec.negative_count,
               spec.seed);
  SyntheticData data = generate_dataset(spec);

  Dataset ds;
  ds.smoothing = spec.smoothing;
  for (auto& item : data.items) ds.entries.push_back({std::move(item.observation), item.label, Split::Train, false});
  assign_stratified_split(ds, 0.7, spec.seed);

  fs::create_directories(opt.out_dir);
  const fs::path out(opt.out_dir);
  save_dataset(ds, (out / "dataset.json").string());
  write_file((out / "truth.json").string(), truth_to_json(data.truth));
  write_file((out / "scenario.json").string(), scenario_to_json(spec));
  if (opt.csv) export_dataset_csv(ds, (out / "csv").string());
  std::cout << "wrote " << ds.entries.size() << " observations (" << data.truth.records.size() << " positive) to "
            << opt.out_dir << "\n";
  return kOk;
}

int cmd_ingest(const Common& common, const IngestOptions& opt) {
  const RunConfig cfg = resolve_config(common);
  IngestReport r = ingest_directory(opt.input_dir, cfg.ingest_config());
  for (const auto& w : r.warnings) spdlog::warn("{}", w);
  for (const auto& s : r.skipped) spdlog::error("{}", s);
  save_dataset(r.dataset, opt.out_path);
  std::cout << "wrote " << r.positives << " positives and " << r.negatives << " negatives to " << opt.out_path << "\n";
  if (!r.skipped.empty()) {
    std::cout << r.skipped.size() << " event(s) skipped because of gaps\n";
    return kPartial;
  }
  return kOk;
}

int cmd_train(const Common& common, const TrainOptions& opt) {
  const RunConfig cfg = resolve_config(common);
  const Dataset ds = load_dataset(opt.dataset_path);
  const auto train = ds.with_split(Split::Train);
  if (train.empty()) throw DataQualityError("dataset has no training observations");
  BaselineModel model = train_baseline(train, cfg.training_config(), ds.smoothing);
  model.save(opt.out_path);

  const ConfusionMatrix tm = score(model, train);
  std::cout << "train: n=" << tm.total() << " accuracy " << percent(accuracy(tm)) << " weighted F1 "
            << percent(weighted_f1(tm)) << "\n";
  const auto test = ds.with_split(Split::Test);
  if (!test.empty()) {
    const ConfusionMatrix vm = score(model, test);
    std::cout << "validation: n=" << vm.total() << " accuracy " << percent(accuracy(vm)) << " weighted F1 "
              << percent(weighted_f1(vm)) << "\n";
  }
  std::cout << "model written to " << opt.out_path << "\n";
  return kOk;
}

int cmd_interpret(const Common& common, const InterpretOptions& opt) {
  RunConfig cfg = resolve_config(common);
  apply_model_flags(cfg, opt.model_path, opt.external_cmd);
  if (!opt.rules_path.empty()) cfg.rules_path = opt.rules_path;
  if (opt.repeats) cfg.repeats = *opt.repeats;
  if (opt.positives_only) cfg.positives_only = *opt.positives_only;
  cfg.validate();
  if (opt.dataset_path.empty() == opt.observation_path.empty()) {
    throw ConfigError("give exactly one of --dataset and --observation");
  }

  ModelSource src = open_model(cfg);
  const auto [rules, rules_text] = open_rules(cfg);

  std::vector<Observation> observations;
  if (!opt.dataset_path.empty()) {
    const Dataset ds = load_dataset(opt.dataset_path);
    for (const auto& e : ds.entries) {
      const bool keep = opt.split == "all" || (opt.split == "train" && e.split == Split::Train) ||
                        (opt.split == "test" && e.split == Split::Test);
      if (keep) observations.push_back(e.observation);
    }
    if (src.stats.empty() && !ds.entries.empty()) {
      auto train = ds.with_split(Split::Train);
      std::vector<Observation> windows;
      for (auto& t : (train.empty() ? ds.all() : train)) windows.push_back(std::move(t.observation));
      src.stats = compute_channel_stats(windows);
    }
  } else {
    const std::string id = fs::path(opt.observation_path).stem().string();
    observations.push_back(observation_from_wire_json(read_file(opt.observation_path), id, src.smoothing));
  }

  InterpretConfig ic;
  ic.ranking = cfg.ranking();
  ic.behavior = cfg.behavior();
  ic.positives_only = cfg.positives_only;
  ic.config_fingerprint = cfg.fingerprint(src.identity + "\n" + rules_text);
  ic.tool_version = kVersion;

  spdlog::info("interpreting {} observation(s) with {} worker(s)", observations.size(), common.jobs);
  BatchResult result = interpret_batch(src.factory, observations, src.stats, rules, ic, common.jobs);
  emit(opt.out_path, reports_to_ndjson(result.reports));

  if (!opt.plots_dir.empty()) {
    fs::create_directories(opt.plots_dir);
    std::map<std::string, const Observation*> by_id;
    for (const auto& o : observations) by_id[o.id()] = &o;
    for (const auto& r : result.reports) {
      const auto path = (fs::path(opt.plots_dir) / (r.observation_id + ".svg")).string();
      write_triptych_svg(path, *by_id.at(r.observation_id), r, cfg.z_threshold);
    }
  }
  for (const auto& f : result.failures) spdlog::error("observation {}: {}", f.observation_id, f.message);
  spdlog::info("{} report(s), {} failure(s)", result.reports.size(), result.failures.size());
  if (!result.failures.empty()) {
    std::cerr << result.failures.size() << " of " << observations.size() << " observation(s) failed\n";
    return kPartial;
  }
  return kOk;
}

int cmd_evaluate(const Common& common, const EvaluateOptions& opt) {
  RunConfig cfg = resolve_config(common);
  if (!opt.external_cmd.empty()) apply_model_flags(cfg, "", opt.external_cmd);
  if (!opt.rules_path.empty()) cfg.rules_path = opt.rules_path;
  const Dataset ds = load_dataset(opt.dataset_path);
  const auto data = ds.all();

  TrainingConfig training = cfg.training_config();
  if (!opt.model_path.empty()) {
    // Retrain with the recipe of the given model.
    training = BaselineModel::load(opt.model_path).training_config();
    training.seed = cfg.seed;
  }
  std::optional<ModelSource> external;
  if (cfg.external) external = open_model(cfg);

  Trainer trainer = [&](std::span<const LabeledObservation> train) -> std::unique_ptr<ModelAdapter> {
    if (external) return external->factory();
    return std::make_unique<BaselineModel>(train_baseline(train, training, ds.smoothing));
  };

  std::optional<GroundTruth> truth;
  if (!opt.truth_path.empty()) truth = truth_from_json(read_file(opt.truth_path));
  std::vector<InterpretationReport> reports;
  FoldHook hook;
  std::optional<std::pair<RuleSet, std::string>> rules;
  if (truth) {
    rules = open_rules(cfg);
    hook = [&](int, ModelAdapter& model, std::span<const LabeledObservation> train,
               std::span<const LabeledObservation> test) {
      std::vector<ChannelStats> stats;
      if (auto* b = dynamic_cast<BaselineModel*>(&model)) {
        stats = b->training_stats();
      } else {
        std::vector<Observation> windows;
        for (const auto& t : train) windows.push_back(t.observation);
        stats = compute_channel_stats(windows);
      }
      InterpretConfig ic;
      ic.ranking = cfg.ranking();
      ic.behavior = cfg.behavior();
      ic.positives_only = true;
      ic.tool_version = kVersion;
      FilterBankCache banks;
      for (const auto& t : test) {
        if (auto r = interpret(model, t.observation, stats, rules->first, ic, banks)) reports.push_back(std::move(*r));
      }
    };
  }

  const CrossValidationResult cv = cross_validate(data, opt.folds, cfg.seed, trainer, hook);

  json folds = json::array();
  for (const auto& f : cv.folds) {
    folds.push_back({{"fold", f.fold},
                     {"train_size", f.train_size},
                     {"test_size", f.test_size},
                     {"confusion", {{"tp", f.confusion.tp}, {"fp", f.confusion.fp}, {"tn", f.confusion.tn}, {"fn", f.confusion.fn}}},
                     {"accuracy", f.accuracy},
                     {"weighted_f1", f.weighted_f1}});
  }
  json doc = {{"version", 1},
              {"folds", folds},
              {"accuracy_mean", cv.accuracy_mean},
              {"accuracy_sd", cv.accuracy_sd},
              {"weighted_f1_mean", cv.weighted_f1_mean},
              {"weighted_f1_sd", cv.weighted_f1_sd},
              {"table",
               {{"accuracy", format_mean_sd(cv.accuracy_mean, cv.accuracy_sd)},
                {"weighted_f1", format_mean_sd(cv.weighted_f1_mean, cv.weighted_f1_sd)}}}};

  std::cout << "Accuracy: " << format_mean_sd(cv.accuracy_mean, cv.accuracy_sd)
            << " Weighted F1: " << format_mean_sd(cv.weighted_f1_mean, cv.weighted_f1_sd) << "\n";
  if (truth) {
    const RecoveryMetrics m = score_recovery(reports, *truth);
    doc["recovery"] = recovery_json(m);
    print_recovery(m);
  }
  if (!opt.out_path.empty()) write_file(opt.out_path, doc.dump(2) + "\n");
  return kOk;
}

}  // namespace actint::cli
