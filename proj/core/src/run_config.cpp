#include "actint/run_config.hpp"

#include <cmath>
#include <cstdio>
#include <string_view>

#include "actint/errors.hpp"
#include "actint/rng.hpp"
#include "json_util.hpp"

namespace actint {

using detail::json;

void RunConfig::validate() const {
  if (smoothing) smoothing->validate();
  if (repeats < 1) throw ConfigError("repeats must be >= 1");
  if (!(z_threshold > 0.0)) throw ConfigError("z_threshold must be positive");
  if (!(min_similarity >= -1.0 && min_similarity <= 1.0)) throw ConfigError("min_similarity must lie in [-1, 1]");
  if (!(min_overlap_fraction > 0.0 && min_overlap_fraction <= 1.0)) {
    throw ConfigError("min_overlap_fraction must lie in (0, 1]");
  }
  if (!(decision_threshold > 0.0 && decision_threshold < 1.0)) {
    throw ConfigError("decision_threshold must lie in (0, 1)");
  }
  if (handshake_timeout_ms <= 0 || request_timeout_ms <= 0) throw ConfigError("timeouts must be positive");
  if (external && external->executable.empty()) throw ConfigError("external model executable is empty");
  training.validate();
  ingest.validate();
}

void RunConfig::validate_model_source() const {
  const int sources = (baseline_path ? 1 : 0) + (external ? 1 : 0);
  if (sources != 1) {
    throw ConfigError(sources == 0 ? "no model configured: give --model or --external-cmd"
                                   : "both a baseline model and an external model are configured; choose one");
  }
}

RankingConfig RunConfig::ranking() const { return {repeats, seed, score_mode}; }

BehaviorConfig RunConfig::behavior() const {
  BehaviorConfig b;
  b.differencing.min_similarity = min_similarity;
  b.differencing.min_overlap_fraction = min_overlap_fraction;
  b.stationary.z_threshold = z_threshold;
  return b;
}

TrainingConfig RunConfig::training_config() const {
  TrainingConfig t = training;
  t.seed = seed;
  t.decision_threshold = decision_threshold;
  return t;
}

IngestConfig RunConfig::ingest_config() const {
  IngestConfig i = ingest;
  i.seed = seed;
  i.smoothing = smoothing;
  return i;
}

namespace {

json canonical(const RunConfig& c, bool with_paths) {
  json model = json::object();
  if (c.baseline_path) model["baseline_path"] = with_paths ? json(*c.baseline_path) : json("<file>");
  if (c.external) model["external"] = {{"executable", c.external->executable}, {"args", c.external->args}};
  json doc = {{"smoothing", detail::smoothing_to_json(c.smoothing)},
              {"repeats", c.repeats},
              {"seed", c.seed},
              {"score_mode", to_string(c.score_mode)},
              {"z_threshold", c.z_threshold},
              {"min_similarity", c.min_similarity},
              {"min_overlap_fraction", c.min_overlap_fraction},
              {"decision_threshold", c.decision_threshold},
              {"rules_path", with_paths ? json(c.rules_path) : json(c.rules_path.empty() ? "" : "<file>")},
              {"model", model},
              {"positives_only", c.positives_only},
              {"handshake_timeout_ms", c.handshake_timeout_ms},
              {"request_timeout_ms", c.request_timeout_ms},
              {"training",
               {{"epochs", c.training.epochs},
                {"learning_rate", c.training.learning_rate},
                {"l2", c.training.l2},
                {"positive_weight", c.training.positive_weight},
                {"negative_weight", c.training.negative_weight},
                {"pool_width", c.training.pool_width}}},
              {"ingest",
               {{"lead_start_min", c.ingest.window.lead_start_min},
                {"lead_end_min", c.ingest.window.lead_end_min},
                {"grid_rate_hz", c.ingest.grid_rate_hz},
                {"negative_ratio", c.ingest.negative_ratio},
                {"candidate_stride_s", c.ingest.candidate_stride_s},
                {"tod_offset_hours", c.ingest.tod_offset_hours},
                {"train_fraction", c.ingest.train_fraction},
                {"label_file", c.ingest.label_file}}}};
  return doc;
}

}  // namespace

std::string RunConfig::to_json() const { return canonical(*this, true).dump(); }

std::string RunConfig::fingerprint(std::string_view content) const {
  const std::string text = canonical(*this, false).dump() + "\n" + std::string(content);
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a64(text)));
  return buf;
}

namespace {

template <typename T>
void take(const json& obj, const char* key, T& out) {
  if (obj.contains(key)) out = obj.at(key).get<T>();
}

void reject_unknown(const json& obj, std::initializer_list<const char*> keys, const std::string& where) {
  for (const auto& [k, v] : obj.items()) {
    bool known = false;
    for (const char* key : keys) known = known || k == key;
    if (!known) throw ConfigError(where + ": unknown key '" + k + "'");
  }
}

}  // namespace

RunConfig run_config_from_json(const std::string& text) {
  const json doc = detail::parse_json(text, "config");
  if (!doc.is_object()) throw ConfigError("config: expected an object");
  RunConfig c;
  try {
    reject_unknown(doc,
                   {"smoothing", "repeats", "seed", "score_mode", "z_threshold", "min_similarity",
                    "min_overlap_fraction", "decision_threshold", "rules_path", "model", "positives_only",
                    "handshake_timeout_ms", "request_timeout_ms", "training", "ingest"},
                   "config");
    if (doc.contains("smoothing")) c.smoothing = detail::smoothing_from_json(doc.at("smoothing"));
    take(doc, "repeats", c.repeats);
    take(doc, "seed", c.seed);
    if (doc.contains("score_mode")) c.score_mode = score_mode_from_string(doc.at("score_mode").get<std::string>());
    take(doc, "z_threshold", c.z_threshold);
    take(doc, "min_similarity", c.min_similarity);
    take(doc, "min_overlap_fraction", c.min_overlap_fraction);
    take(doc, "decision_threshold", c.decision_threshold);
    take(doc, "rules_path", c.rules_path);
    take(doc, "positives_only", c.positives_only);
    take(doc, "handshake_timeout_ms", c.handshake_timeout_ms);
    take(doc, "request_timeout_ms", c.request_timeout_ms);
    if (doc.contains("model")) {
      const json& m = doc.at("model");
      reject_unknown(m, {"baseline_path", "external"}, "config.model");
      if (m.contains("baseline_path")) c.baseline_path = m.at("baseline_path").get<std::string>();
      if (m.contains("external")) {
        const json& e = m.at("external");
        c.external = ExternalCommand{detail::require(e, "executable", "config.model.external").get<std::string>(),
                                     e.value("args", std::vector<std::string>{})};
      }
    }
    if (doc.contains("training")) {
      const json& t = doc.at("training");
      reject_unknown(t, {"epochs", "learning_rate", "l2", "positive_weight", "negative_weight", "pool_width"},
                     "config.training");
      take(t, "epochs", c.training.epochs);
      take(t, "learning_rate", c.training.learning_rate);
      take(t, "l2", c.training.l2);
      take(t, "positive_weight", c.training.positive_weight);
      take(t, "negative_weight", c.training.negative_weight);
      take(t, "pool_width", c.training.pool_width);
    }
    if (doc.contains("ingest")) {
      const json& i = doc.at("ingest");
      reject_unknown(i,
                     {"lead_start_min", "lead_end_min", "grid_rate_hz", "negative_ratio", "candidate_stride_s",
                      "tod_offset_hours", "train_fraction", "label_file"},
                     "config.ingest");
      take(i, "lead_start_min", c.ingest.window.lead_start_min);
      take(i, "lead_end_min", c.ingest.window.lead_end_min);
      take(i, "grid_rate_hz", c.ingest.grid_rate_hz);
      take(i, "negative_ratio", c.ingest.negative_ratio);
      take(i, "candidate_stride_s", c.ingest.candidate_stride_s);
      take(i, "tod_offset_hours", c.ingest.tod_offset_hours);
      take(i, "train_fraction", c.ingest.train_fraction);
      take(i, "label_file", c.ingest.label_file);
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  c.validate();
  return c;
}

RunConfig load_run_config(const std::string& path) {
  return run_config_from_json(detail::read_text_file(path));
}

}  // namespace actint
