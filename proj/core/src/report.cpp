#include "actint/report.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "actint/errors.hpp"
#include "json_util.hpp"

namespace actint {

using detail::json;

namespace {

// JSON has no NaN or infinity; those travel as strings.
json number(double v) {
  if (std::isfinite(v)) return v;
  if (std::isnan(v)) return "nan";
  return v > 0 ? "inf" : "-inf";
}

double number_from(const json& j) {
  if (j.is_number()) return j.get<double>();
  const auto s = j.get<std::string>();
  if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
  if (s == "inf") return std::numeric_limits<double>::infinity();
  if (s == "-inf") return -std::numeric_limits<double>::infinity();
  throw ConfigError("report: bad number '" + s + "'");
}

json label_map(const std::map<BehaviorLabel, double>& m) {
  json out = json::object();
  for (const auto& [label, v] : m) out[to_string(label)] = number(v);
  return out;
}

std::map<BehaviorLabel, double> label_map_from(const json& j) {
  std::map<BehaviorLabel, double> out;
  for (const auto& [k, v] : j.items()) out[behavior_from_string(k)] = number_from(v);
  return out;
}

}  // namespace

std::string to_string(Label label) { return label == Label::Positive ? "Positive" : "Negative"; }

Label label_from_string(const std::string& s) {
  if (s == "Positive") return Label::Positive;
  if (s == "Negative") return Label::Negative;
  throw ConfigError("unknown label '" + s + "'");
}

std::string report_to_json(const InterpretationReport& r) {
  json scores = json::array();
  for (const auto& s : r.ranking.scores) scores.push_back({{"predictor", s.predictor.key()}, {"score", s.score}});
  json top = json::array();
  for (const auto& p : r.ranking.top) top.push_back(p.key());

  json evidence = {{"label", to_string(r.evidence.label)},
                   {"similarity_scores", label_map(r.evidence.similarity_scores)},
                   {"xcorr_peaks", label_map(r.evidence.xcorr_peaks)},
                   {"best_lag", r.evidence.best_lag ? json(*r.evidence.best_lag) : json(nullptr)},
                   {"z_score", r.evidence.z_score ? number(*r.evidence.z_score) : json(nullptr)},
                   {"window_mean", r.evidence.window_mean ? number(*r.evidence.window_mean) : json(nullptr)},
                   {"notes", r.evidence.notes}};

  json doc = {{"version", InterpretationReport::kFormatVersion},
              {"observation_id", r.observation_id},
              {"prediction", {{"label", to_string(r.prediction.label)}, {"probability", r.prediction.probability}}},
              {"ranking",
               {{"original_probability", r.ranking.original_probability},
                {"repeats", r.ranking.repeats},
                {"seed", r.ranking.seed},
                {"mode", to_string(r.ranking.mode)},
                {"tie_break", kTieBreakRule},
                {"scores", std::move(scores)},
                {"top", std::move(top)}}},
              {"top_predictor", r.top_predictor.key()},
              {"top_predictor_display", r.top_predictor.display()},
              {"evidence", std::move(evidence)},
              {"suggestions", r.suggestions},
              {"config_fingerprint", r.config_fingerprint},
              {"tool_version", r.tool_version}};
  return doc.dump();
}

InterpretationReport report_from_json(const std::string& line) {
  const json doc = detail::parse_json(line, "report");
  try {
    const int version = detail::require(doc, "version", "report").get<int>();
    if (version != InterpretationReport::kFormatVersion) {
      throw ConfigError("report: unsupported version " + std::to_string(version));
    }
    InterpretationReport r;
    r.observation_id = doc.at("observation_id").get<std::string>();
    const json& pred = detail::require(doc, "prediction", "report");
    r.prediction.label = label_from_string(pred.at("label").get<std::string>());
    r.prediction.probability = pred.at("probability").get<double>();

    const json& rk = detail::require(doc, "ranking", "report");
    r.ranking.observation_id = r.observation_id;
    r.ranking.original_probability = rk.at("original_probability").get<double>();
    r.ranking.repeats = rk.at("repeats").get<int>();
    r.ranking.seed = rk.at("seed").get<std::uint64_t>();
    r.ranking.mode = score_mode_from_string(rk.at("mode").get<std::string>());
    for (const auto& s : rk.at("scores")) {
      r.ranking.scores.push_back({PredictorId::parse(s.at("predictor").get<std::string>()), s.at("score").get<double>()});
    }
    for (const auto& p : rk.at("top")) r.ranking.top.push_back(PredictorId::parse(p.get<std::string>()));

    r.top_predictor = PredictorId::parse(doc.at("top_predictor").get<std::string>());
    const json& ev = detail::require(doc, "evidence", "report");
    r.evidence.label = behavior_from_string(ev.at("label").get<std::string>());
    r.evidence.similarity_scores = label_map_from(ev.at("similarity_scores"));
    r.evidence.xcorr_peaks = label_map_from(ev.at("xcorr_peaks"));
    if (!ev.at("best_lag").is_null()) r.evidence.best_lag = ev.at("best_lag").get<int>();
    if (!ev.at("z_score").is_null()) r.evidence.z_score = number_from(ev.at("z_score"));
    if (!ev.at("window_mean").is_null()) r.evidence.window_mean = number_from(ev.at("window_mean"));
    r.evidence.notes = ev.at("notes").get<std::vector<std::string>>();
    r.suggestions = doc.at("suggestions").get<std::vector<std::string>>();
    r.config_fingerprint = doc.at("config_fingerprint").get<std::string>();
    r.tool_version = doc.at("tool_version").get<std::string>();
    return r;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("report: ") + e.what());
  }
}

std::string reports_to_ndjson(const std::vector<InterpretationReport>& reports) {
  std::string out;
  for (const auto& r : reports) {
    out += report_to_json(r);
    out += '\n';
  }
  return out;
}

std::vector<InterpretationReport> reports_from_ndjson(const std::string& text) {
  std::vector<InterpretationReport> out;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    out.push_back(report_from_json(line));
  }
  return out;
}

}  // namespace actint
