#include "actint/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <numeric>
#include <set>

#include "actint/errors.hpp"
#include "actint/rng.hpp"
#include "json_util.hpp"

namespace actint {

using detail::json;

namespace {

constexpr std::pair<TriggerBehavior, const char*> kTriggerNames[] = {
    {TriggerBehavior::Increasing, "Increasing"},
    {TriggerBehavior::Decreasing, "Decreasing"},
    {TriggerBehavior::SuddenChangeUp, "SuddenChangeUp"},
    {TriggerBehavior::SuddenChangeDown, "SuddenChangeDown"},
    {TriggerBehavior::AbnormallyHigh, "AbnormallyHigh"},
    {TriggerBehavior::AbnormallyLow, "AbnormallyLow"},
    {TriggerBehavior::TimeOfDay, "TimeOfDay"},
};

std::string noise_name(NoiseModel m) {
  switch (m) {
    case NoiseModel::White: return "white";
    case NoiseModel::RandomWalk: return "random-walk";
    case NoiseModel::None: return "none";
  }
  return "white";
}

NoiseModel noise_from_string(const std::string& s) {
  if (s == "white") return NoiseModel::White;
  if (s == "random-walk") return NoiseModel::RandomWalk;
  if (s == "none") return NoiseModel::None;
  throw ConfigError("unknown noise model '" + s + "'");
}

bool in_band(double h, double start, double end) {
  return start <= end ? (h >= start && h < end) : (h >= start || h < end);
}

double draw_in_band(Rng& rng, double start, double end) {
  const double width = start <= end ? end - start : 24.0 - start + end;
  const double h = std::fmod(start + rng.uniform(0.0, width), 24.0);
  return h < 0.0 ? h + 24.0 : h;
}

std::string id_for(std::size_t i, std::size_t total) {
  const std::size_t width = std::max<std::size_t>(4, std::to_string(total).size());
  std::string digits = std::to_string(i);
  return "obs-" + std::string(width - digits.size(), '0') + digits;
}

}  // namespace

std::string to_string(TriggerBehavior b) {
  for (const auto& [value, name] : kTriggerNames) {
    if (value == b) return name;
  }
  return "SuddenChangeUp";
}

TriggerBehavior trigger_behavior_from_string(const std::string& s) {
  for (const auto& [value, name] : kTriggerNames) {
    if (s == name) return value;
  }
  throw ConfigError("unknown trigger behavior '" + s + "'");
}

void ScenarioSpec::validate() const {
  if (channels.empty()) throw ConfigError("scenario: no channels");
  std::set<std::string> names;
  for (const auto& c : channels) {
    if (c.name.empty() || c.name == "time_of_day") throw ConfigError("scenario: invalid channel name '" + c.name + "'");
    if (!names.insert(c.name).second) throw ConfigError("scenario: duplicate channel '" + c.name + "'");
    if (!std::isfinite(c.baseline_mean) || !std::isfinite(c.diurnal_amplitude)) {
      throw ConfigError("scenario: channel '" + c.name + "' has non-finite parameters");
    }
    if (!(c.baseline_std > 0.0) || !std::isfinite(c.baseline_std)) {
      throw ConfigError("scenario: channel '" + c.name + "' needs baseline_std > 0");
    }
  }
  if (window_length_samples < 4) throw ConfigError("scenario: window_length_samples must be >= 4");
  if (!(sample_rate_hz > 0.0)) throw ConfigError("scenario: sample_rate_hz must be positive");
  if (positive_count < 1 || negative_count < 1) {
    throw ConfigError("scenario: positive_count and negative_count must be >= 1");
  }
  if (trigger_mix.empty()) throw ConfigError("scenario: trigger_mix is empty");
  double total = 0.0;
  for (const auto& t : trigger_mix) {
    if (!(t.weight >= 0.0) || !std::isfinite(t.weight)) throw ConfigError("scenario: trigger weights must be >= 0");
    if (!(t.magnitude_sigma > 0.0) || !std::isfinite(t.magnitude_sigma)) {
      throw ConfigError("scenario: trigger magnitude_sigma must be > 0");
    }
    if (t.behavior != TriggerBehavior::TimeOfDay && !names.contains(t.channel)) {
      throw ConfigError("scenario: trigger names unknown channel '" + t.channel + "'");
    }
    total += t.weight;
  }
  if (!(total > 0.0)) throw ConfigError("scenario: trigger weights sum to zero");
  for (double h : {tod_band_start, tod_band_end}) {
    if (!(h >= 0.0 && h < 24.0)) throw ConfigError("scenario: tod band bounds must lie in [0, 24)");
  }
  if (tod_band_start == tod_band_end) throw ConfigError("scenario: tod band is empty");
  if (smoothing) smoothing->validate();
}

ScenarioSpec default_scenario() {
  ScenarioSpec s;
  s.channels = {
      {"light", 300.0, 40.0, NoiseModel::White, 20.0},
      {"temperature", 22.0, 0.5, NoiseModel::RandomWalk, 0.3},
      {"humidity", 45.0, 3.0, NoiseModel::RandomWalk, 0.0},
      {"pressure", 101.3, 0.1, NoiseModel::RandomWalk, 0.0},
      {"noise", 45.0, 5.0, NoiseModel::White, 0.0},
  };
  s.trigger_mix = {
      {"light", TriggerBehavior::SuddenChangeUp, 3.0, 2.0},
      {"light", TriggerBehavior::SuddenChangeDown, 3.0, 1.0},
      {"light", TriggerBehavior::Decreasing, 3.0, 1.0},
      {"noise", TriggerBehavior::AbnormallyHigh, 3.0, 1.0},
      {"noise", TriggerBehavior::SuddenChangeUp, 3.0, 1.0},
      {"temperature", TriggerBehavior::Decreasing, 3.0, 1.0},
  };
  return s;
}

std::string scenario_to_json(const ScenarioSpec& spec) {
  json channels = json::array();
  for (const auto& c : spec.channels) {
    channels.push_back({{"name", c.name},
                        {"baseline_mean", c.baseline_mean},
                        {"baseline_std", c.baseline_std},
                        {"noise_model", noise_name(c.noise_model)},
                        {"diurnal_amplitude", c.diurnal_amplitude}});
  }
  json triggers = json::array();
  for (const auto& t : spec.trigger_mix) {
    triggers.push_back({{"channel", t.channel},
                        {"behavior", to_string(t.behavior)},
                        {"magnitude_sigma", t.magnitude_sigma},
                        {"weight", t.weight}});
  }
  json doc = {{"channels", channels},
              {"window_length_samples", spec.window_length_samples},
              {"sample_rate_hz", spec.sample_rate_hz},
              {"positive_count", spec.positive_count},
              {"negative_count", spec.negative_count},
              {"trigger_mix", triggers},
              {"tod_band", {spec.tod_band_start, spec.tod_band_end}},
              {"smoothing", detail::smoothing_to_json(spec.smoothing)},
              {"seed", spec.seed}};
  return doc.dump(2) + "\n";
}

ScenarioSpec scenario_from_json(const std::string& text) {
  const json doc = detail::parse_json(text, "scenario");
  if (!doc.is_object()) throw ConfigError("scenario: expected an object");
  ScenarioSpec spec = default_scenario();
  try {
    for (const auto& [key, value] : doc.items()) {
      if (key == "channels") {
        spec.channels.clear();
        for (const auto& c : value) {
          ChannelSpec cs;
          cs.name = detail::require(c, "name", "scenario channel").get<std::string>();
          cs.baseline_mean = c.value("baseline_mean", 0.0);
          cs.baseline_std = c.value("baseline_std", 1.0);
          cs.noise_model = noise_from_string(c.value("noise_model", std::string("white")));
          cs.diurnal_amplitude = c.value("diurnal_amplitude", 0.0);
          spec.channels.push_back(std::move(cs));
        }
      } else if (key == "trigger_mix") {
        spec.trigger_mix.clear();
        for (const auto& t : value) {
          TriggerSpec ts;
          ts.behavior = trigger_behavior_from_string(detail::require(t, "behavior", "trigger").get<std::string>());
          ts.channel = t.value("channel", std::string());
          ts.magnitude_sigma = t.value("magnitude_sigma", 3.0);
          ts.weight = t.value("weight", 1.0);
          spec.trigger_mix.push_back(std::move(ts));
        }
      } else if (key == "window_length_samples") {
        spec.window_length_samples = value.get<int>();
      } else if (key == "sample_rate_hz") {
        spec.sample_rate_hz = value.get<double>();
      } else if (key == "positive_count") {
        spec.positive_count = value.get<int>();
      } else if (key == "negative_count") {
        spec.negative_count = value.get<int>();
      } else if (key == "tod_band") {
        if (!value.is_array() || value.size() != 2) throw ConfigError("scenario: tod_band must be [start, end]");
        spec.tod_band_start = value[0].get<double>();
        spec.tod_band_end = value[1].get<double>();
      } else if (key == "smoothing") {
        spec.smoothing = detail::smoothing_from_json(value);
      } else if (key == "seed") {
        spec.seed = value.get<std::uint64_t>();
      } else {
        throw ConfigError("scenario: unknown field '" + key + "'");
      }
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("scenario: ") + e.what());
  }
  spec.validate();
  return spec;
}

std::string truth_to_json(const GroundTruth& truth) {
  json records = json::object();
  for (const auto& [id, r] : truth.records) {
    records[id] = {{"channel", r.behavior == TriggerBehavior::TimeOfDay ? json(nullptr) : json(r.channel)},
                   {"behavior", to_string(r.behavior)},
                   {"injection_lag", r.injection_lag ? json(*r.injection_lag) : json(nullptr)}};
  }
  json doc = {{"version", 1}, {"observation_ids", truth.observation_ids}, {"records", records}};
  return doc.dump(2) + "\n";
}

GroundTruth truth_from_json(const std::string& text) {
  const json doc = detail::parse_json(text, "ground truth");
  GroundTruth t;
  try {
    for (const auto& id : detail::require(doc, "observation_ids", "ground truth")) {
      t.observation_ids.insert(id.get<std::string>());
    }
    for (const auto& [id, r] : detail::require(doc, "records", "ground truth").items()) {
      TruthRecord rec;
      rec.behavior = trigger_behavior_from_string(r.at("behavior").get<std::string>());
      if (!r.at("channel").is_null()) rec.channel = r.at("channel").get<std::string>();
      if (!r.at("injection_lag").is_null()) rec.injection_lag = r.at("injection_lag").get<int>();
      if (!t.observation_ids.contains(id)) throw ConfigError("ground truth: record for unlisted id '" + id + "'");
      t.records.emplace(id, std::move(rec));
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("ground truth: ") + e.what());
  }
  return t;
}

SyntheticData generate_dataset(const ScenarioSpec& spec) {
  spec.validate();
  const auto total = static_cast<std::size_t>(spec.positive_count + spec.negative_count);
  const auto n = static_cast<std::size_t>(spec.window_length_samples);

  std::vector<Label> labels(total, Label::Negative);
  std::fill_n(labels.begin(), spec.positive_count, Label::Positive);
  Rng order_rng(mix_seed(spec.seed, fnv1a64("label-order")));
  order_rng.shuffle(std::span<Label>(labels));

  double weight_total = 0.0;
  for (const auto& t : spec.trigger_mix) weight_total += t.weight;

  SyntheticData out;
  out.items.reserve(total);
  for (std::size_t i = 0; i < total; ++i) {
    const std::string id = id_for(i, total);
    out.truth.observation_ids.insert(id);
    Rng rng(mix_seed(spec.seed, i));

    std::optional<TriggerSpec> trigger;
    if (labels[i] == Label::Positive) {
      double pick = rng.uniform(0.0, weight_total);
      for (const auto& t : spec.trigger_mix) {
        if (t.weight <= 0.0) continue;
        trigger = t;
        if (pick < t.weight) break;
        pick -= t.weight;
      }
    }

    double tod = rng.uniform(0.0, 24.0);
    if (trigger && trigger->behavior == TriggerBehavior::TimeOfDay) {
      tod = draw_in_band(rng, spec.tod_band_start, spec.tod_band_end);
    } else if (!trigger && spec.trigger_mix.size() == 1 &&
               spec.trigger_mix.front().behavior == TriggerBehavior::TimeOfDay) {
      // Keep negatives out of the band when time of day is the only cause.
      while (in_band(tod, spec.tod_band_start, spec.tod_band_end)) tod = rng.uniform(0.0, 24.0);
    }

    std::optional<int> lag;
    if (trigger && (trigger->behavior == TriggerBehavior::SuddenChangeUp ||
                    trigger->behavior == TriggerBehavior::SuddenChangeDown)) {
      const auto lo = static_cast<std::uint64_t>(std::floor(0.2 * static_cast<double>(n)));
      const auto hi = static_cast<std::uint64_t>(std::ceil(0.8 * static_cast<double>(n)));
      lag = static_cast<int>(lo + rng.uniform_index(hi - lo));
    }

    std::map<std::string, TimeSeries> channels;
    for (const auto& c : spec.channels) {
      std::vector<double> v(n);
      double walk = 0.0;
      const double walk_step = c.baseline_std / std::sqrt(static_cast<double>(n));
      for (std::size_t k = 0; k < n; ++k) {
        const double hours = tod + static_cast<double>(k) / (spec.sample_rate_hz * 3600.0);
        double x = c.baseline_mean - c.diurnal_amplitude * std::cos(2.0 * std::numbers::pi * hours / 24.0);
        switch (c.noise_model) {
          case NoiseModel::White: x += c.baseline_std * rng.normal(); break;
          case NoiseModel::RandomWalk:
            walk += walk_step * rng.normal();
            x += walk;
            break;
          case NoiseModel::None: break;
        }
        v[k] = x;
      }
      if (trigger && trigger->behavior != TriggerBehavior::TimeOfDay && trigger->channel == c.name) {
        const double m = trigger->magnitude_sigma * c.baseline_std;
        for (std::size_t k = 0; k < n; ++k) {
          const double ramp = static_cast<double>(k) / static_cast<double>(n - 1);
          const bool after = lag && k >= static_cast<std::size_t>(*lag);
          switch (trigger->behavior) {
            case TriggerBehavior::Increasing: v[k] += m * ramp; break;
            case TriggerBehavior::Decreasing: v[k] -= m * ramp; break;
            case TriggerBehavior::SuddenChangeUp: v[k] += after ? m : 0.0; break;
            case TriggerBehavior::SuddenChangeDown: v[k] -= after ? m : 0.0; break;
            case TriggerBehavior::AbnormallyHigh: v[k] += m; break;
            case TriggerBehavior::AbnormallyLow: v[k] -= m; break;
            case TriggerBehavior::TimeOfDay: break;
          }
        }
      }
      channels.emplace(c.name, TimeSeries(std::move(v), spec.sample_rate_hz, c.name));
    }

    if (trigger) {
      TruthRecord rec;
      rec.behavior = trigger->behavior;
      if (trigger->behavior != TriggerBehavior::TimeOfDay) rec.channel = trigger->channel;
      rec.injection_lag = lag;
      out.truth.records.emplace(id, std::move(rec));
    }
    out.items.push_back(
        {Observation::from_channels(id, std::move(channels), tod, spec.smoothing), labels[i]});
  }
  return out;
}

bool channel_recovered(const InterpretationReport& report, const TruthRecord& truth) {
  if (truth.behavior == TriggerBehavior::TimeOfDay) {
    return report.top_predictor.kind == PredictorId::Kind::TimeOfDay;
  }
  return report.top_predictor.is_series() && report.top_predictor.channel == truth.channel;
}

bool behavior_recovered(const InterpretationReport& report, const TruthRecord& truth) {
  if (!channel_recovered(report, truth)) return false;
  const BehaviorLabel got = report.evidence.label;
  switch (truth.behavior) {
    case TriggerBehavior::Increasing: return got == BehaviorLabel::Increasing;
    case TriggerBehavior::Decreasing: return got == BehaviorLabel::Decreasing;
    case TriggerBehavior::SuddenChangeUp: return got == BehaviorLabel::SuddenChangeUp;
    case TriggerBehavior::SuddenChangeDown: return got == BehaviorLabel::SuddenChangeDown;
    case TriggerBehavior::AbnormallyHigh: return got == BehaviorLabel::AbnormallyHigh;
    case TriggerBehavior::AbnormallyLow: return got == BehaviorLabel::AbnormallyLow;
    case TriggerBehavior::TimeOfDay: return true;
  }
  return false;
}

RecoveryMetrics score_recovery(const std::vector<InterpretationReport>& reports, const GroundTruth& truth) {
  RecoveryMetrics m;
  std::map<std::pair<std::string, BehaviorLabel>, std::size_t> counts;
  std::size_t positives = 0;
  for (const auto& r : reports) {
    if (!truth.observation_ids.contains(r.observation_id)) {
      throw ConfigError("report for observation '" + r.observation_id + "' has no ground-truth entry");
    }
    if (r.prediction.label != Label::Positive) continue;
    ++positives;
    ++counts[{r.top_predictor.key(), r.evidence.label}];
    const auto it = truth.records.find(r.observation_id);
    if (it == truth.records.end()) continue;
    ++m.true_positive_count;
    if (channel_recovered(r, it->second)) ++m.channel_hits;
    if (behavior_recovered(r, it->second)) ++m.behavior_hits;
  }
  if (m.true_positive_count > 0) {
    const auto tp = static_cast<double>(m.true_positive_count);
    m.channel_rate = static_cast<double>(m.channel_hits) / tp;
    m.behavior_rate = static_cast<double>(m.behavior_hits) / tp;
  }
  for (const auto& [key, count] : counts) {
    m.causes.push_back({key.first, key.second, count, static_cast<double>(count) / static_cast<double>(positives)});
  }
  std::stable_sort(m.causes.begin(), m.causes.end(),
                   [](const CauseFrequency& a, const CauseFrequency& b) { return a.count > b.count; });
  return m;
}

std::string format_rate(const std::optional<double>& rate) {
  if (!rate) return "n/a";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.1f%%", *rate * 100.0);
  return buf;
}

}  // namespace actint
