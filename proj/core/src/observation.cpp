#include "actint/observation.hpp"

#include <cmath>

#include "actint/errors.hpp"

namespace actint {

Observation::Observation(std::string id, std::map<std::string, TimeSeries> channels,
                         std::map<std::string, TimeSeries> channel_roc, double time_of_day)
    : id_(std::move(id)),
      channels_(std::move(channels)),
      roc_(std::move(channel_roc)),
      time_of_day_(time_of_day) {
  if (channels_.empty()) throw DataQualityError("observation '" + id_ + "' has no channels");
  if (!(time_of_day_ >= 0.0 && time_of_day_ < 24.0)) {
    throw DataQualityError("observation '" + id_ + "' time_of_day must lie in [0, 24)");
  }
  const auto& first = channels_.begin()->second;
  for (const auto& [name, series] : channels_) {
    if (series.size() != first.size() || series.sample_rate_hz() != first.sample_rate_hz()) {
      throw DataQualityError("observation '" + id_ + "' channel '" + name +
                             "' differs in length or rate from the other channels");
    }
    const auto it = roc_.find(name);
    if (it == roc_.end()) {
      throw DataQualityError("observation '" + id_ + "' lacks the ROC of channel '" + name + "'");
    }
    if (it->second.size() != series.size()) {
      throw DataQualityError("observation '" + id_ + "' ROC of '" + name + "' has the wrong length");
    }
  }
  if (roc_.size() != channels_.size()) {
    throw DataQualityError("observation '" + id_ + "' has ROC series without a raw channel");
  }
}

Observation Observation::from_channels(std::string id, std::map<std::string, TimeSeries> channels,
                                       double time_of_day,
                                       const std::optional<SmoothingConfig>& smoothing) {
  std::map<std::string, TimeSeries> roc;
  for (const auto& [name, series] : channels) roc.emplace(name, rate_of_change(series, smoothing));
  return Observation(std::move(id), std::move(channels), std::move(roc), time_of_day);
}

std::vector<std::string> Observation::channel_names() const {
  std::vector<std::string> names;
  names.reserve(channels_.size());
  for (const auto& [name, _] : channels_) names.push_back(name);
  return names;
}

const TimeSeries& Observation::channel(const std::string& name) const {
  const auto it = channels_.find(name);
  if (it == channels_.end()) {
    throw DataQualityError("observation '" + id_ + "' has no channel '" + name + "'");
  }
  return it->second;
}

const TimeSeries& Observation::roc(const std::string& name) const {
  const auto it = roc_.find(name);
  if (it == roc_.end()) {
    throw DataQualityError("observation '" + id_ + "' has no ROC for channel '" + name + "'");
  }
  return it->second;
}

namespace {

void replace_series(std::map<std::string, TimeSeries>& series, const std::string& id,
                    const std::string& name, std::vector<double> values) {
  const auto it = series.find(name);
  if (it == series.end()) {
    throw DataQualityError("observation '" + id + "' has no series '" + name + "'");
  }
  if (values.size() != it->second.size()) throw DataQualityError("replacement length mismatch");
  it->second = it->second.with_values(std::move(values));
}

}  // namespace

void Observation::replace_channel(const std::string& name, std::vector<double> values) {
  replace_series(channels_, id_, name, std::move(values));
}

void Observation::replace_roc(const std::string& name, std::vector<double> values) {
  replace_series(roc_, id_, name, std::move(values));
}

void Observation::set_time_of_day(double hours) {
  if (!(hours >= 0.0 && hours < 24.0)) throw DataQualityError("time_of_day must lie in [0, 24)");
  time_of_day_ = hours;
}

std::string PredictorId::key() const {
  switch (kind) {
    case Kind::Raw:
      return "raw:" + channel;
    case Kind::Roc:
      return "roc:" + channel;
    case Kind::TimeOfDay:
      break;
  }
  return "time_of_day";
}

PredictorId PredictorId::parse(const std::string& key) {
  if (key == "time_of_day") return time_of_day();
  if (key.starts_with("raw:") && key.size() > 4) return raw(key.substr(4));
  if (key.starts_with("roc:") && key.size() > 4) return roc(key.substr(4));
  throw ConfigError("unknown predictor key '" + key + "'");
}

std::string PredictorId::display() const {
  switch (kind) {
    case Kind::Raw:
      return channel + " level";
    case Kind::Roc:
      return channel + " ROC";
    case Kind::TimeOfDay:
      break;
  }
  return "Time-of-day";
}

std::strong_ordering PredictorId::operator<=>(const PredictorId& other) const {
  const bool tod = kind == Kind::TimeOfDay;
  const bool other_tod = other.kind == Kind::TimeOfDay;
  if (tod || other_tod) {
    if (tod && other_tod) return std::strong_ordering::equal;
    return tod ? std::strong_ordering::greater : std::strong_ordering::less;
  }
  if (const auto c = channel <=> other.channel; c != 0) return c;
  return static_cast<int>(kind) <=> static_cast<int>(other.kind);
}

std::vector<PredictorId> predictors_of(const Observation& obs) {
  std::vector<PredictorId> out;
  for (const auto& name : obs.channel_names()) {
    out.push_back(PredictorId::raw(name));
    out.push_back(PredictorId::roc(name));
  }
  out.push_back(PredictorId::time_of_day());
  return out;
}

Prediction Prediction::from_probability(double probability, double threshold) {
  if (!(probability >= 0.0 && probability <= 1.0)) {
    throw DataQualityError("probability " + std::to_string(probability) + " outside [0, 1]");
  }
  return {probability >= threshold ? Label::Positive : Label::Negative, probability};
}

}  // namespace actint
