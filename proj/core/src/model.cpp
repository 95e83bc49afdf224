#include "actint/model.hpp"

#include <cmath>

#include "actint/errors.hpp"
#include "actint/features.hpp"
#include "json_util.hpp"

namespace actint {

using detail::json;

double logistic(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

void TrainingConfig::validate() const {
  if (epochs < 1) throw ConfigError("training epochs must be >= 1");
  if (!(learning_rate > 0.0)) throw ConfigError("training learning_rate must be positive");
  if (!(l2 >= 0.0)) throw ConfigError("training l2 must be non-negative");
  if (!(positive_weight > 0.0) || !(negative_weight > 0.0)) {
    throw ConfigError("class weights must be positive");
  }
  if (pool_width < 1) throw ConfigError("pool_width must be >= 1");
  if (!(decision_threshold > 0.0 && decision_threshold < 1.0)) {
    throw ConfigError("decision_threshold must lie in (0, 1)");
  }
}

BaselineModel::BaselineModel(std::vector<std::string> channels,
                             std::vector<FeatureDescriptor> feature_spec, std::vector<double> weights,
                             double bias, double threshold, std::vector<ChannelStats> training_stats,
                             TrainingConfig training, std::optional<SmoothingConfig> smoothing)
    : channels_(std::move(channels)),
      feature_spec_(std::move(feature_spec)),
      weights_(std::move(weights)),
      bias_(bias),
      threshold_(threshold),
      training_stats_(std::move(training_stats)),
      training_(training),
      smoothing_(smoothing) {
  if (weights_.size() != feature_spec_.size()) {
    throw ConfigError("baseline model has " + std::to_string(weights_.size()) + " weights for " +
                      std::to_string(feature_spec_.size()) + " features");
  }
  const auto expected = feature_names(channels_, training_.pool_width);
  if (expected.size() != feature_spec_.size()) {
    throw ConfigError("baseline model feature spec does not match its channel list");
  }
  for (std::size_t i = 0; i < expected.size(); ++i) {
    if (feature_spec_[i].name != expected[i]) {
      throw ConfigError("baseline model feature " + std::to_string(i) + " is '" +
                        feature_spec_[i].name + "', expected '" + expected[i] + "'");
    }
    if (!(feature_spec_[i].scale > 0.0)) throw ConfigError("feature scale must be positive");
  }
  if (!(threshold_ > 0.0 && threshold_ < 1.0)) {
    throw ConfigError("decision threshold must lie in (0, 1)");
  }
}

double BaselineModel::decision_value(const std::vector<double>& features) const {
  double z = bias_;
  for (std::size_t i = 0; i < weights_.size(); ++i) {
    z += weights_[i] * ((features[i] - feature_spec_[i].center) / feature_spec_[i].scale);
  }
  return z;
}

double BaselineModel::probability(const Observation& obs) const {
  if (obs.channel_names() != channels_) {
    throw DataQualityError("observation '" + obs.id() + "' channels do not match the model's");
  }
  return logistic(decision_value(model_features(obs, training_.pool_width)));
}

Prediction BaselineModel::predict_proba(const Observation& obs) {
  return Prediction::from_probability(probability(obs), threshold_);
}

BaselineModel BaselineModel::with_threshold(double threshold) const {
  BaselineModel copy = *this;
  if (!(threshold > 0.0 && threshold < 1.0)) {
    throw ConfigError("decision threshold must lie in (0, 1)");
  }
  copy.threshold_ = threshold;
  return copy;
}

BaselineModel BaselineModel::with_weights(std::vector<double> weights, double bias) const {
  return BaselineModel(channels_, feature_spec_, std::move(weights), bias, threshold_, training_stats_,
                       training_, smoothing_);
}

bool BaselineModel::operator==(const BaselineModel& other) const {
  return channels_ == other.channels_ && feature_spec_ == other.feature_spec_ &&
         weights_ == other.weights_ && bias_ == other.bias_ && threshold_ == other.threshold_ &&
         training_stats_ == other.training_stats_ && training_ == other.training_ &&
         smoothing_ == other.smoothing_;
}

std::string BaselineModel::to_json() const {
  json features = json::array();
  for (const auto& d : feature_spec_) {
    features.push_back({{"name", d.name}, {"center", d.center}, {"scale", d.scale}});
  }
  json doc = {
      {"version", kFormatVersion},
      {"kind", name()},
      {"feature_spec",
       {{"channels", channels_}, {"pool_width", training_.pool_width}, {"features", features}}},
      {"weights", weights_},
      {"bias", bias_},
      {"threshold", threshold_},
      {"training_stats", detail::stats_to_json(training_stats_)},
      {"smoothing", detail::smoothing_to_json(smoothing_)},
      {"training",
       {{"epochs", training_.epochs},
        {"learning_rate", training_.learning_rate},
        {"l2", training_.l2},
        {"positive_weight", training_.positive_weight},
        {"negative_weight", training_.negative_weight},
        {"decision_threshold", training_.decision_threshold},
        {"seed", training_.seed}}},
  };
  return doc.dump(2) + "\n";
}

BaselineModel BaselineModel::from_json(const std::string& text) {
  const json doc = detail::parse_json(text, "model file");
  try {
    const int version = detail::require(doc, "version", "model file").get<int>();
    if (version != kFormatVersion) {
      throw ConfigError("unsupported model file version " + std::to_string(version));
    }
    const json& spec = detail::require(doc, "feature_spec", "model file");
    TrainingConfig training;
    training.pool_width = detail::require(spec, "pool_width", "feature_spec").get<int>();
    if (doc.contains("training")) {
      const json& t = doc.at("training");
      training.epochs = t.value("epochs", training.epochs);
      training.learning_rate = t.value("learning_rate", training.learning_rate);
      training.l2 = t.value("l2", training.l2);
      training.positive_weight = t.value("positive_weight", training.positive_weight);
      training.negative_weight = t.value("negative_weight", training.negative_weight);
      training.decision_threshold = t.value("decision_threshold", training.decision_threshold);
      training.seed = t.value("seed", training.seed);
    }
    std::vector<FeatureDescriptor> features;
    for (const auto& f : detail::require(spec, "features", "feature_spec")) {
      features.push_back({detail::require(f, "name", "feature").get<std::string>(),
                          detail::require(f, "center", "feature").get<double>(),
                          detail::require(f, "scale", "feature").get<double>()});
    }
    return BaselineModel(detail::require(spec, "channels", "feature_spec").get<std::vector<std::string>>(),
                         std::move(features),
                         detail::require(doc, "weights", "model file").get<std::vector<double>>(),
                         detail::require(doc, "bias", "model file").get<double>(),
                         detail::require(doc, "threshold", "model file").get<double>(),
                         detail::stats_from_json(detail::require(doc, "training_stats", "model file")),
                         training,
                         detail::smoothing_from_json(doc.value("smoothing", json(nullptr))));
  } catch (const json::exception& e) {
    throw ConfigError(std::string("model file: ") + e.what());
  }
}

void BaselineModel::save(const std::string& path) const { detail::write_text_file(path, to_json()); }

BaselineModel BaselineModel::load(const std::string& path) {
  return from_json(detail::read_text_file(path));
}

BaselineModel train_baseline(std::span<const LabeledObservation> dataset, const TrainingConfig& config,
                             const std::optional<SmoothingConfig>& smoothing) {
  config.validate();
  if (dataset.empty()) throw DataQualityError("cannot train on an empty dataset");
  std::size_t positives = 0;
  for (const auto& e : dataset) positives += e.label == Label::Positive ? 1 : 0;
  if (positives == 0 || positives == dataset.size()) {
    throw DataQualityError("training data must contain both labels (got " + std::to_string(positives) +
                           " positive of " + std::to_string(dataset.size()) + ")");
  }

  const auto channels = dataset.front().observation.channel_names();
  const std::size_t n = dataset.size();
  std::vector<std::vector<double>> x(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (dataset[i].observation.channel_names() != channels) {
      throw DataQualityError("observation '" + dataset[i].observation.id() +
                             "' has a different channel set");
    }
    x[i] = model_features(dataset[i].observation, config.pool_width);
  }
  const auto names = feature_names(channels, config.pool_width);
  const std::size_t d = names.size();

  std::vector<FeatureDescriptor> spec(d);
  for (std::size_t j = 0; j < d; ++j) {
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) sum += x[i][j];
    const double center = sum / static_cast<double>(n);
    double ss = 0.0;
    for (std::size_t i = 0; i < n; ++i) ss += (x[i][j] - center) * (x[i][j] - center);
    const double sd = std::sqrt(ss / static_cast<double>(n));
    spec[j] = {names[j], center, sd > 1e-12 ? sd : 1.0};
    for (std::size_t i = 0; i < n; ++i) x[i][j] = (x[i][j] - center) / spec[j].scale;
  }

  std::vector<double> sample_weight(n);
  double weight_total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sample_weight[i] =
        dataset[i].label == Label::Positive ? config.positive_weight : config.negative_weight;
    weight_total += sample_weight[i];
  }

  std::vector<double> w(d, 0.0);
  double b = 0.0;
  std::vector<double> grad(d);
  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    std::fill(grad.begin(), grad.end(), 0.0);
    double grad_b = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double z = b;
      for (std::size_t j = 0; j < d; ++j) z += w[j] * x[i][j];
      const double y = dataset[i].label == Label::Positive ? 1.0 : 0.0;
      const double err = sample_weight[i] * (logistic(z) - y);
      for (std::size_t j = 0; j < d; ++j) grad[j] += err * x[i][j];
      grad_b += err;
    }
    for (std::size_t j = 0; j < d; ++j) {
      w[j] -= config.learning_rate * (grad[j] / weight_total + config.l2 * w[j]);
    }
    b -= config.learning_rate * grad_b / weight_total;
  }

  std::vector<Observation> windows;
  windows.reserve(n);
  for (const auto& e : dataset) windows.push_back(e.observation);
  auto stats = compute_channel_stats(windows);

  return BaselineModel(channels, std::move(spec), std::move(w), b, config.decision_threshold,
                       std::move(stats), config, smoothing);
}

}  // namespace actint
