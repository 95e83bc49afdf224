#include "actint/dataset.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>

#include "actint/errors.hpp"
#include "actint/report.hpp"
#include "actint/rng.hpp"
#include "json_util.hpp"

namespace actint {

using detail::json;

namespace {

constexpr char kAlphabet[] = "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789+/";

std::uint64_t to_little(std::uint64_t v) {
  if constexpr (std::endian::native == std::endian::big) return __builtin_bswap64(v);
  return v;
}

int sextet(char c) {
  if (c >= 'A' && c <= 'Z') return c - 'A';
  if (c >= 'a' && c <= 'z') return c - 'a' + 26;
  if (c >= '0' && c <= '9') return c - '0' + 52;
  if (c == '+') return 62;
  if (c == '/') return 63;
  return -1;
}

std::string split_name(Split s) { return s == Split::Train ? "train" : "test"; }

Split split_from(const std::string& s) {
  if (s == "train") return Split::Train;
  if (s == "test") return Split::Test;
  throw ConfigError("dataset: unknown split '" + s + "'");
}

}  // namespace

std::string encode_doubles(const std::vector<double>& values) {
  std::string bytes(values.size() * 8, '\0');
  for (std::size_t i = 0; i < values.size(); ++i) {
    const std::uint64_t le = to_little(std::bit_cast<std::uint64_t>(values[i]));
    std::memcpy(bytes.data() + 8 * i, &le, 8);
  }
  std::string out;
  out.reserve((bytes.size() + 2) / 3 * 4);
  std::size_t i = 0;
  for (; i + 3 <= bytes.size(); i += 3) {
    const std::uint32_t v = (static_cast<unsigned char>(bytes[i]) << 16) |
                            (static_cast<unsigned char>(bytes[i + 1]) << 8) |
                            static_cast<unsigned char>(bytes[i + 2]);
    out += kAlphabet[(v >> 18) & 63];
    out += kAlphabet[(v >> 12) & 63];
    out += kAlphabet[(v >> 6) & 63];
    out += kAlphabet[v & 63];
  }
  const std::size_t rest = bytes.size() - i;
  if (rest > 0) {
    std::uint32_t v = static_cast<unsigned char>(bytes[i]) << 16;
    if (rest == 2) v |= static_cast<unsigned char>(bytes[i + 1]) << 8;
    out += kAlphabet[(v >> 18) & 63];
    out += kAlphabet[(v >> 12) & 63];
    out += rest == 2 ? kAlphabet[(v >> 6) & 63] : '=';
    out += '=';
  }
  return out;
}

std::vector<double> decode_doubles(const std::string& text) {
  if (text.size() % 4 != 0) throw ConfigError("dataset: base64 length is not a multiple of 4");
  std::string bytes;
  bytes.reserve(text.size() / 4 * 3);
  for (std::size_t i = 0; i < text.size(); i += 4) {
    int s[4];
    int pad = 0;
    for (int k = 0; k < 4; ++k) {
      const char c = text[i + k];
      if (c == '=' && i + 4 == text.size() && k >= 2) {
        s[k] = 0;
        ++pad;
      } else {
        s[k] = sextet(c);
        if (s[k] < 0 || pad > 0) throw ConfigError("dataset: invalid base64 payload");
      }
    }
    const std::uint32_t v = (s[0] << 18) | (s[1] << 12) | (s[2] << 6) | s[3];
    bytes += static_cast<char>((v >> 16) & 0xFF);
    if (pad < 2) bytes += static_cast<char>((v >> 8) & 0xFF);
    if (pad < 1) bytes += static_cast<char>(v & 0xFF);
  }
  if (bytes.size() % 8 != 0) throw ConfigError("dataset: payload is not a whole number of doubles");
  std::vector<double> out(bytes.size() / 8);
  for (std::size_t i = 0; i < out.size(); ++i) {
    std::uint64_t le;
    std::memcpy(&le, bytes.data() + 8 * i, 8);
    out[i] = std::bit_cast<double>(to_little(le));
  }
  return out;
}

std::vector<LabeledObservation> Dataset::with_split(Split split) const {
  std::vector<LabeledObservation> out;
  for (const auto& e : entries) {
    if (e.split == split) out.push_back({e.observation, e.label});
  }
  return out;
}

std::vector<LabeledObservation> Dataset::all() const {
  std::vector<LabeledObservation> out;
  out.reserve(entries.size());
  for (const auto& e : entries) out.push_back({e.observation, e.label});
  return out;
}

std::vector<Observation> Dataset::observations() const {
  std::vector<Observation> out;
  out.reserve(entries.size());
  for (const auto& e : entries) out.push_back(e.observation);
  return out;
}

std::string dataset_to_json(const Dataset& dataset) {
  json obs = json::array();
  for (const auto& e : dataset.entries) {
    json channels = json::object();
    for (const auto& [name, s] : e.observation.channels()) {
      channels[name] = {{"rate_hz", s.sample_rate_hz()},
                        {"values", encode_doubles({s.values().begin(), s.values().end()})}};
    }
    obs.push_back({{"id", e.observation.id()},
                   {"label", to_string(e.label)},
                   {"split", split_name(e.split)},
                   {"overlap", e.overlap},
                   {"time_of_day", e.observation.time_of_day()},
                   {"channels", std::move(channels)}});
  }
  json doc = {{"version", Dataset::kFormatVersion},
              {"kind", "actint-dataset"},
              {"encoding", "f64le-base64"},
              {"smoothing", detail::smoothing_to_json(dataset.smoothing)},
              {"observations", std::move(obs)}};
  return doc.dump() + "\n";
}

Dataset dataset_from_json(const std::string& text) {
  const json doc = detail::parse_json(text, "dataset");
  Dataset d;
  try {
    const int version = detail::require(doc, "version", "dataset").get<int>();
    if (version != Dataset::kFormatVersion) {
      throw ConfigError("dataset: unsupported version " + std::to_string(version));
    }
    d.smoothing = detail::smoothing_from_json(detail::require(doc, "smoothing", "dataset"));
    for (const auto& o : detail::require(doc, "observations", "dataset")) {
      const auto id = detail::require(o, "id", "dataset observation").get<std::string>();
      std::map<std::string, TimeSeries> channels;
      for (const auto& [name, s] : detail::require(o, "channels", id).items()) {
        const json& v = detail::require(s, "values", id);
        std::vector<double> values = v.is_string() ? decode_doubles(v.get<std::string>()) : v.get<std::vector<double>>();
        channels.emplace(name, TimeSeries(std::move(values), detail::require(s, "rate_hz", id).get<double>(), name));
      }
      DatasetEntry e{Observation::from_channels(id, std::move(channels),
                                                detail::require(o, "time_of_day", id).get<double>(), d.smoothing),
                     label_from_string(detail::require(o, "label", id).get<std::string>()),
                     split_from(o.value("split", std::string("train"))), o.value("overlap", false)};
      d.entries.push_back(std::move(e));
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("dataset: ") + e.what());
  }
  return d;
}

void save_dataset(const Dataset& dataset, const std::string& path) {
  detail::write_text_file(path, dataset_to_json(dataset));
}

Dataset load_dataset(const std::string& path) { return dataset_from_json(detail::read_text_file(path)); }

void assign_stratified_split(Dataset& dataset, double train_fraction, std::uint64_t seed) {
  if (!(train_fraction > 0.0 && train_fraction <= 1.0)) throw ConfigError("train fraction must lie in (0, 1]");
  for (Label label : {Label::Negative, Label::Positive}) {
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < dataset.entries.size(); ++i) {
      if (dataset.entries[i].label == label) idx.push_back(i);
    }
    Rng rng(mix_seed(seed, static_cast<std::uint64_t>(label)));
    rng.shuffle(std::span<std::size_t>(idx));
    const auto n_train = static_cast<std::size_t>(std::llround(train_fraction * static_cast<double>(idx.size())));
    for (std::size_t k = 0; k < idx.size(); ++k) {
      dataset.entries[idx[k]].split = k < n_train ? Split::Train : Split::Test;
    }
  }
}

void export_dataset_csv(const Dataset& dataset, const std::string& directory) {
  namespace fs = std::filesystem;
  fs::create_directories(directory);
  if (dataset.entries.empty()) return;
  const auto names = dataset.entries.front().observation.channel_names();
  std::ofstream labels(fs::path(directory) / "labels.csv");
  labels << "id,label,split,time_of_day,start_timestamp\n";
  std::map<std::string, std::ofstream> files;
  for (const auto& name : names) {
    auto& f = files[name];
    f.open(fs::path(directory) / (name + ".csv"));
    f.precision(17);
    f << "timestamp,value\n";
  }
  labels.precision(17);
  double base = 0.0;
  for (const auto& e : dataset.entries) {
    const auto& obs = e.observation;
    const double rate = obs.sample_rate_hz();
    labels << obs.id() << ',' << to_string(e.label) << ',' << split_name(e.split) << ',' << obs.time_of_day() << ','
           << base << '\n';
    for (const auto& name : names) {
      const auto v = obs.channel(name).values();
      auto& f = files[name];
      for (std::size_t k = 0; k < v.size(); ++k) f << base + static_cast<double>(k) / rate << ',' << v[k] << '\n';
    }
    base += static_cast<double>(obs.window_length()) / rate;
  }
  for (auto& [name, f] : files) {
    if (!f) throw ConfigError("writing CSV export for channel '" + name + "' failed");
  }
}

}  // namespace actint
