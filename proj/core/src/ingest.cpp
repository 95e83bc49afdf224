#include "actint/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <limits>
#include <sstream>

#include "actint/errors.hpp"
#include "actint/rng.hpp"
#include "json_util.hpp"

namespace actint {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::optional<double> parse_number(const std::string& field) {
  const std::string f = trim(field);
  if (f.empty()) return std::nullopt;
  double v = 0.0;
  const char* first = f.data();
  if (*first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, f.data() + f.size(), v);
  if (ec != std::errc() || ptr != f.data() + f.size() || !std::isfinite(v)) return std::nullopt;
  return v;
}

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(line);
  while (std::getline(in, cur, ',')) out.push_back(cur);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

std::string fmt_time(double t) {
  std::ostringstream s;
  s.precision(15);
  s << t;
  return s.str();
}

std::string event_id(const char* prefix, std::size_t index, double t) {
  std::string digits = std::to_string(index);
  if (digits.size() < 4) digits.insert(0, 4 - digits.size(), '0');
  return std::string(prefix) + "-" + digits + "-" + std::to_string(std::llround(t));
}

}  // namespace

void IngestConfig::validate() const {
  if (!(window.lead_start_min > window.lead_end_min)) throw ConfigError("window lead_start must exceed lead_end");
  if (!(grid_rate_hz > 0.0)) throw ConfigError("grid rate must be positive");
  if (!(negative_ratio >= 0.0)) throw ConfigError("negative ratio must be >= 0");
  if (!(candidate_stride_s > 0.0)) throw ConfigError("candidate stride must be positive");
  if (!(train_fraction > 0.0 && train_fraction <= 1.0)) throw ConfigError("train fraction must lie in (0, 1]");
  if (!std::isfinite(tod_offset_hours)) throw ConfigError("time-of-day offset must be finite");
  if (smoothing) smoothing->validate();
}

RawStream parse_channel_csv(const std::string& text, const std::string& channel, const std::string& file_name,
                            std::vector<std::string>& diagnostics) {
  RawStream s;
  s.channel = channel;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  bool first_content = true;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    const auto fields = split_fields(t);
    const auto ts = fields.size() == 2 ? parse_number(fields[0]) : std::nullopt;
    const auto v = fields.size() == 2 ? parse_number(fields[1]) : std::nullopt;
    const bool header = first_content && !parse_number(fields[0]);
    first_content = false;
    if (header) continue;
    const std::string where = file_name + ":" + std::to_string(line_no) + ": ";
    if (fields.size() != 2) {
      diagnostics.push_back(where + "expected 2 fields, got " + std::to_string(fields.size()));
    } else if (!ts) {
      diagnostics.push_back(where + "bad timestamp '" + trim(fields[0]) + "'");
    } else if (!v) {
      diagnostics.push_back(where + "bad value '" + trim(fields[1]) + "'");
    } else if (!s.timestamps.empty() && *ts <= s.timestamps.back()) {
      diagnostics.push_back(where + "timestamp " + fmt_time(*ts) + " is not after the previous row");
    } else {
      s.timestamps.push_back(*ts);
      s.values.push_back(*v);
    }
  }
  if (s.timestamps.size() < 2) {
    diagnostics.push_back(file_name + ": fewer than 2 valid rows");
    return s;
  }
  std::vector<double> diffs(s.timestamps.size() - 1);
  for (std::size_t i = 0; i + 1 < s.timestamps.size(); ++i) diffs[i] = s.timestamps[i + 1] - s.timestamps[i];
  std::nth_element(diffs.begin(), diffs.begin() + diffs.size() / 2, diffs.end());
  s.detected_rate_hz = 1.0 / diffs[diffs.size() / 2];
  return s;
}

std::vector<double> parse_label_csv(const std::string& text, const std::string& file_name,
                                    std::vector<std::string>& diagnostics) {
  std::vector<double> events;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  bool first_content = true;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    const auto fields = split_fields(t);
    const auto ts = parse_number(fields[0]);
    const bool header = first_content && !ts;
    first_content = false;
    if (header) continue;
    if (fields.size() != 1 || !ts) {
      diagnostics.push_back(file_name + ":" + std::to_string(line_no) + ": expected one timestamp");
      continue;
    }
    events.push_back(*ts);
  }
  return events;
}

Grid build_grid(const std::vector<RawStream>& streams, double grid_rate_hz) {
  if (streams.empty()) throw DataQualityError("no channel streams");
  Grid g;
  g.rate_hz = grid_rate_hz;
  double first = -std::numeric_limits<double>::infinity();
  double end = std::numeric_limits<double>::infinity();
  for (const auto& s : streams) {
    if (s.timestamps.size() < 2) throw DataQualityError("channel '" + s.channel + "' has fewer than 2 samples");
    if (s.detected_rate_hz < grid_rate_hz * (1.0 - 1e-6)) {
      throw DataQualityError("channel '" + s.channel + "' is sampled at " + fmt_time(s.detected_rate_hz) +
                             " Hz, below the " + fmt_time(grid_rate_hz) + " Hz grid");
    }
    first = std::max(first, s.timestamps.front());
    end = std::min(end, s.timestamps.back() + 1.0 / s.detected_rate_hz);
  }
  constexpr double kSlack = 1e-9;
  g.start_time = std::ceil(first * grid_rate_hz - kSlack) / grid_rate_hz;
  const double span = (end - g.start_time) * grid_rate_hz;
  if (span < 1.0) throw DataQualityError("channel streams do not overlap in time");
  const auto cells = static_cast<std::size_t>(std::floor(span + kSlack));

  std::vector<RawStream> sorted = streams;
  std::sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) { return a.channel < b.channel; });
  for (const auto& s : sorted) {
    std::vector<double> sum(cells, 0.0);
    std::vector<int> count(cells, 0);
    for (std::size_t i = 0; i < s.timestamps.size(); ++i) {
      const double pos = std::floor((s.timestamps[i] - g.start_time) * grid_rate_hz + kSlack);
      if (pos < 0.0 || pos >= static_cast<double>(cells)) continue;
      const auto k = static_cast<std::size_t>(pos);
      sum[k] += s.values[i];
      ++count[k];
    }
    GridChannel ch{s.channel, std::vector<double>(cells)};
    for (std::size_t k = 0; k < cells; ++k) ch.values[k] = count[k] > 0 ? sum[k] / count[k] : kNaN;
    g.channels.push_back(std::move(ch));
  }
  return g;
}

IngestReport ingest_streams(const std::vector<RawStream>& streams, std::vector<double> events,
                            const IngestConfig& config) {
  config.validate();
  IngestReport out;
  out.dataset.smoothing = config.smoothing;
  const Grid grid = build_grid(streams, config.grid_rate_hz);
  const std::size_t cells = grid.cell_count();
  if (cells < 2) throw DataQualityError("common grid has fewer than 2 cells");

  // extract_window needs finite series, so gaps travel in a separate mask.
  std::vector<TimeSeries> filled;
  std::vector<TimeSeries> masks;
  for (const auto& ch : grid.channels) {
    std::vector<double> v(cells);
    std::vector<double> m(cells);
    for (std::size_t k = 0; k < cells; ++k) {
      const bool gap = std::isnan(ch.values[k]);
      v[k] = gap ? 0.0 : ch.values[k];
      m[k] = gap ? 1.0 : 0.0;
    }
    filled.emplace_back(std::move(v), grid.rate_hz, ch.channel);
    masks.emplace_back(std::move(m), grid.rate_hz, ch.channel);
  }

  std::sort(events.begin(), events.end());
  if (const auto last = std::unique(events.begin(), events.end()); last != events.end()) {
    out.warnings.push_back(std::to_string(events.end() - last) + " duplicate event timestamp(s) ignored");
    events.erase(last, events.end());
  }

  const double lead_start = config.window.lead_start_min * 60.0;
  const double lead_end = config.window.lead_end_min * 60.0;
  const double window_seconds = lead_start - lead_end;

  enum class Cut { Ok, Uncovered, Gap };
  struct Window {
    Cut status = Cut::Ok;
    std::map<std::string, TimeSeries> channels;
    std::string detail;
  };
  auto cut = [&](double event_time) {
    Window w;
    for (std::size_t c = 0; c < filled.size(); ++c) {
      try {
        TimeSeries values = extract_window(filled[c], grid.start_time, event_time, config.window);
        const TimeSeries mask = extract_window(masks[c], grid.start_time, event_time, config.window);
        const auto mv = mask.values();
        const auto gap = std::find(mv.begin(), mv.end(), 1.0);
        if (gap != mv.end()) {
          w.status = Cut::Gap;
          const double at = event_time - lead_start + static_cast<double>(gap - mv.begin()) / grid.rate_hz;
          w.detail = "channel '" + grid.channels[c].channel + "' has no samples near t=" + fmt_time(at);
          return w;
        }
        w.channels.emplace(grid.channels[c].channel, std::move(values));
      } catch (const CoverageError& e) {
        w.status = Cut::Uncovered;
        w.detail = e.what();
        return w;
      }
    }
    return w;
  };
  auto time_of_day = [&](double event_time) {
    const double start = event_time - lead_start + config.tod_offset_hours * 3600.0;
    double h = std::fmod(start / 3600.0, 24.0);
    if (h < 0.0) h += 24.0;
    return h >= 24.0 ? 0.0 : h;
  };

  std::vector<double> accepted;
  for (std::size_t i = 0; i < events.size(); ++i) {
    const double e = events[i];
    Window w = cut(e);
    if (w.status == Cut::Uncovered) {
      out.warnings.push_back("event at " + fmt_time(e) + " skipped: " + w.detail);
      continue;
    }
    if (w.status == Cut::Gap) {
      out.skipped.push_back("event at " + fmt_time(e) + " skipped: " + w.detail);
      continue;
    }
    accepted.push_back(e);
    out.dataset.entries.push_back({Observation::from_channels(event_id("pos", accepted.size() - 1, e),
                                                              std::move(w.channels), time_of_day(e), config.smoothing),
                                   Label::Positive, Split::Train, false});
  }
  for (std::size_t i = 0; i < accepted.size(); ++i) {
    for (std::size_t j = 0; j < accepted.size(); ++j) {
      if (i != j && std::fabs(accepted[i] - accepted[j]) < window_seconds) out.dataset.entries[i].overlap = true;
    }
  }
  for (std::size_t i = 0; i < accepted.size(); ++i) {
    if (out.dataset.entries[i].overlap) {
      out.warnings.push_back("event at " + fmt_time(accepted[i]) + " shares samples with another event window");
    }
  }
  out.positives = accepted.size();

  // Candidate negatives: every stride step whose [t - lead_start, t + lead_end]
  // span stays clear of every labeled event's span.
  std::vector<double> candidates;
  const double grid_end = grid.start_time + static_cast<double>(cells) / grid.rate_hz;
  for (double t = grid.start_time + lead_start; t <= grid_end + lead_end + 1e-9; t += config.candidate_stride_s) {
    const double a = t - lead_start;
    const double b = t + lead_end;
    const bool clash = std::any_of(events.begin(), events.end(),
                                   [&](double e) { return a < e + lead_end && e - lead_start < b; });
    if (!clash) candidates.push_back(t);
  }
  const auto wanted = static_cast<std::size_t>(std::llround(config.negative_ratio * static_cast<double>(accepted.size())));
  Rng rng(mix_seed(config.seed, fnv1a64("negatives")));
  rng.shuffle(std::span<double>(candidates));
  std::vector<std::pair<double, Window>> negatives;
  for (double t : candidates) {
    if (negatives.size() >= wanted) break;
    Window w = cut(t);
    if (w.status == Cut::Ok) negatives.emplace_back(t, std::move(w));
  }
  if (negatives.size() < wanted) {
    out.warnings.push_back("only " + std::to_string(negatives.size()) + " clean negative windows available, wanted " +
                           std::to_string(wanted));
  }
  std::sort(negatives.begin(), negatives.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  for (std::size_t i = 0; i < negatives.size(); ++i) {
    const double t = negatives[i].first;
    out.dataset.entries.push_back({Observation::from_channels(event_id("neg", i, t), std::move(negatives[i].second.channels),
                                                              time_of_day(t), config.smoothing),
                                   Label::Negative, Split::Train, false});
  }
  out.negatives = negatives.size();
  assign_stratified_split(out.dataset, config.train_fraction, config.seed);
  return out;
}

IngestReport ingest_directory(const std::string& directory, const IngestConfig& config) {
  namespace fs = std::filesystem;
  config.validate();
  if (!fs::is_directory(directory)) throw ConfigError("'" + directory + "' is not a directory");
  std::vector<std::string> diagnostics;
  std::vector<RawStream> streams;
  std::optional<std::vector<double>> events;
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(directory)) {
    if (entry.is_regular_file() && entry.path().extension() == ".csv") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  for (const auto& path : files) {
    const std::string text = detail::read_text_file(path.string());
    if (path.filename() == config.label_file) {
      events = parse_label_csv(text, path.filename().string(), diagnostics);
    } else {
      streams.push_back(parse_channel_csv(text, path.stem().string(), path.filename().string(), diagnostics));
    }
  }
  if (!events) throw ConfigError("label file '" + config.label_file + "' not found in '" + directory + "'");
  if (streams.empty()) throw ConfigError("no channel CSV files in '" + directory + "'");
  if (!diagnostics.empty()) {
    std::string msg = std::to_string(diagnostics.size()) + " malformed row(s):";
    for (const auto& d : diagnostics) msg += "\n  " + d;
    throw DataQualityError(msg);
  }
  return ingest_streams(streams, std::move(*events), config);
}

}  // namespace actint
