#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "actint/dataset.hpp"

namespace actint {

struct IngestConfig {
  WindowSpec window;
  /// Common grid every channel is averaged onto.
  double grid_rate_hz = 1.0;
  /// Negatives per accepted positive.
  double negative_ratio = 4.0;
  /// Spacing of candidate negative event times, seconds.
  double candidate_stride_s = 60.0;
  /// Added to UTC when deriving the time of day of a window start.
  double tod_offset_hours = 0.0;
  double train_fraction = 0.7;
  std::uint64_t seed = 0;
  std::optional<SmoothingConfig> smoothing = SmoothingConfig{};
  std::string label_file = "labels.csv";

  void validate() const;
  bool operator==(const IngestConfig&) const = default;
};

/// One channel file after parsing: strictly increasing timestamps.
struct RawStream {
  std::string channel;
  std::vector<double> timestamps;
  std::vector<double> values;
  /// Median sample spacing, inverted.
  double detected_rate_hz = 0.0;
};

/// Parses `timestamp,value` rows. A non-numeric first line is taken as a
/// header. Malformed rows are appended to `diagnostics` as "file:line: why".
RawStream parse_channel_csv(const std::string& text, const std::string& channel, const std::string& file_name,
                            std::vector<std::string>& diagnostics);

/// Parses one event timestamp per line (optional header).
std::vector<double> parse_label_csv(const std::string& text, const std::string& file_name,
                                    std::vector<std::string>& diagnostics);

/// A channel averaged onto the common grid. Cells with no samples are NaN.
struct GridChannel {
  std::string channel;
  std::vector<double> values;
};

struct Grid {
  double start_time = 0.0;  ///< timestamp of cell 0
  double rate_hz = 1.0;
  std::vector<GridChannel> channels;  ///< sorted by name
  std::size_t cell_count() const { return channels.empty() ? 0 : channels.front().values.size(); }
};

/// Each grid cell holds the mean of the samples whose timestamps fall in it.
/// For a gap-free stream whose rate is an integer multiple of the grid rate
/// and whose samples align with cell starts, this equals downsample_mean.
/// Throws DataQualityError if a channel is sampled slower than the grid.
Grid build_grid(const std::vector<RawStream>& streams, double grid_rate_hz);

struct IngestReport {
  Dataset dataset;
  std::vector<std::string> warnings;
  /// Events dropped because their window contains a gap. Non-empty means a
  /// partial failure.
  std::vector<std::string> skipped;
  std::size_t positives = 0;
  std::size_t negatives = 0;
};

/// Reads `<channel>.csv` files and the label file from `directory`.
/// Throws DataQualityError listing every malformed row; nothing is produced
/// in that case.
IngestReport ingest_directory(const std::string& directory, const IngestConfig& config);

/// Same pipeline over already-parsed inputs.
IngestReport ingest_streams(const std::vector<RawStream>& streams, std::vector<double> events,
                            const IngestConfig& config);

}  // namespace actint
