#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "actint/model.hpp"

namespace actint {

enum class Split { Train, Test };

struct DatasetEntry {
  Observation observation;
  Label label;
  Split split = Split::Train;
  /// Window shares samples with another labeled event's window.
  bool overlap = false;
};

/// Labeled windows plus the smoothing used to derive their ROC.
///
/// On disk: versioned JSON. Raw series are stored as base64 of little-endian
/// IEEE doubles (plain numeric arrays are also accepted on read). ROC series
/// are not stored; they are recomputed on load with the stored smoothing.
struct Dataset {
  static constexpr int kFormatVersion = 1;

  std::vector<DatasetEntry> entries;
  std::optional<SmoothingConfig> smoothing = SmoothingConfig{};

  std::vector<LabeledObservation> with_split(Split split) const;
  std::vector<LabeledObservation> all() const;
  std::vector<Observation> observations() const;
};

std::string dataset_to_json(const Dataset& dataset);
Dataset dataset_from_json(const std::string& text);
void save_dataset(const Dataset& dataset, const std::string& path);
Dataset load_dataset(const std::string& path);

/// Per class, a seeded shuffle assigns round(train_fraction * count) entries
/// to Train and the rest to Test.
void assign_stratified_split(Dataset& dataset, double train_fraction, std::uint64_t seed);

/// One CSV per channel (`<channel>.csv`, rows `timestamp,value`) plus
/// `labels.csv` (`id,label,split,time_of_day`). Window k of an observation
/// occupies timestamps base + k / rate where base is the row index times the
/// window duration, so windows never overlap on the exported time axis.
void export_dataset_csv(const Dataset& dataset, const std::string& directory);

std::string encode_doubles(const std::vector<double>& values);
std::vector<double> decode_doubles(const std::string& text);

}  // namespace actint
