#pragma once

#include <map>
#include <string>
#include <vector>

#include "comfortcam/conditioning.hpp"
#include "comfortcam/thermal.hpp"

namespace comfortcam {

/// Long-format readings table: "timestamp_ms,region,kind,value,n_pixels"
/// lines, '#' comments. This is the stream `extract` produces and the
/// simulator's camera-model table shares.
struct FeatureTable {
  std::vector<RoiReading> readings;
};

FeatureTable load_feature_table(const std::string& path);
void save_feature_table(const FeatureTable& table, const std::string& path,
                        const std::string& config);

/// Key for one series in the table.
struct SeriesKey {
  Region region;
  RoiKind kind;

  bool operator<(const SeriesKey& o) const {
    return region != o.region ? region < o.region : kind < o.kind;
  }
};

/// Splits the table into per-(region, kind) time series, each sorted by
/// timestamp; n_pixels travels alongside so conditioning can rewrite values
/// in place.
std::map<SeriesKey, TimeSeries> split_series(const FeatureTable& table);
std::map<SeriesKey, std::vector<int>> split_n_pixels(const FeatureTable& table);

/// Rebuilds a table from per-series data (inverse of split_series), ordered
/// by timestamp then region then kind.
FeatureTable merge_series(const std::map<SeriesKey, TimeSeries>& series,
                          const std::map<SeriesKey, std::vector<int>>& n_pixels);

}  // namespace comfortcam
