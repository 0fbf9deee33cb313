#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "comfortcam/features_io.hpp"
#include "comfortcam/votes.hpp"

namespace comfortcam {

/// One labeled training row: per-region values at one frame time.
struct FeatureRecord {
  std::int64_t timestamp_ms = 0;
  std::vector<double> features;      // one per dataset region, in order
  std::optional<double> room_temp_c;
  Label label = Label::NoChange;
  int vote_index = 0;                // the vote window the frame fell in
};

struct Dataset {
  std::string subject_id;
  Scheme scheme = Scheme::ThreeClass;
  RoiKind kind = RoiKind::SkinTemperatureC;
  std::vector<Region> regions;       // column order
  bool has_room = false;
  std::vector<FeatureRecord> records;  // time-ordered
  std::map<Label, int> class_counts;

  /// Feature dimension (regions + optional room column).
  int dim() const {
    return static_cast<int>(regions.size()) + (has_room ? 1 : 0);
  }
  /// Feature vector of one record including the room column when present.
  std::vector<double> row(std::size_t i) const;
};

/// Assembles the labeled dataset: picks the readings of `kind`, keeps
/// frames that have a value for every region present for that kind (records
/// with gaps are excluded), labels frames by vote windows and drops frames
/// after the final vote. When `room` is supplied its values are resampled to
/// frame timestamps (nearest neighbour) and appended behind the flag.
/// Throws std::runtime_error when fewer than 2 classes survive.
Dataset assemble_dataset(const FeatureTable& features,
                         const std::vector<VoteRecord>& votes, Scheme scheme,
                         RoiKind kind, const std::string& subject_id,
                         const TimeSeries* room = nullptr);

/// Dataset file: provenance header, "# scheme ..."/"# kind ..."/
/// "# subject ..." metadata comments, then
/// "timestamp_ms,label,kind,<region columns>[,room_temp_C]" rows.
Dataset load_dataset(const std::string& path);
void save_dataset(const Dataset& d, const std::string& path,
                  const std::string& config);

/// Room / wearable logs: "timestamp_ms,temp_C[,rh_pct]" lines.
TimeSeries load_temperature_log(const std::string& path);
void save_temperature_log(const TimeSeries& s, const std::string& path,
                          const std::string& config,
                          const std::vector<double>* rh_pct = nullptr);

}  // namespace comfortcam
