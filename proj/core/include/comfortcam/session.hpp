#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "comfortcam/frame_io.hpp"

namespace comfortcam {

/// Binds one recording session together: frame files, landmark sidecar,
/// vote/sensor logs. Stored as a line-oriented "key value" document; list
/// keys (thermal/visual) repeat, order significant. Paths are relative to
/// the manifest's directory.
struct SessionManifest {
  std::string session_id;
  std::string protocol_id;
  std::vector<std::string> thermal_paths;
  std::vector<std::string> visual_paths;
  std::string landmark_sidecar;
  std::string votes_path;
  std::string room_temp_path;
  std::optional<std::string> wearable_path;
  double camera_distance_m = 1.0;
};

SessionManifest load_manifest(const std::string& path);
void save_manifest(const SessionManifest& m, const std::string& path,
                   const std::string& config);

/// One thermal/visual pair matched by timestamp.
struct FramePair {
  std::int64_t timestamp_ms = 0;   // visual capture time; the frame id
  std::string thermal_path;        // resolved (absolute-ish) paths
  std::string visual_path;
  FrameHeader thermal_header;
  FrameHeader visual_header;
};

/// Manifest plus the validated, timestamp-sorted pairing table.
struct SessionIndex {
  SessionManifest manifest;
  std::string base_dir;
  std::vector<FramePair> pairs;
};

inline constexpr std::int64_t kPairingToleranceMs = 500;

/// Loads the manifest, reads every frame header, sorts by timestamp and
/// pairs thermal with visual frames by nearest timestamp. Throws ParseError
/// on empty sessions, duplicate timestamps, or any frame left unpaired
/// beyond the tolerance.
SessionIndex load_session(const std::string& manifest_path);

}  // namespace comfortcam
