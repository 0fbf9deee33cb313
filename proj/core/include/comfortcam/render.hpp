#pragma once

#include <string>
#include <vector>

#include "comfortcam/frame.hpp"
#include "comfortcam/sim.hpp"

namespace comfortcam::sim {

/// Static visual scene at full resolution: flat background, face oval,
/// fiducial squares, cold reference patch. Identical for every frame index
/// except the timestamp.
VisualFrame render_visual(const SimSession& s, int frame_index);

/// Thermal frame at 160x120: the scene pulled through the inverse planted
/// homography (3x3 supersampled), region patches overdrawn at their true
/// temperatures, then camera bias, FFC offset and per-pixel noise, encoded
/// as radiometric counts.
ThermalFrame render_thermal(const SimSession& s, int frame_index);

/// Checkerboard corner correspondences for n_views poses of an 8x6 grid;
/// destinations go through the planted homography plus optional corner
/// noise.
std::vector<std::vector<Correspondence>> checkerboard_correspondences(
    const SimSession& s, int n_views, double corner_noise_px,
    std::uint64_t seed);

struct WriteOptions {
  int render_frames = 16;        // frame pairs written to disk
  int checkerboard_views = 10;
  double corner_noise_px = 0.0;
  std::string config;            // provenance line for every emitted file
};

/// Writes the session directory: manifest, rendered frame pairs, landmark
/// sidecar, votes, room/wearable logs, the camera-model feature table,
/// checkerboard correspondences and the ground-truth files under truth/.
void write_session(const SimSession& s, const std::string& dir,
                   const WriteOptions& options);

}  // namespace comfortcam::sim
