#include "comfortcam/session.hpp"

#include <algorithm>
#include <cmath>

#include "comfortcam/error.hpp"
#include "comfortcam/io_util.hpp"

namespace comfortcam {

SessionManifest load_manifest(const std::string& path) {
  SessionManifest m;
  bool have_distance = false;
  const auto lines = read_lines(path);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const std::string line = trim(lines[i]);
    if (line.empty() || line[0] == '#') continue;
    const auto sp = line.find_first_of(" \t");
    if (sp == std::string::npos)
      throw ParseError(path + ":" + std::to_string(i + 1) +
                       ": expected 'key value'");
    const std::string key = line.substr(0, sp);
    const std::string value = trim(line.substr(sp + 1));
    if (value.empty())
      throw ParseError(path + ":" + std::to_string(i + 1) + ": empty value");
    if (key == "session_id") m.session_id = value;
    else if (key == "protocol") m.protocol_id = value;
    else if (key == "thermal") m.thermal_paths.push_back(value);
    else if (key == "visual") m.visual_paths.push_back(value);
    else if (key == "landmarks") m.landmark_sidecar = value;
    else if (key == "votes") m.votes_path = value;
    else if (key == "room_temp") m.room_temp_path = value;
    else if (key == "wearable") m.wearable_path = value;
    else if (key == "camera_distance_m") {
      m.camera_distance_m = parse_double(value, path + " camera_distance_m");
      have_distance = true;
    } else {
      throw ParseError(path + ":" + std::to_string(i + 1) +
                       ": unknown manifest key '" + key + "'");
    }
  }
  if (m.session_id.empty()) throw ParseError(path + ": missing session_id");
  if (m.protocol_id.empty()) throw ParseError(path + ": missing protocol");
  if (!have_distance) throw ParseError(path + ": missing camera_distance_m");
  return m;
}

void save_manifest(const SessionManifest& m, const std::string& path,
                   const std::string& config) {
  std::string out = provenance_header(config);
  out += "session_id " + m.session_id + "\n";
  out += "protocol " + m.protocol_id + "\n";
  out += "camera_distance_m " + fmt_double(m.camera_distance_m) + "\n";
  if (!m.landmark_sidecar.empty()) out += "landmarks " + m.landmark_sidecar + "\n";
  if (!m.votes_path.empty()) out += "votes " + m.votes_path + "\n";
  if (!m.room_temp_path.empty()) out += "room_temp " + m.room_temp_path + "\n";
  if (m.wearable_path) out += "wearable " + *m.wearable_path + "\n";
  for (const auto& p : m.thermal_paths) out += "thermal " + p + "\n";
  for (const auto& p : m.visual_paths) out += "visual " + p + "\n";
  write_file(path, out);
}

namespace {

struct Indexed {
  std::int64_t t;
  std::size_t i;
};

std::vector<Indexed> sorted_times(const std::vector<FrameHeader>& hs,
                                  const std::vector<std::string>& paths,
                                  const std::string& what) {
  std::vector<Indexed> v(hs.size());
  for (std::size_t i = 0; i < hs.size(); ++i) v[i] = {hs[i].timestamp_ms, i};
  std::stable_sort(v.begin(), v.end(),
                   [](const Indexed& a, const Indexed& b) { return a.t < b.t; });
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (v[i].t == v[i - 1].t)
      throw ParseError("duplicate " + what + " timestamp " +
                       std::to_string(v[i].t) + " (" + paths[v[i].i] + ", " +
                       paths[v[i - 1].i] + ")");
  }
  return v;
}

}  // namespace

SessionIndex load_session(const std::string& manifest_path) {
  SessionIndex s;
  s.manifest = load_manifest(manifest_path);
  s.base_dir = dir_name(manifest_path);

  const auto& m = s.manifest;
  if (m.thermal_paths.empty() || m.visual_paths.empty())
    throw ParseError(manifest_path + ": empty session");
  if (m.thermal_paths.size() != m.visual_paths.size())
    throw ParseError(manifest_path + ": thermal and visual frame lists differ "
                     "in length (" + std::to_string(m.thermal_paths.size()) +
                     " vs " + std::to_string(m.visual_paths.size()) + ")");

  auto resolve = [&](const std::string& rel) { return join_path(s.base_dir, rel); };
  auto check_exists = [&](const std::string& p) {
    if (!file_exists(p)) throw IoError(manifest_path + ": missing file " + p);
  };
  check_exists(resolve(m.landmark_sidecar));
  check_exists(resolve(m.votes_path));
  check_exists(resolve(m.room_temp_path));
  if (m.wearable_path) check_exists(resolve(*m.wearable_path));

  std::vector<FrameHeader> th(m.thermal_paths.size());
  std::vector<FrameHeader> vh(m.visual_paths.size());
  for (std::size_t i = 0; i < m.thermal_paths.size(); ++i) {
    th[i] = read_frame_header(resolve(m.thermal_paths[i]));
    if (th[i].kind != 't')
      throw ParseError(resolve(m.thermal_paths[i]) + ": not a thermal frame");
  }
  for (std::size_t i = 0; i < m.visual_paths.size(); ++i) {
    vh[i] = read_frame_header(resolve(m.visual_paths[i]));
    if (vh[i].kind != 'v')
      throw ParseError(resolve(m.visual_paths[i]) + ": not a visual frame");
  }

  const auto ts = sorted_times(th, m.thermal_paths, "thermal");
  const auto vs = sorted_times(vh, m.visual_paths, "visual");

  // Same count and both sorted: the k-th thermal frame is the nearest
  // candidate for the k-th visual frame; anything outside the tolerance is
  // an orphan.
  s.pairs.reserve(ts.size());
  for (std::size_t k = 0; k < ts.size(); ++k) {
    const std::int64_t dt = std::llabs(vs[k].t - ts[k].t);
    if (dt > kPairingToleranceMs)
      throw ParseError(manifest_path + ": unpaired frame, visual " +
                       m.visual_paths[vs[k].i] + " at " +
                       std::to_string(vs[k].t) + " ms is " +
                       std::to_string(dt) + " ms from nearest thermal frame " +
                       "(tolerance " + std::to_string(kPairingToleranceMs) +
                       " ms)");
    FramePair p;
    p.timestamp_ms = vs[k].t;
    p.thermal_path = resolve(m.thermal_paths[ts[k].i]);
    p.visual_path = resolve(m.visual_paths[vs[k].i]);
    p.thermal_header = th[ts[k].i];
    p.visual_header = vh[vs[k].i];
    s.pairs.push_back(std::move(p));
  }
  return s;
}

}  // namespace comfortcam
