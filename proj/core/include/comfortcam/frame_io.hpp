#pragma once

#include <cstdint>
#include <string>

#include "comfortcam/frame.hpp"

namespace comfortcam {

/// Thermal frames are stored as binary portable graymaps (magic P5, maxval
/// 65535, big-endian samples) with two required header comments:
///   # timestamp_ms=<int>
///   # radiometric=true|false
/// Visual frames are binary portable pixmaps (P6, maxval 255) and gray
/// frames P5 with maxval 255; both carry the timestamp comment.
///
/// save_* emits the canonical form (magic, the comments above in that order,
/// "<width> <height>", maxval, single newline, payload); load_* accepts any
/// legal PNM whitespace/comment layout. Parse errors name the byte offset.

ThermalFrame load_thermal_frame(const std::string& path);
void save_thermal_frame(const ThermalFrame& f, const std::string& path);

VisualFrame load_visual_frame(const std::string& path);
void save_visual_frame(const VisualFrame& f, const std::string& path);

GrayFrame load_gray_frame(const std::string& path);
void save_gray_frame(const GrayFrame& f, const std::string& path);

/// Gray payload replicated across R,G,B, written as P6 (the 8-bit render of
/// a thermal frame when exported in the visual format).
void save_gray_as_visual(const GrayFrame& f, const std::string& path);

/// Header-only read (geometry, timestamp, radiometric flag) used for fast
/// session indexing. kind: 't' thermal (P5/16-bit), 'v' visual (P6),
/// 'g' gray (P5/8-bit).
struct FrameHeader {
  char kind = '?';
  int width = 0;
  int height = 0;
  std::int64_t timestamp_ms = 0;
  bool radiometric = false;
};
FrameHeader read_frame_header(const std::string& path);

/// In-memory encodings of the canonical file forms (used by byte-identity
/// tests and the simulator writer).
std::string encode_thermal(const ThermalFrame& f);
std::string encode_visual(const VisualFrame& f);
std::string encode_gray(const GrayFrame& f);

ThermalFrame decode_thermal(const std::string& bytes, const std::string& origin);
VisualFrame decode_visual(const std::string& bytes, const std::string& origin);
GrayFrame decode_gray(const std::string& bytes, const std::string& origin);

}  // namespace comfortcam
