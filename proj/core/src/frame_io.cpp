#include "comfortcam/frame_io.hpp"

#include <cctype>
#include <fstream>
#include <optional>

#include "comfortcam/error.hpp"
#include "comfortcam/io_util.hpp"

namespace comfortcam {

namespace {

// PNM header scanner. Whitespace and '#' comments may separate tokens;
// comments carry the capture metadata.
class PnmReader {
 public:
  PnmReader(const std::string& data, const std::string& origin)
      : data_(data), origin_(origin) {}

  std::string magic() {
    if (data_.size() < 2)
      throw ParseError(origin_ + ": malformed header, missing magic", 0);
    const std::string m = data_.substr(0, 2);
    pos_ = 2;
    return m;
  }

  // Skips whitespace and comment lines, recording comments.
  void skip_separators() {
    while (pos_ < data_.size()) {
      const char c = data_[pos_];
      if (c == '#') {
        std::size_t eol = data_.find('\n', pos_);
        if (eol == std::string::npos) eol = data_.size();
        comments_.push_back(trim(data_.substr(pos_ + 1, eol - pos_ - 1)));
        pos_ = eol;
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        ++pos_;
      } else {
        return;
      }
    }
  }

  int read_int(const char* what) {
    skip_separators();
    const std::size_t start = pos_;
    while (pos_ < data_.size() &&
           std::isdigit(static_cast<unsigned char>(data_[pos_])))
      ++pos_;
    if (pos_ == start)
      throw ParseError(origin_ + ": malformed header, expected " +
                           std::string(what),
                       start);
    long long v = 0;
    for (std::size_t i = start; i < pos_; ++i) {
      v = v * 10 + (data_[i] - '0');
      if (v > 1'000'000'000LL)
        throw ParseError(origin_ + ": header value out of range for " +
                             std::string(what),
                         start);
    }
    return static_cast<int>(v);
  }

  // Exactly one whitespace byte separates maxval from the payload.
  std::size_t payload_offset() {
    if (pos_ >= data_.size() ||
        !std::isspace(static_cast<unsigned char>(data_[pos_])))
      throw ParseError(origin_ + ": malformed header, expected single "
                       "whitespace before payload",
                       pos_);
    return pos_ + 1;
  }

  std::optional<std::string> comment_value(const std::string& key) const {
    for (const auto& c : comments_) {
      if (starts_with(c, key + "="))
        return c.substr(key.size() + 1);
    }
    return std::nullopt;
  }

  std::size_t pos() const { return pos_; }

 private:
  const std::string& data_;
  std::string origin_;
  std::size_t pos_ = 0;
  std::vector<std::string> comments_;
};

struct ParsedHeader {
  FrameHeader h;
  std::size_t payload = 0;
};

ParsedHeader parse_header(const std::string& data, const std::string& origin,
                          char expected_kind) {
  PnmReader r(data, origin);
  const std::string magic = r.magic();
  char kind;
  if (magic == "P6") {
    kind = 'v';
  } else if (magic == "P5") {
    kind = 'g';  // refined to 't' below by maxval
  } else {
    throw ParseError(origin + ": malformed header, unknown magic '" + magic +
                         "'",
                     0);
  }

  FrameHeader h;
  h.width = r.read_int("width");
  h.height = r.read_int("height");
  if (h.width < 1 || h.height < 1)
    throw ParseError(origin + ": dimensions must be >= 1", r.pos());
  const int maxval = r.read_int("maxval");
  const std::size_t payload = r.payload_offset();

  if (kind == 'g' && maxval == 65535) kind = 't';
  if (expected_kind == 't') {
    if (kind != 't')
      throw ParseError(origin + ": expected 16-bit maxval", r.pos());
  } else if (expected_kind == 'v') {
    if (kind != 'v' || maxval != 255)
      throw ParseError(origin + ": expected 8-bit maxval", r.pos());
  } else if (expected_kind == 'g') {
    if (kind != 'g' || maxval != 255)
      throw ParseError(origin + ": expected 8-bit maxval", r.pos());
  } else {  // header probe: accept any of the three forms
    if (kind == 'v' && maxval != 255)
      throw ParseError(origin + ": expected 8-bit maxval", r.pos());
    if (kind == 'g' && maxval != 255 && maxval != 65535)
      throw ParseError(origin + ": unsupported maxval", r.pos());
  }
  h.kind = kind;

  const auto ts = r.comment_value("timestamp_ms");
  if (!ts)
    throw ParseError(origin + ": missing '# timestamp_ms=' header comment",
                     r.pos());
  h.timestamp_ms = parse_int(*ts, origin + " timestamp_ms");

  if (kind == 't') {
    const auto rad = r.comment_value("radiometric");
    if (!rad)
      throw ParseError(origin + ": missing '# radiometric=' header comment",
                       r.pos());
    if (*rad == "true") {
      h.radiometric = true;
    } else if (*rad == "false") {
      h.radiometric = false;
    } else {
      throw ParseError(origin + ": radiometric flag must be true or false",
                       r.pos());
    }
  }

  return {h, payload};
}

void check_payload(const std::string& data, std::size_t payload,
                   std::size_t need, const std::string& origin) {
  if (data.size() < payload + need)
    throw ParseError(origin + ": truncated payload, need " +
                         std::to_string(need) + " bytes, have " +
                         std::to_string(data.size() - payload),
                     data.size());
}

}  // namespace

ThermalFrame decode_thermal(const std::string& bytes,
                            const std::string& origin) {
  const auto [h, payload] = parse_header(bytes, origin, 't');
  const std::size_t n = static_cast<std::size_t>(h.width) * h.height;
  check_payload(bytes, payload, 2 * n, origin);
  ThermalFrame f;
  f.width = h.width;
  f.height = h.height;
  f.timestamp_ms = h.timestamp_ms;
  f.radiometric = h.radiometric;
  f.raw.resize(n);
  const unsigned char* p =
      reinterpret_cast<const unsigned char*>(bytes.data()) + payload;
  for (std::size_t i = 0; i < n; ++i)
    f.raw[i] = static_cast<std::uint16_t>((p[2 * i] << 8) | p[2 * i + 1]);
  return f;
}

VisualFrame decode_visual(const std::string& bytes, const std::string& origin) {
  const auto [h, payload] = parse_header(bytes, origin, 'v');
  const std::size_t n = 3 * static_cast<std::size_t>(h.width) * h.height;
  check_payload(bytes, payload, n, origin);
  VisualFrame f;
  f.width = h.width;
  f.height = h.height;
  f.timestamp_ms = h.timestamp_ms;
  f.rgb.assign(bytes.begin() + static_cast<std::ptrdiff_t>(payload),
               bytes.begin() + static_cast<std::ptrdiff_t>(payload + n));
  return f;
}

GrayFrame decode_gray(const std::string& bytes, const std::string& origin) {
  const auto [h, payload] = parse_header(bytes, origin, 'g');
  const std::size_t n = static_cast<std::size_t>(h.width) * h.height;
  check_payload(bytes, payload, n, origin);
  GrayFrame f;
  f.width = h.width;
  f.height = h.height;
  f.timestamp_ms = h.timestamp_ms;
  f.gray.assign(bytes.begin() + static_cast<std::ptrdiff_t>(payload),
                bytes.begin() + static_cast<std::ptrdiff_t>(payload + n));
  return f;
}

std::string encode_thermal(const ThermalFrame& f) {
  validate(f);
  std::string out = "P5\n# timestamp_ms=" + std::to_string(f.timestamp_ms) +
                    "\n# radiometric=" + (f.radiometric ? "true" : "false") +
                    "\n" + std::to_string(f.width) + " " +
                    std::to_string(f.height) + "\n65535\n";
  out.reserve(out.size() + 2 * f.raw.size());
  for (const std::uint16_t v : f.raw) {
    out.push_back(static_cast<char>(v >> 8));
    out.push_back(static_cast<char>(v & 0xff));
  }
  return out;
}

std::string encode_visual(const VisualFrame& f) {
  validate(f);
  std::string out = "P6\n# timestamp_ms=" + std::to_string(f.timestamp_ms) +
                    "\n" + std::to_string(f.width) + " " +
                    std::to_string(f.height) + "\n255\n";
  out.append(reinterpret_cast<const char*>(f.rgb.data()), f.rgb.size());
  return out;
}

std::string encode_gray(const GrayFrame& f) {
  validate(f);
  std::string out = "P5\n# timestamp_ms=" + std::to_string(f.timestamp_ms) +
                    "\n" + std::to_string(f.width) + " " +
                    std::to_string(f.height) + "\n255\n";
  out.append(reinterpret_cast<const char*>(f.gray.data()), f.gray.size());
  return out;
}

ThermalFrame load_thermal_frame(const std::string& path) {
  return decode_thermal(slurp_file(path), path);
}

void save_thermal_frame(const ThermalFrame& f, const std::string& path) {
  write_file(path, encode_thermal(f));
}

VisualFrame load_visual_frame(const std::string& path) {
  return decode_visual(slurp_file(path), path);
}

void save_visual_frame(const VisualFrame& f, const std::string& path) {
  write_file(path, encode_visual(f));
}

GrayFrame load_gray_frame(const std::string& path) {
  return decode_gray(slurp_file(path), path);
}

void save_gray_frame(const GrayFrame& f, const std::string& path) {
  write_file(path, encode_gray(f));
}

void save_gray_as_visual(const GrayFrame& f, const std::string& path) {
  validate(f);
  VisualFrame v;
  v.width = f.width;
  v.height = f.height;
  v.timestamp_ms = f.timestamp_ms;
  v.rgb.resize(3 * f.gray.size());
  for (std::size_t i = 0; i < f.gray.size(); ++i) {
    v.rgb[3 * i] = v.rgb[3 * i + 1] = v.rgb[3 * i + 2] = f.gray[i];
  }
  save_visual_frame(v, path);
}

FrameHeader read_frame_header(const std::string& path) {
  // Headers are tiny; read a generous prefix only.
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open file: " + path);
  std::string data(4096, '\0');
  in.read(data.data(), static_cast<std::streamsize>(data.size()));
  data.resize(static_cast<std::size_t>(in.gcount()));
  return parse_header(data, path, '?').h;
}

}  // namespace comfortcam
