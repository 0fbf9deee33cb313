#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <unistd.h>

#include <filesystem>

#include "comfortcam/error.hpp"
#include "comfortcam/frame.hpp"
#include "comfortcam/frame_io.hpp"
#include "comfortcam/io_util.hpp"
#include "comfortcam/rng.hpp"
#include "comfortcam/session.hpp"

using namespace comfortcam;

namespace {

std::string temp_dir() {
  static int counter = 0;
  const auto d = std::filesystem::temp_directory_path() /
                 ("comfortcam_frame_" + std::to_string(::getpid()) + "_" +
                  std::to_string(counter++));
  std::filesystem::create_directories(d);
  return d.string();
}

ThermalFrame random_thermal(Rng& rng, int w, int h) {
  ThermalFrame f;
  f.width = w;
  f.height = h;
  f.timestamp_ms = static_cast<std::int64_t>(rng.uniform_int(1u << 30));
  f.radiometric = rng.uniform() < 0.5;
  f.raw.resize(static_cast<std::size_t>(w) * h);
  for (auto& v : f.raw) v = static_cast<std::uint16_t>(rng.uniform_int(65536));
  return f;
}

VisualFrame random_visual(Rng& rng, int w, int h) {
  VisualFrame f;
  f.width = w;
  f.height = h;
  f.timestamp_ms = static_cast<std::int64_t>(rng.uniform_int(1u << 30));
  f.rgb.resize(3 * static_cast<std::size_t>(w) * h);
  for (auto& v : f.rgb) v = static_cast<std::uint8_t>(rng.uniform_int(256));
  return f;
}

}  // namespace

TEST_CASE("thermal frame of zeros loads back as zeros") {
  const std::string dir = temp_dir();
  ThermalFrame f;
  f.width = 160;
  f.height = 120;
  f.raw.assign(160 * 120, 0);
  f.timestamp_ms = 5000;
  f.radiometric = true;
  const std::string p = dir + "/z.pgm";
  save_thermal_frame(f, p);
  const ThermalFrame g = load_thermal_frame(p);
  CHECK(g.width == 160);
  CHECK(g.height == 120);
  CHECK(g.radiometric);
  CHECK(g.timestamp_ms == 5000);
  bool all_zero = true;
  for (auto v : g.raw) all_zero = all_zero && v == 0;
  CHECK(all_zero);
}

TEST_CASE("load/save round-trip is byte-identical for all three formats") {
  Rng rng(42);
  const std::string dir = temp_dir();
  for (int trial = 0; trial < 8; ++trial) {
    const int w = 2 + static_cast<int>(rng.uniform_int(40));
    const int h = 2 + static_cast<int>(rng.uniform_int(40));

    const ThermalFrame t = random_thermal(rng, w, h);
    const std::string tb = encode_thermal(t);
    write_file(dir + "/t.pgm", tb);
    CHECK(encode_thermal(load_thermal_frame(dir + "/t.pgm")) == tb);

    const VisualFrame v = random_visual(rng, w, h);
    const std::string vb = encode_visual(v);
    write_file(dir + "/v.ppm", vb);
    CHECK(encode_visual(load_visual_frame(dir + "/v.ppm")) == vb);

    GrayFrame g = to_grayscale(v);
    const std::string gb = encode_gray(g);
    write_file(dir + "/g.pgm", gb);
    CHECK(encode_gray(load_gray_frame(dir + "/g.pgm")) == gb);
  }
}

TEST_CASE("16-bit payload is big-endian") {
  ThermalFrame f;
  f.width = 1;
  f.height = 1;
  f.raw = {0x0102};
  f.radiometric = false;
  const std::string b = encode_thermal(f);
  REQUIRE(b.size() >= 2);
  CHECK(static_cast<unsigned char>(b[b.size() - 2]) == 0x01);
  CHECK(static_cast<unsigned char>(b[b.size() - 1]) == 0x02);
}

TEST_CASE("maxval 255 thermal file is rejected") {
  const std::string dir = temp_dir();
  const std::string p = dir + "/bad.pgm";
  write_file(p, "P5\n# timestamp_ms=0\n# radiometric=true\n2 2\n255\n\0\0\0\0");
  CHECK_THROWS_WITH_AS(load_thermal_frame(p),
                       doctest::Contains("expected 16-bit maxval"),
                       ParseError);
}

TEST_CASE("truncated payload and malformed header are distinct errors") {
  const std::string dir = temp_dir();
  const std::string trunc = dir + "/trunc.pgm";
  write_file(trunc, "P5\n# timestamp_ms=0\n# radiometric=true\n4 4\n65535\nab");
  CHECK_THROWS_WITH_AS(load_thermal_frame(trunc),
                       doctest::Contains("truncated payload"), ParseError);

  const std::string badmagic = dir + "/badmagic.pgm";
  write_file(badmagic, "Q5\n2 2\n65535\n");
  CHECK_THROWS_AS(load_thermal_frame(badmagic), ParseError);

  const std::string nocomment = dir + "/nocomment.pgm";
  write_file(nocomment, std::string("P5\n# timestamp_ms=0\n1 1\n65535\nab"));
  CHECK_THROWS_WITH_AS(load_thermal_frame(nocomment),
                       doctest::Contains("radiometric"), ParseError);
}

TEST_CASE("parse errors name a byte offset") {
  const std::string dir = temp_dir();
  const std::string p = dir + "/off.pgm";
  write_file(p, "P5\n# timestamp_ms=0\n# radiometric=true\n2 2\n255\n....");
  try {
    load_thermal_frame(p);
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find("byte") != std::string::npos);
  }
}

TEST_CASE("grayscale conversion matches the stated weights") {
  VisualFrame v;
  v.width = 3;
  v.height = 1;
  v.rgb = {255, 255, 255, 0, 0, 0, 100, 150, 200};
  const GrayFrame g = to_grayscale(v);
  CHECK(g.gray[0] == 255);
  CHECK(g.gray[1] == 0);
  CHECK(g.gray[2] == 141);  // round(29.9 + 88.05 + 22.8)
}

TEST_CASE("grayscale is bounded and monotone per channel") {
  Rng rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    const auto r = static_cast<std::uint8_t>(rng.uniform_int(256));
    const auto g = static_cast<std::uint8_t>(rng.uniform_int(256));
    const auto b = static_cast<std::uint8_t>(rng.uniform_int(256));
    VisualFrame v;
    v.width = 2;
    v.height = 1;
    const auto bump = [](std::uint8_t x) {
      return static_cast<std::uint8_t>(x < 255 ? x + 1 : x);
    };
    v.rgb = {r, g, b, bump(r), bump(g), bump(b)};
    const GrayFrame gray = to_grayscale(v);
    CHECK(gray.gray[0] <= gray.gray[1]);
  }
}

TEST_CASE("area downscale averages blocks exactly") {
  GrayFrame g;
  g.width = 4;
  g.height = 2;
  g.gray = {10, 20, 30, 40, 50, 60, 70, 80};
  const GrayFrame d = downscale_area(g, 2);
  CHECK(d.width == 2);
  CHECK(d.height == 1);
  CHECK(d.gray[0] == 35);  // (10+20+50+60)/4
  CHECK(d.gray[1] == 55);
  CHECK_THROWS_AS(downscale_area(g, 3), std::invalid_argument);
}

namespace {

// Writes a minimal but complete session with the given frame timestamps.
std::string write_session_fixture(const std::vector<std::int64_t>& thermal_ts,
                                  const std::vector<std::int64_t>& visual_ts) {
  const std::string dir = temp_dir();
  make_dirs(dir + "/t");
  make_dirs(dir + "/v");
  SessionManifest m;
  m.session_id = "s1";
  m.protocol_id = "exp1";
  m.camera_distance_m = 1.0;
  m.landmark_sidecar = "landmarks.txt";
  m.votes_path = "votes.csv";
  m.room_temp_path = "room.csv";
  write_file(dir + "/landmarks.txt", "# empty\n");
  write_file(dir + "/votes.csv", "# empty\n");
  write_file(dir + "/room.csv", "# empty\n");
  for (std::size_t i = 0; i < thermal_ts.size(); ++i) {
    ThermalFrame f;
    f.width = 4;
    f.height = 4;
    f.raw.assign(16, 100);
    f.timestamp_ms = thermal_ts[i];
    f.radiometric = true;
    const std::string rel = "t/" + std::to_string(i) + ".pgm";
    save_thermal_frame(f, dir + "/" + rel);
    m.thermal_paths.push_back(rel);
  }
  for (std::size_t i = 0; i < visual_ts.size(); ++i) {
    VisualFrame f;
    f.width = 4;
    f.height = 4;
    f.rgb.assign(48, 10);
    f.timestamp_ms = visual_ts[i];
    const std::string rel = "v/" + std::to_string(i) + ".ppm";
    save_visual_frame(f, dir + "/" + rel);
    m.visual_paths.push_back(rel);
  }
  save_manifest(m, dir + "/manifest.txt", "test fixture");
  return dir + "/manifest.txt";
}

}  // namespace

TEST_CASE("session pairing on an identical grid is a bijection") {
  std::vector<std::int64_t> ts;
  for (int i = 1; i <= 20; ++i) ts.push_back(i * 5000);
  const auto manifest = write_session_fixture(ts, ts);
  const SessionIndex s = load_session(manifest);
  REQUIRE(s.pairs.size() == 20);
  for (std::size_t i = 0; i < 20; ++i) {
    CHECK(s.pairs[i].timestamp_ms == static_cast<std::int64_t>((i + 1) * 5000));
    CHECK(s.pairs[i].thermal_header.timestamp_ms ==
          s.pairs[i].visual_header.timestamp_ms);
  }
}

TEST_CASE("pairing tolerates small offsets and rejects 600 ms orphans") {
  std::vector<std::int64_t> t{5000, 10000, 15000};
  std::vector<std::int64_t> near{5100, 9950, 15400};
  CHECK(load_session(write_session_fixture(t, near)).pairs.size() == 3);

  std::vector<std::int64_t> off{5000, 10000, 15600};
  CHECK_THROWS_WITH_AS(load_session(write_session_fixture(t, off)),
                       doctest::Contains("unpaired frame"), ParseError);
}

TEST_CASE("empty session and duplicate timestamps are rejected") {
  CHECK_THROWS_WITH_AS(load_session(write_session_fixture({}, {})),
                       doctest::Contains("empty session"), ParseError);
  CHECK_THROWS_WITH_AS(
      load_session(write_session_fixture({5000, 5000}, {5000, 5001})),
      doctest::Contains("duplicate"), ParseError);
}
