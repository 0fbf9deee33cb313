#include "comfortcam/votes.hpp"

#include <algorithm>
#include <stdexcept>

#include "comfortcam/error.hpp"
#include "comfortcam/io_util.hpp"

namespace comfortcam {

namespace {

const std::string kSensationNames[] = {"Cold",    "Cool", "SlightlyCool",
                                       "Neutral", "SlightlyWarm",
                                       "Warm",    "Hot"};
const std::string kPreferenceNames[] = {"Warmer", "SlightlyWarmer", "NoChange",
                                        "SlightlyCooler", "Colder"};
const std::string kSchemeNames[] = {"three_class", "four_class"};
const std::string kLabelNames[] = {"Cooler", "Colder", "SlightlyCooler",
                                   "NoChange", "Warmer"};

}  // namespace

const std::string& sensation_name(Sensation s) {
  return kSensationNames[static_cast<int>(s)];
}

Sensation sensation_from_name(const std::string& name) {
  for (int i = 0; i < 7; ++i)
    if (kSensationNames[i] == name) return static_cast<Sensation>(i);
  throw std::invalid_argument("unknown sensation '" + name + "'");
}

const std::string& preference_name(RawPreference p) {
  return kPreferenceNames[static_cast<int>(p)];
}

RawPreference preference_from_name(const std::string& name) {
  for (int i = 0; i < 5; ++i)
    if (kPreferenceNames[i] == name) return static_cast<RawPreference>(i);
  throw std::invalid_argument("unknown preference '" + name + "'");
}

const std::string& scheme_name(Scheme s) {
  return kSchemeNames[static_cast<int>(s)];
}

Scheme scheme_from_name(const std::string& name) {
  for (int i = 0; i < 2; ++i)
    if (kSchemeNames[i] == name) return static_cast<Scheme>(i);
  throw std::invalid_argument("unknown scheme '" + name + "'");
}

const std::string& label_name(Label l) {
  return kLabelNames[static_cast<int>(l)];
}

Label label_from_name(const std::string& name) {
  for (int i = 0; i < 5; ++i)
    if (kLabelNames[i] == name) return static_cast<Label>(i);
  throw std::invalid_argument("unknown label '" + name + "'");
}

const std::vector<Label>& scheme_labels(Scheme s) {
  static const std::vector<Label> three{Label::Cooler, Label::NoChange,
                                        Label::Warmer};
  static const std::vector<Label> four{Label::Colder, Label::SlightlyCooler,
                                       Label::NoChange, Label::Warmer};
  return s == Scheme::ThreeClass ? three : four;
}

bool label_legal_for(Label l, Scheme s) {
  const auto& legal = scheme_labels(s);
  return std::find(legal.begin(), legal.end(), l) != legal.end();
}

Label map_preference(RawPreference p, Scheme scheme) {
  if (scheme == Scheme::ThreeClass) {
    switch (p) {
      case RawPreference::Warmer:
      case RawPreference::SlightlyWarmer:
        return Label::Warmer;
      case RawPreference::NoChange:
        return Label::NoChange;
      case RawPreference::SlightlyCooler:
      case RawPreference::Colder:
        return Label::Cooler;
    }
  } else {
    switch (p) {
      case RawPreference::Warmer:
      case RawPreference::SlightlyWarmer:
        return Label::Warmer;
      case RawPreference::NoChange:
        return Label::NoChange;
      case RawPreference::SlightlyCooler:
        return Label::SlightlyCooler;
      case RawPreference::Colder:
        return Label::Colder;
    }
  }
  throw std::logic_error("unreachable");
}

std::vector<VoteRecord> load_votes(const std::string& path) {
  std::vector<VoteRecord> out;
  const auto lines = read_lines(path);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const std::string line = trim(lines[i]);
    if (line.empty() || line[0] == '#') continue;
    const std::string ctx = path + ":" + std::to_string(i + 1);
    const auto f = split(line, ',');
    if (f.size() != 3)
      throw ParseError(ctx + ": expected 'timestamp_ms,sensation,preference'");
    VoteRecord v;
    v.timestamp_ms = parse_int(f[0], ctx);
    v.sensation = sensation_from_name(trim(f[1]));
    v.preference = preference_from_name(trim(f[2]));
    if (!out.empty() && v.timestamp_ms <= out.back().timestamp_ms)
      throw ParseError(ctx + ": vote timestamps must be strictly increasing");
    out.push_back(v);
  }
  return out;
}

void save_votes(const std::vector<VoteRecord>& votes, const std::string& path,
                const std::string& config) {
  std::string out = provenance_header(config);
  for (const auto& v : votes) {
    out += std::to_string(v.timestamp_ms) + "," + sensation_name(v.sensation) +
           "," + preference_name(v.preference) + "\n";
  }
  write_file(path, out);
}

std::vector<int> assign_votes_to_frames(
    const std::vector<std::int64_t>& frame_times_ms,
    const std::vector<VoteRecord>& votes) {
  if (votes.empty()) throw std::runtime_error("no labels");
  std::vector<int> out(frame_times_ms.size(), -1);
  for (std::size_t i = 0; i < frame_times_ms.size(); ++i) {
    const std::int64_t t = frame_times_ms[i];
    // First vote whose timestamp is >= t labels the frame (right-closed
    // windows); frames after the last vote stay unlabeled.
    const auto it = std::lower_bound(
        votes.begin(), votes.end(), t,
        [](const VoteRecord& v, std::int64_t x) { return v.timestamp_ms < x; });
    if (it != votes.end()) out[i] = static_cast<int>(it - votes.begin());
  }
  return out;
}

}  // namespace comfortcam
