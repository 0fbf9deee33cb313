#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace comfortcam {

/// 7-point thermal sensation scale (recorded, not predicted).
enum class Sensation {
  Cold, Cool, SlightlyCool, Neutral, SlightlyWarm, Warm, Hot
};

/// 5-point thermal preference scale as asked in the questionnaire.
enum class RawPreference {
  Warmer, SlightlyWarmer, NoChange, SlightlyCooler, Colder
};

const std::string& sensation_name(Sensation s);
Sensation sensation_from_name(const std::string& name);
const std::string& preference_name(RawPreference p);
RawPreference preference_from_name(const std::string& name);

struct VoteRecord {
  std::int64_t timestamp_ms = 0;
  Sensation sensation = Sensation::Neutral;
  RawPreference preference = RawPreference::NoChange;
};

/// Vote log: "timestamp_ms,sensation,preference" lines, '#' comments.
/// Timestamps must be strictly increasing.
std::vector<VoteRecord> load_votes(const std::string& path);
void save_votes(const std::vector<VoteRecord>& votes, const std::string& path,
                const std::string& config);

enum class Scheme { ThreeClass, FourClass };

const std::string& scheme_name(Scheme s);
Scheme scheme_from_name(const std::string& name);

/// Classification label. Legal values depend on the scheme:
///   three_class: Cooler, NoChange, Warmer
///   four_class:  Colder, SlightlyCooler, NoChange, Warmer
enum class Label { Cooler, Colder, SlightlyCooler, NoChange, Warmer };

const std::string& label_name(Label l);
Label label_from_name(const std::string& name);
bool label_legal_for(Label l, Scheme s);

/// Labels of a scheme in canonical (cold to warm) order.
const std::vector<Label>& scheme_labels(Scheme s);

/// three_class: {Warmer, SlightlyWarmer} -> Warmer,
///              {SlightlyCooler, Colder} -> Cooler, NoChange -> NoChange.
/// four_class:  Colder -> Colder, SlightlyCooler -> SlightlyCooler,
///              NoChange -> NoChange, {SlightlyWarmer, Warmer} -> Warmer.
Label map_preference(RawPreference p, Scheme scheme);

/// A vote at time t labels every frame with timestamp in (t_prev, t]
/// (session start before the first vote); frames after the final vote are
/// excluded. Returns one label index per frame timestamp, -1 for excluded
/// frames. Throws std::runtime_error("no labels") when votes are empty.
std::vector<int> assign_votes_to_frames(
    const std::vector<std::int64_t>& frame_times_ms,
    const std::vector<VoteRecord>& votes);

}  // namespace comfortcam
