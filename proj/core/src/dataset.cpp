#include "comfortcam/dataset.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

#include "comfortcam/error.hpp"
#include "comfortcam/io_util.hpp"
#include "comfortcam/stats.hpp"

namespace comfortcam {

std::vector<double> Dataset::row(std::size_t i) const {
  std::vector<double> r = records[i].features;
  if (has_room) r.push_back(records[i].room_temp_c.value_or(0.0));
  return r;
}

Dataset assemble_dataset(const FeatureTable& features,
                         const std::vector<VoteRecord>& votes, Scheme scheme,
                         RoiKind kind, const std::string& subject_id,
                         const TimeSeries* room) {
  Dataset d;
  d.subject_id = subject_id;
  d.scheme = scheme;
  d.kind = kind;
  d.has_room = room != nullptr;

  const auto series = split_series(features);
  std::vector<const TimeSeries*> cols;
  for (Region r : kAllRegions) {
    const auto it = series.find({r, kind});
    if (it != series.end()) {
      d.regions.push_back(r);
      cols.push_back(&it->second);
    }
  }
  if (d.regions.empty())
    throw std::runtime_error("no readings of kind " + roi_kind_name(kind));

  // Keep frames that carry a value for every region (no gap records).
  std::map<std::int64_t, int> time_hits;
  for (const TimeSeries* s : cols)
    for (const std::int64_t t : s->times_ms) ++time_hits[t];
  std::vector<std::int64_t> frame_times;
  for (const auto& [t, hits] : time_hits)
    if (hits == static_cast<int>(cols.size())) frame_times.push_back(t);
  if (frame_times.empty()) throw std::runtime_error("no complete frames");

  const std::vector<int> vote_idx = assign_votes_to_frames(frame_times, votes);

  std::vector<double> room_vals;
  if (room) room_vals = resample_nearest(*room, frame_times);

  // Per-column cursors; frame_times is sorted and each series is sorted.
  std::vector<std::size_t> cursor(cols.size(), 0);
  for (std::size_t i = 0; i < frame_times.size(); ++i) {
    if (vote_idx[i] < 0) continue;  // after the final vote
    FeatureRecord rec;
    rec.timestamp_ms = frame_times[i];
    rec.vote_index = vote_idx[i];
    rec.label =
        map_preference(votes[static_cast<std::size_t>(vote_idx[i])].preference,
                       scheme);
    for (std::size_t c = 0; c < cols.size(); ++c) {
      auto& cur = cursor[c];
      while (cols[c]->times_ms[cur] < frame_times[i]) ++cur;
      rec.features.push_back(cols[c]->values[cur]);
    }
    if (room) rec.room_temp_c = room_vals[i];
    d.records.push_back(std::move(rec));
  }
  if (d.records.empty()) throw std::runtime_error("no labeled records");

  for (const auto& r : d.records) ++d.class_counts[r.label];
  if (d.class_counts.size() < 2)
    throw std::runtime_error("dataset needs at least 2 classes, got " +
                             std::to_string(d.class_counts.size()));
  return d;
}

void save_dataset(const Dataset& d, const std::string& path,
                  const std::string& config) {
  std::string out = provenance_header(config);
  out += "# subject " + d.subject_id + "\n";
  out += "# scheme " + scheme_name(d.scheme) + "\n";
  out += "# kind " + roi_kind_name(d.kind) + "\n";
  out += "# regions ";
  for (std::size_t i = 0; i < d.regions.size(); ++i) {
    if (i) out += ",";
    out += region_name(d.regions[i]);
  }
  out += "\n";

  // Window boundaries so blocked cross-validation can be reconstructed from
  // the file alone.
  std::set<int> windows;
  for (const auto& r : d.records) windows.insert(r.vote_index);
  std::map<int, std::int64_t> window_end;
  for (const auto& r : d.records) {
    auto [it, inserted] = window_end.emplace(r.vote_index, r.timestamp_ms);
    if (!inserted) it->second = std::max(it->second, r.timestamp_ms);
  }
  out += "# vote_times_ms ";
  bool first = true;
  for (const auto& [idx, end] : window_end) {
    if (!first) out += ",";
    out += std::to_string(end);
    first = false;
  }
  out += "\n";

  out += "# columns: timestamp_ms,label,kind";
  for (const Region r : d.regions) out += "," + region_name(r);
  if (d.has_room) out += ",room_temp_C";
  out += "\n";

  for (const auto& rec : d.records) {
    out += std::to_string(rec.timestamp_ms) + "," + label_name(rec.label) +
           "," + roi_kind_name(d.kind);
    for (const double v : rec.features) out += "," + fmt_double(v);
    if (d.has_room) out += "," + fmt_double(rec.room_temp_c.value_or(0.0));
    out += "\n";
  }
  write_file(path, out);
}

Dataset load_dataset(const std::string& path) {
  Dataset d;
  bool have_scheme = false;
  std::vector<std::int64_t> vote_times;
  const auto lines = read_lines(path);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const std::string line = trim(lines[i]);
    if (line.empty()) continue;
    const std::string ctx = path + ":" + std::to_string(i + 1);
    if (line[0] == '#') {
      const auto f = split_ws(line.substr(1));
      if (f.size() >= 2 && f[0] == "subject") d.subject_id = f[1];
      if (f.size() >= 2 && f[0] == "scheme") {
        d.scheme = scheme_from_name(f[1]);
        have_scheme = true;
      }
      if (f.size() >= 2 && f[0] == "kind") d.kind = roi_kind_from_name(f[1]);
      if (f.size() >= 2 && f[0] == "regions") {
        for (const auto& name : split(f[1], ','))
          d.regions.push_back(region_from_name(name));
      }
      if (f.size() >= 2 && f[0] == "vote_times_ms") {
        for (const auto& t : split(f[1], ','))
          vote_times.push_back(parse_int(t, ctx));
      }
      continue;
    }
    const auto f = split(line, ',');
    if (d.regions.empty())
      throw ParseError(path + ": missing '# regions' metadata before rows");
    std::size_t expect = 3 + d.regions.size();
    const bool has_room_col = f.size() == expect + 1;
    if (f.size() != expect && !has_room_col)
      throw ParseError(ctx + ": expected " + std::to_string(expect) +
                       " or " + std::to_string(expect + 1) + " fields, got " +
                       std::to_string(f.size()));
    d.has_room = d.has_room || has_room_col;
    FeatureRecord rec;
    rec.timestamp_ms = parse_int(f[0], ctx);
    rec.label = label_from_name(trim(f[1]));
    const RoiKind row_kind = roi_kind_from_name(trim(f[2]));
    if (row_kind != d.kind)
      throw ParseError(ctx + ": reading kind must be uniform in a dataset");
    for (std::size_t c = 0; c < d.regions.size(); ++c)
      rec.features.push_back(parse_double(f[3 + c], ctx));
    if (has_room_col)
      rec.room_temp_c = parse_double(f[3 + d.regions.size()], ctx);
    d.records.push_back(std::move(rec));
  }
  if (!have_scheme) throw ParseError(path + ": missing '# scheme' metadata");
  if (d.records.empty()) throw ParseError(path + ": no records");
  for (const auto& rec : d.records) {
    if (!label_legal_for(rec.label, d.scheme))
      throw ParseError(path + ": label " + label_name(rec.label) +
                       " not legal for scheme " + scheme_name(d.scheme));
  }

  // Reconstruct vote windows: from recorded boundaries when present,
  // otherwise from maximal runs of identical labels (conservative blocking).
  if (!vote_times.empty()) {
    std::vector<std::int64_t> times;
    for (const auto& r : d.records) times.push_back(r.timestamp_ms);
    std::vector<VoteRecord> pseudo;
    for (const std::int64_t t : vote_times) {
      VoteRecord v;
      v.timestamp_ms = t;
      pseudo.push_back(v);
    }
    const auto idx = assign_votes_to_frames(times, pseudo);
    for (std::size_t i = 0; i < d.records.size(); ++i)
      d.records[i].vote_index = idx[i] >= 0 ? idx[i] : 0;
  } else {
    int window = 0;
    for (std::size_t i = 0; i < d.records.size(); ++i) {
      if (i > 0 && d.records[i].label != d.records[i - 1].label) ++window;
      d.records[i].vote_index = window;
    }
  }

  for (const auto& r : d.records) ++d.class_counts[r.label];
  return d;
}

TimeSeries load_temperature_log(const std::string& path) {
  TimeSeries s;
  const auto lines = read_lines(path);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const std::string line = trim(lines[i]);
    if (line.empty() || line[0] == '#') continue;
    const std::string ctx = path + ":" + std::to_string(i + 1);
    const auto f = split(line, ',');
    if (f.size() != 2 && f.size() != 3)
      throw ParseError(ctx + ": expected 'timestamp_ms,temp_C[,rh_pct]'");
    s.times_ms.push_back(parse_int(f[0], ctx));
    s.values.push_back(parse_double(f[1], ctx));
  }
  validate(s);
  return s;
}

void save_temperature_log(const TimeSeries& s, const std::string& path,
                          const std::string& config,
                          const std::vector<double>* rh_pct) {
  std::string out = provenance_header(config);
  for (std::size_t i = 0; i < s.size(); ++i) {
    out += std::to_string(s.times_ms[i]) + "," + fmt_double(s.values[i]);
    if (rh_pct && i < rh_pct->size()) out += "," + fmt_double((*rh_pct)[i]);
    out += "\n";
  }
  write_file(path, out);
}

}  // namespace comfortcam
