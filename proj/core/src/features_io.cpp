#include "comfortcam/features_io.hpp"

#include <algorithm>

#include "comfortcam/error.hpp"
#include "comfortcam/io_util.hpp"

namespace comfortcam {

FeatureTable load_feature_table(const std::string& path) {
  FeatureTable t;
  const auto lines = read_lines(path);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const std::string line = trim(lines[i]);
    if (line.empty() || line[0] == '#') continue;
    const std::string ctx = path + ":" + std::to_string(i + 1);
    const auto f = split(line, ',');
    if (f.size() != 5)
      throw ParseError(ctx +
                       ": expected 'timestamp_ms,region,kind,value,n_pixels'");
    RoiReading r;
    r.timestamp_ms = parse_int(f[0], ctx);
    r.region = region_from_name(trim(f[1]));
    r.kind = roi_kind_from_name(trim(f[2]));
    r.value = parse_double(f[3], ctx);
    r.n_pixels = static_cast<int>(parse_int(f[4], ctx));
    t.readings.push_back(r);
  }
  return t;
}

void save_feature_table(const FeatureTable& table, const std::string& path,
                        const std::string& config) {
  std::string out = provenance_header(config);
  out += "# columns: timestamp_ms,region,kind,value,n_pixels\n";
  for (const auto& r : table.readings) {
    out += std::to_string(r.timestamp_ms) + "," + region_name(r.region) + "," +
           roi_kind_name(r.kind) + "," + fmt_double(r.value) + "," +
           std::to_string(r.n_pixels) + "\n";
  }
  write_file(path, out);
}

namespace {

struct Row {
  std::int64_t t;
  double v;
  int n;
};

std::map<SeriesKey, std::vector<Row>> group_rows(const FeatureTable& table) {
  std::map<SeriesKey, std::vector<Row>> groups;
  for (const auto& r : table.readings)
    groups[{r.region, r.kind}].push_back({r.timestamp_ms, r.value, r.n_pixels});
  for (auto& [key, rows] : groups) {
    std::stable_sort(rows.begin(), rows.end(),
                     [](const Row& a, const Row& b) { return a.t < b.t; });
    for (std::size_t i = 1; i < rows.size(); ++i)
      if (rows[i].t == rows[i - 1].t)
        throw ParseError("duplicate reading for " + region_name(key.region) +
                         "/" + roi_kind_name(key.kind) + " at " +
                         std::to_string(rows[i].t));
  }
  return groups;
}

}  // namespace

std::map<SeriesKey, TimeSeries> split_series(const FeatureTable& table) {
  std::map<SeriesKey, TimeSeries> out;
  for (const auto& [key, rows] : group_rows(table)) {
    TimeSeries s;
    for (const auto& r : rows) {
      s.times_ms.push_back(r.t);
      s.values.push_back(r.v);
    }
    out[key] = std::move(s);
  }
  return out;
}

std::map<SeriesKey, std::vector<int>> split_n_pixels(const FeatureTable& table) {
  std::map<SeriesKey, std::vector<int>> out;
  for (const auto& [key, rows] : group_rows(table)) {
    std::vector<int> n;
    for (const auto& r : rows) n.push_back(r.n);
    out[key] = std::move(n);
  }
  return out;
}

FeatureTable merge_series(const std::map<SeriesKey, TimeSeries>& series,
                          const std::map<SeriesKey, std::vector<int>>& n_pixels) {
  FeatureTable t;
  for (const auto& [key, s] : series) {
    const auto itn = n_pixels.find(key);
    for (std::size_t i = 0; i < s.size(); ++i) {
      RoiReading r;
      r.timestamp_ms = s.times_ms[i];
      r.region = key.region;
      r.kind = key.kind;
      r.value = s.values[i];
      r.n_pixels = (itn != n_pixels.end() && i < itn->second.size())
                       ? itn->second[i]
                       : 0;
      t.readings.push_back(r);
    }
  }
  std::stable_sort(t.readings.begin(), t.readings.end(),
                   [](const RoiReading& a, const RoiReading& b) {
                     if (a.timestamp_ms != b.timestamp_ms)
                       return a.timestamp_ms < b.timestamp_ms;
                     if (a.region != b.region) return a.region < b.region;
                     return a.kind < b.kind;
                   });
  return t;
}

}  // namespace comfortcam
