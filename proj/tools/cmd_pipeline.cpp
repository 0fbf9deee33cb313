#include <memory>
#include <optional>

#include "comfortcam/dataset.hpp"
#include "comfortcam/error.hpp"
#include "comfortcam/features_io.hpp"
#include "comfortcam/io_util.hpp"
#include "comfortcam/registration.hpp"
#include "comfortcam/session.hpp"
#include "comfortcam/stats.hpp"
#include "commands.hpp"

namespace comfortcam::cli {

namespace {

struct FrameJobOpts {
  std::string session;
  std::string rig;
  std::string out;
  std::uint64_t seed = 0;
  int max_keypoints = kDefaultMaxKeypoints;
  double ratio = 0.8;
  int ransac_iter = 2000;
  double inlier_px = 2.0;
  int min_inliers = 15;
  std::string registration = "auto";   // auto | prior (extract only)
  std::string stat = "mean";
  std::string kind = "auto";
  std::string include_eyes = "auto";
};

void add_register_params(CLI::App* cmd, const std::shared_ptr<FrameJobOpts>& o) {
  cmd->add_option("--session", o->session, "Session manifest")->required();
  cmd->add_option("--rig", o->rig, "Rig calibration file (fallback prior)")
      ->required();
  cmd->add_option("--seed", o->seed, "RANSAC seed")->required();
  cmd->add_option("--out", o->out, "Output file")->required();
  cmd->add_option("--max-keypoints", o->max_keypoints, "Keypoint budget");
  cmd->add_option("--ratio", o->ratio, "Match ratio test");
  cmd->add_option("--ransac-iter", o->ransac_iter, "RANSAC iterations");
  cmd->add_option("--inlier-px", o->inlier_px, "Inlier threshold (thermal px)");
  cmd->add_option("--min-inliers", o->min_inliers,
                  "Below this the prior is used");
}

RegisterParams to_params(const FrameJobOpts& o, std::uint64_t frame_salt) {
  RegisterParams p;
  p.max_keypoints = o.max_keypoints;
  p.match_ratio = o.ratio;
  p.ransac_max_iter = o.ransac_iter;
  p.inlier_px = o.inlier_px;
  p.min_inliers = o.min_inliers;
  p.seed = o.seed ^ frame_salt * 0x9e3779b97f4a7c15ull;
  return p;
}

}  // namespace

void setup_register(CLI::App& app, Context& ctx) {
  auto opts = std::make_shared<FrameJobOpts>();
  CLI::App* cmd = app.add_subcommand(
      "register", "Per-frame cross-modal registration log for a session");
  add_register_params(cmd, opts);

  cmd->callback([opts, &ctx] {
    const SessionIndex session = load_session(opts->session);
    const RigCalibration rig = load_rig(opts->rig);
    std::string out = provenance_header(ctx.config);
    out += "# columns: frame_id n_matches n_inliers used_fallback "
           "mean_reproj_px h00 h01 h02 h10 h11 h12 h20 h21 h22\n";
    int fallbacks = 0;
    for (std::size_t i = 0; i < session.pairs.size(); ++i) {
      const auto& pair = session.pairs[i];
      const VisualFrame v = load_visual_frame(pair.visual_path);
      const ThermalFrame t = load_thermal_frame(pair.thermal_path);
      const RegistrationResult r =
          register_pair(v, t, rig, to_params(*opts, i));
      fallbacks += r.used_fallback ? 1 : 0;
      out += format_registration_record(pair.timestamp_ms, r) + "\n";
    }
    write_file(opts->out, out);
    std::printf("registered %zu pairs, %d fallbacks -> %s\n",
                session.pairs.size(), fallbacks, opts->out.c_str());
  });
}

void setup_extract(CLI::App& app, Context& ctx) {
  auto opts = std::make_shared<FrameJobOpts>();
  CLI::App* cmd = app.add_subcommand(
      "extract", "Per-frame ROI readings for a session");
  add_register_params(cmd, opts);
  cmd->add_option("--registration", opts->registration,
                  "auto: per-frame estimate with prior fallback; prior: "
                  "always the calibration prior")
      ->check(CLI::IsMember({"auto", "prior"}));
  cmd->add_option("--stat", opts->stat, "ROI statistic")
      ->check(CLI::IsMember({"mean", "max", "p90"}));
  cmd->add_option("--kind", opts->kind,
                  "auto: skin for radiometric frames, intensity otherwise")
      ->check(CLI::IsMember({"auto", "skin_temperature_C", "pixel_intensity"}));
  cmd->add_option("--include-eyes", opts->include_eyes,
                  "auto: excluded for exp2 sessions")
      ->check(CLI::IsMember({"auto", "true", "false"}));

  cmd->callback([opts, &ctx] {
    const SessionIndex session = load_session(opts->session);
    const RigCalibration rig = load_rig(opts->rig);
    const LandmarkProvider provider = LandmarkProvider::from_sidecar(
        join_path(session.base_dir, session.manifest.landmark_sidecar));
    const RoiStat stat = roi_stat_from_name(opts->stat);
    const bool include_eyes =
        opts->include_eyes == "auto"
            ? session.manifest.protocol_id != "exp2"
            : opts->include_eyes == "true";

    FeatureTable table;
    int skipped_landmarks = 0;
    for (std::size_t i = 0; i < session.pairs.size(); ++i) {
      const auto& pair = session.pairs[i];
      const auto lm = provider.landmarks(pair.timestamp_ms);
      if (!lm) {
        ++skipped_landmarks;  // gap: conditioning sees a missing frame
        continue;
      }
      const ThermalFrame t = load_thermal_frame(pair.thermal_path);
      const RoiKind kind =
          opts->kind == "auto"
              ? (t.radiometric ? RoiKind::SkinTemperatureC
                               : RoiKind::PixelIntensity)
              : roi_kind_from_name(opts->kind);

      Homography h;
      if (opts->registration == "prior") {
        h = rig.prior;
      } else {
        const VisualFrame v = load_visual_frame(pair.visual_path);
        h = register_pair(v, t, rig, to_params(*opts, i)).homography;
      }

      const RoiSet visual_rois = compute_rois(
          *lm, pair.visual_header.width, pair.visual_header.height, include_eyes);
      std::vector<RoiWarning> warnings;
      const RoiSet thermal_rois =
          transfer_rois(visual_rois, h, t.width, t.height, &warnings);
      for (const auto& [region, rect] : thermal_rois.regions)
        table.readings.push_back(roi_statistic(t, region, rect, kind, stat));
    }
    save_feature_table(table, opts->out, ctx.config);
    std::printf("extracted %zu readings from %zu pairs (%d landmark gaps) -> %s\n",
                table.readings.size(), session.pairs.size(), skipped_landmarks,
                opts->out.c_str());
  });
}

void setup_condition(CLI::App& app, Context& ctx) {
  auto features = std::make_shared<std::string>();
  auto out = std::make_shared<std::string>();
  auto report_path = std::make_shared<std::string>();

  CLI::App* cmd = app.add_subcommand(
      "condition", "Outlier rejection + moving average per region series");
  cmd->add_option("--features", *features, "Input readings table")->required();
  cmd->add_option("--out", *out, "Conditioned readings table")->required();
  cmd->add_option("--report", *report_path, "Conditioning report file");

  cmd->callback([features, out, report_path, &ctx] {
    const FeatureTable table = load_feature_table(*features);
    auto series = split_series(table);
    const auto n_pixels = split_n_pixels(table);
    std::string report = provenance_header(ctx.config);
    report += "# columns: region,kind,n_samples,n_outliers,window,indices\n";
    for (auto& [key, s] : series) {
      const auto [conditioned, rep] = condition_series(s);
      report += region_name(key.region) + "," + roi_kind_name(key.kind) + "," +
                std::to_string(s.size()) + "," +
                std::to_string(rep.n_outliers_removed) + "," +
                std::to_string(rep.window) + ",";
      for (std::size_t i = 0; i < rep.outlier_indices.size(); ++i)
        report += (i ? " " : "") + std::to_string(rep.outlier_indices[i]);
      report += "\n";
      s = conditioned;
    }
    save_feature_table(merge_series(series, n_pixels), *out, ctx.config);
    if (!report_path->empty()) write_file(*report_path, report);
    std::printf("conditioned %zu series -> %s\n", series.size(), out->c_str());
  });
}

void setup_dataset(CLI::App& app, Context& ctx) {
  auto features = std::make_shared<std::string>();
  auto votes_path = std::make_shared<std::string>();
  auto scheme_name_opt = std::make_shared<std::string>("three_class");
  auto kind = std::make_shared<std::string>("auto");
  auto room = std::make_shared<std::string>();
  auto include_room = std::make_shared<bool>(false);
  auto subject_id = std::make_shared<std::string>("subject");
  auto out = std::make_shared<std::string>();

  CLI::App* cmd = app.add_subcommand(
      "dataset", "Assemble the labeled dataset from readings and votes");
  cmd->add_option("--features", *features, "Readings table")->required();
  cmd->add_option("--votes", *votes_path, "Vote log")->required();
  cmd->add_option("--scheme", *scheme_name_opt, "three_class or four_class")
      ->check(CLI::IsMember({"three_class", "four_class"}))
      ->required();
  cmd->add_option("--kind", *kind, "Reading kind (auto: skin when present)")
      ->check(CLI::IsMember({"auto", "skin_temperature_C", "pixel_intensity"}));
  cmd->add_option("--room", *room, "Room-temperature log");
  cmd->add_flag("--include-room", *include_room,
                "Append room temperature as a feature column");
  cmd->add_option("--subject-id", *subject_id, "Subject id tag");
  cmd->add_option("--out", *out, "Dataset file")->required();

  cmd->callback([features, votes_path, scheme_name_opt, kind, room,
                 include_room, subject_id, out, &ctx] {
    const FeatureTable table = load_feature_table(*features);
    const auto votes = load_votes(*votes_path);
    const Scheme scheme = scheme_from_name(*scheme_name_opt);

    RoiKind k;
    if (*kind == "auto") {
      bool has_skin = false;
      for (const auto& r : table.readings)
        has_skin = has_skin || r.kind == RoiKind::SkinTemperatureC;
      k = has_skin ? RoiKind::SkinTemperatureC : RoiKind::PixelIntensity;
    } else {
      k = roi_kind_from_name(*kind);
    }

    std::optional<TimeSeries> room_series;
    if (*include_room) {
      if (room->empty())
        throw ParseError("--include-room requires --room");
      room_series = load_temperature_log(*room);
    }
    const Dataset d =
        assemble_dataset(table, votes, scheme, k, *subject_id,
                         room_series ? &*room_series : nullptr);
    save_dataset(d, *out, ctx.config);
    std::printf("dataset: %zu records, %zu classes, kind %s -> %s\n",
                d.records.size(), d.class_counts.size(),
                roi_kind_name(k).c_str(), out->c_str());
  });
}

void setup_correlate(CLI::App& app, Context& ctx) {
  auto features = std::make_shared<std::string>();
  auto room = std::make_shared<std::string>();
  auto out = std::make_shared<std::string>();

  CLI::App* cmd = app.add_subcommand(
      "correlate", "Per-region correlation with the room temperature");
  cmd->add_option("--features", *features, "Readings table (conditioned)")
      ->required();
  cmd->add_option("--room", *room, "Room-temperature log")->required();
  cmd->add_option("--out", *out, "Correlation table")->required();

  cmd->callback([features, room, out, &ctx] {
    const FeatureTable table = load_feature_table(*features);
    const TimeSeries room_series = load_temperature_log(*room);
    const CorrelationTable t = correlation_table(table, room_series);
    write_file(*out, format_correlation_table(t, ctx.config));
    std::printf("correlation table: %zu cells -> %s\n", t.cells.size(),
                out->c_str());
  });
}

}  // namespace comfortcam::cli
