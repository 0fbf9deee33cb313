#include <algorithm>
#include <filesystem>
#include <memory>

#include "comfortcam/calib.hpp"
#include "comfortcam/error.hpp"
#include "comfortcam/io_util.hpp"
#include "comfortcam/render.hpp"
#include "comfortcam/sim.hpp"
#include "commands.hpp"

namespace comfortcam::cli {

namespace {

sim::Protocol parse_setpoint_profile(const std::string& spec,
                                     sim::Protocol base) {
  base.setpoint.clear();
  for (const auto& seg : split(spec, ',')) {
    const auto kv = split(seg, ':');
    if (kv.size() != 2)
      throw ParseError("setpoint profile must be 't:degC,t:degC,...', got '" +
                       seg + "'");
    base.setpoint.emplace_back(parse_double(kv[0], "setpoint time"),
                               parse_double(kv[1], "setpoint value"));
  }
  std::sort(base.setpoint.begin(), base.setpoint.end());
  if (base.setpoint.empty() || base.setpoint.front().first > 0.0)
    throw ParseError("setpoint profile must start at t=0");
  return base;
}

sim::SubjectModel load_subject(const std::string& path) {
  sim::SubjectModel s = sim::SubjectModel::default_subject();
  for (const auto& raw : read_lines(path)) {
    const std::string line = trim(raw);
    if (line.empty() || line[0] == '#') continue;
    const auto f = split_ws(line);
    if (f.size() != 2) throw ParseError(path + ": expected 'key value'");
    const std::string& key = f[0];
    const std::string ctx = path + " " + key;
    bool matched = false;
    for (const Region r : kAllRegions) {
      const std::string prefix = "region." + region_name(r) + ".";
      if (!starts_with(key, prefix)) continue;
      const std::string field = key.substr(prefix.size());
      auto& p = s.regions[r];
      if (field == "baseline_c") p.baseline_c = parse_double(f[1], ctx);
      else if (field == "gain") p.gain = parse_double(f[1], ctx);
      else if (field == "tau_s") p.tau_s = parse_double(f[1], ctx);
      else throw ParseError(ctx + ": unknown region field");
      matched = true;
    }
    if (matched) continue;
    if (key == "comfort_lo_c") s.comfort_lo_c = parse_double(f[1], ctx);
    else if (key == "comfort_hi_c") s.comfort_hi_c = parse_double(f[1], ctx);
    else if (key == "comfort_step_c") s.comfort_step_c = parse_double(f[1], ctx);
    else if (key == "hysteresis_c") s.hysteresis_c = parse_double(f[1], ctx);
    else if (key == "seed") s.seed = static_cast<std::uint64_t>(parse_int(f[1], ctx));
    else throw ParseError(ctx + ": unknown subject key");
  }
  return s;
}

struct SimulateOpts {
  std::string protocol = "exp1";
  std::uint64_t seed = 0;
  std::string out;
  double distance = 0.0;  // 0 == by protocol
  std::string radiometric = "auto";
  int render_frames = 16;
  int checkerboard_views = 10;
  double corner_noise_px = 0.0;
  std::string subject_file;
  double duration_s = 600.0;
  double frame_interval_s = 5.0;
  double vote_interval_s = 60.0;
  std::string setpoint = "0:22";
  double bias_c = 0.3;
  double noise_sigma_c = 0.2;
  double ffc_period_s = 180.0;
  double ffc_step_c = 1.5;
};

}  // namespace

void setup_simulate(CLI::App& app, Context& ctx) {
  auto opts = std::make_shared<SimulateOpts>();
  CLI::App* cmd = app.add_subcommand(
      "simulate", "Generate a synthetic chamber session with ground truth");
  cmd->add_option("--protocol", opts->protocol, "exp1, exp2 or custom")
      ->check(CLI::IsMember({"exp1", "exp2", "custom"}))
      ->required();
  cmd->add_option("--seed", opts->seed, "Simulation seed")->required();
  cmd->add_option("--out", opts->out, "Session output directory")->required();
  cmd->add_option("--distance", opts->distance,
                  "Camera distance in m (1 or 3; default per protocol)");
  cmd->add_option("--radiometric", opts->radiometric,
                  "true/false (default: exp1 true, exp2 false)")
      ->check(CLI::IsMember({"auto", "true", "false"}));
  cmd->add_option("--render-frames", opts->render_frames,
                  "Frame pairs written to disk (signals always cover the "
                  "whole protocol)");
  cmd->add_option("--checkerboard-views", opts->checkerboard_views,
                  "Checkerboard poses emitted for calibration");
  cmd->add_option("--corner-noise-px", opts->corner_noise_px,
                  "Gaussian noise on checkerboard corners (thermal px)");
  cmd->add_option("--subject", opts->subject_file,
                  "Subject model file (key value lines)");
  cmd->add_option("--duration-s", opts->duration_s, "custom: session length");
  cmd->add_option("--frame-interval-s", opts->frame_interval_s,
                  "custom: capture interval");
  cmd->add_option("--vote-interval-s", opts->vote_interval_s,
                  "custom: vote interval");
  cmd->add_option("--setpoint", opts->setpoint,
                  "custom: piecewise profile 't:degC,t:degC,...'");
  cmd->add_option("--bias-c", opts->bias_c, "Camera bias");
  cmd->add_option("--noise-sigma-c", opts->noise_sigma_c, "Camera noise sigma");
  cmd->add_option("--ffc-period-s", opts->ffc_period_s, "FFC period");
  cmd->add_option("--ffc-step-c", opts->ffc_step_c, "FFC step");

  cmd->callback([opts, &ctx] {
    sim::Protocol protocol;
    if (opts->protocol == "exp1") {
      protocol = sim::Protocol::exp1();
    } else if (opts->protocol == "exp2") {
      protocol = sim::Protocol::exp2();
    } else {
      protocol.id = "custom";
      protocol.duration_s = opts->duration_s;
      protocol.frame_interval_s = opts->frame_interval_s;
      protocol.vote_interval_s = opts->vote_interval_s;
      protocol = parse_setpoint_profile(opts->setpoint, protocol);
    }

    const double distance =
        opts->distance != 0.0 ? opts->distance
                              : (opts->protocol == "exp2" ? 3.0 : 1.0);

    sim::SubjectModel subject = opts->subject_file.empty()
                                    ? sim::SubjectModel::default_subject()
                                    : load_subject(opts->subject_file);

    sim::CameraModel camera;
    camera.bias_c = opts->bias_c;
    camera.noise_sigma_c = opts->noise_sigma_c;
    camera.ffc_period_s = opts->ffc_period_s;
    camera.ffc_step_c = opts->ffc_step_c;
    camera.radiometric = opts->radiometric == "auto"
                             ? opts->protocol != "exp2"
                             : opts->radiometric == "true";

    const sim::SimSession session =
        sim::simulate_session(protocol, subject, camera, opts->seed, distance);
    sim::WriteOptions wo;
    wo.render_frames = opts->render_frames;
    wo.checkerboard_views = opts->checkerboard_views;
    wo.corner_noise_px = opts->corner_noise_px;
    wo.config = ctx.config;
    sim::write_session(session, opts->out, wo);
    std::printf("session %s: %d frames, %zu votes, %d rendered pairs -> %s\n",
                protocol.id.c_str(), protocol.frame_count(),
                session.votes.size(),
                std::min(opts->render_frames, protocol.frame_count()),
                opts->out.c_str());
  });
}

void setup_calibrate(CLI::App& app, Context& ctx) {
  auto corr_dir = std::make_shared<std::string>();
  auto corr_files = std::make_shared<std::vector<std::string>>();
  auto out = std::make_shared<std::string>();
  auto seed = std::make_shared<std::uint64_t>(0);
  auto max_iter = std::make_shared<int>(2000);
  auto inlier_px = std::make_shared<double>(2.0);

  CLI::App* cmd = app.add_subcommand(
      "calibrate", "Estimate the rig prior from checkerboard correspondences");
  cmd->add_option("--corr-dir", *corr_dir,
                  "Directory of per-view correspondence files (*.txt)");
  cmd->add_option("--corr", *corr_files, "Explicit correspondence files");
  cmd->add_option("--seed", *seed, "RANSAC seed")->required();
  cmd->add_option("--out", *out, "Rig calibration output file")->required();
  cmd->add_option("--max-iter", *max_iter, "RANSAC iterations");
  cmd->add_option("--inlier-px", *inlier_px, "Inlier threshold (thermal px)");

  cmd->callback([corr_dir, corr_files, out, seed, max_iter, inlier_px, &ctx] {
    std::vector<std::string> files = *corr_files;
    if (!corr_dir->empty()) {
      if (!std::filesystem::is_directory(*corr_dir))
        throw IoError("not a directory: " + *corr_dir);
      for (const auto& e : std::filesystem::directory_iterator(*corr_dir)) {
        if (e.path().extension() == ".txt") files.push_back(e.path().string());
      }
      std::sort(files.begin(), files.end());
    }
    if (files.empty())
      throw IoError("no correspondence files given (--corr-dir or --corr)");

    std::vector<std::vector<Correspondence>> frame_sets;
    for (const auto& f : files) frame_sets.push_back(load_correspondences(f));

    RansacParams params;
    params.max_iter = *max_iter;
    params.inlier_px = *inlier_px;
    params.seed = *seed;
    const RigCalibration rig = calibrate_rig(frame_sets, params);
    save_rig(rig, *out, ctx.config);
    std::printf("rig: %d views, rms %.4f px, inliers %.1f%% -> %s\n",
                rig.frames_used, rig.rms_residual_px,
                100.0 * rig.inlier_fraction, out->c_str());
  });
}

}  // namespace comfortcam::cli
