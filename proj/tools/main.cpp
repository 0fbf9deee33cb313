#include <CLI11.hpp>
#include <cstdio>
#include <exception>
#include <string>

#include "comfortcam/error.hpp"
#include "comfortcam/version.hpp"
#include "commands.hpp"

namespace {

constexpr int kExitUsage = 64;
constexpr int kExitBadInput = 65;
constexpr int kExitPipeline = 70;

void print_error(int code, const std::string& msg) {
  std::string one_line = msg;
  for (char& c : one_line)
    if (c == '\n') c = ' ';
  std::fprintf(stderr, "comfortcam: error %d: %s\n", code, one_line.c_str());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Dual-camera thermal comfort pipeline"};
  app.set_version_flag("--version", std::string("comfortcam ") + comfortcam::kVersion);
  app.require_subcommand(1);

  comfortcam::cli::Context ctx;
  {
    std::string cfg = "comfortcam";
    for (int i = 1; i < argc; ++i) {
      cfg += " ";
      cfg += argv[i];
    }
    ctx.config = cfg;
  }

  comfortcam::cli::setup_simulate(app, ctx);
  comfortcam::cli::setup_calibrate(app, ctx);
  comfortcam::cli::setup_register(app, ctx);
  comfortcam::cli::setup_extract(app, ctx);
  comfortcam::cli::setup_condition(app, ctx);
  comfortcam::cli::setup_dataset(app, ctx);
  comfortcam::cli::setup_correlate(app, ctx);
  comfortcam::cli::setup_train(app, ctx);
  comfortcam::cli::setup_eval(app, ctx);
  comfortcam::cli::setup_report(app, ctx);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    print_error(kExitUsage, e.what());
    return kExitUsage;
  } catch (const comfortcam::IoError& e) {
    print_error(kExitBadInput, e.what());
    return kExitBadInput;
  } catch (const comfortcam::ParseError& e) {
    print_error(kExitBadInput, e.what());
    return kExitBadInput;
  } catch (const std::exception& e) {
    print_error(kExitPipeline, e.what());
    return kExitPipeline;
  }
  return 0;
}
