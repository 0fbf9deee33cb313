#pragma once

#include <CLI11.hpp>
#include <string>

namespace comfortcam::cli {

/// Canonical config echo: the subcommand plus its arguments as invoked.
/// Embedded in every output file so runs are reproducible from their
/// artifacts.
struct Context {
  std::string config;
};

void setup_simulate(CLI::App& app, Context& ctx);
void setup_calibrate(CLI::App& app, Context& ctx);
void setup_register(CLI::App& app, Context& ctx);
void setup_extract(CLI::App& app, Context& ctx);
void setup_condition(CLI::App& app, Context& ctx);
void setup_dataset(CLI::App& app, Context& ctx);
void setup_correlate(CLI::App& app, Context& ctx);
void setup_train(CLI::App& app, Context& ctx);
void setup_eval(CLI::App& app, Context& ctx);
void setup_report(CLI::App& app, Context& ctx);

}  // namespace comfortcam::cli
