#include <memory>

#include "comfortcam/error.hpp"
#include "comfortcam/eval.hpp"
#include "comfortcam/io_util.hpp"
#include "comfortcam/model.hpp"
#include "comfortcam/stats.hpp"
#include "comfortcam/svg.hpp"
#include "commands.hpp"

namespace comfortcam::cli {

namespace {

void add_hyper_options(CLI::App* cmd, const std::shared_ptr<Hyperparameters>& h) {
  cmd->add_option("--rf-trees", h->rf_trees, "Random forest size");
  cmd->add_option("--rf-min-leaf", h->rf_min_leaf, "Minimum leaf size");
  cmd->add_option("--knn-k", h->knn_k, "Nearest-neighbour count");
  cmd->add_option("--svm-c", h->svm_c, "SVM C");
  cmd->add_option("--svm-tol", h->svm_tol, "SMO KKT tolerance");
}

}  // namespace

void setup_train(CLI::App& app, Context& ctx) {
  auto dataset_path = std::make_shared<std::string>();
  auto model_name = std::make_shared<std::string>();
  auto seed = std::make_shared<std::uint64_t>(0);
  auto out = std::make_shared<std::string>();
  auto hyper = std::make_shared<Hyperparameters>();

  CLI::App* cmd = app.add_subcommand("train", "Train a preference classifier");
  cmd->add_option("--dataset", *dataset_path, "Dataset file")->required();
  cmd->add_option("--model", *model_name, "random_forest, knn or svm")
      ->check(CLI::IsMember({"random_forest", "knn", "svm"}))
      ->required();
  cmd->add_option("--seed", *seed, "Training seed")->required();
  cmd->add_option("--out", *out, "Model artifact file")->required();
  add_hyper_options(cmd, hyper);

  cmd->callback([dataset_path, model_name, seed, out, hyper, &ctx] {
    const Dataset d = load_dataset(*dataset_path);
    ModelArtifact model =
        train(model_kind_from_name(*model_name), d, *hyper, *seed);
    model.config = ctx.config;
    save_model(model, *out);
    std::printf("trained %s on %zu records (%zu classes) -> %s\n",
                model_name->c_str(), d.records.size(), d.class_counts.size(),
                out->c_str());
  });
}

void setup_eval(CLI::App& app, Context& ctx) {
  auto dataset_path = std::make_shared<std::string>();
  auto model_name = std::make_shared<std::string>();
  auto folds = std::make_shared<int>(5);
  auto split_name = std::make_shared<std::string>("blocked_by_vote");
  auto seed = std::make_shared<std::uint64_t>(0);
  auto out = std::make_shared<std::string>();
  auto confusion_csv = std::make_shared<std::string>();
  auto hyper = std::make_shared<Hyperparameters>();

  CLI::App* cmd = app.add_subcommand(
      "eval", "Cross-validated evaluation with a confusion matrix");
  cmd->add_option("--dataset", *dataset_path, "Dataset file")->required();
  cmd->add_option("--model", *model_name, "random_forest, knn or svm")
      ->check(CLI::IsMember({"random_forest", "knn", "svm"}))
      ->required();
  cmd->add_option("--folds", *folds, "Fold count");
  cmd->add_option("--split", *split_name, "Fold assignment")
      ->check(CLI::IsMember({"blocked_by_vote", "stratified_record"}));
  cmd->add_option("--seed", *seed, "Evaluation seed")->required();
  cmd->add_option("--out", *out, "Report file")->required();
  cmd->add_option("--confusion", *confusion_csv, "Confusion matrix CSV");
  add_hyper_options(cmd, hyper);

  cmd->callback([dataset_path, model_name, folds, split_name, seed, out,
                 confusion_csv, hyper, &ctx] {
    const Dataset d = load_dataset(*dataset_path);
    const EvalReport rep =
        cross_validate(d, model_kind_from_name(*model_name), *folds,
                       split_kind_from_name(*split_name), *hyper, *seed);
    write_file(*out, format_eval_report(rep, ctx.config));
    if (!confusion_csv->empty())
      write_file(*confusion_csv, format_confusion_csv(rep, ctx.config));
    std::printf("eval %s: accuracy %.4f (baseline %.4f) -> %s\n",
                model_name->c_str(), rep.accuracy, rep.baseline_majority,
                out->c_str());
  });
}

namespace {

struct ReportOpts {
  std::string kind;
  std::string features;
  std::string conditioned;
  std::string confusion;
  std::string region = "nose";
  std::string reading_kind = "skin_temperature_C";
  int degree = 6;
  std::string out;
  std::string csv;
  std::string title;
};

TimeSeries pick_series(const std::string& path, const std::string& region,
                       const std::string& kind) {
  const FeatureTable table = load_feature_table(path);
  const auto series = split_series(table);
  const SeriesKey key{region_from_name(region), roi_kind_from_name(kind)};
  const auto it = series.find(key);
  if (it == series.end())
    throw ParseError(path + ": no series for " + region + "/" + kind);
  return it->second;
}

EvalReport confusion_from_csv(const std::string& path) {
  EvalReport rep;
  const auto lines = read_lines(path);
  bool have_header = false;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const std::string line = trim(lines[i]);
    if (line.empty() || line[0] == '#') continue;
    const auto f = split(line, ',');
    if (!have_header) {
      for (std::size_t c = 1; c < f.size(); ++c)
        rep.labels.push_back(label_from_name(trim(f[c])));
      have_header = true;
      continue;
    }
    if (f.size() != rep.labels.size() + 1)
      throw ParseError(path + ":" + std::to_string(i + 1) +
                       ": ragged confusion row");
    std::vector<int> row;
    for (std::size_t c = 1; c < f.size(); ++c)
      row.push_back(static_cast<int>(parse_int(f[c], path)));
    rep.confusion.push_back(row);
  }
  if (rep.confusion.size() != rep.labels.size())
    throw ParseError(path + ": confusion matrix is not square");
  return rep;
}

}  // namespace

void setup_report(CLI::App& app, Context& ctx) {
  auto opts = std::make_shared<ReportOpts>();
  CLI::App* cmd = app.add_subcommand(
      "report", "Emit tables and scalable-vector-graphics plots");
  cmd->add_option("--kind", opts->kind, "series, trend or confusion")
      ->check(CLI::IsMember({"series", "trend", "confusion"}))
      ->required();
  cmd->add_option("--features", opts->features, "Readings table (raw)");
  cmd->add_option("--conditioned", opts->conditioned,
                  "Conditioned readings table overlay (series plots)");
  cmd->add_option("--confusion", opts->confusion,
                  "Confusion CSV from eval (confusion plots)");
  cmd->add_option("--region", opts->region, "Region to plot");
  cmd->add_option("--reading-kind", opts->reading_kind, "Reading kind to plot")
      ->check(CLI::IsMember({"skin_temperature_C", "pixel_intensity"}));
  cmd->add_option("--degree", opts->degree, "Trend polynomial degree");
  cmd->add_option("--out", opts->out, "SVG output")->required();
  cmd->add_option("--csv", opts->csv,
                  "Also emit the plotted values as delimiter-separated text");
  cmd->add_option("--title", opts->title, "Plot title");

  cmd->callback([opts, &ctx] {
    std::string svg;
    std::string csv_out = provenance_header(ctx.config);

    if (opts->kind == "series") {
      if (opts->features.empty())
        throw ParseError("series plots need --features");
      std::vector<SvgSeries> curves;
      curves.push_back({"raw " + opts->region,
                        pick_series(opts->features, opts->region,
                                    opts->reading_kind)});
      if (!opts->conditioned.empty()) {
        curves.push_back({"conditioned " + opts->region,
                          pick_series(opts->conditioned, opts->region,
                                      opts->reading_kind)});
      }
      const std::string title =
          opts->title.empty() ? opts->region + " " + opts->reading_kind
                              : opts->title;
      svg = svg_series_plot(curves, title, ctx.config);
      csv_out += "# columns: timestamp_ms";
      for (const auto& c : curves) csv_out += "," + c.label;
      csv_out += "\n";
      for (std::size_t i = 0; i < curves[0].series.size(); ++i) {
        csv_out += std::to_string(curves[0].series.times_ms[i]);
        for (const auto& c : curves)
          csv_out += "," + (i < c.series.size() ? fmt_double(c.series.values[i])
                                                : std::string(""));
        csv_out += "\n";
      }
    } else if (opts->kind == "trend") {
      if (opts->features.empty()) throw ParseError("trend plots need --features");
      const TimeSeries s =
          pick_series(opts->features, opts->region, opts->reading_kind);
      const PolyFit fit = polyfit_trend(s, opts->degree);
      const std::string title =
          opts->title.empty()
              ? opts->region + " degree-" + std::to_string(opts->degree) + " trend"
              : opts->title;
      svg = svg_trend_plot(s, fit, title, ctx.config);
      csv_out += "# columns: timestamp_ms,value,fitted\n";
      for (std::size_t i = 0; i < s.size(); ++i)
        csv_out += std::to_string(s.times_ms[i]) + "," +
                   fmt_double(s.values[i]) + "," + fmt_double(fit.fitted[i]) +
                   "\n";
      csv_out += "# coefficients";
      for (const double c : fit.coefficients) csv_out += " " + fmt_double(c);
      csv_out += "\n";
    } else {
      if (opts->confusion.empty())
        throw ParseError("confusion plots need --confusion");
      const EvalReport rep = confusion_from_csv(opts->confusion);
      const std::string title =
          opts->title.empty() ? "confusion matrix" : opts->title;
      svg = svg_confusion_plot(rep, title, ctx.config);
      csv_out += slurp_file(opts->confusion);
    }

    write_file(opts->out, svg);
    if (!opts->csv.empty()) write_file(opts->csv, csv_out);
    std::printf("report %s -> %s\n", opts->kind.c_str(), opts->out.c_str());
  });
}

}  // namespace comfortcam::cli
