#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "comfortcam/model.hpp"

namespace comfortcam {

enum class SplitKind { StratifiedRecord, BlockedByVote };

const std::string& split_kind_name(SplitKind s);
SplitKind split_kind_from_name(const std::string& name);

/// Aggregated out-of-fold evaluation. Construction (finalize) asserts the
/// structural invariants: accuracy == trace/total and row sums == class
/// supports.
struct EvalReport {
  ModelKind model = ModelKind::RandomForest;
  Scheme scheme = Scheme::ThreeClass;
  RoiKind kind = RoiKind::SkinTemperatureC;
  int folds = 0;
  SplitKind split = SplitKind::BlockedByVote;
  std::uint64_t seed = 0;
  int stratification_attempts = 1;
  Hyperparameters hyper;

  std::vector<Label> labels;                    // matrix order
  std::vector<std::vector<int>> confusion;      // rows true, cols predicted
  double accuracy = 0.0;
  std::map<Label, double> precision;            // column-wise TP/(TP+FP)
  std::map<Label, int> supports;                // row sums
  double baseline_majority = 0.0;
  std::vector<int> fold_of_record;              // per dataset record

  int total() const;
};

/// K-fold cross-validation. stratified_record deals records of each class
/// round-robin across folds; blocked_by_vote deals whole vote windows so no
/// window straddles folds. Both re-seed up to 10 times until every class is
/// present in every training fold, then throw. Out-of-fold predictions are
/// aggregated into one confusion matrix.
EvalReport cross_validate(const Dataset& dataset, ModelKind kind, int folds,
                          SplitKind split, const Hyperparameters& hyper,
                          std::uint64_t seed);

/// Structured text document with metrics, matrix, seed and hyperparameters.
std::string format_eval_report(const EvalReport& r, const std::string& config);

/// Confusion matrix as CSV: header row/col labels, count cells.
std::string format_confusion_csv(const EvalReport& r, const std::string& config);

}  // namespace comfortcam
