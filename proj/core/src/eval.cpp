#include "comfortcam/eval.hpp"

#include <algorithm>
#include <stdexcept>

#include "comfortcam/io_util.hpp"
#include "comfortcam/rng.hpp"

namespace comfortcam {

const std::string& split_kind_name(SplitKind s) {
  static const std::string names[] = {"stratified_record", "blocked_by_vote"};
  return names[static_cast<int>(s)];
}

SplitKind split_kind_from_name(const std::string& name) {
  for (int i = 0; i < 2; ++i)
    if (split_kind_name(static_cast<SplitKind>(i)) == name)
      return static_cast<SplitKind>(i);
  throw std::invalid_argument("unknown split '" + name + "'");
}

int EvalReport::total() const {
  int t = 0;
  for (const auto& row : confusion)
    for (const int c : row) t += c;
  return t;
}

namespace {

bool every_class_in_every_training_fold(const Dataset& d,
                                        const std::vector<int>& fold_of_record,
                                        int folds) {
  // counts[label][fold]
  std::map<Label, std::vector<int>> counts;
  for (const auto& [l, c] : d.class_counts) counts[l].assign(folds, 0);
  for (std::size_t i = 0; i < d.records.size(); ++i)
    ++counts[d.records[i].label][fold_of_record[i]];
  for (const auto& [l, per_fold] : counts) {
    int total = 0;
    for (const int c : per_fold) total += c;
    for (int f = 0; f < folds; ++f)
      if (total - per_fold[f] < 1) return false;
  }
  return true;
}

std::vector<int> assign_folds(const Dataset& d, int folds, SplitKind split,
                              std::uint64_t seed, int attempt) {
  Rng rng(derive_seed(seed, 0xf01d5ull + static_cast<std::uint64_t>(attempt)));
  const std::size_t n = d.records.size();

  if (split == SplitKind::StratifiedRecord) {
    // Group = single record; stratify by class.
    std::map<Label, std::vector<std::size_t>> by_class;
    for (std::size_t i = 0; i < n; ++i)
      by_class[d.records[i].label].push_back(i);
    std::vector<int> assignment(n, -1);
    for (auto& [label, idx] : by_class) {
      rng.shuffle(idx);
      int fold = static_cast<int>(rng.uniform_int(folds));
      for (const std::size_t i : idx) {
        assignment[i] = fold;
        fold = (fold + 1) % folds;
      }
    }
    return assignment;
  }

  // Blocked by vote window: group records by vote_index, stratify windows
  // by their label.
  std::map<int, std::vector<std::size_t>> windows;
  for (std::size_t i = 0; i < n; ++i)
    windows[d.records[i].vote_index].push_back(i);
  std::map<Label, std::vector<int>> windows_by_class;
  for (const auto& [w, idx] : windows)
    windows_by_class[d.records[idx.front()].label].push_back(w);

  std::vector<int> assignment(n, -1);
  for (auto& [label, ws] : windows_by_class) {
    rng.shuffle(ws);
    int fold = static_cast<int>(rng.uniform_int(folds));
    for (const int w : ws) {
      for (const std::size_t i : windows[w]) assignment[i] = fold;
      fold = (fold + 1) % folds;
    }
  }
  return assignment;
}

}  // namespace

EvalReport cross_validate(const Dataset& dataset, ModelKind kind, int folds,
                          SplitKind split, const Hyperparameters& hyper,
                          std::uint64_t seed) {
  if (folds < 2) throw std::invalid_argument("folds must be >= 2");
  const std::size_t n = dataset.records.size();
  if (n == 0) throw std::invalid_argument("empty dataset");

  EvalReport rep;
  rep.model = kind;
  rep.scheme = dataset.scheme;
  rep.kind = dataset.kind;
  rep.folds = folds;
  rep.split = split;
  rep.seed = seed;
  rep.hyper = hyper;
  for (const Label l : scheme_labels(dataset.scheme))
    if (dataset.class_counts.count(l)) rep.labels.push_back(l);

  std::vector<int> fold_of_record;
  bool ok = false;
  for (int attempt = 0; attempt < 10; ++attempt) {
    fold_of_record = assign_folds(dataset, folds, split, seed, attempt);
    rep.stratification_attempts = attempt + 1;
    if (every_class_in_every_training_fold(dataset, fold_of_record, folds)) {
      ok = true;
      break;
    }
  }
  if (!ok)
    throw std::runtime_error(
        "stratification failed: a class is missing from a training fold "
        "after 10 attempts");
  rep.fold_of_record = fold_of_record;

  const int k = static_cast<int>(rep.labels.size());
  rep.confusion.assign(k, std::vector<int>(k, 0));
  auto label_index = [&](Label l) {
    return static_cast<int>(
        std::find(rep.labels.begin(), rep.labels.end(), l) - rep.labels.begin());
  };

  for (int fold = 0; fold < folds; ++fold) {
    std::vector<std::vector<double>> train_rows;
    std::vector<Label> train_labels;
    std::vector<std::size_t> test_idx;
    for (std::size_t i = 0; i < n; ++i) {
      if (fold_of_record[i] == fold) {
        test_idx.push_back(i);
      } else {
        train_rows.push_back(dataset.row(i));
        train_labels.push_back(dataset.records[i].label);
      }
    }
    if (test_idx.empty()) continue;
    const ModelArtifact model =
        train_matrix(kind, train_rows, train_labels, dataset.scheme, hyper,
                     derive_seed(seed, 0xcf01d000ull + fold));
    for (const std::size_t i : test_idx) {
      const Label pred = predict(model, dataset.row(i));
      ++rep.confusion[label_index(dataset.records[i].label)]
                     [label_index(pred)];
    }
  }

  // Metrics + structural invariants.
  int trace = 0, total = 0, max_support = 0;
  for (int r = 0; r < k; ++r) {
    int row_sum = 0;
    for (int c = 0; c < k; ++c) {
      total += rep.confusion[r][c];
      row_sum += rep.confusion[r][c];
    }
    trace += rep.confusion[r][r];
    rep.supports[rep.labels[r]] = row_sum;
    max_support = std::max(max_support, row_sum);
    if (row_sum != dataset.class_counts.at(rep.labels[r]))
      throw std::logic_error("confusion row sum != class support");
  }
  if (total != static_cast<int>(n))
    throw std::logic_error("confusion total != record count");
  rep.accuracy = static_cast<double>(trace) / total;
  rep.baseline_majority = static_cast<double>(max_support) / total;
  for (int c = 0; c < k; ++c) {
    int col_sum = 0;
    for (int r = 0; r < k; ++r) col_sum += rep.confusion[r][c];
    rep.precision[rep.labels[c]] =
        col_sum == 0 ? 0.0 : static_cast<double>(rep.confusion[c][c]) / col_sum;
  }
  return rep;
}

std::string format_eval_report(const EvalReport& r, const std::string& config) {
  std::string out = provenance_header(config);
  out += "model " + model_kind_name(r.model) + "\n";
  out += "scheme " + scheme_name(r.scheme) + "\n";
  out += "kind " + roi_kind_name(r.kind) + "\n";
  out += "folds " + std::to_string(r.folds) + "\n";
  out += "split " + split_kind_name(r.split) + "\n";
  out += "seed " + std::to_string(r.seed) + "\n";
  out += "stratification_attempts " + std::to_string(r.stratification_attempts) + "\n";
  out += "hyperparameters " + r.hyper.summary() + "\n";
  out += "labels ";
  for (std::size_t i = 0; i < r.labels.size(); ++i)
    out += (i ? "," : "") + label_name(r.labels[i]);
  out += "\n";
  out += "accuracy " + fmt_double(r.accuracy) + "\n";
  out += "baseline_majority " + fmt_double(r.baseline_majority) + "\n";
  for (const Label l : r.labels) {
    out += "precision " + label_name(l) + " " + fmt_double(r.precision.at(l)) +
           " support " + std::to_string(r.supports.at(l)) + "\n";
  }
  out += "confusion rows=true cols=predicted\n";
  for (const auto& row : r.confusion) {
    for (std::size_t c = 0; c < row.size(); ++c)
      out += (c ? "," : "") + std::to_string(row[c]);
    out += "\n";
  }
  out += "fold_assignment ";
  for (std::size_t i = 0; i < r.fold_of_record.size(); ++i)
    out += (i ? "," : "") + std::to_string(r.fold_of_record[i]);
  out += "\n";
  return out;
}

std::string format_confusion_csv(const EvalReport& r,
                                 const std::string& config) {
  std::string out = provenance_header(config);
  out += "true\\predicted";
  for (const Label l : r.labels) out += "," + label_name(l);
  out += "\n";
  for (std::size_t i = 0; i < r.labels.size(); ++i) {
    out += label_name(r.labels[i]);
    for (const int c : r.confusion[i]) out += "," + std::to_string(c);
    out += "\n";
  }
  return out;
}

}  // namespace comfortcam
