#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "comfortcam/dataset.hpp"

namespace comfortcam {

enum class ModelKind { RandomForest, Knn, Svm };

const std::string& model_kind_name(ModelKind k);
ModelKind model_kind_from_name(const std::string& name);

struct Hyperparameters {
  int rf_trees = 100;
  int rf_min_leaf = 2;
  int knn_k = 6;
  double svm_c = 1.0;
  double svm_tol = 1e-3;     // KKT tolerance
  int svm_max_passes = 5;    // consecutive clean passes to declare converged
  int svm_pass_cap = 200;    // hard cap on full passes

  std::string summary() const;
};

/// Per-feature mean/stddev learned from training data; constant features
/// standardize with stddev 1.
struct Standardizer {
  std::vector<double> means;
  std::vector<double> stds;

  std::vector<double> apply(const std::vector<double>& x) const;
};

struct TreeNode {
  int feature = -1;          // -1 == leaf
  double threshold = 0.0;    // goes left when x[feature] <= threshold
  int left = -1;
  int right = -1;
  int leaf = -1;             // label index at leaves
};

struct RandomForestState {
  std::vector<std::vector<TreeNode>> trees;
};

struct KnnState {
  int k = 6;
  std::vector<std::vector<double>> rows;   // standardized
  std::vector<int> labels;                 // label indices
};

struct SvmMachine {
  int pos = 0, neg = 0;                    // label indices
  double b = 0.0;
  std::vector<double> alpha_y;             // alpha_i * y_i for support vectors
  std::vector<std::vector<double>> sv;     // standardized support vectors
};

struct SvmState {
  double gamma = 0.0;
  std::vector<SvmMachine> machines;        // one per unordered label pair
};

/// A trained classifier plus everything needed to reproduce and reapply it.
struct ModelArtifact {
  ModelKind kind = ModelKind::RandomForest;
  Scheme scheme = Scheme::ThreeClass;
  std::vector<Label> labels;               // classes seen in training
  Standardizer standardizer;
  Hyperparameters hyper;
  std::uint64_t seed = 0;
  std::string config;                      // producing run configuration
  std::variant<RandomForestState, KnnState, SvmState> state;
};

/// Trains on explicit rows (used by cross-validation folds).
/// random_forest: 100 CART trees, Gini impurity, bootstrap sampling,
/// ceil(sqrt(d)) features per split, grown to purity or min-leaf 2.
/// knn: k=6, Euclidean on standardized features, majority vote with ties
/// broken by the single nearest neighbour's class.
/// svm: one-vs-one RBF machines trained by sequential minimal optimization
/// (C=1, gamma=1/(d*mean feature variance), KKT tolerance 1e-3), pairwise
/// vote with ties broken by the largest aggregate decision margin.
/// Guards: >= 2 classes; >= 10 records per class for RF and SVM; n >= k for
/// KNN; all features finite.
ModelArtifact train_matrix(ModelKind kind,
                           const std::vector<std::vector<double>>& rows,
                           const std::vector<Label>& row_labels, Scheme scheme,
                           const Hyperparameters& hyper, std::uint64_t seed);

ModelArtifact train(ModelKind kind, const Dataset& dataset,
                    const Hyperparameters& hyper, std::uint64_t seed);

/// Deterministic label for a raw (unstandardized) feature vector. Throws
/// std::invalid_argument on dimension mismatch.
Label predict(const ModelArtifact& model, const std::vector<double>& features);

/// Decision values per label index ("aggregate margin"); exposed for tests.
std::vector<double> svm_aggregate_margin(const ModelArtifact& model,
                                         const std::vector<double>& features);

/// Versioned binary serialization, magic "TCM1".
void save_model(const ModelArtifact& model, const std::string& path);
ModelArtifact load_model(const std::string& path);

}  // namespace comfortcam
