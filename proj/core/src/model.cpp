#include "comfortcam/model.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>
#include <map>
#include <numeric>
#include <stdexcept>

#include "comfortcam/error.hpp"
#include "comfortcam/rng.hpp"

namespace comfortcam {

const std::string& model_kind_name(ModelKind k) {
  static const std::string names[] = {"random_forest", "knn", "svm"};
  return names[static_cast<int>(k)];
}

ModelKind model_kind_from_name(const std::string& name) {
  for (int i = 0; i < 3; ++i)
    if (model_kind_name(static_cast<ModelKind>(i)) == name)
      return static_cast<ModelKind>(i);
  throw std::invalid_argument("unknown model kind '" + name + "'");
}

std::string Hyperparameters::summary() const {
  std::string s = "rf_trees=" + std::to_string(rf_trees);
  s += " rf_min_leaf=" + std::to_string(rf_min_leaf);
  s += " knn_k=" + std::to_string(knn_k);
  char buf[64];
  std::snprintf(buf, sizeof(buf), " svm_c=%g svm_tol=%g", svm_c, svm_tol);
  s += buf;
  return s;
}

std::vector<double> Standardizer::apply(const std::vector<double>& x) const {
  if (x.size() != means.size())
    throw std::invalid_argument("feature dimension mismatch: expected " +
                                std::to_string(means.size()) + ", got " +
                                std::to_string(x.size()));
  std::vector<double> out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i)
    out[i] = (x[i] - means[i]) / stds[i];
  return out;
}

namespace {

Standardizer fit_standardizer(const std::vector<std::vector<double>>& rows) {
  const std::size_t d = rows[0].size();
  Standardizer s;
  s.means.assign(d, 0.0);
  s.stds.assign(d, 0.0);
  for (const auto& r : rows)
    for (std::size_t j = 0; j < d; ++j) s.means[j] += r[j];
  for (double& m : s.means) m /= static_cast<double>(rows.size());
  for (const auto& r : rows)
    for (std::size_t j = 0; j < d; ++j) {
      const double dlt = r[j] - s.means[j];
      s.stds[j] += dlt * dlt;
    }
  for (double& v : s.stds) {
    v = std::sqrt(v / static_cast<double>(rows.size()));
    if (v == 0.0) v = 1.0;
  }
  return s;
}

int majority_index(const std::vector<int>& counts) {
  int best = 0;
  for (std::size_t i = 1; i < counts.size(); ++i)
    if (counts[i] > counts[best]) best = static_cast<int>(i);
  return best;
}

// ---------------------------------------------------------------- CART/RF

struct TreeBuilder {
  const std::vector<std::vector<double>>& x;
  const std::vector<int>& y;
  int n_labels;
  int mtry;
  int min_leaf;
  Rng& rng;
  std::vector<TreeNode> nodes;

  double gini(const std::vector<int>& counts, int total) const {
    if (total == 0) return 0.0;
    double g = 1.0;
    for (const int c : counts) {
      const double p = static_cast<double>(c) / total;
      g -= p * p;
    }
    return g;
  }

  int build(std::vector<int>& idx) {
    std::vector<int> counts(n_labels, 0);
    for (const int i : idx) ++counts[y[i]];
    const int total = static_cast<int>(idx.size());

    const bool pure =
        *std::max_element(counts.begin(), counts.end()) == total;
    if (pure || total < 2 * min_leaf) {
      nodes.push_back(TreeNode{-1, 0.0, -1, -1, majority_index(counts)});
      return static_cast<int>(nodes.size()) - 1;
    }

    // Sample mtry distinct candidate features.
    const int d = static_cast<int>(x[0].size());
    std::vector<int> feats(d);
    std::iota(feats.begin(), feats.end(), 0);
    for (int k = 0; k < mtry && k < d; ++k) {
      const int j =
          k + static_cast<int>(rng.uniform_int(static_cast<std::uint64_t>(d - k)));
      std::swap(feats[k], feats[j]);
    }

    int best_feat = -1;
    double best_thr = 0.0;
    double best_score = std::numeric_limits<double>::infinity();
    std::vector<int> sorted = idx;
    for (int k = 0; k < mtry && k < d; ++k) {
      const int f = feats[k];
      std::sort(sorted.begin(), sorted.end(), [&](int a, int b) {
        return x[a][f] != x[b][f] ? x[a][f] < x[b][f] : a < b;
      });
      std::vector<int> left_counts(n_labels, 0);
      std::vector<int> right_counts = counts;
      for (int pos = 0; pos + 1 < total; ++pos) {
        const int i = sorted[pos];
        ++left_counts[y[i]];
        --right_counts[y[i]];
        const double v = x[i][f];
        const double vn = x[sorted[pos + 1]][f];
        if (v == vn) continue;  // not a boundary between distinct values
        const int nl = pos + 1;
        const int nr = total - nl;
        if (nl < min_leaf || nr < min_leaf) continue;
        const double score =
            (nl * gini(left_counts, nl) + nr * gini(right_counts, nr)) / total;
        if (score < best_score) {
          best_score = score;
          best_feat = f;
          best_thr = 0.5 * (v + vn);
        }
      }
    }

    if (best_feat < 0) {
      nodes.push_back(TreeNode{-1, 0.0, -1, -1, majority_index(counts)});
      return static_cast<int>(nodes.size()) - 1;
    }

    std::vector<int> left_idx, right_idx;
    for (const int i : idx) {
      (x[i][best_feat] <= best_thr ? left_idx : right_idx).push_back(i);
    }
    if (left_idx.empty() || right_idx.empty()) {
      nodes.push_back(TreeNode{-1, 0.0, -1, -1, majority_index(counts)});
      return static_cast<int>(nodes.size()) - 1;
    }

    const int me = static_cast<int>(nodes.size());
    nodes.push_back(TreeNode{best_feat, best_thr, -1, -1, -1});
    const int l = build(left_idx);
    const int r = build(right_idx);
    nodes[me].left = l;
    nodes[me].right = r;
    return me;
  }
};

RandomForestState train_forest(const std::vector<std::vector<double>>& x,
                               const std::vector<int>& y, int n_labels,
                               const Hyperparameters& hyper,
                               std::uint64_t seed) {
  RandomForestState state;
  const int n = static_cast<int>(x.size());
  const int d = static_cast<int>(x[0].size());
  const int mtry = static_cast<int>(std::ceil(std::sqrt(static_cast<double>(d))));
  state.trees.reserve(static_cast<std::size_t>(hyper.rf_trees));
  for (int t = 0; t < hyper.rf_trees; ++t) {
    Rng rng(derive_seed(seed, 0x7f000000ull + static_cast<std::uint64_t>(t)));
    std::vector<int> bootstrap(n);
    for (int i = 0; i < n; ++i)
      bootstrap[i] = static_cast<int>(rng.uniform_int(static_cast<std::uint64_t>(n)));
    std::sort(bootstrap.begin(), bootstrap.end());
    TreeBuilder builder{x, y, n_labels, mtry, hyper.rf_min_leaf, rng, {}};
    builder.build(bootstrap);
    state.trees.push_back(std::move(builder.nodes));
  }
  return state;
}

int forest_predict(const RandomForestState& state,
                   const std::vector<double>& xs, int n_labels) {
  std::vector<int> votes(n_labels, 0);
  for (const auto& tree : state.trees) {
    int node = 0;
    while (tree[node].feature >= 0) {
      node = xs[tree[node].feature] <= tree[node].threshold ? tree[node].left
                                                            : tree[node].right;
    }
    ++votes[tree[node].leaf];
  }
  return majority_index(votes);
}

// ---------------------------------------------------------------- KNN

int knn_predict(const KnnState& state, const std::vector<double>& xs,
                int n_labels) {
  struct Neighbour {
    double dist2;
    int index;
  };
  const int k = std::min<int>(state.k, static_cast<int>(state.rows.size()));
  std::vector<Neighbour> best;
  best.reserve(state.rows.size());
  for (std::size_t i = 0; i < state.rows.size(); ++i) {
    double d2 = 0.0;
    for (std::size_t j = 0; j < xs.size(); ++j) {
      const double d = xs[j] - state.rows[i][j];
      d2 += d * d;
    }
    best.push_back({d2, static_cast<int>(i)});
  }
  std::partial_sort(best.begin(), best.begin() + k, best.end(),
                    [](const Neighbour& a, const Neighbour& b) {
                      return a.dist2 != b.dist2 ? a.dist2 < b.dist2
                                                : a.index < b.index;
                    });
  std::vector<int> votes(n_labels, 0);
  for (int i = 0; i < k; ++i) ++votes[state.labels[best[i].index]];
  const int top = majority_index(votes);
  int ties = 0;
  for (const int v : votes) ties += v == votes[top] ? 1 : 0;
  if (ties > 1) return state.labels[best[0].index];  // nearest neighbour rules
  return top;
}

// ---------------------------------------------------------------- SVM/SMO

double rbf(const std::vector<double>& a, const std::vector<double>& b,
           double gamma) {
  double d2 = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    d2 += d * d;
  }
  return std::exp(-gamma * d2);
}

SvmMachine smo_train(const std::vector<std::vector<double>>& x,
                     const std::vector<int>& y01,  // +1/-1
                     double gamma, const Hyperparameters& hyper, Rng& rng) {
  const int n = static_cast<int>(x.size());
  const double c = hyper.svm_c;
  std::vector<double> alpha(n, 0.0);
  std::vector<double> f(n, 0.0);  // sum_j alpha_j y_j K(i,j), excludes b
  double b = 0.0;

  auto kernel = [&](int i, int j) { return rbf(x[i], x[j], gamma); };

  int clean_passes = 0;
  for (int pass = 0; pass < hyper.svm_pass_cap && clean_passes < hyper.svm_max_passes;
       ++pass) {
    int changed = 0;
    for (int i = 0; i < n; ++i) {
      const double ei = f[i] + b - y01[i];
      const bool violates = (y01[i] * ei < -hyper.svm_tol && alpha[i] < c) ||
                            (y01[i] * ei > hyper.svm_tol && alpha[i] > 0);
      if (!violates) continue;
      int j = static_cast<int>(rng.uniform_int(static_cast<std::uint64_t>(n - 1)));
      if (j >= i) ++j;
      const double ej = f[j] + b - y01[j];

      double lo, hi;
      if (y01[i] != y01[j]) {
        lo = std::max(0.0, alpha[j] - alpha[i]);
        hi = std::min(c, c + alpha[j] - alpha[i]);
      } else {
        lo = std::max(0.0, alpha[i] + alpha[j] - c);
        hi = std::min(c, alpha[i] + alpha[j]);
      }
      if (lo >= hi) continue;
      const double kii = kernel(i, i), kjj = kernel(j, j), kij = kernel(i, j);
      const double eta = 2.0 * kij - kii - kjj;
      if (eta >= 0.0) continue;

      double aj = alpha[j] - y01[j] * (ei - ej) / eta;
      aj = std::min(hi, std::max(lo, aj));
      if (std::abs(aj - alpha[j]) < 1e-7) continue;
      const double ai = alpha[i] + y01[i] * y01[j] * (alpha[j] - aj);

      const double b1 = b - ei - y01[i] * (ai - alpha[i]) * kii -
                        y01[j] * (aj - alpha[j]) * kij;
      const double b2 = b - ej - y01[i] * (ai - alpha[i]) * kij -
                        y01[j] * (aj - alpha[j]) * kjj;
      if (ai > 0 && ai < c) {
        b = b1;
      } else if (aj > 0 && aj < c) {
        b = b2;
      } else {
        b = 0.5 * (b1 + b2);
      }

      const double di = (ai - alpha[i]) * y01[i];
      const double dj = (aj - alpha[j]) * y01[j];
      alpha[i] = ai;
      alpha[j] = aj;
      for (int t = 0; t < n; ++t) f[t] += di * kernel(t, i) + dj * kernel(t, j);
      ++changed;
    }
    clean_passes = changed == 0 ? clean_passes + 1 : 0;
  }

  SvmMachine m;
  m.b = b;
  for (int i = 0; i < n; ++i) {
    if (alpha[i] > 0.0) {
      m.alpha_y.push_back(alpha[i] * y01[i]);
      m.sv.push_back(x[i]);
    }
  }
  return m;
}

double machine_decision(const SvmMachine& m, const std::vector<double>& xs,
                        double gamma) {
  double f = m.b;
  for (std::size_t i = 0; i < m.sv.size(); ++i)
    f += m.alpha_y[i] * rbf(m.sv[i], xs, gamma);
  return f;
}

SvmState train_svm(const std::vector<std::vector<double>>& x,
                   const std::vector<int>& y, int n_labels,
                   const Hyperparameters& hyper, std::uint64_t seed) {
  SvmState state;
  const std::size_t d = x[0].size();

  // gamma = 1 / (d * mean feature variance) on the standardized matrix.
  double mean_var = 0.0;
  for (std::size_t j = 0; j < d; ++j) {
    double mean = 0.0;
    for (const auto& r : x) mean += r[j];
    mean /= static_cast<double>(x.size());
    double var = 0.0;
    for (const auto& r : x) var += (r[j] - mean) * (r[j] - mean);
    mean_var += var / static_cast<double>(x.size());
  }
  mean_var /= static_cast<double>(d);
  if (mean_var <= 0.0) mean_var = 1.0;
  state.gamma = 1.0 / (static_cast<double>(d) * mean_var);

  for (int a = 0; a < n_labels; ++a) {
    for (int bl = a + 1; bl < n_labels; ++bl) {
      std::vector<std::vector<double>> sub_x;
      std::vector<int> sub_y;
      for (std::size_t i = 0; i < x.size(); ++i) {
        if (y[i] == a) {
          sub_x.push_back(x[i]);
          sub_y.push_back(+1);
        } else if (y[i] == bl) {
          sub_x.push_back(x[i]);
          sub_y.push_back(-1);
        }
      }
      Rng rng(derive_seed(seed, 0x53564d00ull +
                                    static_cast<std::uint64_t>(a * 64 + bl)));
      SvmMachine m = smo_train(sub_x, sub_y, state.gamma, hyper, rng);
      m.pos = a;
      m.neg = bl;
      state.machines.push_back(std::move(m));
    }
  }
  return state;
}

int svm_predict(const SvmState& state, const std::vector<double>& xs,
                int n_labels, std::vector<double>* margins_out = nullptr) {
  std::vector<int> votes(n_labels, 0);
  std::vector<double> margin(n_labels, 0.0);
  for (const auto& m : state.machines) {
    const double f = machine_decision(m, xs, state.gamma);
    if (f > 0.0) {
      ++votes[m.pos];
    } else {
      ++votes[m.neg];
    }
    margin[m.pos] += f;
    margin[m.neg] -= f;
  }
  if (margins_out) *margins_out = margin;
  int best = 0;
  for (int i = 1; i < n_labels; ++i) {
    if (votes[i] > votes[best] ||
        (votes[i] == votes[best] && margin[i] > margin[best]))
      best = i;
  }
  return best;
}

}  // namespace

ModelArtifact train_matrix(ModelKind kind,
                           const std::vector<std::vector<double>>& rows,
                           const std::vector<Label>& row_labels, Scheme scheme,
                           const Hyperparameters& hyper, std::uint64_t seed) {
  if (rows.empty() || rows.size() != row_labels.size())
    throw std::invalid_argument("training rows/labels mismatch");
  const std::size_t d = rows[0].size();
  if (d == 0) throw std::invalid_argument("empty feature vectors");
  for (const auto& r : rows) {
    if (r.size() != d)
      throw std::invalid_argument("inconsistent feature dimensions");
    for (const double v : r)
      if (!std::isfinite(v))
        throw std::invalid_argument("non-finite feature value");
  }

  ModelArtifact model;
  model.kind = kind;
  model.scheme = scheme;
  model.hyper = hyper;
  model.seed = seed;

  // Label universe: classes seen in training, in scheme order.
  std::map<Label, int> counts;
  for (const Label l : row_labels) {
    if (!label_legal_for(l, scheme))
      throw std::invalid_argument("label " + label_name(l) +
                                  " not legal for scheme " +
                                  scheme_name(scheme));
    ++counts[l];
  }
  for (const Label l : scheme_labels(scheme))
    if (counts.count(l)) model.labels.push_back(l);
  if (model.labels.size() < 2)
    throw std::invalid_argument("training needs at least 2 classes");
  if (kind != ModelKind::Knn) {
    for (const auto& [l, c] : counts)
      if (c < 10)
        throw std::invalid_argument("class " + label_name(l) + " has " +
                                    std::to_string(c) +
                                    " records, need >= 10");
  } else if (static_cast<int>(rows.size()) < hyper.knn_k) {
    throw std::invalid_argument("knn needs at least k training records");
  }

  std::vector<int> y(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto it =
        std::find(model.labels.begin(), model.labels.end(), row_labels[i]);
    y[i] = static_cast<int>(it - model.labels.begin());
  }

  model.standardizer = fit_standardizer(rows);
  std::vector<std::vector<double>> xs(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i)
    xs[i] = model.standardizer.apply(rows[i]);

  const int n_labels = static_cast<int>(model.labels.size());
  switch (kind) {
    case ModelKind::RandomForest:
      model.state = train_forest(xs, y, n_labels, hyper, seed);
      break;
    case ModelKind::Knn: {
      KnnState s;
      s.k = hyper.knn_k;
      s.rows = std::move(xs);
      s.labels = std::move(y);
      model.state = std::move(s);
      break;
    }
    case ModelKind::Svm:
      model.state = train_svm(xs, y, n_labels, hyper, seed);
      break;
  }
  return model;
}

ModelArtifact train(ModelKind kind, const Dataset& dataset,
                    const Hyperparameters& hyper, std::uint64_t seed) {
  std::vector<std::vector<double>> rows;
  std::vector<Label> labels;
  rows.reserve(dataset.records.size());
  for (std::size_t i = 0; i < dataset.records.size(); ++i) {
    rows.push_back(dataset.row(i));
    labels.push_back(dataset.records[i].label);
  }
  return train_matrix(kind, rows, labels, dataset.scheme, hyper, seed);
}

Label predict(const ModelArtifact& model, const std::vector<double>& features) {
  const std::vector<double> xs = model.standardizer.apply(features);
  const int n_labels = static_cast<int>(model.labels.size());
  int idx = 0;
  if (const auto* rf = std::get_if<RandomForestState>(&model.state)) {
    idx = forest_predict(*rf, xs, n_labels);
  } else if (const auto* knn = std::get_if<KnnState>(&model.state)) {
    idx = knn_predict(*knn, xs, n_labels);
  } else {
    idx = svm_predict(std::get<SvmState>(model.state), xs, n_labels);
  }
  return model.labels[static_cast<std::size_t>(idx)];
}

std::vector<double> svm_aggregate_margin(const ModelArtifact& model,
                                         const std::vector<double>& features) {
  const auto& state = std::get<SvmState>(model.state);
  const std::vector<double> xs = model.standardizer.apply(features);
  std::vector<double> margins;
  svm_predict(state, xs, static_cast<int>(model.labels.size()), &margins);
  return margins;
}

// ------------------------------------------------------------ serialization

namespace {

constexpr char kMagic[4] = {'T', 'C', 'M', '1'};
constexpr std::uint32_t kFormatVersion = 1;

class Writer {
 public:
  explicit Writer(std::string& out) : out_(out) {}
  void raw(const void* p, std::size_t n) {
    out_.append(static_cast<const char*>(p), n);
  }
  void u8(std::uint8_t v) { raw(&v, 1); }
  void u32(std::uint32_t v) { raw(&v, 4); }
  void u64(std::uint64_t v) { raw(&v, 8); }
  void i32(std::int32_t v) { raw(&v, 4); }
  void f64(double v) { raw(&v, 8); }
  void str(const std::string& s) {
    u32(static_cast<std::uint32_t>(s.size()));
    raw(s.data(), s.size());
  }
  void vec(const std::vector<double>& v) {
    u32(static_cast<std::uint32_t>(v.size()));
    raw(v.data(), v.size() * sizeof(double));
  }

 private:
  std::string& out_;
};

class Reader {
 public:
  Reader(const std::string& data, const std::string& origin)
      : data_(data), origin_(origin) {}
  void raw(void* p, std::size_t n) {
    if (pos_ + n > data_.size())
      throw ParseError(origin_ + ": truncated model file", data_.size());
    std::memcpy(p, data_.data() + pos_, n);
    pos_ += n;
  }
  std::uint8_t u8() { std::uint8_t v; raw(&v, 1); return v; }
  std::uint32_t u32() { std::uint32_t v; raw(&v, 4); return v; }
  std::uint64_t u64() { std::uint64_t v; raw(&v, 8); return v; }
  std::int32_t i32() { std::int32_t v; raw(&v, 4); return v; }
  double f64() { double v; raw(&v, 8); return v; }
  std::string str() {
    const std::uint32_t n = u32();
    check_count(n);
    std::string s(n, '\0');
    raw(s.data(), n);
    return s;
  }
  std::vector<double> vec() {
    const std::uint32_t n = u32();
    check_count(n);
    std::vector<double> v(n);
    raw(v.data(), n * sizeof(double));
    return v;
  }
  void check_count(std::uint64_t n) const {
    if (n > data_.size())
      throw ParseError(origin_ + ": corrupt model file (count " +
                           std::to_string(n) + ")",
                       pos_);
  }

 private:
  const std::string& data_;
  std::string origin_;
  std::size_t pos_ = 0;
};

}  // namespace

void save_model(const ModelArtifact& model, const std::string& path) {
  std::string out;
  Writer w(out);
  w.raw(kMagic, 4);
  w.u32(kFormatVersion);
  w.u8(static_cast<std::uint8_t>(model.kind));
  w.u8(static_cast<std::uint8_t>(model.scheme));
  w.u32(static_cast<std::uint32_t>(model.labels.size()));
  for (const Label l : model.labels) w.u8(static_cast<std::uint8_t>(l));
  w.vec(model.standardizer.means);
  w.vec(model.standardizer.stds);
  w.u64(model.seed);
  w.str(model.config);
  w.i32(model.hyper.rf_trees);
  w.i32(model.hyper.rf_min_leaf);
  w.i32(model.hyper.knn_k);
  w.f64(model.hyper.svm_c);
  w.f64(model.hyper.svm_tol);
  w.i32(model.hyper.svm_max_passes);
  w.i32(model.hyper.svm_pass_cap);

  if (const auto* rf = std::get_if<RandomForestState>(&model.state)) {
    w.u32(static_cast<std::uint32_t>(rf->trees.size()));
    for (const auto& tree : rf->trees) {
      w.u32(static_cast<std::uint32_t>(tree.size()));
      for (const auto& n : tree) {
        w.i32(n.feature);
        w.f64(n.threshold);
        w.i32(n.left);
        w.i32(n.right);
        w.i32(n.leaf);
      }
    }
  } else if (const auto* knn = std::get_if<KnnState>(&model.state)) {
    w.i32(knn->k);
    w.u32(static_cast<std::uint32_t>(knn->rows.size()));
    for (const auto& r : knn->rows) w.vec(r);
    w.u32(static_cast<std::uint32_t>(knn->labels.size()));
    for (const int l : knn->labels) w.i32(l);
  } else {
    const auto& svm = std::get<SvmState>(model.state);
    w.f64(svm.gamma);
    w.u32(static_cast<std::uint32_t>(svm.machines.size()));
    for (const auto& m : svm.machines) {
      w.i32(m.pos);
      w.i32(m.neg);
      w.f64(m.b);
      w.vec(m.alpha_y);
      w.u32(static_cast<std::uint32_t>(m.sv.size()));
      for (const auto& v : m.sv) w.vec(v);
    }
  }

  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw IoError("cannot open file for writing: " + path);
  f.write(out.data(), static_cast<std::streamsize>(out.size()));
  if (!f) throw IoError("write failure: " + path);
}

ModelArtifact load_model(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open file: " + path);
  std::string data((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  Reader r(data, path);

  char magic[4];
  r.raw(magic, 4);
  if (std::memcmp(magic, kMagic, 4) != 0)
    throw ParseError(path + ": not a TCM1 model file", 0);
  const std::uint32_t version = r.u32();
  if (version != kFormatVersion)
    throw ParseError(path + ": unsupported model version " +
                         std::to_string(version),
                     4);

  ModelArtifact model;
  model.kind = static_cast<ModelKind>(r.u8());
  model.scheme = static_cast<Scheme>(r.u8());
  const std::uint32_t n_labels = r.u32();
  r.check_count(n_labels);
  for (std::uint32_t i = 0; i < n_labels; ++i)
    model.labels.push_back(static_cast<Label>(r.u8()));
  model.standardizer.means = r.vec();
  model.standardizer.stds = r.vec();
  model.seed = r.u64();
  model.config = r.str();
  model.hyper.rf_trees = r.i32();
  model.hyper.rf_min_leaf = r.i32();
  model.hyper.knn_k = r.i32();
  model.hyper.svm_c = r.f64();
  model.hyper.svm_tol = r.f64();
  model.hyper.svm_max_passes = r.i32();
  model.hyper.svm_pass_cap = r.i32();

  switch (model.kind) {
    case ModelKind::RandomForest: {
      RandomForestState s;
      const std::uint32_t n_trees = r.u32();
      r.check_count(n_trees);
      for (std::uint32_t t = 0; t < n_trees; ++t) {
        const std::uint32_t n_nodes = r.u32();
        r.check_count(n_nodes);
        std::vector<TreeNode> tree(n_nodes);
        for (auto& n : tree) {
          n.feature = r.i32();
          n.threshold = r.f64();
          n.left = r.i32();
          n.right = r.i32();
          n.leaf = r.i32();
        }
        s.trees.push_back(std::move(tree));
      }
      model.state = std::move(s);
      break;
    }
    case ModelKind::Knn: {
      KnnState s;
      s.k = r.i32();
      const std::uint32_t n = r.u32();
      r.check_count(n);
      for (std::uint32_t i = 0; i < n; ++i) s.rows.push_back(r.vec());
      const std::uint32_t nl = r.u32();
      r.check_count(nl);
      for (std::uint32_t i = 0; i < nl; ++i) s.labels.push_back(r.i32());
      model.state = std::move(s);
      break;
    }
    case ModelKind::Svm: {
      SvmState s;
      s.gamma = r.f64();
      const std::uint32_t nm = r.u32();
      r.check_count(nm);
      for (std::uint32_t i = 0; i < nm; ++i) {
        SvmMachine m;
        m.pos = r.i32();
        m.neg = r.i32();
        m.b = r.f64();
        m.alpha_y = r.vec();
        const std::uint32_t nsv = r.u32();
        r.check_count(nsv);
        for (std::uint32_t j = 0; j < nsv; ++j) m.sv.push_back(r.vec());
        if (m.sv.size() != m.alpha_y.size())
          throw ParseError(path + ": corrupt SVM machine", 0);
        s.machines.push_back(std::move(m));
      }
      model.state = std::move(s);
      break;
    }
    default:
      throw ParseError(path + ": unknown model kind byte", 0);
  }
  return model;
}

}  // namespace comfortcam
