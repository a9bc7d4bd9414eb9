#include "rsgslm/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <limits>
#include <map>
#include <set>

#include "rsgslm/csv.hpp"
#include "rsgslm/rng.hpp"

namespace fs = std::filesystem;

namespace rsgslm {

int MultiViewDataset::total_dim() const {
  int d = 0;
  for (const auto& v : views) d += static_cast<int>(v.cols());
  return d;
}

Mat MultiViewDataset::onehot() const {
  Mat y = Mat::Zero(n(), num_classes);
  for (int i = 0; i < n(); ++i) y(i, labels[i]) = 1.0;
  return y;
}

Mat MultiViewDataset::concat_views() const {
  Mat x(n(), total_dim());
  int col = 0;
  for (const auto& v : views) {
    x.middleCols(col, v.cols()) = v;
    col += static_cast<int>(v.cols());
  }
  return x;
}

void MultiViewDataset::validate() const {
  if (views.empty()) throw DataError("dataset has no views");
  if (num_classes < 2) throw DataError("dataset needs at least 2 classes");
  const int rows = n();
  for (std::size_t v = 0; v < views.size(); ++v)
    if (views[v].rows() != rows)
      throw DataError("view " + std::to_string(v) + " has " +
                      std::to_string(views[v].rows()) + " rows, labels have " +
                      std::to_string(rows));
  for (int lbl : labels)
    if (lbl < 0 || lbl >= num_classes) throw DataError("label out of range");
  if (!has_split()) return;
  if (static_cast<int>(train_mask.size()) != rows ||
      static_cast<int>(val_mask.size()) != rows ||
      static_cast<int>(test_mask.size()) != rows)
    throw DataError("split masks do not match dataset size");
  std::vector<int> train_per_class(num_classes, 0);
  for (int i = 0; i < rows; ++i) {
    int roles = (train_mask[i] ? 1 : 0) + (val_mask[i] ? 1 : 0) + (test_mask[i] ? 1 : 0);
    if (roles != 1) throw DataError("node " + std::to_string(i) + " must have exactly one role");
    if (train_mask[i]) ++train_per_class[labels[i]];
  }
  for (int j = 0; j < num_classes; ++j)
    if (train_per_class[j] == 0)
      throw DataError("class " + std::to_string(j) + " has no train node");
}

MultiViewDataset load_dataset(const std::string& root_dir) {
  MultiViewDataset ds;
  const fs::path root(root_dir);
  if (!fs::is_directory(root)) throw DataError("no such dataset directory: " + root_dir);
  for (int v = 0;; ++v) {
    fs::path p = root / "views" / ("view_" + std::to_string(v) + ".csv");
    if (!fs::exists(p)) break;
    ds.views.push_back(load_matrix(p.string()));
  }
  if (ds.views.empty()) throw DataError("no views found under " + root_dir);
  std::vector<int> raw = load_int_column((root / "labels.csv").string());
  if (static_cast<int>(raw.size()) != ds.views[0].rows())
    throw DataError("labels.csv length " + std::to_string(raw.size()) +
                    " does not match view rows " + std::to_string(ds.views[0].rows()));
  // Remap whatever integers appear to contiguous [0, c) in sorted order.
  std::map<int, int> remap;
  for (int lbl : raw) remap.emplace(lbl, 0);
  int next = 0;
  for (auto& [k, v] : remap) v = next++;
  ds.labels.reserve(raw.size());
  for (int lbl : raw) ds.labels.push_back(remap[lbl]);
  ds.num_classes = next;
  ds.validate();
  return ds;
}

void save_dataset(const MultiViewDataset& ds, const std::string& root_dir) {
  ds.validate();
  const fs::path root(root_dir);
  fs::create_directories(root / "views");
  for (int v = 0; v < ds.num_views(); ++v)
    save_matrix((root / "views" / ("view_" + std::to_string(v) + ".csv")).string(),
                ds.views[v]);
  save_int_column((root / "labels.csv").string(), ds.labels);
}

void save_split(const std::string& path, const MultiViewDataset& ds) {
  if (!ds.has_split()) throw DataError("dataset has no split to save");
  Table t;
  t.columns = {"node_index", "role"};
  for (int i = 0; i < ds.n(); ++i) {
    const char* role = ds.train_mask[i] ? "train" : (ds.val_mask[i] ? "val" : "test");
    t.rows.push_back({std::to_string(i), role});
  }
  save_table(path, t);
}

void load_split(const std::string& path, MultiViewDataset& ds) {
  Table t = load_table(path);
  if (t.columns != std::vector<std::string>{"node_index", "role"})
    throw DataError("split file " + path + ": expected columns node_index,role");
  const int n = ds.n();
  ds.train_mask.assign(n, 0);
  ds.val_mask.assign(n, 0);
  ds.test_mask.assign(n, 0);
  std::set<int> seen;
  for (const auto& row : t.rows) {
    int idx = std::stoi(row[0]);
    if (idx < 0 || idx >= n) throw DataError("split node index out of range: " + row[0]);
    if (!seen.insert(idx).second) throw DataError("duplicate split node index: " + row[0]);
    if (row[1] == "train")
      ds.train_mask[idx] = 1;
    else if (row[1] == "val")
      ds.val_mask[idx] = 1;
    else if (row[1] == "test")
      ds.test_mask[idx] = 1;
    else
      throw DataError("split role must be train|val|test, got '" + row[1] + "'");
  }
  if (static_cast<int>(seen.size()) != n)
    throw DataError("split file covers " + std::to_string(seen.size()) + " of " +
                    std::to_string(n) + " nodes");
  ds.validate();
}

Mat normalize_columns(const Mat& x) {
  Mat out = x;
  for (int j = 0; j < out.cols(); ++j) {
    double nrm = out.col(j).norm();
    if (nrm > 0.0) out.col(j) /= nrm;
  }
  return out;
}

MultiViewDataset normalize_columns(const MultiViewDataset& ds) {
  MultiViewDataset out = ds;
  for (auto& v : out.views) v = normalize_columns(v);
  return out;
}

void make_split(MultiViewDataset& ds, const SplitSpec& spec) {
  spec.validate();
  const int n = ds.n();
  Rng rng(spec.seed);
  ds.train_mask.assign(n, 0);
  ds.val_mask.assign(n, 0);
  ds.test_mask.assign(n, 1);
  for (int j = 0; j < ds.num_classes; ++j) {
    std::vector<int> idx;
    for (int i = 0; i < n; ++i)
      if (ds.labels[i] == j) idx.push_back(i);
    if (static_cast<int>(idx.size()) < spec.train_per_class + spec.val_per_class)
      throw DataError("class " + std::to_string(j) + " has " + std::to_string(idx.size()) +
                      " nodes, fewer than train+val = " +
                      std::to_string(spec.train_per_class + spec.val_per_class));
    rng.shuffle(idx);
    for (int k = 0; k < spec.train_per_class; ++k) {
      ds.train_mask[idx[k]] = 1;
      ds.test_mask[idx[k]] = 0;
    }
    for (int k = 0; k < spec.val_per_class; ++k) {
      ds.val_mask[idx[spec.train_per_class + k]] = 1;
      ds.test_mask[idx[spec.train_per_class + k]] = 0;
    }
  }
  ds.validate();
}

MultiViewDataset generate_synthetic(const SynthSpec& spec) {
  spec.validate();
  const int c = spec.classes;
  const int latent = spec.latent_dim > 0 ? spec.latent_dim : std::max(2, c);
  Rng rng(spec.seed);

  MultiViewDataset ds;
  ds.num_classes = c;
  ds.labels.resize(spec.n);
  for (int i = 0; i < spec.n; ++i) ds.labels[i] = i % c;

  const Mat centroids = rng.normal_matrix(c, latent);
  for (int v = 0; v < spec.num_views(); ++v) {
    const int d = spec.dims[v];
    // Normalize the render map so centroid distances keep their latent scale.
    const Mat render = rng.normal_matrix(latent, d) / std::sqrt(double(latent));
    const Mat noise = rng.normal_matrix(spec.n, d);
    Mat x(spec.n, d);
    for (int i = 0; i < spec.n; ++i)
      x.row(i) = spec.spread[v] * (centroids.row(ds.labels[i]) * render) +
                 spec.noise[v] * noise.row(i);
    ds.views.push_back(std::move(x));
  }
  ds.validate();
  return ds;
}

double knn1_accuracy(const Mat& x, const std::vector<int>& labels) {
  const int n = static_cast<int>(x.rows());
  if (n < 2) throw DataError("knn1_accuracy needs at least 2 samples");
  Vec sq = x.rowwise().squaredNorm();
  Mat d = sq.replicate(1, n) + sq.transpose().replicate(n, 1) - 2.0 * (x * x.transpose());
  int hits = 0;
  for (int i = 0; i < n; ++i) {
    d(i, i) = std::numeric_limits<double>::infinity();
    int best;
    d.row(i).minCoeff(&best);
    hits += labels[best] == labels[i] ? 1 : 0;
  }
  return static_cast<double>(hits) / n;
}

}  // namespace rsgslm
