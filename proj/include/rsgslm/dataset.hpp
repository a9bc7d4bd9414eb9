#pragma once

#include <string>
#include <vector>

#include "rsgslm/common.hpp"
#include "rsgslm/config.hpp"

namespace rsgslm {

// V feature matrices over one shared sample axis, integer labels in [0, c),
// and (optionally) disjoint train/val/test masks. Masks are empty until a
// split is attached.
struct MultiViewDataset {
  std::vector<Mat> views;
  std::vector<int> labels;
  int num_classes = 0;
  Mask train_mask, val_mask, test_mask;

  int n() const { return static_cast<int>(labels.size()); }
  int num_views() const { return static_cast<int>(views.size()); }
  int total_dim() const;
  bool has_split() const { return !train_mask.empty(); }

  // n x c one-hot matrix of labels.
  Mat onehot() const;
  // Row-wise concatenation [X^1 | ... | X^V], n x total_dim.
  Mat concat_views() const;

  // Shape and label-range checks; split checks only when masks are present.
  void validate() const;
};

// Directory layout: root/views/view_0.csv ... view_{V-1}.csv (rows = samples),
// root/labels.csv (one integer per line), optional root/splits/*.csv.
MultiViewDataset load_dataset(const std::string& root_dir);
void save_dataset(const MultiViewDataset& ds, const std::string& root_dir);

// Split files are CSV tables with columns (node_index, role), role in
// {train, val, test}.
void save_split(const std::string& path, const MultiViewDataset& ds);
void load_split(const std::string& path, MultiViewDataset& ds);

// Divide every column by its Euclidean norm; all-zero columns stay zero.
Mat normalize_columns(const Mat& x);
MultiViewDataset normalize_columns(const MultiViewDataset& ds);

// Stratified masks: exactly train_per_class + val_per_class nodes per class,
// remainder test; deterministic per spec.seed.
void make_split(MultiViewDataset& ds, const SplitSpec& spec);

// Latent class centroids rendered through per-view random linear maps plus
// Gaussian noise; deterministic per spec.seed.
MultiViewDataset generate_synthetic(const SynthSpec& spec);

// Leave-one-out 1-nearest-neighbor accuracy; generator separability gauge.
double knn1_accuracy(const Mat& x, const std::vector<int>& labels);

}  // namespace rsgslm
