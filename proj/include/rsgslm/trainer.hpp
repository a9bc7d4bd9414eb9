#pragma once

#include <string>
#include <vector>

#include "rsgslm/config.hpp"
#include "rsgslm/dataset.hpp"
#include "rsgslm/fusion.hpp"
#include "rsgslm/gcn.hpp"
#include "rsgslm/objective.hpp"
#include "rsgslm/renode.hpp"
#include "rsgslm/view_graph.hpp"

namespace rsgslm {

struct EpochRecord {
  int epoch = 0;
  LossBreakdown loss;
  double val_acc = 0.0;
  double test_acc = 0.0;
};

struct StageSeconds {
  double solver = 0.0;
  double fusion = 0.0;
  double renode = 0.0;
  double training = 0.0;
};

struct RunResult {
  GcnParams best_params;  // parameters that produced best_z
  Mat best_z;             // prediction at the best-validation epoch
  double best_val_accuracy = -1.0;
  double test_accuracy = 0.0;  // always from the best-validation checkpoint
  int best_epoch = 0;
  int epochs_ran = 0;
  std::vector<EpochRecord> epoch_records;
  StageSeconds stage_seconds;
};

// Everything one GCN training consumes. weights/l_norm may be null when the
// corresponding loss terms are disabled.
struct TrainProblem {
  const Mat* op = nullptr;
  const Mat* features = nullptr;
  const std::vector<int>* labels = nullptr;
  const Mask* train_mask = nullptr;
  const Mask* val_mask = nullptr;
  const Mask* test_mask = nullptr;
  int num_classes = 0;
  const Vec* weights = nullptr;
  const Mat* l_norm = nullptr;
};

// Full-batch loop with adaptive-moment or plain gradient-descent updates,
// validation-accuracy early stopping (ties keep the earlier epoch), and
// previous-epoch predictions as pseudo targets.
RunResult train_gcn_loop(const TrainProblem& problem, const TrainConfig& cfg);

// Per-view solves + fusion + node re-weighting on an already normalized,
// already split dataset.
struct PipelineArtifacts {
  std::vector<ViewGraphResult> views;
  Vec alphas;
  FusedGraph fused;
  NodeWeightTable node_weights;
  StageSeconds stage_seconds;
};

PipelineArtifacts build_pipeline(const MultiViewDataset& ds, const TrainConfig& cfg);

// The full method: GCN over concatenated per-view soft labels on the fused
// graph, three-term loss.
RunResult train_rsgslm(const MultiViewDataset& ds, const PipelineArtifacts& art,
                       const TrainConfig& cfg);

// Baseline: one graph solved on the concatenated views, plain-CE GCN on the
// concatenated features.
RunResult train_baseline_xstar(const MultiViewDataset& ds, const TrainConfig& cfg);

// Baseline: per-view plain-CE GCNs on (X^v, S^v); predictions averaged over
// views, each view contributing its best-validation checkpoint.
RunResult train_baseline_multi(const MultiViewDataset& ds, const TrainConfig& cfg,
                               const std::vector<ViewGraphResult>* cached_views = nullptr);

// A normalized dataset with one concrete split plus its solved artifacts;
// lets several method/loss variants reuse the same expensive stage.
struct SplitContext {
  MultiViewDataset ds;
  PipelineArtifacts art;
};

SplitContext prepare_split(const MultiViewDataset& base, const SplitSpec& split,
                           const TrainConfig& cfg);

struct RepeatedStats {
  std::vector<double> per_run;
  double mean = 0.0;
  double stddev = 0.0;  // population
};

RepeatedStats summarize(const std::vector<double>& xs);

// Fresh stratified split per run r (split seed + r, train seed + r); methods
// invoked with the same config therefore see identical split sequences.
// method: rsgslm | gcn-xstar | gcn-multi.
RepeatedStats run_repeated(const MultiViewDataset& base, const ExperimentConfig& cfg,
                           const std::string& method, int runs);

struct AblationRow {
  std::string name;
  bool use_renode = false;
  bool use_pseudo = false;
  bool use_smooth = false;
  bool oracle_pseudo = false;
  RepeatedStats stats;
};

// The 8 on/off combinations of {renode, pseudo, smooth} plus the
// ground-truth-pseudo diagnostic row, all over shared split sequences.
std::vector<AblationRow> run_ablation_suite(const MultiViewDataset& base,
                                            const ExperimentConfig& cfg, int runs);

struct GradCheckRow {
  std::string name;
  double max_rel_err = 0.0;
};

struct GradCheckReport {
  std::vector<GradCheckRow> rows;
  double worst = 0.0;
  bool pass = false;  // worst < 1e-4
};

// Central finite differences against the analytic gradients for every
// ablation flag combination on a small random instance.
GradCheckReport gradient_check(std::uint64_t seed);

}  // namespace rsgslm
