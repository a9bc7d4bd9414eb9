#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "rsgslm/common.hpp"

namespace rsgslm {

// Per-view graph/projection solver parameters.
struct SolverConfig {
  double eta = 5.0;      // label-smoothness strength in the graph step
  double gamma = 0.003;  // entry-wise graph regularizer (larger -> denser rows)
  double mu = 100.0;     // projection-block weight
  double alpha = 0.003;  // fit-vs-shrinkage balance inside the projection block
  // Accepted for config compatibility; the solver's quadratic form fixes the
  // distance exponent at 2 and ignores other values.
  double p = 2.0;
  double u_label = 1.0;  // diagonal of the label-anchor matrix on train nodes
  int outer_iters = 20;
  double rel_tol = 1e-5;

  void validate() const;
};

// Personalized-PageRank re-weighting of labeled nodes.
struct ReNodeConfig {
  double xi = 0.15;  // restart probability
  double w_min = 0.5;
  double w_max = 1.5;

  void validate() const;
};

enum class ScheduleKind { kLinear, kExponential, kSqrt, kSquare };
enum class PseudoPool { kUnlabeled, kTestOnly };

// Loss composition: re-weighted CE + lambda1 * scheduled pseudo-label CE
// + lambda2 * smoothness.
struct LossConfig {
  double lambda1 = 1.0;
  double lambda2 = 1.0;
  ScheduleKind schedule = ScheduleKind::kLinear;
  bool use_renode_weights = true;
  bool use_pseudo = true;
  bool use_smooth = true;
  // Replace learned pseudo targets by ground-truth one-hot rows (diagnostic).
  bool oracle_pseudo = false;
  // Divide the pseudo term by the pool size; off by default so lambda1 keeps
  // its unnormalized scale.
  bool normalize_pseudo = false;
  PseudoPool pseudo_pool = PseudoPool::kUnlabeled;

  void validate() const;
};

enum class OptimizerKind { kAdam, kGradientDescent };

struct TrainConfig {
  double learning_rate = 0.01;
  int max_epochs = 2000;
  int patience = 100;
  OptimizerKind optimizer = OptimizerKind::kAdam;
  std::uint64_t seed = 0;
  int hidden_dim = 28;
  double weight_decay = 0.0;
  bool add_self_loops = true;
  LossConfig loss;
  ReNodeConfig renode;
  SolverConfig solver;

  void validate() const;
};

// Stratified split request; seeds offset per run for repeated evaluation.
struct SplitSpec {
  int train_per_class = 5;
  int val_per_class = 5;
  std::uint64_t seed = 0;

  void validate() const;
};

// Synthetic multi-view blob generator request.
struct SynthSpec {
  int n = 300;
  int classes = 3;
  std::vector<int> dims;      // one entry per view
  std::vector<double> spread; // per view; single value broadcasts
  std::vector<double> noise;  // per view; single value broadcasts
  int latent_dim = 0;         // 0 -> max(2, classes)
  std::uint64_t seed = 0;

  int num_views() const { return static_cast<int>(dims.size()); }
  void validate() const;
};

// Experiment config = TrainConfig + SplitSpec, parsed from one flat
// key=value file with prefixes solver./renode./loss./train./split.
struct ExperimentConfig {
  TrainConfig train;
  SplitSpec split;

  void validate() const;
};

// --- flat key=value text format -------------------------------------------
// One  key = value  pair per line; '#' starts a comment; blank lines ignored.
// Duplicate and unknown keys are hard errors (UsageError).

std::map<std::string, std::string> parse_kv_text(const std::string& text);
std::map<std::string, std::string> load_kv_file(const std::string& path);

ExperimentConfig experiment_from_kv(const std::map<std::string, std::string>& kv);
ExperimentConfig load_experiment_config(const std::string& path);
// Apply "key=value" override strings (e.g. from command-line flags).
void apply_overrides(ExperimentConfig& cfg, const std::vector<std::string>& sets);

SynthSpec synth_from_kv(const std::map<std::string, std::string>& kv);
SynthSpec load_synth_spec(const std::string& path);

// Canonical (sorted-key) serialization; round-trips through the parser.
std::map<std::string, std::string> to_kv(const ExperimentConfig& cfg);
std::map<std::string, std::string> to_kv(const SynthSpec& spec);
std::string render_kv(const std::map<std::string, std::string>& kv);

// FNV-1a over the canonical serialization: stable under key reordering in
// the source file.
std::string fnv1a_hex(const std::map<std::string, std::string>& kv);
std::string config_hash(const ExperimentConfig& cfg);

const char* to_string(ScheduleKind k);
const char* to_string(OptimizerKind k);
const char* to_string(PseudoPool p);
ScheduleKind schedule_from_string(const std::string& s);
OptimizerKind optimizer_from_string(const std::string& s);
PseudoPool pool_from_string(const std::string& s);

}  // namespace rsgslm
