#pragma once

#include <map>
#include <string>
#include <vector>

#include "rsgslm/config.hpp"
#include "rsgslm/dataset.hpp"
#include "rsgslm/trainer.hpp"

namespace rsgslm {

std::string software_version();

// FNV-1a over every feature value (full precision) and label.
std::string dataset_fingerprint(const MultiViewDataset& ds);

// Artifact root resolution: explicit flag > RSGSLM_ARTIFACT_ROOT env > default.
std::string resolve_artifact_root(const std::string& flag_value,
                                  const std::string& default_root = "artifacts");

// On-disk layout under the artifact root:
//   graphs/view_<v>.csv      per-view learned graphs S^v
//   features/F_<v>.csv       per-view soft labels F^v
//   fused/S.csv, fused/alphas.csv
//   renode/weights.csv       (node_index, totoro, rank, weight)
//   graphs_manifest.json
//   runs/<id>/               per-training outputs
struct ArtifactPaths {
  std::string root;

  std::string graphs_dir() const { return root + "/graphs"; }
  std::string features_dir() const { return root + "/features"; }
  std::string fused_dir() const { return root + "/fused"; }
  std::string renode_dir() const { return root + "/renode"; }
  std::string runs_dir() const { return root + "/runs"; }
  std::string graphs_manifest() const { return root + "/graphs_manifest.json"; }
  std::string view_graph(int v) const {
    return graphs_dir() + "/view_" + std::to_string(v) + ".csv";
  }
  std::string view_labels(int v) const {
    return features_dir() + "/F_" + std::to_string(v) + ".csv";
  }
};

// Hash over only the keys the graph stage consumes (solver./renode./split.),
// so training-only edits do not invalidate cached graphs.
std::string graphs_stage_hash(const ExperimentConfig& cfg);

// Persist/restore the full pipeline stage. The manifest records command,
// hashes, fingerprint, seeds, per-view objective traces, view weights,
// wall-clock seconds, software version, and every file written.
void save_graph_artifacts(const ArtifactPaths& paths, const PipelineArtifacts& art,
                          const ExperimentConfig& cfg, const std::string& fingerprint,
                          const std::string& command);
bool graphs_up_to_date(const ArtifactPaths& paths, const ExperimentConfig& cfg,
                       const std::string& fingerprint, int num_views);
PipelineArtifacts load_graph_artifacts(const ArtifactPaths& paths, int num_views);

// Node weight table round-trip (renode/weights.csv).
void save_node_weights(const std::string& path, const NodeWeightTable& table);
NodeWeightTable load_node_weights(const std::string& path);

// One run directory: config.txt snapshot, manifest.json, losses.csv,
// metrics.json, checkpoint_W0/W1.csv, split_<r>.csv per run.
std::string run_id(const std::string& method, const ExperimentConfig& cfg, int runs);
std::string prepare_run_dir(const ArtifactPaths& paths, const std::string& id);

// Writes everything except the per-run split files, which the caller has
// already placed in run_dir and passes in for the manifest's file list.
void save_run_artifacts(const std::string& run_dir, const std::string& method,
                        const ExperimentConfig& cfg, const std::string& fingerprint,
                        const std::string& command, const std::vector<RunResult>& runs,
                        const std::vector<std::string>& extra_files);

void save_epoch_records(const std::string& path, const std::vector<EpochRecord>& records);

}  // namespace rsgslm
