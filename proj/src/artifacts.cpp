#include "rsgslm/artifacts.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "rsgslm/csv.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace rsgslm {

namespace {

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path);
  out << text;
}

void write_json(const std::string& path, const json& j) {
  write_text(path, j.dump(2) + "\n");
}

json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path);
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw DataError("malformed JSON in " + path + ": " + e.what());
  }
  return j;
}

json seconds_json(const StageSeconds& s) {
  return json{{"solver", s.solver},
              {"fusion", s.fusion},
              {"renode", s.renode},
              {"training", s.training}};
}

}  // namespace

std::string software_version() { return "rsgslm 0.1.0"; }

std::string dataset_fingerprint(const MultiViewDataset& ds) {
  std::uint64_t h = 1469598103934665603ull;
  auto mix = [&h](const std::string& s) {
    for (unsigned char ch : s) {
      h ^= ch;
      h *= 1099511628211ull;
    }
  };
  for (const Mat& x : ds.views) {
    for (Eigen::Index i = 0; i < x.rows(); ++i)
      for (Eigen::Index j = 0; j < x.cols(); ++j) {
        mix(format_double(x(i, j)));
        mix(",");
      }
    mix(";");
  }
  for (int lbl : ds.labels) {
    mix(std::to_string(lbl));
    mix(",");
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string resolve_artifact_root(const std::string& flag_value,
                                  const std::string& default_root) {
  if (!flag_value.empty()) return flag_value;
  if (const char* env = std::getenv("RSGSLM_ARTIFACT_ROOT"); env && *env) return env;
  return default_root;
}

std::string graphs_stage_hash(const ExperimentConfig& cfg) {
  std::map<std::string, std::string> filtered;
  for (const auto& [k, v] : to_kv(cfg))
    if (k.rfind("solver.", 0) == 0 || k.rfind("renode.", 0) == 0 ||
        k.rfind("split.", 0) == 0)
      filtered.emplace(k, v);
  return fnv1a_hex(filtered);
}

void save_node_weights(const std::string& path, const NodeWeightTable& table) {
  Table t;
  t.columns = {"node_index", "totoro", "rank", "weight"};
  for (std::size_t k = 0; k < table.node_index.size(); ++k)
    t.rows.push_back({std::to_string(table.node_index[k]), format_double(table.totoro(k)),
                      std::to_string(table.rank[k]), format_double(table.weight(k))});
  save_table(path, t);
}

NodeWeightTable load_node_weights(const std::string& path) {
  const Table t = load_table(path);
  if (t.columns != std::vector<std::string>{"node_index", "totoro", "rank", "weight"})
    throw DataError("unexpected columns in " + path);
  NodeWeightTable table;
  table.totoro = Vec(t.rows.size());
  table.weight = Vec(t.rows.size());
  for (std::size_t k = 0; k < t.rows.size(); ++k) {
    table.node_index.push_back(std::stoi(t.rows[k][0]));
    table.totoro(k) = std::stod(t.rows[k][1]);
    table.rank.push_back(std::stoi(t.rows[k][2]));
    table.weight(k) = std::stod(t.rows[k][3]);
  }
  return table;
}

void save_graph_artifacts(const ArtifactPaths& paths, const PipelineArtifacts& art,
                          const ExperimentConfig& cfg, const std::string& fingerprint,
                          const std::string& command) {
  fs::create_directories(paths.graphs_dir());
  fs::create_directories(paths.features_dir());
  fs::create_directories(paths.fused_dir());
  fs::create_directories(paths.renode_dir());

  std::vector<std::string> files;
  json traces = json::array();
  for (std::size_t v = 0; v < art.views.size(); ++v) {
    save_matrix(paths.view_graph(static_cast<int>(v)), art.views[v].S);
    save_matrix(paths.view_labels(static_cast<int>(v)), art.views[v].F);
    files.push_back(paths.view_graph(static_cast<int>(v)));
    files.push_back(paths.view_labels(static_cast<int>(v)));
    traces.push_back(art.views[v].surrogate_objective_trace);
  }
  save_matrix(paths.fused_dir() + "/S.csv", art.fused.S);
  save_vector(paths.fused_dir() + "/alphas.csv", art.alphas);
  save_node_weights(paths.renode_dir() + "/weights.csv", art.node_weights);
  files.push_back(paths.fused_dir() + "/S.csv");
  files.push_back(paths.fused_dir() + "/alphas.csv");
  files.push_back(paths.renode_dir() + "/weights.csv");
  files.push_back(paths.graphs_manifest());

  json manifest;
  manifest["command"] = command;
  manifest["software_version"] = software_version();
  manifest["config_hash"] = config_hash(cfg);
  manifest["graphs_config_hash"] = graphs_stage_hash(cfg);
  manifest["dataset_fingerprint"] = fingerprint;
  manifest["seeds"] = {{"split", cfg.split.seed}, {"train", cfg.train.seed}};
  manifest["num_views"] = art.views.size();
  manifest["view_weights"] = std::vector<double>(art.alphas.data(),
                                                 art.alphas.data() + art.alphas.size());
  manifest["objective_traces"] = traces;
  manifest["seconds"] = seconds_json(art.stage_seconds);
  manifest["files"] = files;
  write_json(paths.graphs_manifest(), manifest);
}

bool graphs_up_to_date(const ArtifactPaths& paths, const ExperimentConfig& cfg,
                       const std::string& fingerprint, int num_views) {
  if (!fs::exists(paths.graphs_manifest())) return false;
  json manifest;
  try {
    manifest = read_json(paths.graphs_manifest());
  } catch (const DataError&) {
    return false;
  }
  if (manifest.value("graphs_config_hash", "") != graphs_stage_hash(cfg)) return false;
  if (manifest.value("dataset_fingerprint", "") != fingerprint) return false;
  if (manifest.value("num_views", -1) != num_views) return false;
  for (int v = 0; v < num_views; ++v)
    if (!fs::exists(paths.view_graph(v)) || !fs::exists(paths.view_labels(v))) return false;
  return fs::exists(paths.fused_dir() + "/S.csv") &&
         fs::exists(paths.fused_dir() + "/alphas.csv") &&
         fs::exists(paths.renode_dir() + "/weights.csv");
}

PipelineArtifacts load_graph_artifacts(const ArtifactPaths& paths, int num_views) {
  PipelineArtifacts art;
  for (int v = 0; v < num_views; ++v) {
    ViewGraphResult r;
    r.S = load_matrix(paths.view_graph(v));
    r.F = load_matrix(paths.view_labels(v));
    art.views.push_back(std::move(r));
  }
  art.alphas = load_vector(paths.fused_dir() + "/alphas.csv");
  std::vector<Mat> graphs;
  for (const auto& v : art.views) graphs.push_back(v.S);
  art.fused = fuse(graphs, art.alphas);

  // The stored fused graph is only consumed as a consistency check here;
  // operators are rebuilt from the per-view graphs.
  const Mat stored = load_matrix(paths.fused_dir() + "/S.csv");
  if ((stored - art.fused.S).cwiseAbs().maxCoeff() > 1e-12)
    throw DataError("fused graph on disk disagrees with per-view graphs; rerun the "
                    "graphs command");

  art.node_weights = load_node_weights(paths.renode_dir() + "/weights.csv");
  return art;
}

std::string run_id(const std::string& method, const ExperimentConfig& cfg, int runs) {
  return method + "-r" + std::to_string(runs) + "-" + config_hash(cfg);
}

std::string prepare_run_dir(const ArtifactPaths& paths, const std::string& id) {
  const std::string dir = paths.runs_dir() + "/" + id;
  fs::create_directories(dir);
  return dir;
}

void save_epoch_records(const std::string& path, const std::vector<EpochRecord>& records) {
  Table t;
  t.columns = {"epoch", "ce_renode", "pseudo", "smooth", "total", "w_p", "val_acc",
               "test_acc"};
  for (const auto& r : records)
    t.rows.push_back({std::to_string(r.epoch), format_double(r.loss.ce_renode),
                      format_double(r.loss.pseudo), format_double(r.loss.smooth),
                      format_double(r.loss.total), format_double(r.loss.w_p),
                      format_double(r.val_acc), format_double(r.test_acc)});
  save_table(path, t);
}

void save_run_artifacts(const std::string& run_dir, const std::string& method,
                        const ExperimentConfig& cfg, const std::string& fingerprint,
                        const std::string& command, const std::vector<RunResult>& runs,
                        const std::vector<std::string>& extra_files) {
  if (runs.empty()) throw DataError("no run results to save");
  std::vector<std::string> files = extra_files;

  write_text(run_dir + "/config.txt", render_kv(to_kv(cfg)));
  files.push_back(run_dir + "/config.txt");

  // Epoch log and checkpoint for the first run; summary covers all runs.
  save_epoch_records(run_dir + "/losses.csv", runs[0].epoch_records);
  files.push_back(run_dir + "/losses.csv");
  if (runs[0].best_params.W0.size() > 0) {
    save_matrix(run_dir + "/checkpoint_W0.csv", runs[0].best_params.W0);
    save_matrix(run_dir + "/checkpoint_W1.csv", runs[0].best_params.W1);
    files.push_back(run_dir + "/checkpoint_W0.csv");
    files.push_back(run_dir + "/checkpoint_W1.csv");
  }

  json metrics;
  std::vector<double> accs;
  json per_run = json::array();
  for (std::size_t r = 0; r < runs.size(); ++r) {
    accs.push_back(runs[r].test_accuracy);
    per_run.push_back({{"run", r},
                       {"split_seed", cfg.split.seed + r},
                       {"train_seed", cfg.train.seed + r},
                       {"best_val_acc", runs[r].best_val_accuracy},
                       {"test_acc", runs[r].test_accuracy},
                       {"best_epoch", runs[r].best_epoch},
                       {"epochs_ran", runs[r].epochs_ran},
                       {"seconds", seconds_json(runs[r].stage_seconds)}});
  }
  const RepeatedStats stats = summarize(accs);
  metrics["method"] = method;
  metrics["runs"] = runs.size();
  metrics["best_val_acc"] = runs[0].best_val_accuracy;
  metrics["test_acc"] = runs.size() == 1 ? runs[0].test_accuracy : stats.mean;
  metrics["test_acc_mean"] = stats.mean;
  metrics["test_acc_std"] = stats.stddev;
  metrics["epochs_ran"] = runs[0].epochs_ran;
  metrics["seconds"] = seconds_json(runs[0].stage_seconds);
  metrics["per_run"] = per_run;
  write_json(run_dir + "/metrics.json", metrics);
  files.push_back(run_dir + "/metrics.json");
  files.push_back(run_dir + "/manifest.json");

  json manifest;
  manifest["command"] = command;
  manifest["software_version"] = software_version();
  manifest["method"] = method;
  manifest["config_hash"] = config_hash(cfg);
  manifest["dataset_fingerprint"] = fingerprint;
  json seeds = json::array();
  for (std::size_t r = 0; r < runs.size(); ++r)
    seeds.push_back({{"split", cfg.split.seed + r}, {"train", cfg.train.seed + r}});
  manifest["seeds"] = seeds;
  manifest["files"] = files;
  write_json(run_dir + "/manifest.json", manifest);
}

}  // namespace rsgslm
