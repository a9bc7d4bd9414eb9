#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "rsgslm/artifacts.hpp"
#include "rsgslm/config.hpp"
#include "rsgslm/csv.hpp"
#include "rsgslm/dataset.hpp"
#include "rsgslm/trainer.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace rsgslm;

namespace {

std::string g_command_line;

struct CommonOpts {
  std::string data_dir;
  std::string config_path;
  std::string out_root;
  std::vector<std::string> sets;
};

ExperimentConfig load_config(const CommonOpts& opts) {
  ExperimentConfig cfg = load_experiment_config(opts.config_path);
  apply_overrides(cfg, opts.sets);
  return cfg;
}

void require_graphs(const ArtifactPaths& paths, const ExperimentConfig& cfg,
                    const std::string& fingerprint, int num_views) {
  if (!graphs_up_to_date(paths, cfg, fingerprint, num_views))
    throw DataError("graph artifacts under '" + paths.root +
                    "' are missing or stale for this config/dataset; run the graphs "
                    "command first (rsgslm graphs --data ... --config ...)");
}

int cmd_synth(const std::string& spec_path, const std::string& out_dir) {
  const SynthSpec spec = load_synth_spec(spec_path);
  const MultiViewDataset ds = generate_synthetic(spec);
  save_dataset(ds, out_dir);

  json manifest;
  manifest["command"] = g_command_line;
  manifest["software_version"] = software_version();
  manifest["spec"] = to_kv(spec);
  manifest["spec_hash"] = fnv1a_hex(to_kv(spec));
  manifest["dataset_fingerprint"] = dataset_fingerprint(ds);
  std::ofstream out(out_dir + "/synth_manifest.json");
  out << manifest.dump(2) << "\n";

  std::printf("wrote %d views (n=%d, c=%d) to %s\n", ds.num_views(), ds.n(),
              ds.num_classes, out_dir.c_str());
  return kExitOk;
}

int cmd_graphs(const CommonOpts& opts, bool force) {
  const ExperimentConfig cfg = load_config(opts);
  const MultiViewDataset base = load_dataset(opts.data_dir);
  const std::string fingerprint = dataset_fingerprint(base);
  const ArtifactPaths paths{resolve_artifact_root(opts.out_root)};

  if (!force && graphs_up_to_date(paths, cfg, fingerprint, base.num_views())) {
    std::printf("graph artifacts under %s are up to date; skipping (use --force to "
                "recompute)\n",
                paths.root.c_str());
    return kExitOk;
  }

  MultiViewDataset ds = normalize_columns(base);
  make_split(ds, cfg.split);
  const PipelineArtifacts art = build_pipeline(ds, cfg.train);
  save_graph_artifacts(paths, art, cfg, fingerprint, g_command_line);

  std::printf("solved %d view graphs (n=%d); view weights:", ds.num_views(), ds.n());
  for (int v = 0; v < art.alphas.size(); ++v) std::printf(" %.6g", art.alphas(v));
  std::printf("\nartifacts written under %s\n", paths.root.c_str());
  return kExitOk;
}

int cmd_train(const CommonOpts& opts, const std::string& method, int runs) {
  if (method != "rsgslm" && method != "gcn-xstar" && method != "gcn-multi")
    throw UsageError("unknown method '" + method +
                     "' (expected rsgslm|gcn-xstar|gcn-multi)");
  if (runs < 1) throw UsageError("--runs must be >= 1");

  const ExperimentConfig cfg = load_config(opts);
  const MultiViewDataset base = load_dataset(opts.data_dir);
  const std::string fingerprint = dataset_fingerprint(base);
  const ArtifactPaths paths{resolve_artifact_root(opts.out_root)};

  const bool needs_graphs = method != "gcn-xstar";
  if (needs_graphs) require_graphs(paths, cfg, fingerprint, base.num_views());

  const std::string id = run_id(method, cfg, runs);
  const std::string dir = prepare_run_dir(paths, id);

  std::vector<RunResult> results;
  std::vector<std::string> split_files;
  for (int r = 0; r < runs; ++r) {
    SplitSpec split = cfg.split;
    split.seed += r;
    TrainConfig train = cfg.train;
    train.seed += r;

    MultiViewDataset ds = normalize_columns(base);
    make_split(ds, split);
    const std::string split_path = dir + "/split_" + std::to_string(r) + ".csv";
    save_split(split_path, ds);
    split_files.push_back(split_path);

    if (method == "rsgslm") {
      // Run 0 reuses the cached graph stage; later runs use fresh splits and
      // must re-solve.
      const PipelineArtifacts art = r == 0
                                        ? load_graph_artifacts(paths, ds.num_views())
                                        : build_pipeline(ds, train);
      results.push_back(train_rsgslm(ds, art, train));
    } else if (method == "gcn-multi") {
      if (r == 0) {
        const PipelineArtifacts art = load_graph_artifacts(paths, ds.num_views());
        results.push_back(train_baseline_multi(ds, train, &art.views));
      } else {
        results.push_back(train_baseline_multi(ds, train));
      }
    } else {
      results.push_back(train_baseline_xstar(ds, train));
    }
    std::printf("run %d: val %.4f test %.4f (best epoch %d of %d)\n", r,
                results.back().best_val_accuracy, results.back().test_accuracy,
                results.back().best_epoch, results.back().epochs_ran);
  }

  save_run_artifacts(dir, method, cfg, fingerprint, g_command_line, results, split_files);

  std::vector<double> accs;
  for (const auto& r : results) accs.push_back(r.test_accuracy);
  const RepeatedStats stats = summarize(accs);
  std::printf("%s: test accuracy %.2f%% +- %.2f%% over %d run(s)\n", method.c_str(),
              100.0 * stats.mean, 100.0 * stats.stddev, runs);
  std::printf("outputs in %s\n", dir.c_str());
  return kExitOk;
}

int cmd_ablate(const CommonOpts& opts, int runs) {
  const ExperimentConfig cfg = load_config(opts);
  const MultiViewDataset base = load_dataset(opts.data_dir);
  const std::string fingerprint = dataset_fingerprint(base);
  const ArtifactPaths paths{resolve_artifact_root(opts.out_root)};
  require_graphs(paths, cfg, fingerprint, base.num_views());

  const std::vector<AblationRow> rows = run_ablation_suite(base, cfg, runs);

  fs::create_directories(paths.root + "/reports");
  Table t;
  t.columns = {"name", "renode", "pseudo", "smooth", "oracle_pseudo", "mean_test_acc",
               "std_test_acc", "runs"};
  for (const auto& row : rows) {
    t.rows.push_back({row.name, row.use_renode ? "1" : "0", row.use_pseudo ? "1" : "0",
                      row.use_smooth ? "1" : "0", row.oracle_pseudo ? "1" : "0",
                      format_double(row.stats.mean), format_double(row.stats.stddev),
                      std::to_string(runs)});
    std::printf("%-28s mean %.4f std %.4f\n", row.name.c_str(), row.stats.mean,
                row.stats.stddev);
  }
  const std::string report = paths.root + "/reports/ablation.csv";
  save_table(report, t);

  json manifest;
  manifest["command"] = g_command_line;
  manifest["software_version"] = software_version();
  manifest["config_hash"] = config_hash(cfg);
  manifest["dataset_fingerprint"] = fingerprint;
  manifest["runs"] = runs;
  manifest["files"] = {report, paths.root + "/reports/ablation_manifest.json"};
  std::ofstream out(paths.root + "/reports/ablation_manifest.json");
  out << manifest.dump(2) << "\n";
  std::printf("report written to %s\n", report.c_str());
  return kExitOk;
}

int cmd_sweep(const CommonOpts& opts, const std::string& which) {
  if (which != "lambda" && which != "wrange" && which != "all")
    throw UsageError("--which must be lambda|wrange|all");

  const ExperimentConfig cfg = load_config(opts);
  const MultiViewDataset base = load_dataset(opts.data_dir);
  const std::string fingerprint = dataset_fingerprint(base);
  const ArtifactPaths paths{resolve_artifact_root(opts.out_root)};
  require_graphs(paths, cfg, fingerprint, base.num_views());

  MultiViewDataset ds = normalize_columns(base);
  make_split(ds, cfg.split);
  const PipelineArtifacts art = load_graph_artifacts(paths, ds.num_views());
  fs::create_directories(paths.root + "/reports");
  std::vector<std::string> reports;

  if (which == "lambda" || which == "all") {
    const std::vector<double> grid = {1e-9, 1e-8, 1e-7, 1e-6, 1e-5, 1e-4, 1e-3,
                                      1e-2, 1e-1, 1.0,  10.0, 100.0, 1000.0};
    Table t;
    t.columns = {"lambda1", "lambda2", "split_seed", "train_seed", "test_acc"};
    for (double l1 : grid)
      for (double l2 : grid) {
        TrainConfig variant = cfg.train;
        variant.loss.lambda1 = l1;
        variant.loss.lambda2 = l2;
        const double acc = train_rsgslm(ds, art, variant).test_accuracy;
        t.rows.push_back({format_double(l1), format_double(l2),
                          std::to_string(cfg.split.seed), std::to_string(cfg.train.seed),
                          format_double(acc)});
      }
    const std::string report = paths.root + "/reports/sweep_lambda.csv";
    save_table(report, t);
    reports.push_back(report);
    std::printf("lambda grid (%zux%zu) written to %s\n", grid.size(), grid.size(),
                report.c_str());
  }

  if (which == "wrange" || which == "all") {
    const std::vector<double> deltas = {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8,
                                        0.9, 1.0, 2.0, 3.0, 4.0, 5.0, 10.0};
    Table t;
    t.columns = {"w_min", "w_max", "w_range", "split_seed", "train_seed", "test_acc"};
    for (double delta : deltas) {
      PipelineArtifacts variant_art = art;
      ReNodeConfig rn = cfg.train.renode;
      rn.w_max = rn.w_min + delta;
      variant_art.node_weights = compute_node_weights(art.fused.A_hat, ds.labels,
                                                      ds.train_mask, ds.num_classes, rn);
      TrainConfig variant = cfg.train;
      variant.renode = rn;
      const double acc = train_rsgslm(ds, variant_art, variant).test_accuracy;
      t.rows.push_back({format_double(rn.w_min), format_double(rn.w_max),
                        format_double(delta), std::to_string(cfg.split.seed),
                        std::to_string(cfg.train.seed), format_double(acc)});
    }
    const std::string report = paths.root + "/reports/sweep_wrange.csv";
    save_table(report, t);
    reports.push_back(report);
    std::printf("weight-range sweep (%zu values) written to %s\n", deltas.size(),
                report.c_str());
  }

  json manifest;
  manifest["command"] = g_command_line;
  manifest["software_version"] = software_version();
  manifest["config_hash"] = config_hash(cfg);
  manifest["dataset_fingerprint"] = fingerprint;
  reports.push_back(paths.root + "/reports/sweep_manifest.json");
  manifest["files"] = reports;
  std::ofstream out(paths.root + "/reports/sweep_manifest.json");
  out << manifest.dump(2) << "\n";
  return kExitOk;
}

int cmd_export(const std::string& data_dir, const std::string& run_dir,
               const std::string& out_root) {
  if (!fs::exists(run_dir + "/manifest.json"))
    throw DataError("no manifest.json under '" + run_dir + "'");
  std::ifstream in(run_dir + "/manifest.json");
  json manifest;
  in >> manifest;
  if (manifest.value("method", "") != "rsgslm")
    throw UsageError("embedding export is defined for rsgslm runs; this run used '" +
                     manifest.value("method", "?") + "'");
  if (!fs::exists(run_dir + "/checkpoint_W0.csv"))
    throw DataError("no checkpoint under '" + run_dir + "'");

  const ExperimentConfig cfg = experiment_from_kv(parse_kv_text([&] {
    std::ifstream c(run_dir + "/config.txt");
    if (!c) throw DataError("missing config snapshot in " + run_dir);
    std::ostringstream buf;
    buf << c.rdbuf();
    return buf.str();
  }()));

  const MultiViewDataset base = load_dataset(data_dir);
  const std::string fingerprint = dataset_fingerprint(base);
  if (manifest.value("dataset_fingerprint", "") != fingerprint)
    throw DataError("dataset does not match the one this run was trained on");

  const ArtifactPaths paths{resolve_artifact_root(out_root)};
  require_graphs(paths, cfg, fingerprint, base.num_views());

  MultiViewDataset ds = normalize_columns(base);
  make_split(ds, cfg.split);
  const PipelineArtifacts art = load_graph_artifacts(paths, ds.num_views());

  std::vector<Mat> fs_list;
  for (const auto& v : art.views) fs_list.push_back(v.F);
  const Mat f_star = concat_features(fs_list);
  const Mat op = propagation_operator(art.fused, cfg.train.add_self_loops);

  GcnParams params;
  params.W0 = load_matrix(run_dir + "/checkpoint_W0.csv");
  params.W1 = load_matrix(run_dir + "/checkpoint_W1.csv");
  const Mat z = gcn_forward(params, op, f_star).Z;

  const std::string export_dir = run_dir + "/export";
  fs::create_directories(export_dir);
  save_matrix(export_dir + "/Z.csv", z);
  save_matrix(export_dir + "/F_star.csv", f_star);
  save_matrix(export_dir + "/X_star.csv", ds.concat_views());
  save_int_column(export_dir + "/labels.csv", ds.labels);
  std::printf("exported Z (%ldx%ld), F_star, X_star, labels to %s\n",
              static_cast<long>(z.rows()), static_cast<long>(z.cols()),
              export_dir.c_str());
  return kExitOk;
}

int cmd_gradcheck(std::uint64_t seed) {
  const GradCheckReport report = gradient_check(seed);
  for (const auto& row : report.rows)
    std::printf("%-24s max rel err %.3e\n", row.name.c_str(), row.max_rel_err);
  std::printf("worst %.3e -> %s\n", report.worst, report.pass ? "PASS" : "FAIL");
  return report.pass ? kExitOk : kExitNumeric;
}

}  // namespace

int main(int argc, char** argv) {
  for (int i = 0; i < argc; ++i) {
    if (i) g_command_line += " ";
    g_command_line += argv[i];
  }

  CLI::App app{"multi-view semi-supervised node classification pipeline"};
  app.require_subcommand(1);

  std::string spec_path, synth_out;
  auto* synth = app.add_subcommand("synth", "generate a synthetic multi-view dataset");
  synth->add_option("--spec", spec_path, "key=value generator spec file")->required();
  synth->add_option("--out", synth_out, "output dataset directory")->required();

  CommonOpts graphs_opts;
  bool force = false;
  auto* graphs = app.add_subcommand("graphs", "solve per-view graphs, fuse, re-weight");
  graphs->add_option("--data", graphs_opts.data_dir, "dataset directory")->required();
  graphs->add_option("--config", graphs_opts.config_path, "config file")->required();
  graphs->add_option("--out", graphs_opts.out_root, "artifact root");
  graphs->add_option("--set", graphs_opts.sets, "config override key=value");
  graphs->add_flag("--force", force, "recompute even if up to date");

  CommonOpts train_opts;
  std::string method = "rsgslm";
  int train_runs = 1;
  auto* train = app.add_subcommand("train", "train a classifier");
  train->add_option("--data", train_opts.data_dir, "dataset directory")->required();
  train->add_option("--config", train_opts.config_path, "config file")->required();
  train->add_option("--method", method, "rsgslm|gcn-xstar|gcn-multi");
  train->add_option("--runs", train_runs, "repeated runs with shifted seeds");
  train->add_option("--out", train_opts.out_root, "artifact root");
  train->add_option("--set", train_opts.sets, "config override key=value");

  CommonOpts ablate_opts;
  int ablate_runs = 10;
  auto* ablate = app.add_subcommand("ablate", "loss-term on/off study plus oracle row");
  ablate->add_option("--data", ablate_opts.data_dir, "dataset directory")->required();
  ablate->add_option("--config", ablate_opts.config_path, "config file")->required();
  ablate->add_option("--runs", ablate_runs, "repeated runs per row");
  ablate->add_option("--out", ablate_opts.out_root, "artifact root");
  ablate->add_option("--set", ablate_opts.sets, "config override key=value");

  CommonOpts sweep_opts;
  std::string which = "all";
  auto* sweep = app.add_subcommand("sweep", "lambda grid and weight-range sweeps");
  sweep->add_option("--data", sweep_opts.data_dir, "dataset directory")->required();
  sweep->add_option("--config", sweep_opts.config_path, "config file")->required();
  sweep->add_option("--which", which, "lambda|wrange|all");
  sweep->add_option("--out", sweep_opts.out_root, "artifact root");
  sweep->add_option("--set", sweep_opts.sets, "config override key=value");

  std::string export_data, export_run, export_out;
  auto* export_cmd =
      app.add_subcommand("export-embeddings", "write Z, F_star, X_star, labels");
  export_cmd->add_option("--data", export_data, "dataset directory")->required();
  export_cmd->add_option("--run", export_run, "run directory (runs/<id>)")->required();
  export_cmd->add_option("--out", export_out, "artifact root");

  std::uint64_t gradcheck_seed = 0;
  auto* gradcheck = app.add_subcommand("gradcheck", "finite-difference gradient audit");
  gradcheck->add_option("--seed", gradcheck_seed, "instance seed");

  try {
    app.parse(argc, argv);
    if (synth->parsed()) return cmd_synth(spec_path, synth_out);
    if (graphs->parsed()) return cmd_graphs(graphs_opts, force);
    if (train->parsed()) return cmd_train(train_opts, method, train_runs);
    if (ablate->parsed()) return cmd_ablate(ablate_opts, ablate_runs);
    if (sweep->parsed()) return cmd_sweep(sweep_opts, which);
    if (export_cmd->parsed()) return cmd_export(export_data, export_run, export_out);
    if (gradcheck->parsed()) return cmd_gradcheck(gradcheck_seed);
    return kExitUsage;
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    app.exit(e);
    return kExitUsage;
  } catch (const UsageError& e) {
    std::fprintf(stderr, "usage error: %s\n", e.what());
    return kExitUsage;
  } catch (const DataError& e) {
    std::fprintf(stderr, "data error: %s\n", e.what());
    return kExitData;
  } catch (const NumericError& e) {
    std::fprintf(stderr, "numeric error: %s\n", e.what());
    return kExitNumeric;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitData;
  }
}
