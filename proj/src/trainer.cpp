#include "rsgslm/trainer.hpp"

#include <chrono>
#include <cmath>

#include "rsgslm/rng.hpp"

namespace rsgslm {

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

Mask invert(const Mask& m) {
  Mask out(m.size());
  for (std::size_t i = 0; i < m.size(); ++i) out[i] = m[i] ? 0 : 1;
  return out;
}

TrainConfig plain_ce_config(const TrainConfig& cfg) {
  TrainConfig out = cfg;
  out.loss.use_renode_weights = false;
  out.loss.use_pseudo = false;
  out.loss.use_smooth = false;
  out.loss.oracle_pseudo = false;
  return out;
}

}  // namespace

RunResult train_gcn_loop(const TrainProblem& problem, const TrainConfig& cfg) {
  cfg.validate();
  const Mat& op = *problem.op;
  const Mat& x = *problem.features;
  const std::vector<int>& labels = *problem.labels;
  const int n = static_cast<int>(x.rows());
  const int c = problem.num_classes;

  Mat y = Mat::Zero(n, c);
  for (int i = 0; i < n; ++i) y(i, labels[i]) = 1.0;

  const Mask& train = *problem.train_mask;
  Mask pool = cfg.loss.pseudo_pool == PseudoPool::kTestOnly ? *problem.test_mask
                                                            : invert(train);

  // Pseudo targets start uniform; oracle mode pins them to the ground truth.
  Mat y_prev = cfg.loss.oracle_pseudo ? y : Mat::Constant(n, c, 1.0 / c);

  Vec unit_weights;
  const Vec* weights = problem.weights;
  if (cfg.loss.use_renode_weights && weights == nullptr) {
    unit_weights = Vec::Ones(n);
    weights = &unit_weights;
  }
  if (cfg.loss.use_smooth && problem.l_norm == nullptr)
    throw DataError("training with the smoothness term needs the fused Laplacian");

  LossInputs inputs;
  inputs.y_onehot = &y;
  inputs.y_prev = &y_prev;
  inputs.train_mask = &train;
  inputs.pool_mask = &pool;
  inputs.weights = weights;
  inputs.l_norm = problem.l_norm;

  GcnParams params = init_params(cfg.seed, static_cast<int>(x.cols()), cfg.hidden_dim, c);
  Mat m0 = Mat::Zero(params.W0.rows(), params.W0.cols());
  Mat v0 = m0, m1 = Mat::Zero(params.W1.rows(), params.W1.cols()), v1 = m1;
  constexpr double kBeta1 = 0.9, kBeta2 = 0.999, kAdamEps = 1e-8;

  RunResult result;
  int since_improvement = 0;
  const auto t0 = std::chrono::steady_clock::now();

  for (int epoch = 1; epoch <= cfg.max_epochs; ++epoch) {
    const GcnForwardTrace trace = gcn_forward(params, op, x);
    Mat grad_z;
    const LossBreakdown loss =
        total_loss(trace.Z, inputs, epoch, cfg.max_epochs, cfg.loss, &grad_z);
    if (!std::isfinite(loss.total))
      throw NumericError("loss diverged at epoch " + std::to_string(epoch) +
                         " (best validation so far at epoch " +
                         std::to_string(result.best_epoch) + ")");

    EpochRecord rec;
    rec.epoch = epoch;
    rec.loss = loss;
    rec.val_acc = masked_accuracy(trace.Z, labels, *problem.val_mask);
    rec.test_acc = masked_accuracy(trace.Z, labels, *problem.test_mask);
    result.epoch_records.push_back(rec);
    result.epochs_ran = epoch;

    // Strict improvement, so ties keep the earlier epoch.
    if (rec.val_acc > result.best_val_accuracy) {
      result.best_val_accuracy = rec.val_acc;
      result.test_accuracy = rec.test_acc;
      result.best_epoch = epoch;
      result.best_params = params;  // the parameters that produced trace.Z
      result.best_z = trace.Z;
      since_improvement = 0;
    } else {
      ++since_improvement;
      if (since_improvement >= cfg.patience) break;
    }

    GcnGrads grads = gcn_backward(params, op, trace, grad_z);
    if (cfg.weight_decay > 0.0) {
      grads.dW0 += cfg.weight_decay * params.W0;
      grads.dW1 += cfg.weight_decay * params.W1;
    }

    if (cfg.optimizer == OptimizerKind::kAdam) {
      const double bc1 = 1.0 - std::pow(kBeta1, epoch);
      const double bc2 = 1.0 - std::pow(kBeta2, epoch);
      m0 = kBeta1 * m0 + (1.0 - kBeta1) * grads.dW0;
      v0 = kBeta2 * v0 + (1.0 - kBeta2) * grads.dW0.cwiseProduct(grads.dW0);
      m1 = kBeta1 * m1 + (1.0 - kBeta1) * grads.dW1;
      v1 = kBeta2 * v1 + (1.0 - kBeta2) * grads.dW1.cwiseProduct(grads.dW1);
      params.W0 -= cfg.learning_rate *
                   ((m0 / bc1).array() / ((v0 / bc2).array().sqrt() + kAdamEps)).matrix();
      params.W1 -= cfg.learning_rate *
                   ((m1 / bc1).array() / ((v1 / bc2).array().sqrt() + kAdamEps)).matrix();
    } else {
      params.W0 -= cfg.learning_rate * grads.dW0;
      params.W1 -= cfg.learning_rate * grads.dW1;
    }

    if (cfg.loss.use_pseudo && !cfg.loss.oracle_pseudo) y_prev = trace.Z;
  }

  result.stage_seconds.training = seconds_since(t0);
  return result;
}

PipelineArtifacts build_pipeline(const MultiViewDataset& ds, const TrainConfig& cfg) {
  if (!ds.has_split()) throw DataError("pipeline needs a dataset with a split");
  PipelineArtifacts art;

  auto t0 = std::chrono::steady_clock::now();
  for (const Mat& x : ds.views)
    art.views.push_back(
        solve_view_graph(x, ds.labels, ds.train_mask, ds.num_classes, cfg.solver));
  art.stage_seconds.solver = seconds_since(t0);

  t0 = std::chrono::steady_clock::now();
  art.alphas = Vec(ds.num_views());
  std::vector<Mat> graphs;
  for (int v = 0; v < ds.num_views(); ++v) {
    art.alphas(v) = view_weight(ds.views[v], art.views[v].S);
    graphs.push_back(art.views[v].S);
  }
  art.fused = fuse(graphs, art.alphas);
  art.stage_seconds.fusion = seconds_since(t0);

  t0 = std::chrono::steady_clock::now();
  art.node_weights = compute_node_weights(art.fused.A_hat, ds.labels, ds.train_mask,
                                          ds.num_classes, cfg.renode);
  art.stage_seconds.renode = seconds_since(t0);
  return art;
}

RunResult train_rsgslm(const MultiViewDataset& ds, const PipelineArtifacts& art,
                       const TrainConfig& cfg) {
  std::vector<Mat> fs;
  for (const auto& v : art.views) fs.push_back(v.F);
  const Mat features = concat_features(fs);
  const Mat op = propagation_operator(art.fused, cfg.add_self_loops);
  const Vec weights = expand_weights(art.node_weights, ds.n());

  TrainProblem problem;
  problem.op = &op;
  problem.features = &features;
  problem.labels = &ds.labels;
  problem.train_mask = &ds.train_mask;
  problem.val_mask = &ds.val_mask;
  problem.test_mask = &ds.test_mask;
  problem.num_classes = ds.num_classes;
  problem.weights = &weights;
  problem.l_norm = &art.fused.L_norm;

  RunResult r = train_gcn_loop(problem, cfg);
  r.stage_seconds.solver = art.stage_seconds.solver;
  r.stage_seconds.fusion = art.stage_seconds.fusion;
  r.stage_seconds.renode = art.stage_seconds.renode;
  return r;
}

RunResult train_baseline_xstar(const MultiViewDataset& ds, const TrainConfig& cfg) {
  if (!ds.has_split()) throw DataError("baseline needs a dataset with a split");
  const Mat x = ds.concat_views();

  const auto t0 = std::chrono::steady_clock::now();
  const ViewGraphResult solved =
      solve_view_graph(x, ds.labels, ds.train_mask, ds.num_classes, cfg.solver);
  const double solver_s = seconds_since(t0);

  const FusedGraph fused = fuse({solved.S}, Vec::Ones(1));
  const Mat op = propagation_operator(fused, cfg.add_self_loops);

  TrainProblem problem;
  problem.op = &op;
  problem.features = &x;
  problem.labels = &ds.labels;
  problem.train_mask = &ds.train_mask;
  problem.val_mask = &ds.val_mask;
  problem.test_mask = &ds.test_mask;
  problem.num_classes = ds.num_classes;

  RunResult r = train_gcn_loop(problem, plain_ce_config(cfg));
  r.stage_seconds.solver = solver_s;
  return r;
}

RunResult train_baseline_multi(const MultiViewDataset& ds, const TrainConfig& cfg,
                               const std::vector<ViewGraphResult>* cached_views) {
  if (!ds.has_split()) throw DataError("baseline needs a dataset with a split");
  const TrainConfig plain = plain_ce_config(cfg);

  RunResult merged;
  Mat z_sum;
  double solver_s = 0.0, train_s = 0.0;
  for (int v = 0; v < ds.num_views(); ++v) {
    Mat s;
    if (cached_views) {
      s = (*cached_views)[v].S;
    } else {
      const auto t0 = std::chrono::steady_clock::now();
      s = solve_view_graph(ds.views[v], ds.labels, ds.train_mask, ds.num_classes,
                           cfg.solver)
              .S;
      solver_s += seconds_since(t0);
    }
    const FusedGraph g = fuse({s}, Vec::Ones(1));
    const Mat op = propagation_operator(g, cfg.add_self_loops);

    TrainProblem problem;
    problem.op = &op;
    problem.features = &ds.views[v];
    problem.labels = &ds.labels;
    problem.train_mask = &ds.train_mask;
    problem.val_mask = &ds.val_mask;
    problem.test_mask = &ds.test_mask;
    problem.num_classes = ds.num_classes;

    RunResult r = train_gcn_loop(problem, plain);
    train_s += r.stage_seconds.training;
    // Each view contributes the prediction from its own best checkpoint.
    z_sum = v == 0 ? r.best_z : Mat(z_sum + r.best_z);
    merged.epochs_ran += r.epochs_ran;
  }

  merged.best_z = z_sum / ds.num_views();
  merged.best_val_accuracy = masked_accuracy(merged.best_z, ds.labels, ds.val_mask);
  merged.test_accuracy = masked_accuracy(merged.best_z, ds.labels, ds.test_mask);
  merged.stage_seconds.solver = solver_s;
  merged.stage_seconds.training = train_s;
  return merged;
}

SplitContext prepare_split(const MultiViewDataset& base, const SplitSpec& split,
                           const TrainConfig& cfg) {
  SplitContext ctx;
  ctx.ds = normalize_columns(base);
  make_split(ctx.ds, split);
  ctx.art = build_pipeline(ctx.ds, cfg);
  return ctx;
}

RepeatedStats summarize(const std::vector<double>& xs) {
  RepeatedStats s;
  s.per_run = xs;
  if (xs.empty()) return s;
  for (double x : xs) s.mean += x;
  s.mean /= xs.size();
  double var = 0.0;
  for (double x : xs) var += (x - s.mean) * (x - s.mean);
  s.stddev = std::sqrt(var / xs.size());
  return s;
}

RepeatedStats run_repeated(const MultiViewDataset& base, const ExperimentConfig& cfg,
                           const std::string& method, int runs) {
  if (runs < 1) throw UsageError("runs must be >= 1");
  std::vector<double> accs;
  for (int r = 0; r < runs; ++r) {
    SplitSpec split = cfg.split;
    split.seed += r;
    TrainConfig train = cfg.train;
    train.seed += r;

    if (method == "rsgslm") {
      MultiViewDataset ds = normalize_columns(base);
      make_split(ds, split);
      PipelineArtifacts art = build_pipeline(ds, train);
      accs.push_back(train_rsgslm(ds, art, train).test_accuracy);
    } else if (method == "gcn-xstar") {
      MultiViewDataset ds = normalize_columns(base);
      make_split(ds, split);
      accs.push_back(train_baseline_xstar(ds, train).test_accuracy);
    } else if (method == "gcn-multi") {
      MultiViewDataset ds = normalize_columns(base);
      make_split(ds, split);
      accs.push_back(train_baseline_multi(ds, train).test_accuracy);
    } else {
      throw UsageError("unknown method '" + method +
                       "' (expected rsgslm|gcn-xstar|gcn-multi)");
    }
  }
  return summarize(accs);
}

std::vector<AblationRow> run_ablation_suite(const MultiViewDataset& base,
                                            const ExperimentConfig& cfg, int runs) {
  if (runs < 1) throw UsageError("runs must be >= 1");
  std::vector<AblationRow> rows;
  for (int bits = 0; bits < 8; ++bits) {
    AblationRow row;
    row.use_renode = bits & 4;
    row.use_pseudo = bits & 2;
    row.use_smooth = bits & 1;
    row.name = std::string(row.use_renode ? "renode" : "-") + "/" +
               (row.use_pseudo ? "pseudo" : "-") + "/" +
               (row.use_smooth ? "smooth" : "-");
    rows.push_back(row);
  }
  AblationRow oracle;
  oracle.use_renode = oracle.use_pseudo = oracle.use_smooth = true;
  oracle.oracle_pseudo = true;
  oracle.name = "renode/pseudo(oracle)/smooth";
  rows.push_back(oracle);

  std::vector<std::vector<double>> accs(rows.size());
  for (int r = 0; r < runs; ++r) {
    SplitSpec split = cfg.split;
    split.seed += r;
    TrainConfig train = cfg.train;
    train.seed += r;
    // One solve/fusion/renode pass shared by all nine variants on this split.
    const SplitContext ctx = prepare_split(base, split, train);
    for (std::size_t k = 0; k < rows.size(); ++k) {
      TrainConfig variant = train;
      variant.loss.use_renode_weights = rows[k].use_renode;
      variant.loss.use_pseudo = rows[k].use_pseudo;
      variant.loss.use_smooth = rows[k].use_smooth;
      variant.loss.oracle_pseudo = rows[k].oracle_pseudo;
      accs[k].push_back(train_rsgslm(ctx.ds, ctx.art, variant).test_accuracy);
    }
  }
  for (std::size_t k = 0; k < rows.size(); ++k) rows[k].stats = summarize(accs[k]);
  return rows;
}

GradCheckReport gradient_check(std::uint64_t seed) {
  const int n = 20, num_views = 2, c = 3, hidden = 7;
  Rng rng(seed);

  std::vector<int> labels(n);
  for (int i = 0; i < n; ++i) labels[i] = i % c;
  Mask train(n, 0), val(n, 0), test(n, 0);
  for (int i = 0; i < 6; ++i) train[i] = 1;
  for (int i = 6; i < 10; ++i) val[i] = 1;
  for (int i = 10; i < n; ++i) test[i] = 1;

  // Random row-stochastic zero-diagonal graph.
  Mat s = rng.normal_matrix(n, n).cwiseAbs();
  s.diagonal().setZero();
  for (int i = 0; i < n; ++i) s.row(i) /= s.row(i).sum();
  const FusedGraph fused = fuse({s}, Vec::Ones(1));
  const Mat op = propagation_operator(fused, true);

  const Mat features = rng.normal_matrix(n, c * num_views);
  Mat y = Mat::Zero(n, c);
  for (int i = 0; i < n; ++i) y(i, labels[i]) = 1.0;
  const Mat y_prev = softmax_rows(rng.normal_matrix(n, c));
  Vec weights = Vec::Ones(n);
  for (int i = 0; i < n; ++i)
    if (train[i]) weights(i) = 0.5 + 0.5 * rng.uniform();
  const Mask pool = invert(train);

  LossConfig loss;
  loss.lambda1 = 0.7;
  loss.lambda2 = 0.9;
  // Linear ramp at this epoch gives w_p = 0.37, a generic interior value.
  const int epoch = 741, max_epochs = 2000;

  LossInputs inputs;
  inputs.y_onehot = &y;
  inputs.y_prev = &y_prev;
  inputs.train_mask = &train;
  inputs.pool_mask = &pool;
  inputs.weights = &weights;
  inputs.l_norm = &fused.L_norm;

  GradCheckReport report;
  for (int bits = 0; bits < 8; ++bits) {
    loss.use_smooth = bits & 1;
    loss.use_pseudo = bits & 2;
    loss.use_renode_weights = bits & 4;

    GcnParams params = init_params(seed + bits, c * num_views, hidden, c);
    const GcnForwardTrace trace = gcn_forward(params, op, features);
    Mat grad_z;
    total_loss(trace.Z, inputs, epoch, max_epochs, loss, &grad_z);
    const GcnGrads analytic = gcn_backward(params, op, trace, grad_z);

    auto loss_at = [&](const GcnParams& p) {
      return total_loss(gcn_forward(p, op, features).Z, inputs, epoch, max_epochs, loss)
          .total;
    };

    const double h = 1e-5;
    double worst = 0.0;
    auto check_matrix = [&](Mat GcnParams::* field, const Mat& grad) {
      for (Eigen::Index i = 0; i < grad.rows(); ++i)
        for (Eigen::Index j = 0; j < grad.cols(); ++j) {
          GcnParams p = params;
          (p.*field)(i, j) += h;
          const double up = loss_at(p);
          (p.*field)(i, j) -= 2.0 * h;
          const double down = loss_at(p);
          const double numeric = (up - down) / (2.0 * h);
          const double denom = std::max({std::abs(numeric), std::abs(grad(i, j)), 1e-8});
          worst = std::max(worst, std::abs(numeric - grad(i, j)) / denom);
        }
    };
    check_matrix(&GcnParams::W0, analytic.dW0);
    check_matrix(&GcnParams::W1, analytic.dW1);

    GradCheckRow row;
    row.name = std::string(loss.use_renode_weights ? "renode" : "-") + "/" +
               (loss.use_pseudo ? "pseudo" : "-") + "/" +
               (loss.use_smooth ? "smooth" : "-");
    row.max_rel_err = worst;
    report.rows.push_back(row);
    report.worst = std::max(report.worst, worst);
  }
  report.pass = report.worst < 1e-4;
  return report;
}

}  // namespace rsgslm
