#include "rsgslm/config.hpp"

#include <algorithm>
#include <cctype>
#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <sstream>

#include "rsgslm/csv.hpp"

namespace rsgslm {

namespace {

std::string trim(const std::string& s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return s;
}

double parse_double(const std::string& key, const std::string& value) {
  errno = 0;
  char* end = nullptr;
  double x = std::strtod(value.c_str(), &end);
  if (end == value.c_str() || *end != '\0' || errno == ERANGE)
    throw UsageError("config key " + key + ": expected a real number, got '" + value + "'");
  return x;
}

long long parse_int(const std::string& key, const std::string& value) {
  errno = 0;
  char* end = nullptr;
  long long x = std::strtoll(value.c_str(), &end, 10);
  if (end == value.c_str() || *end != '\0' || errno == ERANGE)
    throw UsageError("config key " + key + ": expected an integer, got '" + value + "'");
  return x;
}

std::uint64_t parse_u64(const std::string& key, const std::string& value) {
  if (!value.empty() && value[0] == '-')
    throw UsageError("config key " + key + ": expected a nonnegative integer, got '" + value + "'");
  errno = 0;
  char* end = nullptr;
  unsigned long long x = std::strtoull(value.c_str(), &end, 10);
  if (end == value.c_str() || *end != '\0' || errno == ERANGE)
    throw UsageError("config key " + key + ": expected a nonnegative integer, got '" + value + "'");
  return static_cast<std::uint64_t>(x);
}

bool parse_bool(const std::string& key, const std::string& value) {
  const std::string v = lower(value);
  if (v == "true" || v == "1" || v == "on" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "off" || v == "no") return false;
  throw UsageError("config key " + key + ": expected a boolean, got '" + value + "'");
}

std::vector<std::string> split_list(const std::string& value) {
  std::vector<std::string> parts;
  std::string cur;
  for (char ch : value) {
    if (ch == ',') {
      parts.push_back(trim(cur));
      cur.clear();
    } else {
      cur += ch;
    }
  }
  parts.push_back(trim(cur));
  return parts;
}

// Consumes recognized keys from a parsed map; whatever remains at finish()
// is reported as an unknown-key usage error.
class KvReader {
 public:
  explicit KvReader(std::map<std::string, std::string> kv) : kv_(std::move(kv)) {}

  void take_double(const std::string& key, double& out) {
    if (auto v = take(key)) out = parse_double(key, *v);
  }
  void take_int(const std::string& key, int& out) {
    if (auto v = take(key)) out = static_cast<int>(parse_int(key, *v));
  }
  void take_u64(const std::string& key, std::uint64_t& out) {
    if (auto v = take(key)) out = parse_u64(key, *v);
  }
  void take_bool(const std::string& key, bool& out) {
    if (auto v = take(key)) out = parse_bool(key, *v);
  }
  void take_int_list(const std::string& key, std::vector<int>& out) {
    if (auto v = take(key)) {
      out.clear();
      for (const auto& part : split_list(*v))
        out.push_back(static_cast<int>(parse_int(key, part)));
    }
  }
  void take_double_list(const std::string& key, std::vector<double>& out) {
    if (auto v = take(key)) {
      out.clear();
      for (const auto& part : split_list(*v)) out.push_back(parse_double(key, part));
    }
  }
  template <typename Enum, typename Parse>
  void take_enum(const std::string& key, Enum& out, Parse parse) {
    if (auto v = take(key)) out = parse(*v);
  }

  void finish() const {
    if (kv_.empty()) return;
    std::string msg = "unknown config key";
    if (kv_.size() > 1) msg += "s";
    msg += ":";
    for (const auto& [k, v] : kv_) msg += " " + k;
    throw UsageError(msg);
  }

 private:
  std::optional<std::string> take(const std::string& key) {
    auto it = kv_.find(key);
    if (it == kv_.end()) return std::nullopt;
    std::string v = it->second;
    kv_.erase(it);
    return v;
  }

  std::map<std::string, std::string> kv_;
};

void read_train(KvReader& r, TrainConfig& t) {
  r.take_double("solver.eta", t.solver.eta);
  r.take_double("solver.gamma", t.solver.gamma);
  r.take_double("solver.mu", t.solver.mu);
  r.take_double("solver.alpha", t.solver.alpha);
  r.take_double("solver.p", t.solver.p);
  r.take_double("solver.u_label", t.solver.u_label);
  r.take_int("solver.outer_iters", t.solver.outer_iters);
  r.take_double("solver.rel_tol", t.solver.rel_tol);

  r.take_double("renode.xi", t.renode.xi);
  r.take_double("renode.w_min", t.renode.w_min);
  r.take_double("renode.w_max", t.renode.w_max);

  r.take_double("loss.lambda1", t.loss.lambda1);
  r.take_double("loss.lambda2", t.loss.lambda2);
  r.take_enum("loss.schedule", t.loss.schedule, schedule_from_string);
  r.take_bool("loss.use_renode_weights", t.loss.use_renode_weights);
  r.take_bool("loss.use_pseudo", t.loss.use_pseudo);
  r.take_bool("loss.use_smooth", t.loss.use_smooth);
  r.take_bool("loss.oracle_pseudo", t.loss.oracle_pseudo);
  r.take_bool("loss.normalize_pseudo", t.loss.normalize_pseudo);
  r.take_enum("loss.pseudo_pool", t.loss.pseudo_pool, pool_from_string);

  r.take_double("train.learning_rate", t.learning_rate);
  r.take_int("train.max_epochs", t.max_epochs);
  r.take_int("train.patience", t.patience);
  r.take_enum("train.optimizer", t.optimizer, optimizer_from_string);
  r.take_u64("train.seed", t.seed);
  r.take_int("train.hidden_dim", t.hidden_dim);
  r.take_double("train.weight_decay", t.weight_decay);
  r.take_bool("train.add_self_loops", t.add_self_loops);
}

void put(std::map<std::string, std::string>& kv, const std::string& key, double v) {
  kv[key] = format_double(v);
}
void put(std::map<std::string, std::string>& kv, const std::string& key, int v) {
  kv[key] = std::to_string(v);
}
void put(std::map<std::string, std::string>& kv, const std::string& key, std::uint64_t v) {
  kv[key] = std::to_string(v);
}
void put(std::map<std::string, std::string>& kv, const std::string& key, bool v) {
  kv[key] = v ? "true" : "false";
}
void put(std::map<std::string, std::string>& kv, const std::string& key, const char* v) {
  kv[key] = v;
}

template <typename T>
std::string join_list(const std::vector<T>& xs) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) out += ",";
    if constexpr (std::is_same_v<T, double>)
      out += format_double(xs[i]);
    else
      out += std::to_string(xs[i]);
  }
  return out;
}

}  // namespace

void SolverConfig::validate() const {
  if (!(eta > 0 && gamma > 0 && mu > 0 && alpha > 0))
    throw UsageError("solver balancing factors eta, gamma, mu, alpha must all be > 0");
  if (!(p > 0)) throw UsageError("solver.p must be > 0");
  if (!(u_label >= 0)) throw UsageError("solver.u_label must be >= 0");
  if (outer_iters < 1) throw UsageError("solver.outer_iters must be >= 1");
  if (!(rel_tol >= 0)) throw UsageError("solver.rel_tol must be >= 0");
}

void ReNodeConfig::validate() const {
  if (!(xi > 0 && xi <= 1)) throw UsageError("renode.xi must lie in (0, 1]");
  if (!(w_min > 0) || !(w_max >= w_min))
    throw UsageError("renode weights must satisfy w_max >= w_min > 0");
}

void LossConfig::validate() const {
  if (!(lambda1 >= 0) || !(lambda2 >= 0))
    throw UsageError("loss.lambda1 and loss.lambda2 must be >= 0");
}

void TrainConfig::validate() const {
  if (!(learning_rate > 0)) throw UsageError("train.learning_rate must be > 0");
  if (max_epochs < 1) throw UsageError("train.max_epochs must be >= 1");
  if (patience < 0 || patience > max_epochs)
    throw UsageError("train.patience must lie in [0, train.max_epochs]");
  if (hidden_dim < 1) throw UsageError("train.hidden_dim must be >= 1");
  if (!(weight_decay >= 0)) throw UsageError("train.weight_decay must be >= 0");
  loss.validate();
  renode.validate();
  solver.validate();
}

void SplitSpec::validate() const {
  if (train_per_class < 1) throw UsageError("split.train_per_class must be >= 1");
  if (val_per_class < 0) throw UsageError("split.val_per_class must be >= 0");
}

void SynthSpec::validate() const {
  if (classes < 2) throw UsageError("synth.classes must be >= 2");
  if (n < classes) throw UsageError("synth.n must be >= synth.classes");
  if (dims.empty()) throw UsageError("synth.dims must list at least one view dimension");
  for (int d : dims)
    if (d < 1) throw UsageError("synth.dims entries must be >= 1");
  if (spread.size() != dims.size())
    throw UsageError("synth.spread must have one entry per view");
  if (noise.size() != dims.size())
    throw UsageError("synth.noise must have one entry per view");
  for (double s : spread)
    if (!(s > 0)) throw UsageError("synth.spread entries must be > 0");
  for (double s : noise)
    if (!(s >= 0)) throw UsageError("synth.noise entries must be >= 0");
  if (latent_dim < 0) throw UsageError("synth.latent_dim must be >= 0");
}

void ExperimentConfig::validate() const {
  train.validate();
  split.validate();
}

std::map<std::string, std::string> parse_kv_text(const std::string& text) {
  std::map<std::string, std::string> kv;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos)
      throw UsageError("config line " + std::to_string(lineno) + ": expected key = value");
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (key.empty())
      throw UsageError("config line " + std::to_string(lineno) + ": empty key");
    if (value.empty())
      throw UsageError("config key " + key + ": empty value");
    if (!kv.emplace(key, value).second)
      throw UsageError("duplicate config key: " + key);
  }
  return kv;
}

std::map<std::string, std::string> load_kv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_kv_text(buf.str());
}

ExperimentConfig experiment_from_kv(const std::map<std::string, std::string>& kv) {
  ExperimentConfig cfg;
  KvReader r(kv);
  read_train(r, cfg.train);
  r.take_int("split.train_per_class", cfg.split.train_per_class);
  r.take_int("split.val_per_class", cfg.split.val_per_class);
  r.take_u64("split.seed", cfg.split.seed);
  r.finish();
  cfg.validate();
  return cfg;
}

ExperimentConfig load_experiment_config(const std::string& path) {
  return experiment_from_kv(load_kv_file(path));
}

void apply_overrides(ExperimentConfig& cfg, const std::vector<std::string>& sets) {
  if (sets.empty()) return;
  auto kv = to_kv(cfg);
  for (const auto& s : sets) {
    auto eq = s.find('=');
    if (eq == std::string::npos || eq == 0)
      throw UsageError("override must look like key=value, got '" + s + "'");
    std::string key = trim(s.substr(0, eq));
    std::string value = trim(s.substr(eq + 1));
    if (!kv.count(key)) throw UsageError("unknown config key: " + key);
    kv[key] = value;
  }
  cfg = experiment_from_kv(kv);
}

SynthSpec synth_from_kv(const std::map<std::string, std::string>& kv) {
  SynthSpec spec;
  // All fields are required except latent_dim: a generator spec should be
  // explicit about the data it produces.
  for (const char* key : {"synth.n", "synth.classes", "synth.dims", "synth.spread",
                          "synth.noise", "synth.seed"})
    if (!kv.count(key)) throw UsageError(std::string("missing required key: ") + key);
  KvReader r(kv);
  r.take_int("synth.n", spec.n);
  r.take_int("synth.classes", spec.classes);
  r.take_int_list("synth.dims", spec.dims);
  r.take_double_list("synth.spread", spec.spread);
  r.take_double_list("synth.noise", spec.noise);
  r.take_int("synth.latent_dim", spec.latent_dim);
  r.take_u64("synth.seed", spec.seed);
  r.finish();
  // A single spread/noise value broadcasts across views.
  if (spec.spread.size() == 1) spec.spread.assign(spec.dims.size(), spec.spread[0]);
  if (spec.noise.size() == 1) spec.noise.assign(spec.dims.size(), spec.noise[0]);
  spec.validate();
  return spec;
}

SynthSpec load_synth_spec(const std::string& path) {
  return synth_from_kv(load_kv_file(path));
}

std::map<std::string, std::string> to_kv(const ExperimentConfig& cfg) {
  std::map<std::string, std::string> kv;
  const TrainConfig& t = cfg.train;
  put(kv, "solver.eta", t.solver.eta);
  put(kv, "solver.gamma", t.solver.gamma);
  put(kv, "solver.mu", t.solver.mu);
  put(kv, "solver.alpha", t.solver.alpha);
  put(kv, "solver.p", t.solver.p);
  put(kv, "solver.u_label", t.solver.u_label);
  put(kv, "solver.outer_iters", t.solver.outer_iters);
  put(kv, "solver.rel_tol", t.solver.rel_tol);
  put(kv, "renode.xi", t.renode.xi);
  put(kv, "renode.w_min", t.renode.w_min);
  put(kv, "renode.w_max", t.renode.w_max);
  put(kv, "loss.lambda1", t.loss.lambda1);
  put(kv, "loss.lambda2", t.loss.lambda2);
  put(kv, "loss.schedule", to_string(t.loss.schedule));
  put(kv, "loss.use_renode_weights", t.loss.use_renode_weights);
  put(kv, "loss.use_pseudo", t.loss.use_pseudo);
  put(kv, "loss.use_smooth", t.loss.use_smooth);
  put(kv, "loss.oracle_pseudo", t.loss.oracle_pseudo);
  put(kv, "loss.normalize_pseudo", t.loss.normalize_pseudo);
  put(kv, "loss.pseudo_pool", to_string(t.loss.pseudo_pool));
  put(kv, "train.learning_rate", t.learning_rate);
  put(kv, "train.max_epochs", t.max_epochs);
  put(kv, "train.patience", t.patience);
  put(kv, "train.optimizer", to_string(t.optimizer));
  put(kv, "train.seed", t.seed);
  put(kv, "train.hidden_dim", t.hidden_dim);
  put(kv, "train.weight_decay", t.weight_decay);
  put(kv, "train.add_self_loops", t.add_self_loops);
  put(kv, "split.train_per_class", cfg.split.train_per_class);
  put(kv, "split.val_per_class", cfg.split.val_per_class);
  put(kv, "split.seed", cfg.split.seed);
  return kv;
}

std::map<std::string, std::string> to_kv(const SynthSpec& spec) {
  std::map<std::string, std::string> kv;
  put(kv, "synth.n", spec.n);
  put(kv, "synth.classes", spec.classes);
  kv["synth.dims"] = join_list(spec.dims);
  kv["synth.spread"] = join_list(spec.spread);
  kv["synth.noise"] = join_list(spec.noise);
  put(kv, "synth.latent_dim", spec.latent_dim);
  put(kv, "synth.seed", spec.seed);
  return kv;
}

std::string render_kv(const std::map<std::string, std::string>& kv) {
  std::string out;
  for (const auto& [k, v] : kv) out += k + " = " + v + "\n";
  return out;
}

std::string fnv1a_hex(const std::map<std::string, std::string>& kv) {
  // std::map iterates in key order, so the digest ignores source-file order.
  std::uint64_t h = 1469598103934665603ull;
  auto mix = [&h](const std::string& s) {
    for (unsigned char c : s) {
      h ^= c;
      h *= 1099511628211ull;
    }
  };
  for (const auto& [k, v] : kv) {
    mix(k);
    mix("=");
    mix(v);
    mix("\n");
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string config_hash(const ExperimentConfig& cfg) { return fnv1a_hex(to_kv(cfg)); }

const char* to_string(ScheduleKind k) {
  switch (k) {
    case ScheduleKind::kLinear: return "linear";
    case ScheduleKind::kExponential: return "exponential";
    case ScheduleKind::kSqrt: return "sqrt";
    case ScheduleKind::kSquare: return "square";
  }
  return "linear";
}

const char* to_string(OptimizerKind k) {
  return k == OptimizerKind::kAdam ? "adam" : "gd";
}

const char* to_string(PseudoPool p) {
  return p == PseudoPool::kUnlabeled ? "unlabeled" : "test";
}

ScheduleKind schedule_from_string(const std::string& s) {
  const std::string v = lower(s);
  if (v == "linear") return ScheduleKind::kLinear;
  if (v == "exponential") return ScheduleKind::kExponential;
  if (v == "sqrt") return ScheduleKind::kSqrt;
  if (v == "square") return ScheduleKind::kSquare;
  throw UsageError("unknown schedule '" + s + "' (expected linear|exponential|sqrt|square)");
}

OptimizerKind optimizer_from_string(const std::string& s) {
  const std::string v = lower(s);
  if (v == "adam") return OptimizerKind::kAdam;
  if (v == "gd") return OptimizerKind::kGradientDescent;
  throw UsageError("unknown optimizer '" + s + "' (expected adam|gd)");
}

PseudoPool pool_from_string(const std::string& s) {
  const std::string v = lower(s);
  if (v == "unlabeled") return PseudoPool::kUnlabeled;
  if (v == "test") return PseudoPool::kTestOnly;
  throw UsageError("unknown pseudo pool '" + s + "' (expected unlabeled|test)");
}

}  // namespace rsgslm
