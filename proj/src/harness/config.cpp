#include "hyrl/harness/config.hpp"

#include <cstdlib>
#include <fstream>
#include <set>

namespace hyrl {
namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw ConfigError(path + ": " + what);
}

// Reads optional fields of one JSON object, rejecting unknown keys.
class Fields {
 public:
  Fields(const json& doc, std::string path, std::set<std::string> known)
      : doc_(doc), path_(std::move(path)), known_(std::move(known)) {
    if (!doc_.is_object()) fail(path_.empty() ? "/" : path_, "expected an object");
    for (const auto& [key, _] : doc_.items())
      if (!known_.contains(key)) fail(path_ + "/" + key, "unknown field");
  }

  bool has(const std::string& key) const { return doc_.contains(key); }
  const json& at(const std::string& key) const { return doc_.at(key); }
  std::string path(const std::string& key) const { return path_ + "/" + key; }

  template <typename T>
  void read(const std::string& key, T& out) const {
    if (!doc_.contains(key)) return;
    try {
      out = doc_.at(key).get<T>();
    } catch (const json::exception& e) {
      fail(path(key), std::string("wrong type (") + e.what() + ")");
    }
  }

  template <typename T>
  void read(const std::string& key, std::optional<T>& out) const {
    if (!doc_.contains(key) || doc_.at(key).is_null()) return;
    T v{};
    read(key, v);
    out = v;
  }

 private:
  const json& doc_;
  std::string path_;
  std::set<std::string> known_;
};

void require(bool ok, const std::string& path, const std::string& what) {
  if (!ok) fail(path, what);
}

}  // namespace

std::string algorithm_name(Algorithm a) {
  switch (a) {
    case Algorithm::Hac: return "hac";
    case Algorithm::Hnpg: return "hnpg";
    case Algorithm::FhHnpg: return "fh-hnpg";
    case Algorithm::OnlineOnly: return "online-only-ablation";
  }
  return "";
}

Algorithm parse_algorithm(const std::string& name) {
  for (Algorithm a : {Algorithm::Hac, Algorithm::Hnpg, Algorithm::FhHnpg, Algorithm::OnlineOnly})
    if (algorithm_name(a) == name) return a;
  fail("/algorithm", "unknown algorithm '" + name + "' (expected hac, hnpg, fh-hnpg or online-only-ablation)");
}

void ExperimentConfig::validate() const {
  const auto& e = environment;
  const bool tabular = e.kind != EnvironmentSpec::Kind::Comblock;
  const bool finite_horizon = algorithm == Algorithm::FhHnpg || algorithm == Algorithm::OnlineOnly;
  require(!seeds.empty(), "/seeds", "must be a non-empty list");
  require(budget >= 0, "/budget", "must be >= 0");
  require(!(finite_horizon && tabular), "/environment/type", "fh-hnpg and the ablation need a comblock environment");
  require(!(!finite_horizon && !tabular), "/environment/type", "hac and hnpg need a tabular environment");
  if (!tabular) {
    require(e.horizon >= 1, "/environment/horizon", "must be >= 1");
    require(e.noise_std >= 0.0, "/environment/noise_std", "must be >= 0");
  }
  if (e.kind == EnvironmentSpec::Kind::Tabular) {
    require(e.mdp.has_value() != !e.mdp_path.empty(), "/environment", "give exactly one of 'mdp' and 'path'");
  }
  if (e.kind == EnvironmentSpec::Kind::RandomTabular) {
    require(e.n_states >= 1, "/environment/n_states", "must be >= 1");
    require(e.n_actions >= 1, "/environment/n_actions", "must be >= 1");
    require(e.gamma >= 0.0 && e.gamma < 1.0, "/environment/gamma", "must lie in [0, 1)");
  }
  require(offline.n_trajectories >= 1, "/offline/n_trajectories", "must be >= 1");
  if (offline.epsilon) require(*offline.epsilon >= 0.0 && *offline.epsilon < 1.0, "/offline/epsilon", "must lie in [0, 1)");

  const auto& h = hyper;
  require(h.max_rounds >= 0, "/hyperparameters/max_rounds", "must be >= 0");
  require(h.batch_episodes >= 1, "/hyperparameters/batch_episodes", "must be >= 1");
  require(h.offline_batch >= 1, "/hyperparameters/offline_batch", "must be >= 1");
  require(h.lambda >= 0.0, "/hyperparameters/lambda", "must be >= 0");
  require(h.gae_tau >= 0.0 && h.gae_tau <= 1.0, "/hyperparameters/gae_tau", "must lie in [0, 1]");
  require(h.max_kl > 0.0, "/hyperparameters/max_kl", "must be > 0");
  require(h.damping > 0.0, "/hyperparameters/damping", "must be > 0");
  require(h.cg_iters >= 1, "/hyperparameters/cg_iters", "must be >= 1");
  require(h.backtrack > 0.0 && h.backtrack < 1.0, "/hyperparameters/backtrack", "must lie in (0, 1)");
  require(h.backtrack_steps >= 0, "/hyperparameters/backtrack_steps", "must be >= 0");
  require(h.critic == "linear" || h.critic == "mlp", "/hyperparameters/critic", "must be 'linear' or 'mlp'");
  require(h.critic_epochs >= 1, "/hyperparameters/critic_epochs", "must be >= 1");
  require(h.rounds >= 1, "/hyperparameters/rounds", "must be >= 1");
  if (h.eta) require(*h.eta > 0.0, "/hyperparameters/eta", "must be > 0");
  require(h.k2 > h.k1 && h.k1 >= 0, "/hyperparameters/k2", "need k2 > k1 >= 0");
  require(h.m_on >= 0 && h.m_off >= 0 && h.m_on + h.m_off > 0, "/hyperparameters/m_on", "need m_on + m_off > 0");
  require(h.success_gap >= 0.0, "/hyperparameters/success_gap", "must be >= 0");

  require(stopping.eval_episodes >= 1, "/stopping/eval_episodes", "must be >= 1");
  require(stopping.window >= 1, "/stopping/window", "must be >= 1");
}

ExperimentConfig config_from_json(const json& doc) {
  ExperimentConfig cfg;
  const Fields top(doc, "", {"algorithm", "environment", "offline", "hyperparameters", "stopping", "seeds", "budget"});
  require(top.has("algorithm"), "/algorithm", "missing required field");
  std::string algo;
  top.read("algorithm", algo);
  cfg.algorithm = parse_algorithm(algo);
  top.read("seeds", cfg.seeds);
  top.read("budget", cfg.budget);

  if (top.has("environment")) {
    const Fields env(top.at("environment"), "/environment",
                     {"type", "horizon", "seed", "noise_std", "continuous_actions", "mdp", "path", "n_states",
                      "n_actions", "gamma"});
    auto& e = cfg.environment;
    std::string type = "comblock";
    env.read("type", type);
    if (type == "comblock") {
      e.kind = EnvironmentSpec::Kind::Comblock;
    } else if (type == "tabular") {
      e.kind = EnvironmentSpec::Kind::Tabular;
    } else if (type == "random_tabular") {
      e.kind = EnvironmentSpec::Kind::RandomTabular;
    } else {
      fail("/environment/type", "unknown environment type '" + type + "'");
    }
    env.read("horizon", e.horizon);
    env.read("seed", e.env_seed);
    env.read("noise_std", e.noise_std);
    env.read("continuous_actions", e.continuous_actions);
    if (env.has("mdp")) e.mdp = env.at("mdp");
    env.read("path", e.mdp_path);
    env.read("n_states", e.n_states);
    env.read("n_actions", e.n_actions);
    env.read("gamma", e.gamma);
  }
  if (top.has("offline")) {
    const Fields off(top.at("offline"), "/offline", {"n_trajectories", "epsilon", "path"});
    off.read("n_trajectories", cfg.offline.n_trajectories);
    off.read("epsilon", cfg.offline.epsilon);
    off.read("path", cfg.offline.path);
  }
  if (top.has("hyperparameters")) {
    const Fields hp(top.at("hyperparameters"), "/hyperparameters",
                    {"max_rounds", "batch_episodes", "offline_batch", "lambda", "gae_tau", "max_kl", "damping",
                     "cg_iters", "backtrack", "backtrack_steps", "policy_hidden", "init_log_std", "critic",
                     "critic_hidden", "critic_epochs", "rounds", "eta", "k1", "k2", "m_on", "m_off", "success_gap"});
    auto& h = cfg.hyper;
    hp.read("max_rounds", h.max_rounds);
    hp.read("batch_episodes", h.batch_episodes);
    hp.read("offline_batch", h.offline_batch);
    hp.read("lambda", h.lambda);
    hp.read("gae_tau", h.gae_tau);
    hp.read("max_kl", h.max_kl);
    hp.read("damping", h.damping);
    hp.read("cg_iters", h.cg_iters);
    hp.read("backtrack", h.backtrack);
    hp.read("backtrack_steps", h.backtrack_steps);
    hp.read("policy_hidden", h.policy_hidden);
    hp.read("init_log_std", h.init_log_std);
    hp.read("critic", h.critic);
    hp.read("critic_hidden", h.critic_hidden);
    hp.read("critic_epochs", h.critic_epochs);
    hp.read("rounds", h.rounds);
    hp.read("eta", h.eta);
    hp.read("k1", h.k1);
    hp.read("k2", h.k2);
    hp.read("m_on", h.m_on);
    hp.read("m_off", h.m_off);
    hp.read("success_gap", h.success_gap);
  }
  if (top.has("stopping")) {
    const Fields st(top.at("stopping"), "/stopping", {"eval_episodes", "window", "threshold"});
    st.read("eval_episodes", cfg.stopping.eval_episodes);
    st.read("window", cfg.stopping.window);
    st.read("threshold", cfg.stopping.threshold);
  }
  cfg.validate();
  return cfg;
}

json config_to_json(const ExperimentConfig& cfg) {
  const auto& e = cfg.environment;
  json env;
  switch (e.kind) {
    case EnvironmentSpec::Kind::Comblock:
      env = {{"type", "comblock"},
             {"horizon", e.horizon},
             {"noise_std", e.noise_std},
             {"continuous_actions", e.continuous_actions}};
      if (e.env_seed) env["seed"] = *e.env_seed;
      break;
    case EnvironmentSpec::Kind::Tabular:
      env = {{"type", "tabular"}};
      if (e.mdp) env["mdp"] = *e.mdp;
      if (!e.mdp_path.empty()) env["path"] = e.mdp_path;
      break;
    case EnvironmentSpec::Kind::RandomTabular:
      env = {{"type", "random_tabular"}, {"n_states", e.n_states}, {"n_actions", e.n_actions}, {"gamma", e.gamma}};
      break;
  }
  json offline{{"n_trajectories", cfg.offline.n_trajectories}};
  if (cfg.offline.epsilon) offline["epsilon"] = *cfg.offline.epsilon;
  if (!cfg.offline.path.empty()) offline["path"] = cfg.offline.path;
  const auto& h = cfg.hyper;
  json hyper{{"max_rounds", h.max_rounds},   {"batch_episodes", h.batch_episodes},
             {"offline_batch", h.offline_batch}, {"lambda", h.lambda},
             {"gae_tau", h.gae_tau},         {"max_kl", h.max_kl},
             {"damping", h.damping},         {"cg_iters", h.cg_iters},
             {"backtrack", h.backtrack},     {"backtrack_steps", h.backtrack_steps},
             {"policy_hidden", h.policy_hidden}, {"init_log_std", h.init_log_std},
             {"critic", h.critic},           {"critic_hidden", h.critic_hidden},
             {"critic_epochs", h.critic_epochs}, {"rounds", h.rounds},
             {"k1", h.k1},                   {"k2", h.k2},
             {"m_on", h.m_on},               {"m_off", h.m_off},
             {"success_gap", h.success_gap}};
  if (h.eta) hyper["eta"] = *h.eta;
  return {{"algorithm", algorithm_name(cfg.algorithm)},
          {"environment", env},
          {"offline", offline},
          {"hyperparameters", hyper},
          {"stopping",
           {{"eval_episodes", cfg.stopping.eval_episodes},
            {"window", cfg.stopping.window},
            {"threshold", cfg.stopping.threshold}}},
          {"seeds", cfg.seeds},
          {"budget", cfg.budget}};
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path + ": cannot open config file");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(path + ": " + e.what());
  }
  return config_from_json(doc);
}

void apply_env_overrides(ExperimentConfig& cfg, std::string& out_dir) {
  if (const char* b = std::getenv("HYRL_BUDGET"); b != nullptr && *b != '\0') {
    char* end = nullptr;
    const double v = std::strtod(b, &end);
    if (end == b || *end != '\0' || !(v >= 0.0)) throw ConfigError("HYRL_BUDGET: expected a non-negative number");
    cfg.budget = static_cast<long long>(v);
  }
  if (const char* d = std::getenv("HYRL_OUT_DIR"); d != nullptr && *d != '\0') out_dir = d;
}

}  // namespace hyrl
