#include "hyrl/harness/experiment.hpp"

#include "hyrl/comblock/dataset.hpp"
#include "hyrl/hac/hac.hpp"
#include "hyrl/hnpg/fh_hnpg.hpp"
#include "hyrl/mdp/oracle.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <ostream>

namespace hyrl {
namespace {

using nlohmann::json;
using Clock = std::chrono::steady_clock;

constexpr std::uint64_t kTrainStream = 0;
constexpr std::uint64_t kDatasetStream = 1;
constexpr std::uint64_t kInitStream = 2;
constexpr std::uint64_t kEvalStream = 3;

struct SeedFiles {
  JsonlWriter metrics;
  JsonlWriter timing;
  Clock::time_point start = Clock::now();

  explicit SeedFiles(const std::filesystem::path& dir)
      : metrics(dir / "metrics.jsonl"), timing(dir / "timing.jsonl") {}

  void write(const json& record, int iter) {
    metrics.write(record);
    const double secs = std::chrono::duration<double>(Clock::now() - start).count();
    timing.write({{"iter", iter}, {"wall_seconds", secs}});
  }
};

TabularMdp build_mdp(const EnvironmentSpec& e, std::uint64_t seed) {
  switch (e.kind) {
    case EnvironmentSpec::Kind::Tabular: {
      if (e.mdp) return TabularMdp::from_json(*e.mdp);
      std::ifstream in(e.mdp_path);
      if (!in) throw ConfigError("/environment/path: cannot open " + e.mdp_path);
      return TabularMdp::from_json(json::parse(in));
    }
    case EnvironmentSpec::Kind::RandomTabular: {
      Rng rng = make_stream(seed, kInitStream);
      return random_tabular_mdp(e.n_states, e.n_actions, e.gamma, rng);
    }
    case EnvironmentSpec::Kind::Comblock: break;
  }
  throw ConfigError("/environment/type: not a tabular environment");
}

json losses_json(const std::vector<HpeLossRecord>& losses) {
  json out = json::array();
  for (const auto& l : losses)
    out.push_back({{"iter", l.iter}, {"offline_td_loss", l.offline_td_loss}, {"online_mc_loss", l.online_mc_loss}});
  return out;
}

SeedOutcome run_tabular(const ExperimentConfig& cfg, std::uint64_t seed, SeedFiles& files) {
  const TabularMdp mdp = build_mdp(cfg.environment, seed);
  const int ns = mdp.n_states();
  const int na = mdp.n_actions();
  auto base = std::make_shared<const TabularEnv>(mdp);
  const CountingEnvironment counted(base, cfg.budget);
  const TabularOfflineSource offline(base, Mat::Constant(ns, na, 1.0 / (ns * na)));
  const FunctionClass cls = FunctionClass::linear(std::make_shared<TabularFeatures>(ns, na));
  const double v_star = policy_value(mdp, policy_table(mdp, optimal_policy(mdp)));
  const auto& hp = cfg.hyper;

  HpeConfig hpe_cfg;
  hpe_cfg.k1 = hp.k1;
  hpe_cfg.k2 = hp.k2;
  hpe_cfg.m_on = hp.m_on;
  hpe_cfg.m_off = hp.m_off;
  hpe_cfg.lambda = hp.lambda;
  hpe_cfg.gamma = mdp.discount();

  SeedOutcome outcome;
  outcome.seed = seed;
  outcome.reason = "max_rounds";
  auto record = [&](int t, double value, json extra) {
    const double gap = v_star - value;
    const bool success = gap <= hp.success_gap;
    json r{{"iter", t},
           {"online_samples", counted.steps()},
           {"mean_return", value},
           {"value_gap", gap},
           {"success_rate", success ? 1.0 : 0.0},
           {"moving_average", success ? 1.0 : 0.0}};
    r.update(extra);
    files.write(r, t);
    outcome.rounds = t + 1;
    outcome.online_samples = counted.steps();
    outcome.final_success_rate = outcome.final_moving_average = success ? 1.0 : 0.0;
    if (success) {
      outcome.success = true;
      outcome.reason = "success";
    }
    return !success;
  };

  Rng rng = make_stream(seed, kTrainStream);
  try {
    if (cfg.algorithm == Algorithm::Hac) {
      HacConfig hac_cfg;
      hac_cfg.rounds = hp.rounds;
      hac_cfg.eta = hp.eta;
      hac_cfg.hpe = hpe_cfg;
      std::optional<double> value;
      HacHooks hooks;
      hooks.evaluate = [&](const Policy& pi) { return policy_value(mdp, policy_table(mdp, pi)); };
      hooks.on_round = [&](const HacRoundRecord& rec) {
        return record(rec.t, *rec.mean_return, {{"hpe_losses", losses_json(rec.hpe_losses)}});
      };
      run_hac(counted, cls, offline, hac_cfg, SoftmaxPolicy::tabular(ns, na), rng, hooks);
    } else {
      HnpgConfig hnpg_cfg;
      hnpg_cfg.rounds = hp.rounds;
      hnpg_cfg.eta = hp.eta.value_or((1.0 - mdp.discount()) * std::sqrt(std::log(static_cast<double>(na)) / hp.rounds));
      hnpg_cfg.hpe = hpe_cfg;
      hnpg_cfg.critic.damping = hp.damping;
      HnpgHooks hooks;
      hooks.evaluate = [&](const Policy& pi) { return policy_value(mdp, policy_table(mdp, pi)); };
      hooks.on_round = [&](const HnpgRoundRecord& rec) {
        return record(rec.t, *rec.mean_return,
                      {{"offline_td_loss", rec.offline_td_loss},
                       {"online_mc_loss", rec.online_mc_loss},
                       {"critic_fit_residual", rec.critic_residual},
                       {"w_norm", rec.w_norm}});
      };
      run_hnpg(counted, cls, offline, hnpg_cfg,
               std::make_shared<TabularSoftmaxParamPolicy>(TabularSoftmaxParamPolicy::uniform(ns, na)), rng, hooks);
    }
  } catch (const SampleBudgetExceeded&) {
    outcome.reason = "budget";
    outcome.online_samples = counted.steps();
  }
  return outcome;
}

SeedOutcome run_comblock(const ExperimentConfig& cfg, std::uint64_t seed, SeedFiles& files) {
  const auto& e = cfg.environment;
  const auto& hp = cfg.hyper;
  const bool hybrid = cfg.algorithm == Algorithm::FhHnpg;

  std::optional<OfflineDataset> dataset;
  ComblockConfig env_cfg;
  if (hybrid && !cfg.offline.path.empty()) {
    std::ifstream in(cfg.offline.path);
    if (!in) throw ConfigError("/offline/path: cannot open " + cfg.offline.path);
    dataset = read_dataset_jsonl(in);
    env_cfg = dataset->config;
  } else {
    env_cfg = ComblockConfig::make(e.horizon, e.env_seed.value_or(seed), e.continuous_actions);
    env_cfg.noise_std = e.noise_std;
  }
  if (!env_cfg.continuous_actions) throw ConfigError("/environment/continuous_actions: fh-hnpg needs continuous actions");
  const int horizon = env_cfg.horizon;
  if (hybrid && !dataset) {
    const double eps = cfg.offline.epsilon.value_or(1.0 / horizon);
    dataset = generate_offline_dataset(env_cfg, eps, cfg.offline.n_trajectories, make_stream(seed, kDatasetStream)());
  }

  auto base = std::make_shared<const ComblockEnv>(env_cfg);
  auto counted = std::make_shared<const CountingEnvironment>(base, cfg.budget);
  const int obs_dim = env_cfg.obs_dim();
  const int act_dim = env_cfg.n_actions;

  Rng init = make_stream(seed, kInitStream);
  std::vector<ParamPolicyPtr> policies;
  for (int h = 0; h < horizon; ++h) {
    policies.push_back(std::make_shared<GaussianMlpPolicy>(
        GaussianMlpPolicy::make(obs_dim, act_dim, hp.policy_hidden, hp.init_log_std, init)));
  }
  std::vector<FunctionClass> classes;
  for (int h = 0; h < horizon; ++h) {
    if (hp.critic == "linear") {
      classes.push_back(FunctionClass::linear(std::make_shared<DecodedActionFeatures>(obs_dim, act_dim)));
    } else {
      MlpTrainConfig mlp;
      mlp.hidden = hp.critic_hidden;
      mlp.epochs = hp.critic_epochs;
      classes.push_back(FunctionClass::multilayer(std::make_shared<ConcatFeatures>(obs_dim, act_dim), mlp));
    }
  }

  FhHnpgConfig fc;
  fc.max_rounds = hp.max_rounds;
  fc.batch_episodes = hp.batch_episodes;
  fc.offline_batch = hp.offline_batch;
  fc.lambda = hp.lambda;
  fc.use_offline = hybrid;
  fc.gae_tau = hp.gae_tau;
  fc.damping = hp.damping;
  fc.cg_iters = hp.cg_iters;
  fc.line_search = {hp.max_kl, hp.backtrack, hp.backtrack_steps};

  SeedOutcome outcome;
  outcome.seed = seed;
  outcome.reason = "max_rounds";
  const long long round_cost =
      static_cast<long long>(hp.batch_episodes + cfg.stopping.eval_episodes) * static_cast<long long>(horizon);
  std::vector<double> history;
  Rng eval_rng = make_stream(seed, kEvalStream);

  FhHnpgHooks hooks;
  hooks.before_round = [&](int) {
    if (counted->steps() + round_cost > cfg.budget) {
      outcome.reason = "budget";
      return false;
    }
    return true;
  };
  hooks.after_round = [&](const FhHnpgRoundRecord& rec, std::span<const Policy* const> acting) {
    const EvalResult ev = evaluate_policy(counted, acting, cfg.stopping.eval_episodes, eval_rng(),
                                          env_cfg.optimal_reward);
    history.insert(history.end(), ev.indicators.begin(), ev.indicators.end());
    const auto window = std::min<std::size_t>(history.size(), static_cast<std::size_t>(cfg.stopping.window));
    double ma = 0.0;
    for (std::size_t i = history.size() - window; i < history.size(); ++i) ma += history[i];
    ma /= static_cast<double>(window);
    const bool stop = moving_average_stop(history, cfg.stopping.window, cfg.stopping.threshold);

    json steps = json::array();
    for (const auto& s : rec.steps) {
      steps.push_back({{"h", s.h},
                       {"offline_td_loss", s.offline_td_loss},
                       {"online_mc_loss", s.online_mc_loss},
                       {"critic_fit_residual", s.critic_residual},
                       {"kl", s.kl},
                       {"eta", s.eta},
                       {"surrogate", s.surrogate},
                       {"step_accepted", s.step_accepted}});
    }
    files.write({{"iter", rec.t},
                 {"online_samples", counted->steps()},
                 {"success_rate", ev.success_rate},
                 {"moving_average", ma},
                 {"mean_return", ev.mean_return},
                 {"train_success_rate", rec.train_success_rate},
                 {"train_mean_return", rec.train_mean_return},
                 {"steps", steps}},
                rec.t);
    outcome.rounds = rec.t + 1;
    outcome.online_samples = counted->steps();
    outcome.final_success_rate = ev.success_rate;
    outcome.final_moving_average = ma;
    if (stop) {
      outcome.success = true;
      outcome.reason = "success";
    }
    return !stop;
  };

  Rng rng = make_stream(seed, kTrainStream);
  const std::vector<std::vector<OfflineRow>> offline_rows = dataset ? dataset->by_step() : std::vector<std::vector<OfflineRow>>{};
  try {
    run_fh_hnpg(counted, std::move(policies), classes, offline_rows, fc, env_cfg.optimal_reward, rng, hooks);
  } catch (const SampleBudgetExceeded&) {
    outcome.reason = "budget";
  }
  outcome.online_samples = counted->steps();
  return outcome;
}

}  // namespace

EvalResult evaluate_policy(const std::shared_ptr<const Environment>& env, std::span<const Policy* const> policies,
                           int n_episodes, std::uint64_t seed, double success_return, Exec exec) {
  if (n_episodes < 1) throw std::invalid_argument("evaluate_policy: need at least one episode");
  const std::vector<Trajectory> episodes = collect_episodes(env, policies, n_episodes, seed, exec);
  EvalResult out;
  out.indicators.reserve(episodes.size());
  for (const Trajectory& ep : episodes) {
    const double ret = ep.total_reward();
    out.mean_return += ret;
    out.indicators.push_back(ret >= success_return - 1e-9 ? 1.0 : 0.0);
    out.success_rate += out.indicators.back();
  }
  out.mean_return /= n_episodes;
  out.success_rate /= n_episodes;
  return out;
}

bool moving_average_stop(std::span<const double> history, int window, double threshold) {
  if (window < 1) throw std::invalid_argument("moving_average_stop: window must be >= 1");
  if (history.size() < static_cast<std::size_t>(window)) return false;
  double sum = 0.0;
  for (std::size_t i = history.size() - window; i < history.size(); ++i) sum += history[i];
  return sum / window > threshold;
}

int ExperimentOutcome::n_succeeded() const {
  int n = 0;
  for (const auto& s : seeds) n += s.success ? 1 : 0;
  return n;
}

int ExperimentOutcome::exit_code() const {
  return 2 * n_succeeded() > static_cast<int>(seeds.size()) ? 0 : 1;
}

SeedOutcome run_seed(const ExperimentConfig& cfg, std::uint64_t seed, const std::filesystem::path& seed_dir) {
  cfg.validate();
  std::filesystem::create_directories(seed_dir);
  SeedFiles files(seed_dir);
  if (cfg.budget == 0) {
    SeedOutcome out;
    out.seed = seed;
    out.reason = "budget";
    return out;
  }
  const bool tabular = cfg.environment.kind != EnvironmentSpec::Kind::Comblock;
  return tabular ? run_tabular(cfg, seed, files) : run_comblock(cfg, seed, files);
}

ExperimentOutcome run_experiment(const ExperimentConfig& cfg, const std::filesystem::path& out_dir,
                                 std::ostream* log) {
  cfg.validate();
  std::filesystem::create_directories(out_dir);
  {
    std::ofstream out(out_dir / "config.json");
    out << config_to_json(cfg).dump(2) << '\n';
  }
  ExperimentOutcome result;
  for (std::uint64_t seed : cfg.seeds) {
    SeedOutcome o;
    try {
      o = run_seed(cfg, seed, out_dir / ("seed_" + std::to_string(seed)));
    } catch (const ConfigError&) {
      throw;
    } catch (const std::exception& e) {
      o.seed = seed;
      o.reason = std::string("error: ") + e.what();
    }
    if (log != nullptr) {
      *log << "seed " << seed << ": " << (o.success ? "success" : "failure") << " (" << o.reason << ", "
           << o.rounds << " rounds, " << o.online_samples << " online samples)\n";
    }
    result.seeds.push_back(std::move(o));
  }
  write_summary_csv(out_dir / "summary.csv", result.seeds);
  return result;
}

}  // namespace hyrl
