#include "hyrl/comblock/dataset.hpp"

#include <istream>
#include <memory>
#include <nlohmann/json.hpp>
#include <ostream>

namespace hyrl {
namespace {

std::vector<double> to_vector(const Vec& v) { return {v.data(), v.data() + v.size()}; }

Vec from_vector(const std::vector<double>& v) {
  return Eigen::Map<const Vec>(v.data(), static_cast<Eigen::Index>(v.size()));
}

}  // namespace

std::vector<std::vector<OfflineRow>> OfflineDataset::by_step() const {
  std::vector<std::vector<OfflineRow>> rows(config.horizon);
  for (auto& r : rows) r.reserve(trajectories.size());
  for (const Trajectory& tr : trajectories)
    for (int h = 0; h < tr.length(); ++h)
      rows[h].push_back({tr.states[h], tr.actions[h], tr.rewards[h], tr.states[h + 1]});
  return rows;
}

OfflineDataset generate_offline_dataset(const ComblockConfig& cfg, double epsilon, int n_trajectories,
                                        std::uint64_t seed, Exec exec) {
  if (!(epsilon >= 0.0 && epsilon < 1.0)) throw std::invalid_argument("generate_offline_dataset: epsilon must lie in [0, 1)");
  if (n_trajectories < 0) throw std::invalid_argument("generate_offline_dataset: negative size");
  auto env = std::make_shared<const ComblockEnv>(cfg);
  const ComblockBehaviorPolicy behaviour(cfg, epsilon);
  const std::vector<const Policy*> policies(cfg.horizon, &behaviour);
  OfflineDataset ds;
  ds.config = cfg;
  ds.epsilon = epsilon;
  ds.seed = seed;
  ds.trajectories = collect_episodes(env, policies, n_trajectories, seed, exec);
  return ds;
}

double fraction_optimal(const OfflineDataset& dataset) {
  if (dataset.trajectories.empty()) return 0.0;
  std::size_t hits = 0;
  for (const Trajectory& tr : dataset.trajectories)
    if (!tr.rewards.empty() && tr.rewards.back() == dataset.config.optimal_reward) ++hits;
  return static_cast<double>(hits) / static_cast<double>(dataset.trajectories.size());
}

void write_dataset_jsonl(const OfflineDataset& dataset, std::ostream& out) {
  const nlohmann::json header{{"config", comblock_config_to_json(dataset.config)},
                              {"epsilon", dataset.epsilon},
                              {"seed", dataset.seed},
                              {"n_trajectories", dataset.trajectories.size()}};
  out << header.dump() << '\n';
  for (const Trajectory& tr : dataset.trajectories) {
    nlohmann::json line;
    auto& latent = line["latent"] = nlohmann::json::array();
    auto& obs = line["obs"] = nlohmann::json::array();
    for (const State& s : tr.states) {
      latent.push_back(s.id);
      obs.push_back(to_vector(s.obs));
    }
    auto& actions = line["action"] = nlohmann::json::array();
    for (const Action& a : tr.actions) {
      if (a.continuous()) {
        actions.push_back(to_vector(a.vec));
      } else {
        actions.push_back(a.id);
      }
    }
    line["reward"] = tr.rewards;
    out << line.dump() << '\n';
  }
}

OfflineDataset read_dataset_jsonl(std::istream& in) {
  std::string text;
  if (!std::getline(in, text)) throw std::invalid_argument("read_dataset_jsonl: missing header line");
  const auto header = nlohmann::json::parse(text);
  OfflineDataset ds;
  ds.config = comblock_config_from_json(header.at("config"));
  ds.epsilon = header.at("epsilon").get<double>();
  ds.seed = header.at("seed").get<std::uint64_t>();
  const auto expected = header.at("n_trajectories").get<std::size_t>();
  ds.trajectories.reserve(expected);
  int line_no = 1;
  while (std::getline(in, text)) {
    ++line_no;
    if (text.empty()) continue;
    const auto doc = nlohmann::json::parse(text);
    Trajectory tr;
    const auto& latent = doc.at("latent");
    const auto& obs = doc.at("obs");
    if (latent.size() != obs.size() || latent.size() != static_cast<std::size_t>(ds.config.horizon) + 1) {
      throw std::invalid_argument("read_dataset_jsonl: line " + std::to_string(line_no) + " has wrong length");
    }
    for (std::size_t h = 0; h < latent.size(); ++h) {
      tr.states.push_back(State{latent[h].get<int>(), static_cast<int>(h), from_vector(obs[h].get<std::vector<double>>())});
    }
    for (const auto& a : doc.at("action")) {
      tr.actions.push_back(a.is_array() ? Action::from_vector(from_vector(a.get<std::vector<double>>()))
                                        : Action::discrete(a.get<int>()));
    }
    tr.rewards = doc.at("reward").get<std::vector<double>>();
    if (tr.length() != ds.config.horizon || tr.rewards.size() != tr.actions.size()) {
      throw std::invalid_argument("read_dataset_jsonl: line " + std::to_string(line_no) + " has wrong length");
    }
    ds.trajectories.push_back(std::move(tr));
  }
  if (ds.trajectories.size() != expected) throw std::invalid_argument("read_dataset_jsonl: trajectory count mismatch");
  return ds;
}

}  // namespace hyrl
