#include "hyrl/hac/hac.hpp"

#include "hyrl/mdp/oracle.hpp"

#include <cmath>

namespace hyrl {

double HacConfig::step_size(int n_actions) const {
  if (eta) return *eta;
  return (1.0 - hpe.gamma) * std::sqrt(std::log(static_cast<double>(n_actions)) / rounds);
}

void HacConfig::validate() const {
  if (rounds < 1) throw std::invalid_argument("HacConfig: T must be >= 1");
  if (eta && !(*eta > 0.0)) throw std::invalid_argument("HacConfig: eta must be > 0");
}

MixturePolicy::MixturePolicy(std::vector<SoftmaxPolicy> components) : components_(std::move(components)) {
  if (components_.empty()) throw std::invalid_argument("MixturePolicy: no components");
}

const SoftmaxPolicy& MixturePolicy::draw(Rng& rng) const {
  std::uniform_int_distribution<std::size_t> pick(0, components_.size() - 1);
  return components_[pick(rng)];
}

double MixturePolicy::value(const TabularMdp& mdp) const {
  double total = 0.0;
  for (const auto& c : components_) total += policy_value(mdp, policy_table(mdp, c));
  return total / static_cast<double>(components_.size());
}

HacResult run_hac(const Environment& env, const FunctionClass& cls, const OfflineSource& offline,
                  const HacConfig& cfg, SoftmaxPolicy initial, Rng& rng, const HacHooks& hooks) {
  cfg.validate();
  const ActionSpace space = env.action_space();
  if (!space.finite()) throw std::invalid_argument("run_hac: needs a finite action set");
  if (initial.n_actions() != space.n_actions) throw std::invalid_argument("run_hac: policy action count mismatch");
  const double eta = cfg.step_size(space.n_actions);

  std::vector<SoftmaxPolicy> iterates{std::move(initial)};
  std::vector<HacRoundRecord> rounds;
  for (int t = 0; t < cfg.rounds; ++t) {
    const SoftmaxPolicy& pi = iterates.back();
    HacRoundRecord rec;
    rec.t = t;
    if (hooks.evaluate) rec.mean_return = hooks.evaluate(pi);
    ValueFnPtr f;
    if (hooks.critic) {
      f = hooks.critic(pi, t);
    } else {
      PolicyEvalResult eval = hpe(pi, cls, offline, env, cfg.hpe, rng);
      f = eval.f;
      rec.hpe_losses = std::move(eval.trace);
    }
    iterates.push_back(softmax_update(pi, f, eta));
    rounds.push_back(std::move(rec));
    if (hooks.on_round && !hooks.on_round(rounds.back())) break;
  }
  MixturePolicy mixture(iterates);
  return {std::move(iterates), std::move(mixture), std::move(rounds)};
}

double hac_regret_surrogate(const TabularMdp& mdp, const std::vector<SoftmaxPolicy>& iterates,
                            const Mat& pi_e) {
  if (iterates.size() < 2) throw std::invalid_argument("hac_regret_surrogate: need at least one round");
  const Mat occ = tabular_occupancy_exact(mdp, pi_e);
  const Vec d_state = occ.rowwise().sum();
  const std::size_t rounds = iterates.size() - 1;
  double total = 0.0;
  for (std::size_t t = 0; t < rounds; ++t) {
    const Mat pi = policy_table(mdp, iterates[t]);
    const Mat q = tabular_q_exact(mdp, pi);
    const Vec gap = (q.cwiseProduct(pi_e - pi)).rowwise().sum();
    total += d_state.dot(gap);
  }
  return total / static_cast<double>(rounds);
}

}  // namespace hyrl
