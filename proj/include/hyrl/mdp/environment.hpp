#pragma once

#include "hyrl/common.hpp"
#include "hyrl/mdp/tabular_mdp.hpp"

#include <atomic>
#include <memory>

namespace hyrl {

/// Environment state as seen by learners. `id` is the tabular (or latent)
/// index, `step` the time index within an episode and `obs` the feature
/// vector policies and critics consume.
struct State {
  int id = 0;
  int step = 0;
  Vec obs;
};

/// Discrete actions carry `id`; continuous actions carry `vec` (and `id`
/// holds the decoded discrete action once an environment has consumed it).
struct Action {
  int id = -1;
  Vec vec;

  bool continuous() const { return vec.size() > 0; }
  static Action discrete(int i) { return Action{i, {}}; }
  static Action from_vector(Vec v) { return Action{-1, std::move(v)}; }
};

struct StateAction {
  State state;
  Action action;
};

struct StepResult {
  double reward = 0.0;
  State next;
};

struct ActionSpace {
  int n_actions = 0;  // size of the finite (or latent) action set
  int dim = 0;        // continuous dimension, 0 for a finite action set

  bool finite() const { return dim == 0; }
};

/// Black-box simulator. `step` is a pure function of (state, action, rng),
/// so replaying an rng stream replays the trajectory. Implementations are
/// immutable and safe to share across rollout workers.
class Environment {
 public:
  virtual ~Environment() = default;

  virtual ActionSpace action_space() const = 0;
  virtual State reset_state(Rng& rng) const = 0;
  /// (s, a) ~ mu0. Environments that reset to a state only pair it with a
  /// uniformly drawn action from the finite action set.
  virtual StateAction reset(Rng& rng) const;
  virtual StepResult step(const State& state, const Action& action, Rng& rng) const = 0;
};

/// Tabular MDP exposed through the black-box interface. Observations are
/// one-hot state indicators.
class TabularEnv : public Environment {
 public:
  explicit TabularEnv(TabularMdp mdp);

  const TabularMdp& mdp() const { return mdp_; }
  State make_state(int s, int step = 0) const;
  /// Action as this environment expects to receive finite choice `a`.
  virtual Action encode_action(int a) const { return Action::discrete(a); }

  ActionSpace action_space() const override { return {mdp_.n_actions(), 0}; }
  State reset_state(Rng& rng) const override;
  StateAction reset(Rng& rng) const override;
  StepResult step(const State& state, const Action& action, Rng& rng) const override;

 protected:
  /// Discrete action actually executed.
  virtual int resolve_action(const Action& action, Rng& rng) const;

 private:
  TabularMdp mdp_;
  Vec state_marginal_;
  Vec init_flat_;
};

/// Tabular MDP driven by real-valued action vectors: the vector is passed
/// through a softmax and the executed action is sampled from it. Reset
/// actions drawn from mu0 are encoded as `encode_scale * e_i`.
class DecodedActionEnv final : public TabularEnv {
 public:
  explicit DecodedActionEnv(TabularMdp mdp, double encode_scale = 10.0);

  ActionSpace action_space() const override { return {mdp().n_actions(), mdp().n_actions()}; }
  Action encode_action(int a) const override;
  StateAction reset(Rng& rng) const override;

 protected:
  int resolve_action(const Action& action, Rng& rng) const override;

 private:
  double encode_scale_;
};

/// Counts every transition taken through it (budget auditing). With a
/// limit, a step that would exceed it throws SampleBudgetExceeded and is not
/// counted.
class CountingEnvironment final : public Environment {
 public:
  explicit CountingEnvironment(std::shared_ptr<const Environment> inner, long long limit = -1)
      : inner_(std::move(inner)), limit_(limit) {}

  long long steps() const { return steps_.load(); }
  long long limit() const { return limit_; }
  const Environment& inner() const { return *inner_; }

  ActionSpace action_space() const override { return inner_->action_space(); }
  State reset_state(Rng& rng) const override { return inner_->reset_state(rng); }
  StateAction reset(Rng& rng) const override { return inner_->reset(rng); }
  StepResult step(const State& state, const Action& action, Rng& rng) const override {
    if (steps_.fetch_add(1, std::memory_order_relaxed) + 1 > limit_ && limit_ >= 0) {
      steps_.fetch_sub(1, std::memory_order_relaxed);
      throw SampleBudgetExceeded("online sample budget exhausted");
    }
    return inner_->step(state, action, rng);
  }

 private:
  std::shared_ptr<const Environment> inner_;
  long long limit_;
  mutable std::atomic<long long> steps_{0};
};

/// Samples a latent action from softmax(a).
int decode_continuous_action(const Eigen::Ref<const Vec>& a, Rng& rng);

}  // namespace hyrl
