#include "helpers.hpp"

#include "hyrl/hac/hac.hpp"
#include "hyrl/mdp/oracle.hpp"

#include <doctest.h>

#include <cmath>

using namespace hyrl;

namespace {

State one_hot(int s, int n) {
  State st{s, 0, Vec::Zero(n)};
  st.obs[s] = 1.0;
  return st;
}

struct Bench {
  std::shared_ptr<TabularEnv> env;
  std::shared_ptr<TabularOfflineSource> offline;
  FunctionClass cls;
};

Bench bench(TabularMdp mdp) {
  const int ns = mdp.n_states();
  const int na = mdp.n_actions();
  Bench b;
  b.env = std::make_shared<TabularEnv>(std::move(mdp));
  b.offline = std::make_shared<TabularOfflineSource>(b.env, Mat::Constant(ns, na, 1.0 / (ns * na)));
  b.cls = FunctionClass::linear(std::make_shared<TabularFeatures>(ns, na));
  return b;
}

HacHooks exact_critic(const TabularMdp& mdp) {
  HacHooks hooks;
  hooks.critic = [&mdp](const SoftmaxPolicy& pi, int) -> ValueFnPtr {
    return std::make_shared<TableFn>(tabular_q_exact(mdp, pi));
  };
  return hooks;
}

}  // namespace

TEST_CASE("softmax update examples") {
  const SoftmaxPolicy pi = SoftmaxPolicy::tabular(1, 2);
  const State s = one_hot(0, 1);
  const auto f = std::make_shared<TableFn>((Mat(1, 2) << 1.0, 0.0).finished());

  const SoftmaxPolicy up = softmax_update(pi, f, 1.0);
  const double e = std::exp(1.0);
  CHECK(up.probs(s)[0] == doctest::Approx(e / (1.0 + e)).epsilon(1e-12));
  CHECK(up.probs(s)[1] == doctest::Approx(1.0 / (1.0 + e)).epsilon(1e-12));
  CHECK(pi.probs(s)[0] == 0.5);

  const auto c = std::make_shared<TableFn>(Mat::Constant(1, 2, 7.0));
  CHECK((softmax_update(pi, c, 1.0).probs(s) - pi.probs(s)).cwiseAbs().maxCoeff() < 1e-12);
  CHECK((softmax_update(up, f, 0.0).probs(s) - up.probs(s)).cwiseAbs().maxCoeff() < 1e-12);

  const SoftmaxPolicy lz = softmax_update(SoftmaxPolicy::lazy(2), f, 1.0);
  CHECK(lz.n_terms() == 1u);
  CHECK((lz.probs(s) - up.probs(s)).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("softmax probabilities normalise and survive huge logits") {
  Rng rng = make_stream(1, 0);
  SoftmaxPolicy pi = SoftmaxPolicy::tabular(3, 4);
  for (int k = 0; k < 5; ++k) {
    Mat t(3, 4);
    for (Eigen::Index i = 0; i < t.size(); ++i) t.data()[i] = 300.0 * standard_normal(rng);
    pi = pi.updated(std::make_shared<TableFn>(t), 2.0);
  }
  for (int s = 0; s < 3; ++s) {
    const Vec p = pi.probs(one_hot(s, 3));
    CHECK(p.allFinite());
    CHECK(std::abs(p.sum() - 1.0) < 1e-12);
    Mat shift = Mat::Zero(3, 4);
    shift.row(s).setConstant(1e3);
    const Vec q = pi.updated(std::make_shared<TableFn>(shift), 1.0).probs(one_hot(s, 3));
    CHECK((p - q).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("hac config step size and validation") {
  HacConfig cfg;
  cfg.rounds = 100;
  cfg.hpe.gamma = 0.9;
  CHECK(cfg.step_size(4) == doctest::Approx(0.1 * std::sqrt(std::log(4.0) / 100.0)));
  cfg.eta = 0.3;
  CHECK(cfg.step_size(4) == 0.3);
  cfg.eta = 0.0;
  CHECK_THROWS(cfg.validate());
  cfg.eta.reset();
  cfg.rounds = 0;
  CHECK_THROWS(cfg.validate());
}

TEST_CASE("hac on a zero-reward mdp keeps every iterate uniform") {
  Rng rng = make_stream(2, 0);
  const TabularMdp base = random_tabular_mdp(3, 2, 0.9, rng);
  const Bench b = bench(TabularMdp(3, 2, base.transition(), Mat::Zero(3, 2), base.init_dist(), 0.9));
  HacConfig cfg;
  cfg.rounds = 3;
  cfg.hpe.k1 = 1;
  cfg.hpe.k2 = 3;
  cfg.hpe.m_on = cfg.hpe.m_off = 100;
  const HacResult res = run_hac(*b.env, b.cls, *b.offline, cfg, SoftmaxPolicy::tabular(3, 2), rng);
  REQUIRE(res.iterates.size() == 4u);
  CHECK(res.mixture.size() == 4u);
  CHECK(res.rounds.size() == 3u);
  for (const auto& it : res.iterates)
    for (int s = 0; s < 3; ++s) CHECK((it.probs(one_hot(s, 3)).array() - 0.5).abs().maxCoeff() < 1e-9);
}

TEST_CASE("hac on a two-armed bandit follows the closed-form logit recursion") {
  const TabularMdp mdp = test::bandit({1.0, 0.0}, 0.0);
  const Bench b = bench(mdp);
  HacConfig cfg;
  cfg.rounds = 100;
  cfg.hpe.gamma = 0.0;
  Rng rng = make_stream(3, 0);
  const HacResult res = run_hac(*b.env, b.cls, *b.offline, cfg, SoftmaxPolicy::tabular(1, 2), rng,
                                exact_critic(b.env->mdp()));
  const double eta = std::sqrt(std::log(2.0) / 100.0);
  const double expected = 1.0 / (1.0 + std::exp(-100.0 * eta));
  CHECK(res.iterates.back().probs(one_hot(0, 1))[0] == doctest::Approx(expected).epsilon(1e-12));
  CHECK(expected == doctest::Approx(0.99976).epsilon(1e-4));
  CHECK(res.mixture.size() == 101u);
  double prev = 0.0;
  for (const auto& it : res.iterates) {
    const double p = it.probs(one_hot(0, 1))[0];
    CHECK(p >= prev);
    prev = p;
  }
}

TEST_CASE("mixture value equals the mean of exact iterate values") {
  Rng rng = make_stream(4, 0);
  const TabularMdp mdp = random_tabular_mdp(4, 3, 0.8, rng);
  const Bench b = bench(mdp);
  HacConfig cfg;
  cfg.rounds = 6;
  cfg.hpe.gamma = 0.8;
  const HacResult res =
      run_hac(*b.env, b.cls, *b.offline, cfg, SoftmaxPolicy::tabular(4, 3), rng, exact_critic(b.env->mdp()));
  Vec marginal = mdp.init_dist().rowwise().sum();
  double mean = 0.0;
  for (std::size_t i = 0; i < res.mixture.size(); ++i) {
    const Mat pi = policy_table(mdp, res.mixture.component(i));
    const Mat q = tabular_q_exact(mdp, pi);
    double v = 0.0;
    for (int s = 0; s < 4; ++s) v += marginal[s] * pi.row(s).dot(q.row(s));
    mean += v;
  }
  mean /= static_cast<double>(res.mixture.size());
  CHECK(std::abs(res.mixture.value(mdp) - mean) < 1e-9);

  Rng draw_rng = make_stream(4, 1);
  std::vector<int> hits(res.mixture.size(), 0);
  for (int i = 0; i < 7000; ++i) {
    const SoftmaxPolicy& p = res.mixture.draw(draw_rng);
    for (std::size_t k = 0; k < res.mixture.size(); ++k)
      if (&p == &res.mixture.component(k)) ++hits[k];
  }
  for (int h : hits) CHECK(h == doctest::Approx(1000).epsilon(0.15));
}

TEST_CASE("hac regret surrogate respects the mirror-descent bound") {
  Rng rng = make_stream(5, 0);
  for (int trial = 0; trial < 3; ++trial) {
    const TabularMdp mdp = random_tabular_mdp(5, 3, 0.9, rng);
    const Bench b = bench(mdp);
    HacConfig cfg;
    cfg.rounds = 400;
    cfg.hpe.gamma = 0.9;
    const HacResult res =
        run_hac(*b.env, b.cls, *b.offline, cfg, SoftmaxPolicy::tabular(5, 3), rng, exact_critic(b.env->mdp()));
    const Mat pi_e = optimal_policy(mdp).table();
    const double regret = hac_regret_surrogate(mdp, res.iterates, pi_e);
    const double bound = 2.0 / (1.0 - 0.9) * std::sqrt(std::log(3.0) / 400.0) + 0.05;
    CHECK(regret >= -1e-9);
    CHECK(regret <= bound);
  }
}

TEST_CASE("hac with sampled critics improves on a random mdp") {
  Rng rng = make_stream(6, 0);
  const TabularMdp mdp = random_tabular_mdp(3, 2, 0.8, rng);
  const Bench b = bench(mdp);
  HacConfig cfg;
  cfg.rounds = 10;
  cfg.eta = 1.0;
  cfg.hpe.gamma = 0.8;
  cfg.hpe.k1 = 2;
  cfg.hpe.k2 = 6;
  cfg.hpe.m_on = cfg.hpe.m_off = 300;
  HacHooks hooks;
  int calls = 0;
  hooks.evaluate = [&](const Policy& p) {
    ++calls;
    return policy_value(mdp, policy_table(mdp, p));
  };
  const HacResult res = run_hac(*b.env, b.cls, *b.offline, cfg, SoftmaxPolicy::tabular(3, 2), rng, hooks);
  CHECK(calls == 10);
  REQUIRE(res.rounds.front().mean_return.has_value());
  const double v_last = policy_value(mdp, policy_table(mdp, res.iterates.back()));
  CHECK(v_last > *res.rounds.front().mean_return);
  CHECK(res.rounds.front().hpe_losses.size() == 6u);
}
