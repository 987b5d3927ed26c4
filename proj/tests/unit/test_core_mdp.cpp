#include "helpers.hpp"

#include "hyrl/mdp/diagnostics.hpp"
#include "hyrl/mdp/finite_horizon.hpp"
#include "hyrl/mdp/oracle.hpp"
#include "hyrl/mdp/sampling.hpp"

#include <doctest.h>
#include <nlohmann/json.hpp>

#include <cmath>
#include <memory>

using namespace hyrl;
using hyrl::test::bandit;
using hyrl::test::chain;
using hyrl::test::single_state;

namespace {

Mat occupancy_histogram(const TabularEnv& env, const Policy& pi, double gamma, int n,
                        std::uint64_t seed) {
  const auto& mdp = env.mdp();
  Mat counts = Mat::Zero(mdp.n_states(), mdp.n_actions());
  Rng rng = make_stream(seed, 0);
  for (int i = 0; i < n; ++i) {
    const StateAction sa = sample_occupancy(env, pi, gamma, rng);
    counts(sa.state.id, sa.action.id) += 1.0;
  }
  return counts / static_cast<double>(n);
}

}  // namespace

TEST_CASE("tabular mdp rejects malformed inputs") {
  CHECK_THROWS_AS(TabularMdp(1, 1, {0.5}, Mat::Zero(1, 1), Mat::Ones(1, 1), 0.9), std::invalid_argument);
  CHECK_THROWS_AS(TabularMdp(1, 1, {1.0}, Mat::Constant(1, 1, 1.5), Mat::Ones(1, 1), 0.9),
                  std::invalid_argument);
  CHECK_THROWS_AS(TabularMdp(1, 1, {1.0}, Mat::Zero(1, 1), Mat::Constant(1, 1, 0.5), 0.9),
                  std::invalid_argument);
  CHECK_THROWS_AS(TabularMdp(1, 1, {1.0}, Mat::Zero(1, 1), Mat::Ones(1, 1), 1.0), std::invalid_argument);
  CHECK_THROWS_AS(TabularMdp(2, 1, {1.0}, Mat::Zero(2, 1), Mat::Ones(2, 1) * 0.5, 0.9),
                  std::invalid_argument);
}

TEST_CASE("tabular mdp json round trip is lossless") {
  Rng rng = make_stream(11, 0);
  const TabularMdp mdp = random_tabular_mdp(4, 3, 0.87, rng);
  const TabularMdp back = TabularMdp::from_json(nlohmann::json::parse(mdp.to_json().dump()));
  REQUIRE(back.n_states() == 4);
  REQUIRE(back.n_actions() == 3);
  CHECK(back.discount() == mdp.discount());
  for (std::size_t i = 0; i < mdp.transition().size(); ++i)
    CHECK(std::abs(back.transition()[i] - mdp.transition()[i]) <= 1e-15);
  CHECK((back.reward() - mdp.reward()).cwiseAbs().maxCoeff() <= 1e-15);
  CHECK((back.init_dist() - mdp.init_dist()).cwiseAbs().maxCoeff() <= 1e-15);
}

TEST_CASE("sample_occupancy examples") {
  SUBCASE("gamma 0 returns mu0 draws") {
    Rng rng = make_stream(3, 0);
    const TabularEnv env(random_tabular_mdp(3, 2, 0.0, rng));
    const auto pi = TabularPolicy::uniform(3, 2);
    const Mat freq = occupancy_histogram(env, pi, 0.0, 60000, 5);
    CHECK((freq - env.mdp().init_dist()).cwiseAbs().sum() / 2.0 < 0.01);
  }
  SUBCASE("single pair") {
    const TabularEnv env(single_state(1.0, 0.9));
    const auto pi = TabularPolicy::uniform(1, 1);
    Rng rng = make_stream(4, 0);
    for (int i = 0; i < 100; ++i) {
      const StateAction sa = sample_occupancy(env, pi, 0.9, rng);
      CHECK(sa.state.id == 0);
      CHECK(sa.action.id == 0);
    }
  }
  SUBCASE("two-state chain at gamma 0.5") {
    const TabularEnv env(chain(1.0, 0.0, 0.5));
    const auto pi = TabularPolicy::uniform(2, 1);
    const Mat freq = occupancy_histogram(env, pi, 0.5, 40000, 6);
    CHECK(freq(0, 0) == doctest::Approx(0.5).epsilon(0.02));
    CHECK(freq(1, 0) == doctest::Approx(0.5).epsilon(0.02));
  }
}

TEST_CASE("sample_occupancy matches the exact occupancy") {
  Rng rng = make_stream(21, 0);
  const TabularEnv env(random_tabular_mdp(4, 3, 0.8, rng));
  const auto pi = random_tabular_policy(4, 3, rng);
  const Mat freq = occupancy_histogram(env, pi, 0.8, 100000, 22);
  const Mat exact = tabular_occupancy_exact(env.mdp(), pi);
  CHECK((freq - exact).cwiseAbs().sum() / 2.0 < 0.02);
}

TEST_CASE("estimate_q_rollout examples") {
  SUBCASE("gamma 0 returns the immediate reward") {
    Rng rng = make_stream(5, 0);
    const TabularEnv env(random_tabular_mdp(3, 2, 0.0, rng));
    const auto pi = TabularPolicy::uniform(3, 2);
    for (int s = 0; s < 3; ++s)
      for (int a = 0; a < 2; ++a)
        CHECK(estimate_q_rollout(env, pi, 0.0, env.make_state(s), Action::discrete(a), rng) ==
              env.mdp().reward()(s, a));
  }
  SUBCASE("zero reward gives zero") {
    const TabularEnv env(single_state(0.0, 0.9));
    const auto pi = TabularPolicy::uniform(1, 1);
    Rng rng = make_stream(6, 0);
    for (int i = 0; i < 200; ++i)
      CHECK(estimate_q_rollout(env, pi, 0.9, env.make_state(0), Action::discrete(0), rng) == 0.0);
  }
  SUBCASE("single state r=1 gamma 0.5 averages to 2") {
    const TabularEnv env(single_state(1.0, 0.5));
    const auto pi = TabularPolicy::uniform(1, 1);
    Rng rng = make_stream(7, 0);
    std::vector<double> ys(100000);
    for (double& y : ys) y = estimate_q_rollout(env, pi, 0.5, env.make_state(0), Action::discrete(0), rng);
    CHECK(std::abs(test::mean(ys) - 2.0) <= 3.0 * test::std_error(ys));
  }
}

TEST_CASE("estimate_q_rollout is unbiased on a random mdp") {
  Rng rng = make_stream(31, 0);
  const TabularEnv env(random_tabular_mdp(3, 2, 0.7, rng));
  const auto pi = random_tabular_policy(3, 2, rng);
  const Mat q = tabular_q_exact(env.mdp(), pi);
  std::vector<double> ys(40000);
  for (double& y : ys) y = estimate_q_rollout(env, pi, 0.7, env.make_state(1), Action::discrete(0), rng);
  CHECK(std::abs(test::mean(ys) - q(1, 0)) <= 3.0 * test::std_error(ys));
}

TEST_CASE("rollout statistics count steps and truncations") {
  CHECK(rollout_cap(0.5) == 20);
  CHECK(rollout_cap(0.0) == 0);
  const TabularEnv env(single_state(1.0, 0.5));
  const auto pi = TabularPolicy::uniform(1, 1);
  Rng rng = make_stream(8, 0);
  RolloutStats stats;
  double total = 0.0;
  for (int i = 0; i < 1000; ++i)
    total += estimate_q_rollout(env, pi, 0.5, env.make_state(0), Action::discrete(0), rng, &stats);
  // One step per unit of reward on this MDP.
  CHECK(static_cast<double>(stats.steps) == total);
}

TEST_CASE("tabular_q_exact examples") {
  CHECK(tabular_q_exact(single_state(0.0, 0.9), TabularPolicy::uniform(1, 1))(0, 0) == 0.0);
  CHECK(tabular_q_exact(single_state(1.0, 0.5), TabularPolicy::uniform(1, 1))(0, 0) ==
        doctest::Approx(2.0).epsilon(1e-12));
  const Mat q = tabular_q_exact(chain(1.0, 0.0, 0.9), TabularPolicy::uniform(2, 1));
  CHECK(q(0, 0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(std::abs(q(1, 0)) < 1e-12);
}

TEST_CASE("tabular_occupancy_exact examples") {
  Rng rng = make_stream(9, 0);
  const TabularMdp m0 = random_tabular_mdp(3, 2, 0.0, rng);
  CHECK((tabular_occupancy_exact(m0, TabularPolicy::uniform(3, 2)) - m0.init_dist()).cwiseAbs().maxCoeff() <
        1e-12);
  CHECK(tabular_occupancy_exact(single_state(0.3, 0.9), TabularPolicy::uniform(1, 1))(0, 0) ==
        doctest::Approx(1.0));
  const Mat d = tabular_occupancy_exact(chain(1.0, 0.0, 0.5), TabularPolicy::uniform(2, 1));
  CHECK(d(0, 0) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(d(1, 0) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("occupancy sums to one and q is a fixed point") {
  Rng rng = make_stream(12, 0);
  for (int trial = 0; trial < 10; ++trial) {
    const TabularMdp mdp = random_tabular_mdp(5, 3, 0.95, rng);
    const auto pi = random_tabular_policy(5, 3, rng);
    const Mat d = tabular_occupancy_exact(mdp, pi);
    CHECK(std::abs(d.sum() - 1.0) < 1e-10);
    CHECK(d.minCoeff() >= 0.0);
    const Mat q = tabular_q_exact(mdp, pi);
    CHECK((bellman_backup(mdp, pi, q) - q).cwiseAbs().maxCoeff() < 1e-9);
  }
}

TEST_CASE("bellman_backup examples") {
  Rng rng = make_stream(13, 0);
  const TabularMdp mdp = random_tabular_mdp(3, 2, 0.9, rng);
  const auto pi = TabularPolicy::uniform(3, 2);
  CHECK((bellman_backup(mdp, pi, Mat::Zero(3, 2)) - mdp.reward()).cwiseAbs().maxCoeff() == 0.0);
  const Mat f = bellman_backup(chain(1.0, 0.0, 0.9), TabularPolicy::uniform(2, 1), Mat::Ones(2, 1));
  CHECK(f(0, 0) == doctest::Approx(1.9));
}

TEST_CASE("concentrability examples") {
  Rng rng = make_stream(14, 0);
  const TabularMdp mdp = random_tabular_mdp(3, 2, 0.8, rng);
  const auto pi = random_tabular_policy(3, 2, rng);
  const Mat d = tabular_occupancy_exact(mdp, pi);
  CHECK(concentrability(mdp, d, pi) == doctest::Approx(1.0));

  // 2 states x 2 actions; pi_e always plays action 0 from the absorbing start.
  Mat r = Mat::Zero(2, 2);
  Mat mu(2, 2);
  mu << 0.5, 0.0, 0.5, 0.0;
  const TabularMdp m4(2, 2, {1, 0, 1, 0, 0, 1, 0, 1}, r, mu, 0.5);
  const auto pe = TabularPolicy::deterministic({0, 0}, 2);
  const Mat dd = tabular_occupancy_exact(m4, pe);
  CHECK(dd(0, 0) == doctest::Approx(0.5));
  CHECK(dd(1, 0) == doctest::Approx(0.5));
  CHECK(concentrability(m4, Mat::Constant(2, 2, 0.25), pe) == doctest::Approx(2.0));
  Mat holed = Mat::Constant(2, 2, 1.0 / 3.0);
  holed(0, 0) = 0.0;
  CHECK(concentrability(m4, holed, pe) == kUnbounded);
}

TEST_CASE("npg_coverage_estimate examples") {
  Rng rng = make_stream(15, 0);
  CHECK(npg_coverage_estimate(single_state(1.0, 0.9), TabularPolicy::uniform(1, 1), 10, rng) ==
        doctest::Approx(1.0));

  // Symmetric bandit: every policy has the same occupancy (mu0 fixes the first action).
  CHECK(npg_coverage_estimate(bandit({0.1, 0.2}, 0.0), TabularPolicy::uniform(1, 2), 10, rng) ==
        doctest::Approx(1.0));

  // 2-state, 2-action chain: action 0 stays, action 1 moves to the other state.
  Mat r(2, 2);
  r << 0.0, 0.0, 1.0, 0.0;
  Mat mu = Mat::Zero(2, 2);
  mu(0, 0) = 0.5;
  mu(0, 1) = 0.5;
  const TabularMdp mdp(2, 2, {1, 0, 0, 1, 0, 1, 1, 0}, r, mu, 0.9);
  const TabularPolicy opt = optimal_policy(mdp);
  const Mat target = tabular_occupancy_exact(mdp, opt);
  double expected = 0.0;
  for (int a0 = 0; a0 < 2; ++a0)
    for (int a1 = 0; a1 < 2; ++a1) {
      const Mat d = tabular_occupancy_exact(mdp, TabularPolicy::deterministic({a0, a1}, 2));
      for (int i = 0; i < 4; ++i) {
        if (target.data()[i] <= 0.0) continue;
        expected = std::max(expected, d.data()[i] > 0.0 ? target.data()[i] / d.data()[i] : kUnbounded);
      }
    }
  const double got = npg_coverage_estimate(mdp, opt, 5, rng);
  if (expected == kUnbounded)
    CHECK(got == kUnbounded);
  else
    CHECK(got == doctest::Approx(expected));
}

TEST_CASE("bellman_transfer_ratio is zero at the fixed point") {
  Rng rng = make_stream(16, 0);
  const TabularMdp mdp = random_tabular_mdp(3, 2, 0.8, rng);
  const auto pi = random_tabular_policy(3, 2, rng);
  const Mat q = tabular_q_exact(mdp, pi);
  CHECK(bellman_transfer_ratio(mdp, Mat::Constant(3, 2, 1.0 / 6.0), pi, pi, q) == 0.0);
}

TEST_CASE("optimal policy dominates random policies") {
  Rng rng = make_stream(17, 0);
  const TabularMdp mdp = random_tabular_mdp(4, 3, 0.9, rng);
  const TabularPolicy opt = optimal_policy(mdp);
  const double v_opt = policy_value(mdp, opt.table());
  for (int i = 0; i < 20; ++i)
    CHECK(policy_value(mdp, random_tabular_policy(4, 3, rng).table()) <= v_opt + 1e-12);
}

TEST_CASE("identical seeds replay trajectories bit for bit") {
  Rng rng = make_stream(18, 0);
  auto env = std::make_shared<TabularEnv>(random_tabular_mdp(4, 2, 0.9, rng));
  const auto pi = random_tabular_policy(4, 2, rng);
  std::vector<const Policy*> pols(6, &pi);
  FiniteHorizonAdapter a(env, 6);
  FiniteHorizonAdapter b(env, 6);
  Rng r1 = make_stream(99, 1);
  Rng r2 = make_stream(99, 1);
  const Trajectory t1 = run_episode(a, pols, r1);
  const Trajectory t2 = run_episode(b, pols, r2);
  REQUIRE(t1.length() == 6);
  REQUIRE(t1.states.size() == 7u);
  for (int h = 0; h < 6; ++h) {
    CHECK(t1.states[h].id == t2.states[h].id);
    CHECK(t1.states[h].step == h);
    CHECK(t1.actions[h].id == t2.actions[h].id);
    CHECK(t1.rewards[h] == t2.rewards[h]);
  }
}

TEST_CASE("finite horizon adapter refuses steps past the horizon") {
  auto env = std::make_shared<TabularEnv>(single_state(1.0, 0.5));
  FiniteHorizonAdapter ad(env, 2);
  Rng rng = make_stream(1, 0);
  ad.reset(rng);
  ad.step(Action::discrete(0), rng);
  ad.step(Action::discrete(0), rng);
  CHECK(ad.done());
  CHECK_THROWS(ad.step(Action::discrete(0), rng));
}

TEST_CASE("finite_horizon_q by backward induction") {
  const TabularMdp mdp = chain(1.0, 0.0, 0.5);
  const std::vector<Mat> pi(3, Mat::Ones(2, 1));
  const std::vector<Mat> q = finite_horizon_q(mdp, pi);
  REQUIRE(q.size() >= 3u);
  CHECK(q[0](0, 0) == doctest::Approx(1.0));
  CHECK(q[2](0, 0) == doctest::Approx(1.0));
  CHECK(q[0](1, 0) == doctest::Approx(0.0));
}

TEST_CASE("counting environment enforces its limit") {
  auto inner = std::make_shared<TabularEnv>(single_state(1.0, 0.5));
  CountingEnvironment env(inner, 3);
  Rng rng = make_stream(2, 0);
  const State s = inner->make_state(0);
  for (int i = 0; i < 3; ++i) env.step(s, Action::discrete(0), rng);
  CHECK(env.steps() == 3);
  CHECK_THROWS_AS(env.step(s, Action::discrete(0), rng), SampleBudgetExceeded);
  CHECK(env.steps() == 3);

  CountingEnvironment unlimited(inner);
  for (int i = 0; i < 10; ++i) unlimited.step(s, Action::discrete(0), rng);
  CHECK(unlimited.steps() == 10);
}

TEST_CASE("decoded action env executes sampled softmax actions") {
  const DecodedActionEnv env(bandit({0.0, 1.0}, 0.5));
  Rng rng = make_stream(3, 0);
  Vec a(2);
  a << 0.0, 0.0;
  int ones = 0;
  const int n = 20000;
  for (int i = 0; i < n; ++i) ones += env.step(env.make_state(0), Action::from_vector(a), rng).reward > 0.5;
  CHECK(static_cast<double>(ones) / n == doctest::Approx(0.5).epsilon(0.03));
  const StateAction sa = env.reset(rng);
  REQUIRE(sa.action.continuous());
  CHECK(sa.action.vec.maxCoeff() == 10.0);
}
