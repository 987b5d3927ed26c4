#include "helpers.hpp"

#include "hyrl/funcapprox/conjugate_gradient.hpp"
#include "hyrl/funcapprox/regression.hpp"
#include "hyrl/mdp/oracle.hpp"

#include <doctest.h>
#include <nlohmann/json.hpp>

#include <cmath>

using namespace hyrl;

namespace {

State one_hot_state(int s, int n) {
  State st{s, 0, Vec::Zero(n)};
  st.obs[s] = 1.0;
  return st;
}

std::shared_ptr<const FeatureMap> tabular(int ns, int na) {
  return std::make_shared<TabularFeatures>(ns, na);
}

OnlineRow online(int s, int a, double y, int ns) { return {one_hot_state(s, ns), Action::discrete(a), y}; }

double relative_error(double a, double b) { return std::abs(a - b) / std::max(1e-8, std::abs(a) + std::abs(b)); }

}  // namespace

TEST_CASE("feature maps") {
  TabularFeatures tf(3, 2);
  const Vec x = tf(one_hot_state(2, 3), Action::discrete(1));
  CHECK(x.size() == 6);
  CHECK(x.sum() == 1.0);
  CHECK(x[2 * 2 + 1] == 1.0);

  DecodedActionFeatures df(2, 3);
  State st{0, 0, Vec::Zero(2)};
  st.obs << 0.5, -1.0;
  const Vec d = df(st, Action::discrete(1));
  CHECK(d.size() == 9);
  CHECK(d.segment(3, 3).isApprox((Vec(3) << 0.5, -1.0, 1.0).finished()));
  CHECK(d.head(3).isZero());
  const Vec dc = df(st, Action::from_vector(Vec::Zero(3)));
  CHECK(dc.segment(6, 3).isApprox((Vec(3) << 0.5, -1.0, 1.0).finished() / 3.0));

  ConcatFeatures cf(2, 3);
  const Vec c = cf(st, Action::from_vector(Vec::Ones(3)));
  CHECK(c.size() == 5);
  CHECK(c[0] == 0.5);
  CHECK(c[4] == 1.0);
}

TEST_CASE("hybrid regression examples") {
  Rng rng = make_stream(1, 0);
  const auto cls = FunctionClass::linear(tabular(2, 2));
  SUBCASE("constant online targets") {
    HybridBatch b;
    for (int i = 0; i < 10; ++i) b.online.push_back(online(0, 1, 3.0, 2));
    const RegressionResult r = solve_hybrid_regression(b, cls, 0.9, rng);
    CHECK(r.f->value(one_hot_state(0, 2), Action::discrete(1)) == doctest::Approx(3.0).epsilon(1e-6));
    CHECK(r.stationarity_residual <= 1e-8);
  }
  SUBCASE("mean of two targets") {
    HybridBatch b;
    for (int i = 0; i < 5; ++i) {
      b.online.push_back(online(1, 0, 2.0, 2));
      b.online.push_back(online(1, 0, 4.0, 2));
    }
    const RegressionResult r = solve_hybrid_regression(b, cls, 0.9, rng);
    CHECK(r.f->value(one_hot_state(1, 2), Action::discrete(0)) == doctest::Approx(3.0).epsilon(1e-6));
  }
  SUBCASE("offline row with zero previous function") {
    HybridBatch b;
    b.offline.push_back({one_hot_state(0, 2), Action::discrete(0), 1.0, one_hot_state(1, 2)});
    const auto pi = TabularPolicy::uniform(2, 2);
    b.target_policy = &pi;
    const RegressionResult r = solve_hybrid_regression(b, cls, 0.5, rng);
    CHECK(r.f->value(one_hot_state(0, 2), Action::discrete(0)) == doctest::Approx(1.0).epsilon(1e-6));
  }
  SUBCASE("empty batch") {
    HybridBatch b;
    CHECK_THROWS_AS(solve_hybrid_regression(b, cls, 0.5, rng), EmptyBatch);
  }
}

TEST_CASE("lambda zero regression is one fitted-q step") {
  Rng rng = make_stream(2, 0);
  const TabularMdp mdp = random_tabular_mdp(3, 2, 0.8, rng);
  const TabularEnv env(mdp);
  const auto pi = random_tabular_policy(3, 2, rng);
  const Mat prev_table = Mat::Random(3, 2);
  const TableFn prev(prev_table);
  HybridBatch b;
  b.lambda = 0.0;
  b.target_fn = &prev;
  b.target_policy = &pi;
  Mat sum = Mat::Zero(3, 2);
  Mat count = Mat::Zero(3, 2);
  for (int i = 0; i < 600; ++i) {
    const int s = i % 3;
    const int a = (i / 3) % 2;
    const State st = env.make_state(s);
    StepResult res = env.step(st, Action::discrete(a), rng);
    const double target = res.reward + 0.8 * pi.table().row(res.next.id).dot(prev_table.row(res.next.id));
    sum(s, a) += target;
    count(s, a) += 1.0;
    b.offline.push_back({st, Action::discrete(a), res.reward, res.next});
    b.online.push_back(online(s, a, 100.0, 3));
  }
  const RegressionResult r = solve_hybrid_regression(b, FunctionClass::linear(tabular(3, 2)), 0.8, rng);
  for (int s = 0; s < 3; ++s)
    for (int a = 0; a < 2; ++a)
      CHECK(r.f->value(env.make_state(s), Action::discrete(a)) ==
            doctest::Approx(sum(s, a) / count(s, a)).epsilon(1e-7));
}

TEST_CASE("large lambda regression matches the online-only fit") {
  Rng rng = make_stream(3, 0);
  HybridBatch b;
  b.lambda = 1e9;
  for (int i = 0; i < 40; ++i) {
    b.online.push_back(online(i % 2, 0, static_cast<double>(i % 5), 2));
    b.offline.push_back({one_hot_state(i % 2, 2), Action::discrete(0), 1.0, one_hot_state(0, 2)});
  }
  const auto pi = TabularPolicy::uniform(2, 1);
  b.target_policy = &pi;
  const auto cls = FunctionClass::linear(tabular(2, 1));
  const RegressionResult hybrid = solve_hybrid_regression(b, cls, 0.5, rng);
  HybridBatch only = b;
  only.offline.clear();
  const RegressionResult on = solve_hybrid_regression(only, cls, 0.5, rng);
  for (int s = 0; s < 2; ++s)
    CHECK(std::abs(hybrid.f->value(one_hot_state(s, 2), Action::discrete(0)) -
                   on.f->value(one_hot_state(s, 2), Action::discrete(0))) < 1e-4);
}

TEST_CASE("mlp regression fits a smooth target") {
  Rng rng = make_stream(4, 0);
  MlpTrainConfig mc;
  mc.hidden = {16, 16};
  mc.epochs = 300;
  mc.learning_rate = 1e-2;
  const auto cls = FunctionClass::multilayer(tabular(4, 1), mc);
  HybridBatch b;
  for (int i = 0; i < 256; ++i) b.online.push_back(online(i % 4, 0, 0.25 * (i % 4), 4));
  const RegressionResult r = solve_hybrid_regression(b, cls, 0.5, rng);
  for (int s = 0; s < 4; ++s)
    CHECK(r.f->value(one_hot_state(s, 4), Action::discrete(0)) == doctest::Approx(0.25 * s).epsilon(0.05));
}

TEST_CASE("conjugate gradient examples") {
  const auto identity = [](const Vec& v) { return v; };
  Vec b(3);
  b << 1.0, -2.0, 0.5;
  CHECK((conjugate_gradient(identity, b, 0.0, 10, 1e-12).x - b).norm() < 1e-12);

  const auto diag = [](const Vec& v) { return Vec((Vec(2) << 2.0 * v[0], 4.0 * v[1]).finished()); };
  const CgResult r = conjugate_gradient(diag, (Vec(2) << 2.0, 4.0).finished(), 0.0, 10, 1e-12);
  CHECK(r.converged);
  CHECK(r.x[0] == doctest::Approx(1.0));
  CHECK(r.x[1] == doctest::Approx(1.0));

  const CgResult z = conjugate_gradient(identity, Vec::Zero(4), 0.0, 10, 1e-12);
  CHECK(z.x.isZero());
  CHECK(z.converged);

  const auto indefinite = [](const Vec& v) { return Vec(-v); };
  CHECK_THROWS_AS(conjugate_gradient(indefinite, b, 0.0, 10, 1e-12), NonFiniteIterate);
}

TEST_CASE("conjugate gradient matches a dense solve and decreases the A-norm error") {
  Rng rng = make_stream(5, 0);
  for (int trial = 0; trial < 10; ++trial) {
    const int n = 5 + 9 * trial;
    Mat g(n, n / 2 + 1);
    for (Eigen::Index i = 0; i < g.size(); ++i) g.data()[i] = standard_normal(rng);
    const Mat a = g * g.transpose();
    Vec b(n);
    for (int i = 0; i < n; ++i) b[i] = standard_normal(rng);
    const double damping = 0.1;
    const Mat m = a + damping * Mat::Identity(n, n);
    const Vec exact = m.ldlt().solve(b);
    std::vector<double> errs;
    const CgResult r = conjugate_gradient([&](const Vec& v) { return Vec(a * v); }, b, damping, 4 * n, 1e-12,
                                          [&](const Vec& x) {
                                            const Vec e = x - exact;
                                            errs.push_back(e.dot(m * e));
                                          });
    CHECK(r.converged);
    CHECK((r.x - exact).cwiseAbs().maxCoeff() < 1e-6);
    for (std::size_t k = 1; k < errs.size(); ++k) CHECK(errs[k] <= errs[k - 1] * (1.0 + 1e-9) + 1e-20);
  }
}

TEST_CASE("mlp gradient examples") {
  Rng rng = make_stream(6, 0);
  SUBCASE("zero network bias gradient is twice the mean residual") {
    Mlp net({3, 4, 4, 1});
    Mat x(3, 5);
    for (Eigen::Index i = 0; i < x.size(); ++i) x.data()[i] = standard_normal(rng);
    Vec y(5);
    y << 1.0, 2.0, -1.0, 0.5, 0.0;
    const Vec g = mlp_gradient(net, x, y);
    CHECK(g[net.n_params() - 1] == doctest::Approx(2.0 * (0.0 - y.mean())));
  }
  SUBCASE("zero loss gives zero gradient") {
    Mlp net = Mlp::glorot({2, 5, 5, 1}, rng);
    Mat x = Mat::Random(2, 7);
    Vec y(7);
    for (int i = 0; i < 7; ++i) y[i] = net.forward(x.col(i))[0];
    CHECK(mlp_gradient(net, x, y).cwiseAbs().maxCoeff() < 1e-12);
    CHECK(mlp_mse(net, x, y) < 1e-24);
  }
  SUBCASE("analytic gradient matches central differences") {
    Mlp net = Mlp::glorot({3, 6, 6, 1}, rng);
    Mat x = Mat::Random(3, 8);
    Vec y = Vec::Random(8);
    const Vec g = mlp_gradient(net, x, y);
    const double h = 1e-5;
    for (int i = 0; i < net.n_params(); ++i) {
      Mlp plus = net;
      Mlp minus = net;
      Vec p = net.params();
      p[i] += h;
      plus.set_params(p);
      p[i] -= 2.0 * h;
      minus.set_params(p);
      const double fd = (mlp_mse(plus, x, y) - mlp_mse(minus, x, y)) / (2.0 * h);
      if (std::abs(fd) + std::abs(g[i]) > 1e-7) CHECK(relative_error(fd, g[i]) < 1e-4);
    }
  }
}

TEST_CASE("mlp jvp matches central differences") {
  Rng rng = make_stream(7, 0);
  Mlp net = Mlp::glorot({4, 5, 5, 3}, rng);
  const Vec x = Vec::Random(4);
  const Vec v = Vec::Random(net.n_params());
  const Vec jv = net.jvp(x, v);
  const double h = 1e-6;
  Mlp plus = net;
  Mlp minus = net;
  plus.set_params(net.params() + h * v);
  minus.set_params(net.params() - h * v);
  const Vec fd = (plus.forward(x) - minus.forward(x)) / (2.0 * h);
  CHECK((jv - fd).norm() / fd.norm() < 1e-6);

  // backward is the transpose of jvp: u^T (J v) = (J^T u)^T v.
  const Vec u = Vec::Random(3);
  Mlp::Tape tape;
  net.forward(x, tape);
  Vec jtu = Vec::Zero(net.n_params());
  net.backward(tape, u, jtu);
  CHECK(u.dot(jv) == doctest::Approx(jtu.dot(v)).epsilon(1e-10));
}

TEST_CASE("adam descends a quadratic") {
  Vec p = Vec::Constant(3, 5.0);
  Adam opt(3, 0.1);
  for (int i = 0; i < 2000; ++i) opt.step(p, 2.0 * p);
  CHECK(p.norm() < 1e-2);
}

TEST_CASE("fitted functions round trip through json") {
  Rng rng = make_stream(8, 0);
  const auto feats = tabular(3, 2);
  const LinearFn lin(feats, Vec::Random(6), ClipRange{0.0, 10.0});
  const MlpFn mlp(feats, Mlp::glorot({6, 4, 4, 1}, rng));
  for (const ValueFn* f : {static_cast<const ValueFn*>(&lin), static_cast<const ValueFn*>(&mlp)}) {
    const nlohmann::json doc = nlohmann::json::parse(value_fn_to_json(*f).dump());
    const ValueFnPtr back = value_fn_from_json(doc, feats);
    for (int s = 0; s < 3; ++s)
      for (int a = 0; a < 2; ++a)
        CHECK(back->value(one_hot_state(s, 3), Action::discrete(a)) ==
              f->value(one_hot_state(s, 3), Action::discrete(a)));
  }
  CHECK(value_fn_to_json(lin).at("class") == "linear");
  CHECK(value_fn_to_json(mlp).at("class") == "mlp");
}

TEST_CASE("clipping bounds linear predictions") {
  const LinearFn f(tabular(1, 2), (Vec(2) << -3.0, 30.0).finished(), ClipRange{0.0, 10.0});
  CHECK(f.value(one_hot_state(0, 1), Action::discrete(0)) == 0.0);
  CHECK(f.value(one_hot_state(0, 1), Action::discrete(1)) == 10.0);
}

TEST_CASE("averaged functions equal the mean of their parts") {
  Rng rng = make_stream(9, 0);
  const auto feats = tabular(4, 3);
  std::vector<ValueFnPtr> parts;
  for (int i = 0; i < 6; ++i) parts.push_back(std::make_shared<LinearFn>(feats, Vec::Random(12)));
  parts.push_back(std::make_shared<MlpFn>(feats, Mlp::glorot({12, 3, 3, 1}, rng)));
  for (bool with_mlp : {false, true}) {
    std::vector<ValueFnPtr> use(parts.begin(), parts.end() - (with_mlp ? 0 : 1));
    const ValueFnPtr avg = average_functions(use);
    if (!with_mlp) CHECK(dynamic_cast<const LinearFn*>(avg.get()) != nullptr);
    for (int probe = 0; probe < 100; ++probe) {
      const State st = one_hot_state(probe % 4, 4);
      const Action a = Action::discrete(probe % 3);
      double m = 0.0;
      for (const auto& p : use) m += p->value(st, a);
      m /= static_cast<double>(use.size());
      CHECK(std::abs(avg->value(st, a) - m) < 1e-9);
    }
  }
}

TEST_CASE("expected_value integrates finite actions exactly") {
  const TableFn f((Mat(1, 3) << 1.0, 2.0, 4.0).finished());
  const TabularPolicy pi((Mat(1, 3) << 0.5, 0.25, 0.25).finished());
  Rng rng = make_stream(10, 0);
  CHECK(expected_value(f, pi, one_hot_state(0, 1), rng) == doctest::Approx(0.5 + 0.5 + 1.0));
}
