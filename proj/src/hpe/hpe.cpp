#include "hyrl/hpe/hpe.hpp"

#include "hyrl/mdp/oracle.hpp"

#include <cmath>

namespace hyrl {

TabularOfflineSource::TabularOfflineSource(std::shared_ptr<const TabularEnv> env, Mat nu)
    : env_(std::move(env)), nu_(std::move(nu)) {
  const auto& mdp = env_->mdp();
  if (nu_.rows() != mdp.n_states() || nu_.cols() != mdp.n_actions() || (nu_.array() < 0.0).any() ||
      std::abs(nu_.sum() - 1.0) > 1e-9) {
    throw std::invalid_argument("TabularOfflineSource: nu must be a probability table over pairs");
  }
  flat_.resize(nu_.size());
  for (int s = 0; s < mdp.n_states(); ++s)
    for (int a = 0; a < mdp.n_actions(); ++a) flat_[s * mdp.n_actions() + a] = nu_(s, a);
}

OfflineRow TabularOfflineSource::draw(Rng& rng) const {
  const int na = env_->mdp().n_actions();
  const int pair = sample_index(flat_, rng);
  OfflineRow row;
  row.state = env_->make_state(pair / na);
  row.action = env_->encode_action(pair % na);
  StepResult res = env_->step(row.state, row.action, rng);
  row.reward = res.reward;
  row.next = std::move(res.next);
  return row;
}

DatasetOfflineSource::DatasetOfflineSource(std::vector<OfflineRow> rows) : rows_(std::move(rows)) {
  if (rows_.empty()) throw std::invalid_argument("DatasetOfflineSource: empty dataset");
}

OfflineRow DatasetOfflineSource::draw(Rng& rng) const {
  std::uniform_int_distribution<std::size_t> pick(0, rows_.size() - 1);
  return rows_[pick(rng)];
}

std::vector<OfflineRow> draw_offline(const OfflineSource& source, int m, std::uint64_t seed, Exec exec) {
  std::vector<OfflineRow> rows(m);
  parallel_for(m, exec, [&](int i) {
    Rng rng = make_stream(seed, static_cast<std::uint64_t>(i));
    rows[i] = source.draw(rng);
  });
  return rows;
}

void HpeConfig::validate() const {
  if (!(k2 > k1 && k1 >= 0)) throw std::invalid_argument("HpeConfig: need K2 > K1 >= 0");
  if (m_on < 0 || m_off < 0 || m_on + m_off <= 0) throw std::invalid_argument("HpeConfig: need m_on + m_off > 0");
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) throw std::invalid_argument("HpeConfig: lambda must be >= 0");
  if (!(gamma >= 0.0 && gamma < 1.0)) throw std::invalid_argument("HpeConfig: gamma must lie in [0, 1)");
}

HpeConfig HpeConfig::theory_schedule(double gamma, int rounds) {
  HpeConfig cfg;
  cfg.gamma = gamma;
  cfg.k1 = 4 * static_cast<int>(std::ceil(std::log(1.0 / gamma)));
  cfg.k2 = cfg.k1 + rounds;
  return cfg;
}

PolicyEvalResult hpe(const Policy& policy, const FunctionClass& cls, const OfflineSource& offline,
                     const Environment& env, const HpeConfig& cfg, Rng& rng) {
  cfg.validate();
  PolicyEvalResult out;

  auto draw_batches = [&](HybridBatch& batch) {
    batch.online = collect_online_rows(env, policy, cfg.gamma, cfg.m_on, rng(), cfg.exec, &out.stats);
    batch.offline = draw_offline(offline, cfg.m_off, rng(), cfg.exec);
    if (cfg.max_online_steps > 0 && out.stats.steps > cfg.max_online_steps) {
      throw SampleBudgetExceeded("hpe: online step budget exceeded");
    }
  };

  ValueFnPtr prev = std::make_shared<ZeroFn>();
  HybridBatch batch;
  batch.lambda = cfg.lambda;
  batch.target_policy = &policy;
  draw_batches(batch);
  for (int k = 1; k <= cfg.k2; ++k) {
    batch.target_fn = prev.get();
    RegressionResult fit = solve_hybrid_regression(batch, cls, cfg.gamma, rng);
    out.trace.push_back({k, fit.offline_loss, fit.online_loss});
    prev = fit.f;
    if (k > cfg.k1) out.iterates.push_back(fit.f);
    draw_batches(batch);
  }
  out.f = cfg.average_iterates ? average_functions(out.iterates) : prev;
  out.offline = std::move(batch.offline);
  out.online = std::move(batch.online);
  return out;
}

Mat tabulate(const ValueFn& f, const TabularMdp& mdp) {
  Mat table(mdp.n_states(), mdp.n_actions());
  for (int s = 0; s < mdp.n_states(); ++s) {
    State st{s, 0, Vec::Zero(mdp.n_states())};
    st.obs[s] = 1.0;
    for (int a = 0; a < mdp.n_actions(); ++a) table(s, a) = f.value(st, Action::discrete(a));
  }
  return table;
}

double offline_bellman_residual(const ValueFn& f, const Policy& policy, const TabularMdp& mdp,
                                const Mat& nu) {
  const Mat table = tabulate(f, mdp);
  const Mat gap = table - bellman_backup(mdp, policy, table);
  return nu.cwiseProduct(gap.cwiseAbs2()).sum();
}

}  // namespace hyrl
