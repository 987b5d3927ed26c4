#include "hyrl/mdp/tabular_mdp.hpp"

#include <nlohmann/json.hpp>

#include <cmath>
#include <string>

namespace hyrl {
namespace {

constexpr double kSumTol = 1e-12;

void require(bool ok, const std::string& what) {
  if (!ok) throw std::invalid_argument("TabularMdp: " + what);
}

}  // namespace

TabularMdp::TabularMdp(int n_states, int n_actions, std::vector<double> transition, Mat reward,
                       Mat init_dist, double discount)
    : n_states_(n_states),
      n_actions_(n_actions),
      transition_(std::move(transition)),
      reward_(std::move(reward)),
      init_(std::move(init_dist)),
      discount_(discount) {
  require(n_states_ > 0 && n_actions_ > 0, "empty state or action set");
  require(transition_.size() ==
              static_cast<std::size_t>(n_states_) * n_actions_ * n_states_,
          "transition tensor has wrong size");
  require(reward_.rows() == n_states_ && reward_.cols() == n_actions_, "reward shape");
  require(init_.rows() == n_states_ && init_.cols() == n_actions_, "mu0 shape");
  require(discount_ >= 0.0 && discount_ < 1.0, "discount must lie in [0, 1)");
  for (int s = 0; s < n_states_; ++s) {
    for (int a = 0; a < n_actions_; ++a) {
      const auto row = next_dist(s, a);
      require((row.array() >= 0.0).all(), "negative transition probability");
      require(std::abs(row.sum() - 1.0) <= kSumTol, "transition row does not sum to one");
    }
  }
  require((reward_.array() >= 0.0).all() && (reward_.array() <= 1.0).all(),
          "rewards must lie in [0, 1]");
  require((init_.array() >= 0.0).all() && std::abs(init_.sum() - 1.0) <= kSumTol,
          "mu0 is not a probability table");
}

TabularMdp TabularMdp::with_discount(double discount) const {
  return TabularMdp(n_states_, n_actions_, transition_, reward_, init_, discount);
}

nlohmann::json TabularMdp::to_json() const {
  nlohmann::json p = nlohmann::json::array();
  for (int s = 0; s < n_states_; ++s) {
    nlohmann::json per_action = nlohmann::json::array();
    for (int a = 0; a < n_actions_; ++a) {
      const auto row = next_dist(s, a);
      per_action.push_back(std::vector<double>(row.data(), row.data() + row.size()));
    }
    p.push_back(std::move(per_action));
  }
  auto table = [](const Mat& m) {
    nlohmann::json rows = nlohmann::json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      std::vector<double> row(m.cols());
      for (Eigen::Index j = 0; j < m.cols(); ++j) row[j] = m(i, j);
      rows.push_back(std::move(row));
    }
    return rows;
  };
  return {{"n_states", n_states_}, {"n_actions", n_actions_}, {"P", std::move(p)},
          {"r", table(reward_)},   {"mu0", table(init_)},     {"gamma", discount_}};
}

TabularMdp TabularMdp::from_json(const nlohmann::json& doc) {
  const int ns = doc.at("n_states").get<int>();
  const int na = doc.at("n_actions").get<int>();
  std::vector<double> p;
  p.reserve(static_cast<std::size_t>(ns) * na * ns);
  const auto& pj = doc.at("P");
  require(pj.size() == static_cast<std::size_t>(ns), "P has wrong number of states");
  for (const auto& per_action : pj) {
    require(per_action.size() == static_cast<std::size_t>(na), "P has wrong number of actions");
    for (const auto& row : per_action) {
      require(row.size() == static_cast<std::size_t>(ns), "P row has wrong length");
      for (const auto& v : row) p.push_back(v.get<double>());
    }
  }
  auto table = [&](const nlohmann::json& rows, const char* name) {
    require(rows.size() == static_cast<std::size_t>(ns), std::string(name) + " has wrong shape");
    Mat m(ns, na);
    for (int i = 0; i < ns; ++i) {
      require(rows[i].size() == static_cast<std::size_t>(na),
              std::string(name) + " has wrong shape");
      for (int j = 0; j < na; ++j) m(i, j) = rows[i][j].get<double>();
    }
    return m;
  };
  return TabularMdp(ns, na, std::move(p), table(doc.at("r"), "r"), table(doc.at("mu0"), "mu0"),
                    doc.at("gamma").get<double>());
}

TabularMdp random_tabular_mdp(int n_states, int n_actions, double discount, Rng& rng) {
  std::exponential_distribution<double> expo(1.0);
  std::vector<double> p(static_cast<std::size_t>(n_states) * n_actions * n_states);
  for (int sa = 0; sa < n_states * n_actions; ++sa) {
    double total = 0.0;
    for (int k = 0; k < n_states; ++k) total += p[sa * n_states + k] = expo(rng);
    for (int k = 0; k < n_states; ++k) p[sa * n_states + k] /= total;
    // Re-normalize the last entry so rows sum to one to machine precision.
    double partial = 0.0;
    for (int k = 0; k + 1 < n_states; ++k) partial += p[sa * n_states + k];
    p[sa * n_states + n_states - 1] = std::max(0.0, 1.0 - partial);
  }
  Mat r(n_states, n_actions);
  for (int s = 0; s < n_states; ++s)
    for (int a = 0; a < n_actions; ++a) r(s, a) = uniform01(rng);
  Mat mu0 = Mat::Constant(n_states, n_actions, 1.0 / (n_states * n_actions));
  return TabularMdp(n_states, n_actions, std::move(p), std::move(r), std::move(mu0), discount);
}

}  // namespace hyrl
