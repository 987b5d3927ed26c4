#pragma once

#include "hyrl/funcapprox/value_fn.hpp"
#include "hyrl/mdp/policy.hpp"

#include <optional>
#include <utility>
#include <vector>

namespace hyrl {

/// pi(a|s) proportional to exp(L(s, a)) over a finite action set. L is either
/// a logit table indexed by State::id or a lazy sum of eta * f terms
/// evaluated on demand.
class SoftmaxPolicy final : public Policy {
 public:
  /// Zero logits (uniform policy) stored as an n_states x n_actions table.
  static SoftmaxPolicy tabular(int n_states, int n_actions);
  /// Zero logits, lazy representation.
  static SoftmaxPolicy lazy(int n_actions);

  int n_actions() const { return n_actions_; }
  bool is_tabular() const { return table_.has_value(); }
  const Mat& logit_table() const { return *table_; }
  std::size_t n_terms() const { return terms_.size(); }

  Vec logits(const State& state) const;
  Vec probs(const State& state) const override;
  Action sample(const State& state, Rng& rng) const override;

  /// L' = L + eta * f. Tabular policies fold f into the table using
  /// one-hot observations of each state.
  SoftmaxPolicy updated(const ValueFnPtr& f, double eta) const;

 private:
  explicit SoftmaxPolicy(int n_actions) : n_actions_(n_actions) {}

  int n_actions_;
  std::optional<Mat> table_;
  std::vector<std::pair<double, ValueFnPtr>> terms_;
};

inline SoftmaxPolicy softmax_update(const SoftmaxPolicy& policy, const ValueFnPtr& f, double eta) {
  return policy.updated(f, eta);
}

}  // namespace hyrl
