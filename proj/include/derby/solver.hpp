#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <memory>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "derby/game.hpp"
#include "derby/rng.hpp"

namespace derby {

/// Absolute tolerance for value comparisons. Stage payoffs are small integers
/// and halves, so accumulated error stays far below this for n <= 8.
inline constexpr double kValueEpsilon = 1e-9;

/// Bellman state: the mover's remaining set and the opponent's remaining set.
struct StatePair {
  HorseSet own;
  HorseSet opp;

  friend constexpr bool operator==(StatePair, StatePair) = default;
};

struct StatePairHash {
  std::size_t operator()(StatePair s) const {
    return static_cast<std::size_t>(mix64(s.own.bits() ^ mix64(s.opp.bits())));
  }
};

/// Probability distribution over a player's remaining speeds, entries in
/// ascending speed order.
class ActionDistribution {
 public:
  ActionDistribution() = default;

  static ActionDistribution uniform_over(HorseSet set) {
    if (set.empty()) throw RulesError("uniform distribution over empty set");
    ActionDistribution d;
    const double p = 1.0 / set.size();
    for (Speed s : set) d.entries_.emplace_back(s, p);
    return d;
  }

  static ActionDistribution point_mass(Speed s) {
    ActionDistribution d;
    d.entries_.emplace_back(s, 1.0);
    return d;
  }

  /// Normalizes positive weights over the members of `set`.
  static ActionDistribution from_weights(
      HorseSet set, const std::function<double(Speed)>& weight) {
    if (set.empty()) throw RulesError("distribution over empty set");
    ActionDistribution d;
    double total = 0.0;
    for (Speed s : set) total += weight(s);
    if (!(total > 0.0)) throw RulesError("weights must have positive total");
    for (Speed s : set) d.entries_.emplace_back(s, weight(s) / total);
    return d;
  }

  const std::vector<std::pair<Speed, double>>& entries() const { return entries_; }

  double prob_of(Speed s) const {
    for (const auto& [a, p] : entries_)
      if (a == s) return p;
    return 0.0;
  }

  void validate_over(HorseSet own) const {
    if (own.empty()) throw RulesError("policy queried on an empty own set");
    double sum = 0.0;
    for (const auto& [s, p] : entries_) {
      if (!own.contains(s))
        throw RulesError("policy support contains speed " + std::to_string(s) +
                         " outside own set " + own.str());
      if (p < 0.0) throw RulesError("negative probability in policy output");
      sum += p;
    }
    if (std::abs(sum - 1.0) > 1e-12)
      throw RulesError("policy distribution sums to " + std::to_string(sum));
  }

 private:
  std::vector<std::pair<Speed, double>> entries_;
};

/// Behavioral strategy: maps (own remaining, opponent remaining) to a
/// distribution over the own set. Every returned distribution is validated.
class BehavioralPolicy {
 public:
  using Rule = std::function<ActionDistribution(HorseSet own, HorseSet opp)>;

  BehavioralPolicy(std::string name, Rule rule)
      : name_(std::move(name)), rule_(std::move(rule)) {}

  ActionDistribution distribution(HorseSet own, HorseSet opp) const {
    ActionDistribution d = rule_(own, opp);
    d.validate_over(own);
    return d;
  }

  const std::string& name() const { return name_; }

 private:
  std::string name_;
  Rule rule_;
};

/// Maximal entropy play: uniform over the remaining set at every state.
inline BehavioralPolicy uniform_policy() {
  return BehavioralPolicy("uniform", [](HorseSet own, HorseSet) {
    return ActionDistribution::uniform_over(own);
  });
}

/// Always deploys the fastest remaining horse.
inline BehavioralPolicy fastest_first_policy() {
  return BehavioralPolicy("fastest_first", [](HorseSet own, HorseSet) {
    return ActionDistribution::point_mass(own.highest());
  });
}

/// Round reward difference for a head-to-head: +1 win, -1 loss, 0 for the
/// even split on equal speeds.
inline double stage_payoff(Speed a, Speed b) {
  if (a > b) return 1.0;
  if (a < b) return -1.0;
  return 0.0;
}

/// Memoized state values for one opponent policy. Built single-threaded;
/// immutable once the owning query completes.
class ValueTable {
 public:
  const double* find(StatePair s) const {
    auto it = entries_.find(s);
    return it == entries_.end() ? nullptr : &it->second;
  }

  void insert(StatePair s, double v) { entries_.emplace(s, v); }

  std::size_t size() const { return entries_.size(); }

  const std::unordered_map<StatePair, double, StatePairHash>& entries() const {
    return entries_;
  }

 private:
  std::unordered_map<StatePair, double, StatePairHash> entries_;
};

/// Per-action expected values at one state against a fixed opponent policy.
struct QValues {
  std::vector<std::pair<Speed, double>> values;  // ascending by speed

  double at(Speed a) const {
    for (const auto& [s, q] : values)
      if (s == a) return q;
    throw RulesError("no Q value for speed " + std::to_string(a));
  }

  double max_value() const {
    double best = -std::numeric_limits<double>::infinity();
    for (const auto& [s, q] : values) best = std::max(best, q);
    return best;
  }

  double min_value() const {
    double worst = std::numeric_limits<double>::infinity();
    for (const auto& [s, q] : values) worst = std::min(worst, q);
    return worst;
  }

  /// Lowest speed whose value is within kValueEpsilon of the maximum.
  Speed argmax_lowest_speed() const {
    const double best = max_value();
    for (const auto& [s, q] : values)
      if (q >= best - kValueEpsilon) return s;
    throw RulesError("empty Q values");
  }
};

/// Best-response value against `opponent`, memoized in `table`:
///   V(own, opp) = max_a sum_b pi(b | opp, own) * [payoff(a, b) + V(own\a, opp\b)]
/// with V(empty, empty) = 0.
inline double best_response_value(const BehavioralPolicy& opponent,
                                  StatePair state, ValueTable& table) {
  if (state.own.size() != state.opp.size())
    throw RulesError("state sets differ in size: own " + state.own.str() +
                     " vs opp " + state.opp.str());
  if (state.own.empty()) return 0.0;
  if (const double* hit = table.find(state)) return *hit;

  const ActionDistribution dist = opponent.distribution(state.opp, state.own);
  double best = -std::numeric_limits<double>::infinity();
  for (Speed a : state.own) {
    double q = 0.0;
    for (const auto& [b, p] : dist.entries()) {
      if (p == 0.0) continue;
      StatePair next{state.own.without(a), state.opp.without(b)};
      q += p * (stage_payoff(a, b) + best_response_value(opponent, next, table));
    }
    best = std::max(best, q);
  }
  table.insert(state, best);
  return best;
}

inline double best_response_value(const BehavioralPolicy& opponent,
                                  StatePair state) {
  ValueTable table;
  return best_response_value(opponent, state, table);
}

/// Exposes the max's arguments: Q(a) for every a in the own set.
inline QValues q_values(const BehavioralPolicy& opponent, StatePair state,
                        ValueTable& table) {
  if (state.own.size() != state.opp.size())
    throw RulesError("state sets differ in size: own " + state.own.str() +
                     " vs opp " + state.opp.str());
  if (state.own.empty()) throw RulesError("no actions in a terminal state");

  const ActionDistribution dist = opponent.distribution(state.opp, state.own);
  QValues out;
  for (Speed a : state.own) {
    double q = 0.0;
    for (const auto& [b, p] : dist.entries()) {
      if (p == 0.0) continue;
      StatePair next{state.own.without(a), state.opp.without(b)};
      q += p * (stage_payoff(a, b) + best_response_value(opponent, next, table));
    }
    out.values.emplace_back(a, q);
  }
  return out;
}

inline QValues q_values(const BehavioralPolicy& opponent, StatePair state) {
  ValueTable table;
  return q_values(opponent, state, table);
}

/// Deterministic argmax policy against `opponent`; ties go to the lowest
/// speed. The value table is memoized lazily and shared across calls, so a
/// given policy instance should be driven from one thread at a time.
inline BehavioralPolicy best_response_policy(const BehavioralPolicy& opponent) {
  auto table = std::make_shared<ValueTable>();
  auto opp = std::make_shared<BehavioralPolicy>(opponent);
  return BehavioralPolicy(
      "best_response(" + opponent.name() + ")",
      [table, opp](HorseSet own, HorseSet opp_set) {
        QValues q = q_values(*opp, StatePair{own, opp_set}, *table);
        return ActionDistribution::point_mass(q.argmax_lowest_speed());
      });
}

/// Best-response value from the symmetric start {1..n} vs {1..n}; zero for
/// equilibrium policies, positive for predictable ones.
inline double exploitability(const BehavioralPolicy& policy, int n) {
  if (n < 1) throw RulesError("exploitability requires n >= 1");
  ValueTable table;
  return best_response_value(
      policy, StatePair{HorseSet::full(n), HorseSet::full(n)}, table);
}

namespace detail {

inline double expected_utility_rec(
    const BehavioralPolicy& policy_a, const BehavioralPolicy& policy_b,
    StatePair state,
    std::unordered_map<StatePair, double, StatePairHash>& memo) {
  if (state.own.empty()) return 0.0;
  if (auto it = memo.find(state); it != memo.end()) return it->second;

  const ActionDistribution dist_a = policy_a.distribution(state.own, state.opp);
  const ActionDistribution dist_b = policy_b.distribution(state.opp, state.own);
  double total = 0.0;
  for (const auto& [a, pa] : dist_a.entries()) {
    if (pa == 0.0) continue;
    for (const auto& [b, pb] : dist_b.entries()) {
      if (pb == 0.0) continue;
      StatePair next{state.own.without(a), state.opp.without(b)};
      total += pa * pb *
               (stage_payoff(a, b) +
                expected_utility_rec(policy_a, policy_b, next, memo));
    }
  }
  memo.emplace(state, total);
  return total;
}

}  // namespace detail

/// Exact expected score difference (a minus b) by full-tree expectation over
/// both policies from the symmetric start.
inline double expected_utility(const BehavioralPolicy& policy_a,
                               const BehavioralPolicy& policy_b, int n) {
  if (n < 1) throw RulesError("expected_utility requires n >= 1");
  std::unordered_map<StatePair, double, StatePairHash> memo;
  return detail::expected_utility_rec(
      policy_a, policy_b, StatePair{HorseSet::full(n), HorseSet::full(n)}, memo);
}

}  // namespace derby
