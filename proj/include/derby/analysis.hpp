#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "derby/errors.hpp"
#include "derby/game.hpp"

namespace derby {

/// One round's evidence: how many legal choices the player had and whether
/// the played choice matched the private random suggestion.
struct ChoiceObservation {
  int legal_count = 0;  // m >= 1
  bool matched = false;
};

/// eta is the assumed baseline tendency of a randomizing player to abandon
/// the provided suggestion; 0.4 is the conservative default.
struct BayesParams {
  double eta = 0.4;
};

inline void validate(const BayesParams& params) {
  if (!(params.eta > 0.0) || params.eta > 1.0)
    throw ConfigError("eta must lie in (0, 1], got " + std::to_string(params.eta));
}

/// Likelihood of one choice under H1 (the player randomizes via the provided
/// suggestion): matched -> 1 - eta*(m-1)/m, unmatched -> eta/m. The m cases
/// sum to one.
inline double likelihood_h1(int m, bool matched, const BayesParams& params) {
  validate(params);
  if (m < 1) throw RulesError("legal_count must be >= 1, got " + std::to_string(m));
  if (matched) {
    // Computed as (m - (m-1)*eta)/m so that eta = 1 collapses to exactly 1/m.
    return (static_cast<double>(m) - (m - 1) * params.eta) / m;
  }
  return params.eta / m;
}

/// Likelihood under H2 (the player ignores the suggestion and its choices are
/// uniform relative to it): 1/m.
inline double likelihood_h2(int m) {
  if (m < 1) throw RulesError("legal_count must be >= 1, got " + std::to_string(m));
  return 1.0 / m;
}

/// Log Bayes factor of H1 over H2 for one player's tournament, in nats.
/// Positive favors deliberate use of the provided suggestion. An empty
/// observation list yields 0.
inline double log_bayes_factor(const std::vector<ChoiceObservation>& observations,
                               const BayesParams& params) {
  validate(params);
  double total = 0.0;
  for (const ChoiceObservation& obs : observations) {
    if (obs.legal_count == 1 && !obs.matched)
      throw RulesError("with one legal choice the move necessarily matches");
    total += std::log(likelihood_h1(obs.legal_count, obs.matched, params)) -
             std::log(likelihood_h2(obs.legal_count));
  }
  return total;
}

/// Builds one side's observation sequence from a finished tournament.
/// Fallback rounds count as matches (the substituted move is the suggestion);
/// `exclude_fallbacks` drops them from the evidence instead.
inline std::vector<ChoiceObservation> observations_for(
    const std::vector<RoundRecord>& history, int n_horses, Player side,
    bool exclude_fallbacks = false) {
  std::vector<ChoiceObservation> out;
  out.reserve(history.size());
  for (const RoundRecord& rec : history) {
    const bool fallback = side == Player::A ? rec.fallback_a : rec.fallback_b;
    if (exclude_fallbacks && fallback) continue;
    ChoiceObservation obs;
    obs.legal_count = n_horses - rec.round_index + 1;
    obs.matched = side == Player::A ? rec.matched_a : rec.matched_b;
    out.push_back(obs);
  }
  return out;
}

/// One tournament of a pairing, reduced to what the matrices need. Side A is
/// the row model, side B the column model.
struct TournamentScorecard {
  Winner winner = Winner::Draw;
  double log_bayes_a = 0.0;
  double log_bayes_b = 0.0;
};

struct PairingCells {
  int win_cell = 0;        // wins(column) - wins(row); draws count for neither
  double bayes_cell = 0.0;  // column model's mean log Bayes factor
};

/// Folds one ordered pairing's K tournaments into its W and B cells.
inline PairingCells aggregate(const std::vector<TournamentScorecard>& tournaments,
                              int expected_k) {
  if (static_cast<int>(tournaments.size()) != expected_k)
    throw RulesError("pairing has " + std::to_string(tournaments.size()) +
                     " finished tournaments, expected " + std::to_string(expected_k));
  PairingCells cells;
  double sum = 0.0;
  for (const TournamentScorecard& t : tournaments) {
    if (t.winner == Winner::B) ++cells.win_cell;
    if (t.winner == Winner::A) --cells.win_cell;
    sum += t.log_bayes_b;
  }
  cells.bayes_cell = sum / expected_k;
  return cells;
}

namespace detail {

template <typename T>
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::vector<std::string> agents, int k)
      : agents_(std::move(agents)),
        k_(k),
        cells_(agents_.size() * agents_.size(), T{}),
        valid_(agents_.size() * agents_.size(), 0) {}

  std::size_t size() const { return agents_.size(); }
  const std::vector<std::string>& agents() const { return agents_; }
  int tournaments_k() const { return k_; }

  T at(std::size_t row, std::size_t col) const { return cells_[index(row, col)]; }
  bool ok(std::size_t row, std::size_t col) const { return valid_[index(row, col)] != 0; }

  void mark_failed(std::size_t row, std::size_t col) {
    valid_[index(row, col)] = 0;
    cells_[index(row, col)] = T{};
  }

 protected:
  std::size_t index(std::size_t row, std::size_t col) const {
    if (row >= size() || col >= size()) throw RulesError("matrix index out of range");
    return row * size() + col;
  }

  std::vector<std::string> agents_;
  int k_ = 0;
  std::vector<T> cells_;
  std::vector<unsigned char> valid_;
};

}  // namespace detail

/// Net relative wins per ordered pairing; every entry lies in [-K, K].
class WinLossMatrix : public detail::Matrix<int> {
 public:
  WinLossMatrix() = default;
  WinLossMatrix(std::vector<std::string> agents, int k)
      : detail::Matrix<int>(std::move(agents), k) {}

  void set(std::size_t row, std::size_t col, int value) {
    if (value > k_ || value < -k_)
      throw RulesError("win/loss cell " + std::to_string(value) +
                       " outside [-K, K] for K = " + std::to_string(k_));
    cells_[index(row, col)] = value;
    valid_[index(row, col)] = 1;
  }
};

/// Column model's mean log Bayes factor per ordered pairing, in nats.
class BayesMatrix : public detail::Matrix<double> {
 public:
  BayesMatrix() = default;
  BayesMatrix(std::vector<std::string> agents, int k)
      : detail::Matrix<double>(std::move(agents), k) {}

  void set(std::size_t row, std::size_t col, double value) {
    if (!std::isfinite(value))
      throw RulesError("log Bayes factor cell must be finite");
    cells_[index(row, col)] = value;
    valid_[index(row, col)] = 1;
  }
};

}  // namespace derby
