#pragma once

#include <bit>
#include <compare>
#include <cstdint>
#include <initializer_list>
#include <string>
#include <utility>
#include <vector>

#include "derby/errors.hpp"

namespace derby {

/// Horse speed rank, 1 (slowest) .. N (fastest). Speeds are unique per player.
using Speed = int;

enum class Player { A, B };
enum class Winner { A, B, Draw };

inline constexpr Player other_player(Player p) {
  return p == Player::A ? Player::B : Player::A;
}

inline const char* player_name(Player p) { return p == Player::A ? "A" : "B"; }

inline const char* winner_name(Winner w) {
  switch (w) {
    case Winner::A: return "A";
    case Winner::B: return "B";
    default: return "draw";
  }
}

/// A player's set of unused horse speeds, one bit per speed 1..64.
/// Value type; all mutators return a new set.
class HorseSet {
 public:
  static constexpr int kMaxSpeed = 64;

  constexpr HorseSet() = default;

  /// The full starting set {1..n}.
  static constexpr HorseSet full(int n) {
    return HorseSet(n >= kMaxSpeed ? ~0ULL : (1ULL << n) - 1ULL);
  }

  static HorseSet of(std::initializer_list<Speed> speeds) {
    HorseSet s;
    for (Speed v : speeds) s = s.with(v);
    return s;
  }

  static constexpr HorseSet from_bits(std::uint64_t bits) { return HorseSet(bits); }

  constexpr bool contains(Speed s) const {
    return s >= 1 && s <= kMaxSpeed && ((bits_ >> (s - 1)) & 1ULL) != 0;
  }

  constexpr HorseSet with(Speed s) const {
    return HorseSet(bits_ | (1ULL << (s - 1)));
  }

  constexpr HorseSet without(Speed s) const {
    return HorseSet(bits_ & ~(1ULL << (s - 1)));
  }

  constexpr int size() const { return std::popcount(bits_); }
  constexpr bool empty() const { return bits_ == 0; }
  constexpr std::uint64_t bits() const { return bits_; }

  Speed lowest() const {
    if (empty()) throw RulesError("lowest() on empty horse set");
    return std::countr_zero(bits_) + 1;
  }

  Speed highest() const {
    if (empty()) throw RulesError("highest() on empty horse set");
    return kMaxSpeed - std::countl_zero(bits_);
  }

  /// index-th smallest member, 0-based.
  Speed nth(int index) const {
    std::uint64_t b = bits_;
    for (int i = 0; i < index; ++i) b &= b - 1;
    if (b == 0) throw RulesError("nth() index out of range");
    return std::countr_zero(b) + 1;
  }

  std::vector<Speed> speeds() const {
    std::vector<Speed> out;
    out.reserve(static_cast<std::size_t>(size()));
    for (Speed s : *this) out.push_back(s);
    return out;
  }

  std::string str() const {
    std::string out = "{";
    bool first = true;
    for (Speed s : *this) {
      if (!first) out += ",";
      out += std::to_string(s);
      first = false;
    }
    out += "}";
    return out;
  }

  /// Iterates members in ascending speed order.
  class iterator {
   public:
    explicit constexpr iterator(std::uint64_t rest) : rest_(rest) {}
    constexpr Speed operator*() const { return std::countr_zero(rest_) + 1; }
    constexpr iterator& operator++() {
      rest_ &= rest_ - 1;
      return *this;
    }
    constexpr bool operator!=(const iterator& o) const { return rest_ != o.rest_; }
    constexpr bool operator==(const iterator& o) const { return rest_ == o.rest_; }

   private:
    std::uint64_t rest_;
  };

  constexpr iterator begin() const { return iterator(bits_); }
  constexpr iterator end() const { return iterator(0); }

  friend constexpr bool operator==(HorseSet a, HorseSet b) = default;

 private:
  explicit constexpr HorseSet(std::uint64_t bits) : bits_(bits) {}
  std::uint64_t bits_ = 0;
};

/// Scores are dyadic rationals (multiples of a half point). We count halves
/// in integers so winner and draw checks are exact; decimal rendering happens
/// only at the I/O boundary.
struct Points {
  int halves = 0;

  static constexpr Points from_halves(int h) { return Points{h}; }
  static constexpr Points whole(int n) { return Points{2 * n}; }
  static constexpr Points half() { return Points{1}; }

  constexpr double value() const { return static_cast<double>(halves) / 2.0; }

  std::string str() const {
    std::string out = std::to_string(halves / 2);
    out += (halves % 2 != 0) ? ".5" : ".0";
    return out;
  }

  friend constexpr Points operator+(Points a, Points b) {
    return Points{a.halves + b.halves};
  }
  constexpr Points& operator+=(Points o) {
    halves += o.halves;
    return *this;
  }
  friend constexpr auto operator<=>(Points, Points) = default;
};

struct GameConfig {
  int n_horses = 7;
  double round_reward = 1.0;  // per-round stake; the rules fix it at 1.0
};

/// One resolved round. Suggestions are recorded for analysis; they were
/// private to each side while the round was being played.
struct RoundRecord {
  int round_index = 0;  // 1-based
  Speed choice_a = 0;
  Speed choice_b = 0;
  Speed suggestion_a = 0;
  Speed suggestion_b = 0;
  Points reward_a;
  Points reward_b;
  bool matched_a = false;  // choice_a == suggestion_a
  bool matched_b = false;
  bool fallback_a = false;  // the choice was substituted by the harness
  bool fallback_b = false;
};

struct TournamentState {
  GameConfig config;
  HorseSet remaining_a;
  HorseSet remaining_b;
  Points score_a;
  Points score_b;
  std::vector<RoundRecord> history;

  int rounds_played() const { return static_cast<int>(history.size()); }
  bool finished() const { return rounds_played() == config.n_horses; }

  const HorseSet& remaining(Player p) const {
    return p == Player::A ? remaining_a : remaining_b;
  }
  Points score(Player p) const { return p == Player::A ? score_a : score_b; }
};

struct TournamentResult {
  Points score_a;
  Points score_b;
  Winner winner = Winner::Draw;
  std::vector<RoundRecord> history;
  int n_horses = 0;
};

/// Starts a tournament: both players hold {1..N}, scores zero, no history.
inline TournamentState new_tournament(const GameConfig& config) {
  if (config.n_horses < 1)
    throw ConfigError("n_horses must be >= 1, got " + std::to_string(config.n_horses));
  if (config.n_horses > HorseSet::kMaxSpeed)
    throw ConfigError("n_horses must be <= " + std::to_string(HorseSet::kMaxSpeed) +
                      ", got " + std::to_string(config.n_horses));
  if (config.round_reward != 1.0)
    throw ConfigError("round_reward is fixed at 1.0");
  TournamentState state;
  state.config = config;
  state.remaining_a = HorseSet::full(config.n_horses);
  state.remaining_b = HorseSet::full(config.n_horses);
  return state;
}

/// The mover's remaining set. Never empty before the final round completes.
inline HorseSet legal_moves(const TournamentState& state, Player player) {
  if (state.finished())
    throw RulesError("tournament is finished; no legal moves remain");
  return state.remaining(player);
}

namespace detail {

inline void check_speed(const TournamentState& state, Player player, Speed s,
                        const char* what) {
  const HorseSet& remaining = state.remaining(player);
  if (!remaining.contains(s)) {
    throw RulesError(std::string(what) + " " + std::to_string(s) + " for player " +
                     player_name(player) + " is not in the remaining set " +
                     remaining.str());
  }
}

}  // namespace detail

/// Resolves one simultaneous round: the faster horse takes the full point,
/// equal speeds split it. Never repairs an illegal choice; that is the agent
/// layer's job.
inline std::pair<TournamentState, RoundRecord> resolve_round(
    const TournamentState& state, Speed choice_a, Speed choice_b,
    Speed suggestion_a, Speed suggestion_b) {
  if (state.finished()) throw RulesError("tournament is finished");
  detail::check_speed(state, Player::A, choice_a, "choice");
  detail::check_speed(state, Player::B, choice_b, "choice");
  detail::check_speed(state, Player::A, suggestion_a, "suggestion");
  detail::check_speed(state, Player::B, suggestion_b, "suggestion");

  RoundRecord rec;
  rec.round_index = state.rounds_played() + 1;
  rec.choice_a = choice_a;
  rec.choice_b = choice_b;
  rec.suggestion_a = suggestion_a;
  rec.suggestion_b = suggestion_b;
  if (choice_a > choice_b) {
    rec.reward_a = Points::whole(1);
  } else if (choice_b > choice_a) {
    rec.reward_b = Points::whole(1);
  } else {
    rec.reward_a = Points::half();
    rec.reward_b = Points::half();
  }
  rec.matched_a = (choice_a == suggestion_a);
  rec.matched_b = (choice_b == suggestion_b);

  TournamentState next = state;
  next.remaining_a = state.remaining_a.without(choice_a);
  next.remaining_b = state.remaining_b.without(choice_b);
  next.score_a += rec.reward_a;
  next.score_b += rec.reward_b;
  next.history.push_back(rec);
  return {std::move(next), rec};
}

/// Final standing of a finished tournament.
inline TournamentResult outcome(const TournamentState& state) {
  if (!state.finished())
    throw RulesError("tournament has " + std::to_string(state.rounds_played()) +
                     " of " + std::to_string(state.config.n_horses) +
                     " rounds resolved");
  TournamentResult result;
  result.score_a = state.score_a;
  result.score_b = state.score_b;
  result.history = state.history;
  result.n_horses = state.config.n_horses;
  if (state.score_a > state.score_b) {
    result.winner = Winner::A;
  } else if (state.score_b > state.score_a) {
    result.winner = Winner::B;
  } else {
    result.winner = Winner::Draw;
  }
  return result;
}

}  // namespace derby
