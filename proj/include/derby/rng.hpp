#pragma once

#include <cstdint>
#include <string_view>

#include "derby/game.hpp"

namespace derby {

/// SplitMix64 finalizer; full-avalanche mixing of a 64-bit word.
inline constexpr std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline constexpr std::uint64_t fnv1a64(std::string_view text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (char c : text) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  return h;
}

/// Small deterministic generator for simulations and tests.
class SplitMix64 {
 public:
  explicit constexpr SplitMix64(std::uint64_t seed) : state_(seed) {}

  constexpr std::uint64_t next() {
    state_ += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  /// Uniform pick from a non-empty set. Modular reduction of a 64-bit draw;
  /// bias is below 2^-57 for sets of at most 64 speeds.
  Speed pick(HorseSet set) {
    if (set.empty()) throw RulesError("pick() from empty horse set");
    return set.nth(static_cast<int>(next() % static_cast<std::uint64_t>(set.size())));
  }

 private:
  std::uint64_t state_;
};

/// Keyed counter-mode derivation of the per-round private suggestions.
/// Each draw is a pure function of (master seed, pairing id, tournament index,
/// round index, side), so results do not depend on wall clock, execution
/// order, or how pairings are scheduled across threads.
class SuggestionStream {
 public:
  explicit constexpr SuggestionStream(std::uint64_t master_seed)
      : master_seed_(master_seed) {}

  std::uint64_t derive(std::string_view pairing_id, int tournament_index,
                       int round_index, Player side) const {
    std::uint64_t h = mix64(master_seed_);
    h = mix64(h ^ fnv1a64(pairing_id));
    h = mix64(h ^ static_cast<std::uint64_t>(tournament_index));
    h = mix64(h ^ static_cast<std::uint64_t>(round_index));
    h = mix64(h ^ (side == Player::A ? 0xa5a5a5a5ULL : 0x5a5a5a5aULL));
    return h;
  }

  /// Uniform suggestion over the mover's remaining set.
  Speed draw(std::string_view pairing_id, int tournament_index, int round_index,
             Player side, HorseSet remaining) const {
    if (remaining.empty())
      throw RulesError("suggestion draw from empty remaining set");
    std::uint64_t h = derive(pairing_id, tournament_index, round_index, side);
    return remaining.nth(
        static_cast<int>(h % static_cast<std::uint64_t>(remaining.size())));
  }

  constexpr std::uint64_t master_seed() const { return master_seed_; }

 private:
  std::uint64_t master_seed_;
};

}  // namespace derby
