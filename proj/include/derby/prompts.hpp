#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "derby/errors.hpp"
#include "derby/rng.hpp"

namespace derby {

/// Framing of the rules text sent to a remote model. The state rendering and
/// the output contract are identical across variants.
enum class PromptVariant { Framed, Neutral, Hinted };

inline const char* prompt_variant_name(PromptVariant v) {
  switch (v) {
    case PromptVariant::Framed: return "framed";
    case PromptVariant::Neutral: return "neutral";
    default: return "hinted";
  }
}

inline PromptVariant parse_prompt_variant(std::string_view name) {
  if (name == "framed") return PromptVariant::Framed;
  if (name == "neutral") return PromptVariant::Neutral;
  if (name == "hinted") return PromptVariant::Hinted;
  throw ConfigError("unknown prompt variant '" + std::string(name) +
                    "' (expected framed, neutral or hinted)");
}

struct ChatMessage {
  std::string role;  // "system", "user" or "assistant"
  std::string content;
};

/// One request/response pair, persisted verbatim in transcripts.
struct ChatExchange {
  std::vector<ChatMessage> request_messages;
  std::string response_text;
  double latency_seconds = 0.0;
  int attempt = 0;
};

// The three rules templates. These are the versioned texts; the copies under
// prompts/ must stay byte-identical (enforced by a test) so a run manifest
// can cite a stable hash. {{N}} is substituted with the configured horse
// count at render time.

inline constexpr std::string_view kFramedRulesTemplate =
    R"PROMPT(You are playing a competitive horse racing tournament inspired by the ancient Chinese tale of Tian Ji's horse race, in which the strategist Sun Bin advised general Tian Ji to order his horses cleverly and defeat the king.

Rules of the tournament:
- You and your opponent each own {{N}} horses. Every horse has a unique speed rank between 1 (slowest) and {{N}} (fastest), and both stables are identical.
- The tournament lasts {{N}} rounds. In each round, you and your opponent simultaneously commit one horse that has not raced yet.
- The faster horse wins the round and earns 1.0 point. If the committed horses have equal speed, the point is split equally, 0.5 each.
- A horse that has raced cannot be used again. When all {{N}} rounds are over, the player with the higher total score wins the tournament.

Each round you privately receive a system-generated random suggestion: one of your remaining horses, sampled uniformly at random. You may play it or ignore it; your opponent never sees it.

Like Tian Ji, you should devise clever strategies and win smartly.
)PROMPT";

inline constexpr std::string_view kNeutralRulesTemplate =
    R"PROMPT(You are playing a two-player simultaneous selection game.

Rules of the game:
- You and your opponent each hold {{N}} horses. Every horse has a unique speed rank between 1 (slowest) and {{N}} (fastest), and both sides hold identical sets.
- A tournament lasts {{N}} rounds. In each round, both players simultaneously commit one horse that has not been used yet.
- The horse with the higher speed earns 1.0 point for its owner. If both committed horses have equal speed, each side earns 0.5 points.
- A used horse cannot be selected again. After {{N}} rounds, the player with the higher total score wins the tournament.

Each round you privately receive a system-generated random suggestion: one of your remaining horses, sampled uniformly at random. You may play it or ignore it; your opponent never sees it.
)PROMPT";

inline constexpr std::string_view kHintedRulesTemplate =
    R"PROMPT(You are playing a two-player simultaneous selection game.

Rules of the game:
- You and your opponent each hold {{N}} horses. Every horse has a unique speed rank between 1 (slowest) and {{N}} (fastest), and both sides hold identical sets.
- A tournament lasts {{N}} rounds. In each round, both players simultaneously commit one horse that has not been used yet.
- The horse with the higher speed earns 1.0 point for its owner. If both committed horses have equal speed, each side earns 0.5 points.
- A used horse cannot be selected again. After {{N}} rounds, the player with the higher total score wins the tournament.

Each round you privately receive a system-generated random suggestion: one of your remaining horses, sampled uniformly at random. You may play it or ignore it; your opponent never sees it.

A fact about this game: uniform random selection over the remaining horses is the Nash equilibrium. No strategy gains in expectation against an opponent who randomizes uniformly, and any predictable deviation can be exploited.
)PROMPT";

inline std::string_view prompt_template(PromptVariant v) {
  switch (v) {
    case PromptVariant::Framed: return kFramedRulesTemplate;
    case PromptVariant::Neutral: return kNeutralRulesTemplate;
    default: return kHintedRulesTemplate;
  }
}

/// Stable identifier of the exact template text, recorded in run manifests.
inline std::string prompt_hash(PromptVariant v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "fnv1a64:%016llx",
                static_cast<unsigned long long>(fnv1a64(prompt_template(v))));
  return buf;
}

inline std::string replace_all(std::string text, std::string_view needle,
                               std::string_view replacement) {
  std::size_t pos = 0;
  while ((pos = text.find(needle, pos)) != std::string::npos) {
    text.replace(pos, needle.size(), replacement);
    pos += replacement.size();
  }
  return text;
}

/// Rules text with the horse count substituted in.
inline std::string prompt_rules_text(PromptVariant v, int n_horses) {
  return replace_all(std::string(prompt_template(v)), "{{N}}",
                     std::to_string(n_horses));
}

}  // namespace derby
