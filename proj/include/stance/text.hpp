#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace stance::text {

enum class TokenKind { Word, Hashtag, Mention, Url, Emoticon, Punctuation, Number };

std::string_view to_string(TokenKind kind) noexcept;

struct Token {
    std::string surface;
    std::string lower;  // ASCII case-folded surface
    TokenKind kind = TokenKind::Word;

    bool operator==(const Token&) const = default;
};

using EmoticonSet = std::unordered_set<std::string>;

/// Splits on Unicode whitespace. URLs, @mentions, #hashtags and dictionary
/// emoticons stay whole; leading/trailing punctuation becomes separate
/// tokens, with runs of three or more dots (and U+2026) kept as one token.
std::vector<Token> tokenize(std::string_view text, const EmoticonSet& emoticons = {});

bool is_url(std::string_view s) noexcept;

// --- POS -------------------------------------------------------------------

enum class PosTag : std::uint8_t { NOUN, VERB, ADJ, ADV, PRON, DET, ADP, CONJ, NUM, PRT, PUNCT, X };

inline constexpr std::size_t kPosTagCount = 12;

std::string_view to_string(PosTag tag) noexcept;

/// Closed-class lexicon, then kind-driven tags, then suffix rules; NOUN otherwise.
std::vector<PosTag> pos_tag(std::span<const Token> tokens);

// --- named entities --------------------------------------------------------

enum class EntityClass : std::uint8_t { Person, Organization, Date, Location, Money };

inline constexpr std::size_t kEntityClassCount = 5;

std::string_view to_string(EntityClass c) noexcept;

/// Lowercased token sequences per gazetteer class.
struct Gazetteers {
    std::vector<std::vector<std::string>> person;
    std::vector<std::vector<std::string>> organization;
    std::vector<std::vector<std::string>> location;

    /// Reads `person.txt`, `org.txt`, `location.txt` (one entry per line) from dir.
    static Gazetteers load(const std::filesystem::path& dir);
};

using EntityFlags = std::array<bool, kEntityClassCount>;

struct EntityMatch {
    EntityFlags flags{};
    /// true for tokens covered by a gazetteer match (Person/Organization/Location).
    std::vector<bool> covered;
};

/// Gazetteer matches must start at a capitalized token that is not the first
/// word of the tweet. Date uses month/weekday names and d/m/y patterns; Money
/// uses currency symbols or codes adjacent to numbers.
EntityMatch match_entities(std::span<const Token> tokens, const Gazetteers& gazetteers);

inline EntityFlags detect_entities(std::span<const Token> tokens, const Gazetteers& gazetteers) {
    return match_entities(tokens, gazetteers).flags;
}

// --- sentiment and negation -------------------------------------------------

using SentimentLexicon = std::unordered_map<std::string, int>;

bool is_negation_cue(const Token& token) noexcept;

/// Mean polarity of lexicon words (flipped within three tokens after a
/// negation cue) bucketed into 0..4; 2 when nothing matches.
int sentiment_score(std::span<const Token> tokens, const SentimentLexicon& lexicon);

struct NegationStats {
    double average = 0.0;
    bool has_negation = false;
};

/// Cue count over word-token count.
NegationStats negation_stats(std::span<const Token> tokens);

}  // namespace stance::text
