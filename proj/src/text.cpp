#include "stance/text.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "stance/common.hpp"

namespace stance::text {
namespace {

// Decodes one UTF-8 code point at s[i]; returns its byte length (1 for invalid bytes).
std::size_t decode(std::string_view s, std::size_t i, char32_t& cp) noexcept {
    const auto c = static_cast<unsigned char>(s[i]);
    std::size_t len = 1;
    if (c < 0x80) {
        cp = c;
        return 1;
    }
    if ((c >> 5) == 0x6) {
        cp = c & 0x1f;
        len = 2;
    } else if ((c >> 4) == 0xe) {
        cp = c & 0x0f;
        len = 3;
    } else if ((c >> 3) == 0x1e) {
        cp = c & 0x07;
        len = 4;
    } else {
        cp = c;
        return 1;
    }
    if (i + len > s.size()) {
        cp = c;
        return 1;
    }
    for (std::size_t k = 1; k < len; ++k) {
        const auto cc = static_cast<unsigned char>(s[i + k]);
        if ((cc >> 6) != 0x2) {
            cp = c;
            return 1;
        }
        cp = (cp << 6) | (cc & 0x3f);
    }
    return len;
}

bool is_space(char32_t cp) noexcept {
    switch (cp) {
        case 0x09: case 0x0a: case 0x0b: case 0x0c: case 0x0d: case 0x20: case 0x85: case 0xa0:
        case 0x1680: case 0x2028: case 0x2029: case 0x202f: case 0x205f: case 0x3000:
            return true;
        default:
            return cp >= 0x2000 && cp <= 0x200a;
    }
}

bool is_punct(char32_t cp) noexcept {
    if (cp < 0x80) {
        return (cp >= 0x21 && cp <= 0x2f) || (cp >= 0x3a && cp <= 0x40) || (cp >= 0x5b && cp <= 0x60) ||
               (cp >= 0x7b && cp <= 0x7e);
    }
    return (cp >= 0xa1 && cp <= 0xbf) || (cp >= 0x2010 && cp <= 0x205e) || cp == 0x20ac;
}

constexpr char32_t kEllipsis = 0x2026;

struct CodePoint {
    std::size_t offset;
    std::size_t length;
    char32_t value;
};

std::vector<CodePoint> code_points(std::string_view s) {
    std::vector<CodePoint> cps;
    for (std::size_t i = 0; i < s.size();) {
        char32_t cp = 0;
        const std::size_t n = decode(s, i, cp);
        cps.push_back({i, n, cp});
        i += n;
    }
    return cps;
}

bool starts_with_ci(std::string_view s, std::string_view prefix) noexcept {
    if (s.size() < prefix.size()) return false;
    for (std::size_t i = 0; i < prefix.size(); ++i) {
        char c = s[i];
        if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
        if (c != prefix[i]) return false;
    }
    return true;
}

bool is_alnum_ascii(char c) noexcept {
    return (c >= '0' && c <= '9') || (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_';
}

bool is_digit(char c) noexcept { return c >= '0' && c <= '9'; }

bool looks_numeric(std::string_view s) noexcept {
    if (s.empty() || !is_digit(s.front()) || !is_digit(s.back())) return false;
    return std::all_of(s.begin(), s.end(), [](char c) {
        return is_digit(c) || c == '.' || c == ',' || c == ':' || c == '/' || c == '-';
    });
}

Token make_token(std::string_view surface, TokenKind kind) {
    return Token{std::string(surface), to_lower_ascii(surface), kind};
}

// Emits punctuation tokens for cps[first, last), grouping dot runs of length >= 3.
void emit_punctuation(std::string_view chunk, const std::vector<CodePoint>& cps, std::size_t first, std::size_t last,
                      std::vector<Token>& out) {
    std::size_t i = first;
    while (i < last) {
        if (cps[i].value == '.') {
            std::size_t j = i;
            while (j < last && cps[j].value == '.') ++j;
            if (j - i >= 3) {
                out.push_back(make_token(chunk.substr(cps[i].offset, j - i), TokenKind::Punctuation));
            } else {
                for (std::size_t k = i; k < j; ++k) out.push_back(make_token(".", TokenKind::Punctuation));
            }
            i = j;
            continue;
        }
        out.push_back(make_token(chunk.substr(cps[i].offset, cps[i].length), TokenKind::Punctuation));
        ++i;
    }
}

// '@' or '#' immediately followed by a word character opens a mention/hashtag.
bool opens_tag(const std::vector<CodePoint>& cps, std::size_t i, std::size_t end) {
    if (cps[i].value != '@' && cps[i].value != '#') return false;
    if (i + 1 >= end) return false;
    const char32_t next = cps[i + 1].value;
    return next >= 0x80 ? !is_punct(next) : is_alnum_ascii(static_cast<char>(next));
}

void tokenize_chunk(std::string_view chunk, const EmoticonSet& emoticons, std::vector<Token>& out) {
    if (emoticons.count(std::string(chunk))) {
        out.push_back(make_token(chunk, TokenKind::Emoticon));
        return;
    }
    const auto cps = code_points(chunk);
    std::size_t begin = 0;
    std::size_t end = cps.size();

    if (is_url(chunk)) {
        // Trailing sentence punctuation does not belong to the URL.
        while (end > 0) {
            const char32_t c = cps[end - 1].value;
            if (c == '.' || c == ',' || c == '!' || c == '?' || c == ';' || c == ':' || c == ')' || c == '"' ||
                c == '\'' || c == kEllipsis) {
                --end;
            } else {
                break;
            }
        }
        out.push_back(make_token(chunk.substr(0, end ? cps[end - 1].offset + cps[end - 1].length : 0), TokenKind::Url));
        emit_punctuation(chunk, cps, end, cps.size(), out);
        return;
    }

    auto punct_at = [&](std::size_t i) { return is_punct(cps[i].value) || cps[i].value == kEllipsis; };
    while (begin < end && punct_at(begin) && !opens_tag(cps, begin, end)) ++begin;
    std::size_t core_end = end;
    while (core_end > begin && punct_at(core_end - 1)) --core_end;

    emit_punctuation(chunk, cps, 0, begin, out);
    if (begin < core_end) {
        const std::size_t from = cps[begin].offset;
        const std::size_t to = cps[core_end - 1].offset + cps[core_end - 1].length;
        const std::string_view core = chunk.substr(from, to - from);
        TokenKind kind = TokenKind::Word;
        if (core.size() > 1 && core.front() == '@') {
            kind = TokenKind::Mention;
        } else if (core.size() > 1 && core.front() == '#') {
            kind = TokenKind::Hashtag;
        } else if (looks_numeric(core)) {
            kind = TokenKind::Number;
        }
        out.push_back(make_token(core, kind));
    }
    emit_punctuation(chunk, cps, core_end, end, out);
}

}  // namespace

std::string_view to_string(TokenKind kind) noexcept {
    switch (kind) {
        case TokenKind::Word: return "word";
        case TokenKind::Hashtag: return "hashtag";
        case TokenKind::Mention: return "mention";
        case TokenKind::Url: return "url";
        case TokenKind::Emoticon: return "emoticon";
        case TokenKind::Punctuation: return "punct";
        case TokenKind::Number: return "number";
    }
    return "?";
}

bool is_url(std::string_view s) noexcept {
    return (starts_with_ci(s, "http://") && s.size() > 7) || (starts_with_ci(s, "https://") && s.size() > 8) ||
           (starts_with_ci(s, "www.") && s.size() > 4);
}

std::vector<Token> tokenize(std::string_view text, const EmoticonSet& emoticons) {
    std::vector<Token> out;
    std::size_t i = 0;
    std::size_t chunk_start = std::string_view::npos;
    while (i < text.size()) {
        char32_t cp = 0;
        const std::size_t n = decode(text, i, cp);
        if (is_space(cp)) {
            if (chunk_start != std::string_view::npos) {
                tokenize_chunk(text.substr(chunk_start, i - chunk_start), emoticons, out);
                chunk_start = std::string_view::npos;
            }
        } else if (chunk_start == std::string_view::npos) {
            chunk_start = i;
        }
        i += n;
    }
    if (chunk_start != std::string_view::npos) tokenize_chunk(text.substr(chunk_start), emoticons, out);
    return out;
}

// ---------------------------------------------------------------------------
// POS

std::string_view to_string(PosTag tag) noexcept {
    static constexpr std::array<std::string_view, kPosTagCount> names{
        "NOUN", "VERB", "ADJ", "ADV", "PRON", "DET", "ADP", "CONJ", "NUM", "PRT", "PUNCT", "X"};
    return names[static_cast<std::size_t>(tag)];
}

namespace {

const std::unordered_map<std::string, PosTag>& closed_class() {
    static const std::unordered_map<std::string, PosTag> lexicon = [] {
        std::unordered_map<std::string, PosTag> m;
        auto add = [&](PosTag tag, std::initializer_list<const char*> words) {
            for (const char* w : words) m.emplace(w, tag);
        };
        add(PosTag::DET, {"the", "a", "an", "this", "that", "these", "those", "my", "your", "his", "her", "its",
                          "our", "their", "some", "any", "every", "each", "all", "both", "either", "neither",
                          "another", "such"});
        add(PosTag::PRON, {"i", "me", "you", "he", "him", "she", "it", "we", "us", "they", "them", "myself",
                           "yourself", "himself", "herself", "itself", "ourselves", "themselves", "mine", "yours",
                           "hers", "ours", "theirs", "who", "whom", "whose", "what", "which", "someone", "anyone",
                           "everyone", "nobody", "something", "anything", "everything", "nothing", "i'm", "it's",
                           "you're", "they're", "we're", "he's", "she's", "that's", "there's"});
        add(PosTag::ADP, {"in", "on", "at", "by", "for", "with", "about", "against", "between", "into", "through",
                          "during", "before", "after", "above", "below", "to", "from", "of", "off", "over", "under",
                          "near", "around", "across", "since", "without", "within", "along", "among", "upon", "via",
                          "towards", "toward", "despite", "per"});
        add(PosTag::CONJ, {"and", "or", "but", "nor", "so", "yet", "because", "although", "though", "while", "if",
                           "unless", "whereas", "&"});
        add(PosTag::PRT, {"not", "'s", "up", "out"});
        add(PosTag::VERB, {"is", "am", "are", "was", "were", "be", "been", "being", "do", "does", "did", "have", "has",
                           "had", "will", "would", "shall", "should", "can", "could", "may", "might", "must", "get",
                           "got", "says", "said", "say", "know", "think", "believe", "see", "seen", "saw", "go",
                           "went", "gone", "make", "made", "take", "took", "come", "came"});
        add(PosTag::ADV, {"very", "really", "just", "also", "too", "now", "then", "here", "there", "when", "where",
                          "why", "how", "never", "always", "still", "already", "again", "ever", "only", "even",
                          "quite", "almost", "soon", "maybe", "perhaps", "yes", "no"});
        add(PosTag::ADJ, {"good", "bad", "true", "false", "fake", "real", "new", "big", "old", "sure", "great",
                          "sad", "many", "much", "more", "most", "few", "other", "same"});
        add(PosTag::NUM, {"one", "two", "three", "four", "five", "six", "seven", "eight", "nine", "ten", "hundred",
                          "hundreds", "thousand", "thousands", "million", "millions", "billion", "dozen"});
        return m;
    }();
    return lexicon;
}

bool ends_with(std::string_view s, std::string_view suffix) noexcept {
    return s.size() >= suffix.size() && s.substr(s.size() - suffix.size()) == suffix;
}

PosTag tag_word(const std::string& lower) {
    const auto& lex = closed_class();
    if (auto it = lex.find(lower); it != lex.end()) return it->second;
    if (ends_with(lower, "n't") || ends_with(lower, "n\xe2\x80\x99t")) return PosTag::VERB;
    const std::size_t n = lower.size();
    if (n > 4 && ends_with(lower, "ing")) return PosTag::VERB;
    if (n > 3 && ends_with(lower, "ed")) return PosTag::VERB;
    if (n > 3 && ends_with(lower, "ly")) return PosTag::ADV;
    for (std::string_view suffix : {"ous", "ful", "ive", "able", "ible", "less", "est", "ical", "ish"}) {
        if (n > suffix.size() + 2 && ends_with(lower, suffix)) return PosTag::ADJ;
    }
    return PosTag::NOUN;
}

}  // namespace

std::vector<PosTag> pos_tag(std::span<const Token> tokens) {
    std::vector<PosTag> tags;
    tags.reserve(tokens.size());
    for (const auto& t : tokens) {
        switch (t.kind) {
            case TokenKind::Url:
            case TokenKind::Mention:
            case TokenKind::Hashtag:
            case TokenKind::Emoticon: tags.push_back(PosTag::X); break;
            case TokenKind::Punctuation: tags.push_back(PosTag::PUNCT); break;
            case TokenKind::Number: tags.push_back(PosTag::NUM); break;
            case TokenKind::Word: tags.push_back(tag_word(t.lower)); break;
        }
    }
    return tags;
}

// ---------------------------------------------------------------------------
// Named entities

std::string_view to_string(EntityClass c) noexcept {
    switch (c) {
        case EntityClass::Person: return "Person";
        case EntityClass::Organization: return "Organization";
        case EntityClass::Date: return "Date";
        case EntityClass::Location: return "Location";
        case EntityClass::Money: return "Money";
    }
    return "?";
}

namespace {

std::vector<std::vector<std::string>> read_gazetteer(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open gazetteer '" + path.string() + "'");
    std::vector<std::vector<std::string>> entries;
    std::string line;
    while (std::getline(in, line)) {
        std::istringstream words(to_lower_ascii(line));
        std::vector<std::string> entry;
        for (std::string w; words >> w;) entry.push_back(w);
        if (!entry.empty()) entries.push_back(std::move(entry));
    }
    return entries;
}

bool is_capitalized(const Token& t) noexcept { return !t.surface.empty() && t.surface[0] >= 'A' && t.surface[0] <= 'Z'; }

// Length of the longest entry matching at position i, 0 if none.
std::size_t longest_match(std::span<const Token> tokens, std::size_t i,
                          const std::vector<std::vector<std::string>>& entries) {
    std::size_t best = 0;
    for (const auto& e : entries) {
        if (e.size() <= best || i + e.size() > tokens.size()) continue;
        bool ok = true;
        for (std::size_t k = 0; k < e.size() && ok; ++k) {
            ok = tokens[i + k].kind == TokenKind::Word && tokens[i + k].lower == e[k];
        }
        if (ok) best = e.size();
    }
    return best;
}

bool is_date_word(const Token& t) {
    static const std::unordered_set<std::string> always{
        "january", "february", "april", "june", "july", "august", "september", "october", "november", "december",
        "monday", "tuesday", "wednesday", "thursday", "friday", "saturday", "sunday", "today", "yesterday",
        "tomorrow", "tonight"};
    // Ambiguous with ordinary words unless capitalized.
    static const std::unordered_set<std::string> capitalized{"march", "may", "jan", "feb", "mar", "apr", "jun",
                                                             "jul", "aug", "sep", "sept", "oct", "nov", "dec",
                                                             "mon", "tue", "wed", "thu", "fri", "sat", "sun"};
    if (t.kind != TokenKind::Word) return false;
    if (always.count(t.lower)) return true;
    return capitalized.count(t.lower) && is_capitalized(t);
}

bool is_date_number(const Token& t) {
    if (t.kind != TokenKind::Number) return false;
    const std::string& s = t.surface;
    const auto slashes = std::count(s.begin(), s.end(), '/');
    const auto dashes = std::count(s.begin(), s.end(), '-');
    if (slashes == 1 || slashes == 2) return true;  // d/m or d/m/y
    if (dashes == 2 && s.size() == 10) return true;  // yyyy-mm-dd
    if (s.size() == 4 && std::all_of(s.begin(), s.end(), is_digit)) {
        const int year = std::stoi(s);
        return year >= 1900 && year <= 2099;
    }
    return false;
}

bool is_currency_symbol(const Token& t) {
    return t.kind == TokenKind::Punctuation &&
           (t.surface == "$" || t.surface == "\xc2\xa3" || t.surface == "\xe2\x82\xac" || t.surface == "\xc2\xa5");
}

bool is_currency_word(const Token& t) {
    static const std::unordered_set<std::string> words{"usd", "gbp", "eur", "cad", "aud", "dollar", "dollars",
                                                       "pound", "pounds", "euro", "euros", "bucks"};
    return t.kind == TokenKind::Word && words.count(t.lower);
}

bool starts_with_digit(const Token& t) { return !t.surface.empty() && is_digit(t.surface[0]); }

}  // namespace

Gazetteers Gazetteers::load(const std::filesystem::path& dir) {
    Gazetteers g;
    g.person = read_gazetteer(dir / "person.txt");
    g.organization = read_gazetteer(dir / "org.txt");
    g.location = read_gazetteer(dir / "location.txt");
    return g;
}

EntityMatch match_entities(std::span<const Token> tokens, const Gazetteers& gazetteers) {
    EntityMatch m;
    m.covered.assign(tokens.size(), false);
    auto flag = [&](EntityClass c) { m.flags[static_cast<std::size_t>(c)] = true; };

    std::size_t first_word = tokens.size();
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        if (tokens[i].kind == TokenKind::Word) {
            first_word = i;
            break;
        }
    }

    const std::array<std::pair<EntityClass, const std::vector<std::vector<std::string>>*>, 3> classes{{
        {EntityClass::Person, &gazetteers.person},
        {EntityClass::Organization, &gazetteers.organization},
        {EntityClass::Location, &gazetteers.location},
    }};

    for (std::size_t i = 0; i < tokens.size(); ++i) {
        const Token& t = tokens[i];
        if (is_date_word(t) || is_date_number(t)) flag(EntityClass::Date);
        if (is_currency_symbol(t) && i + 1 < tokens.size() && starts_with_digit(tokens[i + 1])) flag(EntityClass::Money);
        if (is_currency_word(t) && ((i > 0 && starts_with_digit(tokens[i - 1])) ||
                                    (i + 1 < tokens.size() && starts_with_digit(tokens[i + 1])))) {
            flag(EntityClass::Money);
        }
        if (t.kind != TokenKind::Word || i == first_word || !is_capitalized(t)) continue;
        for (const auto& [cls, entries] : classes) {
            if (const std::size_t len = longest_match(tokens, i, *entries)) {
                flag(cls);
                for (std::size_t k = i; k < i + len; ++k) m.covered[k] = true;
            }
        }
    }
    return m;
}

// ---------------------------------------------------------------------------
// Sentiment and negation

bool is_negation_cue(const Token& token) noexcept {
    if (token.kind != TokenKind::Word) return false;
    const std::string& w = token.lower;
    if (w == "not" || w == "no" || w == "never" || w == "cannot" || w == "without" || w == "neither" || w == "nor") {
        return true;
    }
    return ends_with(w, "n't") || ends_with(w, "n\xe2\x80\x99t");
}

int sentiment_score(std::span<const Token> tokens, const SentimentLexicon& lexicon) {
    constexpr std::size_t kWindow = 3;
    double sum = 0.0;
    std::size_t matched = 0;
    std::size_t flip_until = 0;  // tokens with index < flip_until are negated
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        const Token& t = tokens[i];
        if (is_negation_cue(t)) {
            flip_until = i + 1 + kWindow;
            continue;
        }
        if (t.kind != TokenKind::Word && t.kind != TokenKind::Hashtag) continue;
        const std::string key = t.kind == TokenKind::Hashtag ? t.lower.substr(1) : t.lower;
        auto it = lexicon.find(key);
        if (it == lexicon.end()) continue;
        sum += i < flip_until ? -it->second : it->second;
        ++matched;
    }
    if (matched == 0) return 2;
    const double mean = sum / static_cast<double>(matched);
    if (mean <= -1.0) return 0;
    if (mean <= -0.25) return 1;
    if (mean < 0.25) return 2;
    if (mean < 1.0) return 3;
    return 4;
}

NegationStats negation_stats(std::span<const Token> tokens) {
    std::size_t words = 0;
    std::size_t cues = 0;
    for (const auto& t : tokens) {
        if (t.kind != TokenKind::Word) continue;
        ++words;
        if (is_negation_cue(t)) ++cues;
    }
    NegationStats s;
    s.has_negation = cues > 0;
    s.average = words ? static_cast<double>(cues) / static_cast<double>(words) : 0.0;
    return s;
}

}  // namespace stance::text
