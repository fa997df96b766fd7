#include "stance/features.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>
#include <set>
#include <sstream>

namespace stance {

// ---------------------------------------------------------------------------
// Groups

namespace {

constexpr std::array<std::string_view, kGroupCount> kGroupNames{
    "BOW", "BROWN", "POSNG", "SENT", "NE",   "REPLY",  "EMOT",   "URL",    "MOOD",   "USER",
    "NEG", "LEX",   "SURF",  "REGEX", "AF_SS", "AF_DS", "AF_NDS", "AF_SPS", "AF_ITS", "AF_IQ"};

}  // namespace

std::string_view to_string(FeatureGroup g) noexcept { return kGroupNames[static_cast<std::size_t>(g)]; }

std::optional<FeatureGroup> parse_group(std::string_view name) noexcept {
    for (std::size_t i = 0; i < kGroupNames.size(); ++i) {
        if (kGroupNames[i] == name) return static_cast<FeatureGroup>(i);
    }
    return std::nullopt;
}

GroupSet GroupSet::af() {
    return {FeatureGroup::AF_SS, FeatureGroup::AF_DS, FeatureGroup::AF_NDS,
            FeatureGroup::AF_SPS, FeatureGroup::AF_ITS, FeatureGroup::AF_IQ};
}

GroupSet GroupSet::parse(std::string_view spec) {
    GroupSet out;
    std::size_t start = 0;
    while (start <= spec.size()) {
        auto end = spec.find(',', start);
        if (end == std::string_view::npos) end = spec.size();
        std::string_view tag = spec.substr(start, end - start);
        while (!tag.empty() && tag.front() == ' ') tag.remove_prefix(1);
        while (!tag.empty() && tag.back() == ' ') tag.remove_suffix(1);
        const bool remove = !tag.empty() && tag.front() == '-';
        if (remove) tag.remove_prefix(1);
        if (!tag.empty()) {
            GroupSet named;
            if (tag == "all") {
                named = all();
            } else if (tag == "AF") {
                named = af();
            } else if (auto g = parse_group(tag)) {
                named.insert(*g);
            } else {
                throw ConfigError("unknown feature group '" + std::string(tag) + "'");
            }
            out = remove ? out - named : out | named;
        }
        start = end + 1;
    }
    return out;
}

std::vector<FeatureGroup> GroupSet::list() const {
    std::vector<FeatureGroup> out;
    for (std::size_t i = 0; i < kGroupCount; ++i) {
        if (bits_.test(i)) out.push_back(static_cast<FeatureGroup>(i));
    }
    return out;
}

std::string GroupSet::label() const {
    if (*this == af()) return "AF";
    if (*this == all()) return "all";
    std::string out;
    for (auto g : list()) {
        if (!out.empty()) out += '+';
        out += to_string(g);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Dictionaries

namespace {

std::uint64_t dictionary_hash(const std::vector<std::string>& bow, const std::vector<std::string>& posng) {
    std::uint64_t h = fnv1a64("bow\n");
    for (const auto& w : bow) h = fnv1a64("\n", fnv1a64(w, h));
    h = fnv1a64("posng\n", h);
    for (const auto& g : posng) h = fnv1a64("\n", fnv1a64(g, h));
    return h;
}

std::vector<std::string> word_terms(std::span<const text::Token> tokens) {
    std::vector<std::string> out;
    for (const auto& t : tokens) {
        if (t.kind == text::TokenKind::Word || t.kind == text::TokenKind::Hashtag) out.push_back(t.lower);
    }
    return out;
}

std::vector<std::string> pos_ngrams(std::span<const text::PosTag> tags) {
    std::vector<std::string> out;
    for (std::size_t n = 2; n <= 4; ++n) {
        for (std::size_t i = 0; i + n <= tags.size(); ++i) {
            std::string gram(text::to_string(tags[i]));
            for (std::size_t k = 1; k < n; ++k) {
                gram += '_';
                gram += text::to_string(tags[i + k]);
            }
            out.push_back(std::move(gram));
        }
    }
    return out;
}

std::vector<std::string> frequent(const std::map<std::string, std::size_t>& counts) {
    std::vector<std::string> out;
    for (const auto& [term, n] : counts) {
        if (n >= FeatureDictionaries::kMinCount) out.push_back(term);
    }
    return out;  // std::map keeps them sorted
}

}  // namespace

FeatureDictionaries::FeatureDictionaries(std::vector<std::string> bow, std::vector<std::string> posng,
                                         std::vector<std::string> provenance)
    : bow_(std::move(bow)), posng_(std::move(posng)), provenance_(std::move(provenance)) {
    std::sort(bow_.begin(), bow_.end());
    std::sort(posng_.begin(), posng_.end());
    std::sort(provenance_.begin(), provenance_.end());
    provenance_.erase(std::unique(provenance_.begin(), provenance_.end()), provenance_.end());
    for (std::size_t i = 0; i < bow_.size(); ++i) bow_index_.emplace(bow_[i], i);
    for (std::size_t i = 0; i < posng_.size(); ++i) posng_index_.emplace(posng_[i], i);
    fingerprint_ = dictionary_hash(bow_, posng_);
}

FeatureDictionaries build_dictionaries(std::span<const TweetRecord> training, const ResourceBundle& resources) {
    if (training.empty()) throw Error("cannot build feature dictionaries from an empty training set");
    std::map<std::string, std::size_t> bow, posng;
    std::vector<std::string> provenance;
    for (const auto& t : training) {
        const auto tokens = text::tokenize(t.text, resources.lexicon.all_emoticons);
        for (auto& w : word_terms(tokens)) ++bow[w];
        for (auto& g : pos_ngrams(text::pos_tag(tokens))) ++posng[g];
        provenance.push_back(t.rumour_id);
    }
    return FeatureDictionaries(frequent(bow), frequent(posng), std::move(provenance));
}

// ---------------------------------------------------------------------------
// Schema

namespace {

const std::array<const char*, 9> kUserColumns{"originality", "isVerified",     "followers",
                                              "role",        "engagement",     "favourites",
                                              "hasGeoEnabled", "hasDescription", "descriptionLength"};
const std::array<const char*, 7> kSurfaceColumns{"averageWordLength",    "hasQuestionMark",
                                                 "hasExclamationMark",   "hasDotDotDot",
                                                 "numberOfQuestionMark", "numberOfExclamationMark",
                                                 "numberOfDotDotDot"};

std::string brown_name(std::size_t id) { return "brown:" + std::to_string(id); }

std::string ne_name(std::size_t i) { return "ne:" + std::string(text::to_string(static_cast<text::EntityClass>(i))); }

}  // namespace

FeatureSchema::FeatureSchema(std::vector<Column> columns, std::uint64_t dictionary_fingerprint)
    : columns_(std::move(columns)), dictionary_fingerprint_(dictionary_fingerprint) {
    for (std::size_t i = 0; i < columns_.size(); ++i) {
        if (!index_.emplace(columns_[i].name, i).second) {
            throw SchemaMismatch("duplicate column name '" + columns_[i].name + "'");
        }
        groups_.insert(columns_[i].group);
    }
    fingerprint_ = fnv1a64(to_tsv());
}

FeatureSchema FeatureSchema::build(const FeatureDictionaries& dicts, const ResourceBundle& resources, GroupSet enabled) {
    std::vector<Column> cols;
    auto add = [&](FeatureGroup g, std::string name) { cols.push_back({std::move(name), g}); };
    for (FeatureGroup g : enabled.list()) {
        switch (g) {
            case FeatureGroup::BOW:
                for (const auto& w : dicts.bow_vocab()) add(g, "bow:" + w);
                break;
            case FeatureGroup::BROWN:
                for (std::size_t i = 0; i < BrownTable::kClusterCount; ++i) add(g, brown_name(i));
                break;
            case FeatureGroup::POSNG:
                for (const auto& p : dicts.posng_vocab()) add(g, "pos:" + p);
                break;
            case FeatureGroup::SENT: add(g, "sentiment"); break;
            case FeatureGroup::NE:
                for (std::size_t i = 0; i < text::kEntityClassCount; ++i) add(g, ne_name(i));
                break;
            case FeatureGroup::REPLY: add(g, "reply"); break;
            case FeatureGroup::EMOT:
                for (const auto& [category, _] : resources.lexicon.emoticons) add(g, "emoticon:" + category);
                break;
            case FeatureGroup::URL: add(g, "hasUrl"); break;
            case FeatureGroup::MOOD:
                for (const char* m : kMoodNames) add(g, std::string("mood:") + m);
                break;
            case FeatureGroup::USER:
                for (const char* c : kUserColumns) add(g, c);
                break;
            case FeatureGroup::NEG:
                add(g, "averageNegation");
                add(g, "hasNegation");
                break;
            case FeatureGroup::LEX:
                add(g, "hasSlangOrCurseWord");
                add(g, "hasGoogleBadWord");
                add(g, "hasAcronyms");
                break;
            case FeatureGroup::SURF:
                for (const char* c : kSurfaceColumns) add(g, c);
                break;
            case FeatureGroup::REGEX:
                for (std::size_t i = 0; i < LexiconSet::kRegexCount; ++i) add(g, "regex:" + std::to_string(i));
                break;
            case FeatureGroup::AF_SS: add(g, "surpriseScore"); break;
            case FeatureGroup::AF_DS: add(g, "doubtScore"); break;
            case FeatureGroup::AF_NDS: add(g, "noDoubtScore"); break;
            case FeatureGroup::AF_SPS: add(g, "supportScore"); break;
            case FeatureGroup::AF_ITS: add(g, "initialTweetSim"); break;
            case FeatureGroup::AF_IQ: add(g, "isQuestion"); break;
        }
    }
    FeatureSchema schema(std::move(cols), dicts.fingerprint());
    schema.groups_ = enabled;  // a group may be enabled yet contribute no columns (empty vocabulary)
    return schema;
}

std::optional<std::size_t> FeatureSchema::find(std::string_view name) const {
    auto it = index_.find(std::string(name));
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

FeatureSchema FeatureSchema::without(GroupSet removed) const {
    std::vector<Column> kept;
    for (const auto& c : columns_) {
        if (!removed.contains(c.group)) kept.push_back(c);
    }
    FeatureSchema out(std::move(kept), dictionary_fingerprint_);
    out.groups_ = groups_ - removed;
    return out;
}

std::string FeatureSchema::to_tsv() const {
    std::string out;
    for (std::size_t i = 0; i < columns_.size(); ++i) {
        out += std::to_string(i);
        out += '\t';
        out += columns_[i].name;
        out += '\t';
        out += to_string(columns_[i].group);
        out += '\n';
    }
    return out;
}

FeatureSchema FeatureSchema::from_tsv(std::string_view tsv, std::uint64_t dictionary_fingerprint) {
    std::vector<Column> cols;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos < tsv.size()) {
        auto end = tsv.find('\n', pos);
        if (end == std::string_view::npos) end = tsv.size();
        const std::string_view line = tsv.substr(pos, end - pos);
        pos = end + 1;
        ++line_no;
        if (line.empty()) continue;
        const auto t1 = line.find('\t');
        const auto t2 = t1 == std::string_view::npos ? t1 : line.find('\t', t1 + 1);
        if (t2 == std::string_view::npos) throw ParseError("schema line needs index, name and group", line_no);
        if (line.substr(0, t1) != std::to_string(cols.size())) throw ParseError("schema indices must be consecutive", line_no);
        auto group = parse_group(line.substr(t2 + 1));
        if (!group) throw ParseError("unknown group '" + std::string(line.substr(t2 + 1)) + "'", line_no);
        cols.push_back({std::string(line.substr(t1 + 1, t2 - t1 - 1)), *group});
    }
    return FeatureSchema(std::move(cols), dictionary_fingerprint);
}

// ---------------------------------------------------------------------------
// FeatureVector

FeatureVector::FeatureVector(std::uint64_t fingerprint, std::size_t length, std::vector<Entry> entries,
                             std::optional<StanceLabel> label)
    : fingerprint_(fingerprint), length_(length), label_(label) {
    std::erase_if(entries, [](const Entry& e) { return e.value == 0.0; });
    std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) { return a.index < b.index; });
    for (std::size_t i = 0; i < entries.size(); ++i) {
        if (entries[i].index >= length) {
            throw Error("feature index " + std::to_string(entries[i].index) + " out of range " + std::to_string(length));
        }
        if (!std::isfinite(entries[i].value)) throw Error("non-finite value at feature " + std::to_string(entries[i].index));
        if (i > 0 && entries[i].index == entries[i - 1].index) {
            throw Error("duplicate feature index " + std::to_string(entries[i].index));
        }
    }
    entries_ = std::move(entries);
}

FeatureVector FeatureVector::from_dense(std::span<const double> values, std::uint64_t fingerprint,
                                        std::optional<StanceLabel> label) {
    std::vector<Entry> entries;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (values[i] != 0.0) entries.push_back({static_cast<std::uint32_t>(i), values[i]});
    }
    return FeatureVector(fingerprint, values.size(), std::move(entries), label);
}

double FeatureVector::value(std::size_t index) const noexcept {
    auto it = std::lower_bound(entries_.begin(), entries_.end(), index,
                               [](const Entry& e, std::size_t i) { return e.index < i; });
    return (it != entries_.end() && it->index == index) ? it->value : 0.0;
}

std::string format_sparse(const FeatureVector& v) {
    std::string out;
    char buf[64];
    for (const auto& e : v.entries()) {
        if (!out.empty()) out += ' ';
        out += std::to_string(e.index);
        out += ':';
        auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, e.value);
        out.append(buf, ptr);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Extraction

namespace {

struct Prepared {
    std::vector<text::Token> tokens;
    std::vector<text::PosTag> tags;
    text::EntityMatch entities;
};

Prepared prepare(std::string_view text_in, const ResourceBundle& r) {
    Prepared p;
    p.tokens = text::tokenize(text_in, r.lexicon.all_emoticons);
    p.tags = text::pos_tag(p.tokens);
    p.entities = text::match_entities(p.tokens, r.gazetteers);
    return p;
}

std::vector<std::string> content_of(const Prepared& p, const ResourceBundle& r) {
    std::vector<std::string> out;
    for (std::size_t i = 0; i < p.tokens.size(); ++i) {
        const auto& t = p.tokens[i];
        if (t.kind == text::TokenKind::Url || p.entities.covered[i] || r.lexicon.acronyms.count(t.lower)) continue;
        out.push_back(t.lower);
    }
    return out;
}

std::size_t utf8_length(std::string_view s) {
    return static_cast<std::size_t>(std::count_if(s.begin(), s.end(), [](char c) {
        return (static_cast<unsigned char>(c) & 0xc0) != 0x80;
    }));
}

std::size_t count_char(std::string_view s, char c) { return static_cast<std::size_t>(std::count(s.begin(), s.end(), c)); }

// Runs of three or more '.' plus U+2026 characters.
std::size_t count_ellipses(std::string_view s) {
    std::size_t n = 0;
    for (std::size_t i = 0; i < s.size();) {
        if (s[i] == '.') {
            std::size_t j = i;
            while (j < s.size() && s[j] == '.') ++j;
            if (j - i >= 3) ++n;
            i = j;
        } else if (s.compare(i, 3, "\xe2\x80\xa6") == 0) {
            ++n;
            i += 3;
        } else {
            ++i;
        }
    }
    return n;
}

double flag(bool b) { return b ? 1.0 : 0.0; }

// Every content-derived feature that does not need the dictionaries.
void content_fixed(const Prepared& p, std::string_view raw, const ResourceBundle& r, NamedValues& out) {
    using text::TokenKind;
    const auto& lex = r.lexicon;

    std::set<std::size_t> brown;
    for (const auto& t : p.tokens) {
        if (auto id = r.brown.cluster(t.lower)) brown.insert(*id);
    }
    for (std::size_t id : brown) out.push_back({brown_name(id), FeatureGroup::BROWN, 1.0});

    out.push_back({"sentiment", FeatureGroup::SENT, static_cast<double>(text::sentiment_score(p.tokens, lex.sentiment))});

    for (std::size_t i = 0; i < text::kEntityClassCount; ++i) {
        out.push_back({ne_name(i), FeatureGroup::NE, flag(p.entities.flags[i])});
    }

    std::set<std::string> categories;
    bool url = false, slang = false, bad = false, acronym = false;
    std::size_t word_count = 0, word_chars = 0;
    for (const auto& t : p.tokens) {
        if (t.kind == TokenKind::Emoticon) {
            for (const auto& [category, members] : lex.emoticons) {
                if (members.count(t.surface)) categories.insert(category);
            }
        }
        url = url || t.kind == TokenKind::Url;
        if (t.kind == TokenKind::Word) {
            ++word_count;
            word_chars += utf8_length(t.surface);
            slang = slang || lex.slang.count(t.lower);
            bad = bad || lex.google_bad.count(t.lower);
            acronym = acronym || lex.acronyms.count(t.lower);
        }
    }
    for (const auto& [category, _] : lex.emoticons) {
        out.push_back({"emoticon:" + category, FeatureGroup::EMOT, flag(categories.count(category))});
    }
    out.push_back({"hasUrl", FeatureGroup::URL, flag(url)});
    out.push_back({"hasSlangOrCurseWord", FeatureGroup::LEX, flag(slang)});
    out.push_back({"hasGoogleBadWord", FeatureGroup::LEX, flag(bad)});
    out.push_back({"hasAcronyms", FeatureGroup::LEX, flag(acronym)});

    const std::size_t questions = count_char(raw, '?');
    const std::size_t exclamations = count_char(raw, '!');
    const std::size_t ellipses = count_ellipses(raw);
    const double avg_len = word_count ? static_cast<double>(word_chars) / static_cast<double>(word_count) : 0.0;
    out.push_back({"averageWordLength", FeatureGroup::SURF, avg_len});
    out.push_back({"hasQuestionMark", FeatureGroup::SURF, flag(questions > 0)});
    out.push_back({"hasExclamationMark", FeatureGroup::SURF, flag(exclamations > 0)});
    out.push_back({"hasDotDotDot", FeatureGroup::SURF, flag(ellipses > 0)});
    out.push_back({"numberOfQuestionMark", FeatureGroup::SURF, static_cast<double>(questions)});
    out.push_back({"numberOfExclamationMark", FeatureGroup::SURF, static_cast<double>(exclamations)});
    out.push_back({"numberOfDotDotDot", FeatureGroup::SURF, static_cast<double>(ellipses)});

    std::string flat(raw);
    std::replace(flat.begin(), flat.end(), '\n', ' ');
    std::replace(flat.begin(), flat.end(), '\r', ' ');
    for (std::size_t i = 0; i < lex.regexes.size(); ++i) {
        out.push_back({"regex:" + std::to_string(i), FeatureGroup::REGEX,
                       flag(std::regex_search(flat, lex.regexes[i].compiled))});
    }

    const auto neg = text::negation_stats(p.tokens);
    out.push_back({"averageNegation", FeatureGroup::NEG, neg.average});
    out.push_back({"hasNegation", FeatureGroup::NEG, flag(neg.has_negation)});
}

std::array<double, 5> mood_scores(const Vector& content, const ResourceBundle& r) {
    std::array<double, 5> out{};
    for (std::size_t i = 0; i < out.size(); ++i) {
        out[i] = cosine(content, cumulative_vector(r.lexicon.moods[i].words, r.embeddings));
    }
    return out;
}

std::string normalize_ws(std::string_view s) {
    std::string out;
    std::istringstream in{std::string(s)};
    for (std::string w; in >> w;) {
        if (!out.empty()) out += ' ';
        out += w;
    }
    return out;
}

AfScores af_scores(const Prepared& p, const TweetRecord& t, const Thread& thread, const ResourceBundle& r) {
    const auto& lex = r.lexicon;
    const Vector content = cumulative_vector(content_of(p, r), r.embeddings);
    AfScores s;
    s.surprise = cosine(content, cumulative_vector(lex.surprise.words, r.embeddings));
    s.doubt = cosine(content, cumulative_vector(lex.doubt.words, r.embeddings));
    s.no_doubt = cosine(content, cumulative_vector(lex.no_doubt.words, r.embeddings));
    s.support = cosine(content, cumulative_vector(lex.support.words, r.embeddings));

    if (t.tweet_id == thread.source.tweet_id || is_retweet_of(t.text, thread.source.text)) {
        s.initial_sim = 1.0;
    } else {
        const Vector source = cumulative_vector(content_tokens(thread.source.text, r), r.embeddings);
        s.initial_sim = cosine(content, source);
    }

    for (const auto& tok : p.tokens) {
        if (tok.kind != text::TokenKind::Word) continue;
        s.is_question = lex.interrogatives.count(tok.lower) > 0;
        break;
    }
    return s;
}

void user_values(const TweetRecord& t, Timestamp now, NamedValues& out) {
    const auto& u = t.user;
    const double active_days = static_cast<double>(std::max<std::int64_t>(1, days_between(u.account_created, now)));
    std::size_t description_words = 0;
    if (u.description) {
        std::istringstream in(*u.description);
        for (std::string w; in >> w;) ++description_words;
    }
    out.push_back({"originality", FeatureGroup::USER, static_cast<double>(u.statuses_count)});
    out.push_back({"isVerified", FeatureGroup::USER, flag(u.verified)});
    out.push_back({"followers", FeatureGroup::USER, static_cast<double>(u.followers)});
    out.push_back({"role", FeatureGroup::USER,
                   static_cast<double>(u.followers) / static_cast<double>(std::max<std::int64_t>(1, u.followees))});
    out.push_back({"engagement", FeatureGroup::USER, static_cast<double>(u.statuses_count) / active_days});
    out.push_back({"favourites", FeatureGroup::USER, static_cast<double>(u.favourites_count) / active_days});
    out.push_back({"hasGeoEnabled", FeatureGroup::USER, flag(u.geo_enabled)});
    out.push_back({"hasDescription", FeatureGroup::USER, flag(description_words > 0)});
    out.push_back({"descriptionLength", FeatureGroup::USER, static_cast<double>(description_words)});
    out.push_back({"reply", FeatureGroup::REPLY, flag(t.in_reply_to.has_value())});
}

}  // namespace

std::vector<std::string> content_tokens(std::string_view text_in, const ResourceBundle& resources) {
    return content_of(prepare(text_in, resources), resources);
}

bool is_retweet_of(std::string_view text_in, std::string_view source) {
    const std::string tweet = normalize_ws(text_in);
    const std::string src = normalize_ws(source);
    if (tweet == src) return true;
    if (tweet.rfind("RT @", 0) != 0) return false;
    const auto colon = tweet.find(':');
    if (colon == std::string::npos) return false;
    // Handle must be a single token: "RT @user:"
    if (tweet.find(' ', 4) < colon) return false;
    std::string_view rest(tweet);
    rest.remove_prefix(colon + 1);
    while (!rest.empty() && rest.front() == ' ') rest.remove_prefix(1);
    return rest == src;
}

NamedValues extract_content(const TweetRecord& t, const FeatureDictionaries& dicts, const ResourceBundle& resources) {
    const Prepared p = prepare(t.text, resources);
    NamedValues out;
    std::map<std::string, std::size_t> bow, posng;
    for (auto& w : word_terms(p.tokens)) {
        if (dicts.has_bow(w)) ++bow[w];
    }
    for (auto& g : pos_ngrams(p.tags)) {
        if (dicts.has_posng(g)) ++posng[g];
    }
    for (const auto& [w, n] : bow) out.push_back({"bow:" + w, FeatureGroup::BOW, static_cast<double>(n)});
    for (const auto& [g, n] : posng) out.push_back({"pos:" + g, FeatureGroup::POSNG, static_cast<double>(n)});
    content_fixed(p, t.text, resources, out);
    return out;
}

NamedValues extract_user(const TweetRecord& t, Timestamp now) {
    NamedValues out;
    user_values(t, now, out);
    return out;
}

std::array<double, 5> extract_mood(const TweetRecord& t, const ResourceBundle& resources) {
    return mood_scores(cumulative_vector(content_tokens(t.text, resources), resources.embeddings), resources);
}

AfScores extract_af(const TweetRecord& t, const Thread& thread, const ResourceBundle& resources) {
    return af_scores(prepare(t.text, resources), t, thread, resources);
}

TweetAnalysis analyze(const TweetRecord& t, const Thread& thread, const ResourceBundle& resources, Timestamp now) {
    const Prepared p = prepare(t.text, resources);
    TweetAnalysis a;
    a.tweet_id = t.tweet_id;
    a.label = t.label;
    a.bow_terms = word_terms(p.tokens);
    a.pos_ngrams = pos_ngrams(p.tags);
    content_fixed(p, t.text, resources, a.fixed);
    user_values(t, now, a.fixed);

    const Vector content = cumulative_vector(content_of(p, resources), resources.embeddings);
    const auto moods = mood_scores(content, resources);
    for (std::size_t i = 0; i < moods.size(); ++i) {
        a.fixed.push_back({std::string("mood:") + kMoodNames[i], FeatureGroup::MOOD, moods[i]});
    }
    const AfScores af = af_scores(p, t, thread, resources);
    a.fixed.push_back({"surpriseScore", FeatureGroup::AF_SS, af.surprise});
    a.fixed.push_back({"doubtScore", FeatureGroup::AF_DS, af.doubt});
    a.fixed.push_back({"noDoubtScore", FeatureGroup::AF_NDS, af.no_doubt});
    a.fixed.push_back({"supportScore", FeatureGroup::AF_SPS, af.support});
    a.fixed.push_back({"initialTweetSim", FeatureGroup::AF_ITS, af.initial_sim});
    a.fixed.push_back({"isQuestion", FeatureGroup::AF_IQ, flag(af.is_question)});
    return a;
}

FeatureVector assemble(const TweetAnalysis& analysis, const FeatureDictionaries& dicts, const FeatureSchema& schema) {
    if (schema.dictionary_fingerprint() != dicts.fingerprint()) {
        throw SchemaMismatch("schema was built from different feature dictionaries");
    }
    std::vector<FeatureVector::Entry> entries;
    auto put = [&](std::string_view name, double value) {
        auto idx = schema.find(name);
        if (!idx) throw SchemaMismatch("schema has no column '" + std::string(name) + "'");
        entries.push_back({static_cast<std::uint32_t>(*idx), value});
    };

    if (schema.groups().contains(FeatureGroup::BOW)) {
        std::map<std::string, std::size_t> counts;
        for (const auto& w : analysis.bow_terms) {
            if (dicts.has_bow(w)) ++counts[w];
        }
        for (const auto& [w, n] : counts) put("bow:" + w, static_cast<double>(n));
    }
    if (schema.groups().contains(FeatureGroup::POSNG)) {
        std::map<std::string, std::size_t> counts;
        for (const auto& g : analysis.pos_ngrams) {
            if (dicts.has_posng(g)) ++counts[g];
        }
        for (const auto& [g, n] : counts) put("pos:" + g, static_cast<double>(n));
    }
    for (const auto& nv : analysis.fixed) {
        if (nv.value == 0.0 || !schema.groups().contains(nv.group)) continue;
        put(nv.name, nv.value);
    }
    return FeatureVector(schema.fingerprint(), schema.size(), std::move(entries), analysis.label);
}

FeatureVector assemble(const TweetRecord& t, const Thread& thread, const FeatureDictionaries& dicts,
                       const ResourceBundle& resources, const FeatureSchema& schema, Timestamp now) {
    return assemble(analyze(t, thread, resources, now), dicts, schema);
}

}  // namespace stance
