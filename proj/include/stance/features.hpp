#pragma once

#include <bitset>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "stance/corpus.hpp"
#include "stance/resources.hpp"

namespace stance {

enum class FeatureGroup : std::uint8_t {
    BOW, BROWN, POSNG, SENT, NE, REPLY, EMOT, URL, MOOD, USER, NEG, LEX, SURF, REGEX,
    AF_SS, AF_DS, AF_NDS, AF_SPS, AF_ITS, AF_IQ
};

inline constexpr std::size_t kGroupCount = 20;

std::string_view to_string(FeatureGroup g) noexcept;
std::optional<FeatureGroup> parse_group(std::string_view name) noexcept;

class GroupSet {
public:
    GroupSet() = default;
    GroupSet(std::initializer_list<FeatureGroup> groups) {
        for (auto g : groups) insert(g);
    }

    static GroupSet all() { return GroupSet(std::bitset<kGroupCount>().set()); }
    /// The six confidence groups AF_SS .. AF_IQ.
    static GroupSet af();

    /// Comma-separated group tags applied left to right; `all` and `AF` expand and a
    /// leading `-` removes. Throws ConfigError on unknown tags.
    static GroupSet parse(std::string_view spec);

    bool contains(FeatureGroup g) const noexcept { return bits_.test(static_cast<std::size_t>(g)); }
    void insert(FeatureGroup g) noexcept { bits_.set(static_cast<std::size_t>(g)); }
    void erase(FeatureGroup g) noexcept { bits_.reset(static_cast<std::size_t>(g)); }
    bool empty() const noexcept { return bits_.none(); }
    std::size_t size() const noexcept { return bits_.count(); }

    GroupSet operator-(const GroupSet& other) const { return GroupSet(bits_ & ~other.bits_); }
    GroupSet operator|(const GroupSet& other) const { return GroupSet(bits_ | other.bits_); }
    GroupSet operator&(const GroupSet& other) const { return GroupSet(bits_ & other.bits_); }
    bool operator==(const GroupSet&) const = default;

    std::vector<FeatureGroup> list() const;
    /// `AF` when exactly the AF groups, otherwise tags joined with '+'.
    std::string label() const;

private:
    explicit GroupSet(std::bitset<kGroupCount> bits) : bits_(bits) {}
    std::bitset<kGroupCount> bits_;
};

// ---------------------------------------------------------------------------

/// BOW and POS-n-gram vocabularies built from training tweets only.
class FeatureDictionaries {
public:
    static constexpr std::size_t kMinCount = 2;

    FeatureDictionaries() = default;
    FeatureDictionaries(std::vector<std::string> bow, std::vector<std::string> posng, std::vector<std::string> provenance);

    const std::vector<std::string>& bow_vocab() const noexcept { return bow_; }
    const std::vector<std::string>& posng_vocab() const noexcept { return posng_; }
    /// Sorted rumour ids whose tweets built the vocabularies.
    const std::vector<std::string>& provenance() const noexcept { return provenance_; }

    bool has_bow(const std::string& term) const { return bow_index_.count(term) > 0; }
    bool has_posng(const std::string& gram) const { return posng_index_.count(gram) > 0; }

    std::uint64_t fingerprint() const noexcept { return fingerprint_; }

private:
    std::vector<std::string> bow_, posng_, provenance_;
    std::unordered_map<std::string, std::size_t> bow_index_, posng_index_;
    std::uint64_t fingerprint_ = 0;
};

/// Throws Error on an empty training set.
FeatureDictionaries build_dictionaries(std::span<const TweetRecord> training, const ResourceBundle& resources);

// ---------------------------------------------------------------------------

struct Column {
    std::string name;
    FeatureGroup group;
};

/// Ordered, named columns tagged with their group.
class FeatureSchema {
public:
    FeatureSchema() = default;
    FeatureSchema(std::vector<Column> columns, std::uint64_t dictionary_fingerprint);

    /// Columns for every enabled group, in group order.
    static FeatureSchema build(const FeatureDictionaries& dicts, const ResourceBundle& resources, GroupSet enabled);

    std::size_t size() const noexcept { return columns_.size(); }
    const std::vector<Column>& columns() const noexcept { return columns_; }
    const Column& column(std::size_t i) const { return columns_.at(i); }
    std::optional<std::size_t> find(std::string_view name) const;

    GroupSet groups() const noexcept { return groups_; }
    std::uint64_t fingerprint() const noexcept { return fingerprint_; }
    std::uint64_t dictionary_fingerprint() const noexcept { return dictionary_fingerprint_; }

    FeatureSchema without(GroupSet removed) const;

    /// `index<TAB>name<TAB>group` per line; the fingerprint hashes this text.
    std::string to_tsv() const;
    static FeatureSchema from_tsv(std::string_view tsv, std::uint64_t dictionary_fingerprint);

private:
    std::vector<Column> columns_;
    std::unordered_map<std::string, std::size_t> index_;
    GroupSet groups_;
    std::uint64_t fingerprint_ = 0;
    std::uint64_t dictionary_fingerprint_ = 0;
};

/// Sparse vector bound to a schema by fingerprint. Entries are sorted by
/// index, never zero, always finite.
class FeatureVector {
public:
    struct Entry {
        std::uint32_t index;
        double value;
        bool operator==(const Entry&) const = default;
    };

    FeatureVector() = default;
    /// Sorts entries, drops zeros; throws Error on duplicates, out-of-range
    /// indices or non-finite values.
    FeatureVector(std::uint64_t fingerprint, std::size_t length, std::vector<Entry> entries,
                  std::optional<StanceLabel> label = std::nullopt);

    static FeatureVector from_dense(std::span<const double> values, std::uint64_t fingerprint = 0,
                                    std::optional<StanceLabel> label = std::nullopt);

    std::uint64_t fingerprint() const noexcept { return fingerprint_; }
    std::size_t length() const noexcept { return length_; }
    std::span<const Entry> entries() const noexcept { return entries_; }
    const std::optional<StanceLabel>& label() const noexcept { return label_; }
    double value(std::size_t index) const noexcept;

    bool operator==(const FeatureVector&) const = default;

private:
    std::uint64_t fingerprint_ = 0;
    std::size_t length_ = 0;
    std::vector<Entry> entries_;
    std::optional<StanceLabel> label_;
};

/// `idx:val idx:val ...` (shortest round-trip doubles).
std::string format_sparse(const FeatureVector& v);

// ---------------------------------------------------------------------------

struct NamedValue {
    std::string name;
    FeatureGroup group;
    double value;
};

using NamedValues = std::vector<NamedValue>;

struct AfScores {
    double surprise = 0.0;     // SS
    double doubt = 0.0;        // DS
    double no_doubt = 0.0;     // NDS
    double support = 0.0;      // SPS
    double initial_sim = 0.0;  // ITS
    bool is_question = false;  // IQ
};

/// Lowercased tokens of the tweet minus URLs, acronyms and gazetteer entities.
std::vector<std::string> content_tokens(std::string_view text, const ResourceBundle& resources);

/// BOW counts, Brown indicators, POS-n-gram counts, sentiment, NE flags,
/// emoticon categories, URL, lexicon flags, surface statistics, regexes, negation.
NamedValues extract_content(const TweetRecord& t, const FeatureDictionaries& dicts, const ResourceBundle& resources);

/// USER group plus the REPLY flag. `now` pins the activity-day computation.
NamedValues extract_user(const TweetRecord& t, Timestamp now);

/// Cosine of the content vector against each mood list, in kMoodNames order.
std::array<double, 5> extract_mood(const TweetRecord& t, const ResourceBundle& resources);

AfScores extract_af(const TweetRecord& t, const Thread& thread, const ResourceBundle& resources);

/// True when `text` is `source` (whitespace-normalized) or `RT @handle: source`.
bool is_retweet_of(std::string_view text, std::string_view source);

/// Dictionary-independent analysis of one tweet, reusable across folds.
struct TweetAnalysis {
    std::string tweet_id;
    std::optional<StanceLabel> label;
    std::vector<std::string> bow_terms;   // with multiplicity
    std::vector<std::string> pos_ngrams;  // with multiplicity
    NamedValues fixed;                    // every other group
};

TweetAnalysis analyze(const TweetRecord& t, const Thread& thread, const ResourceBundle& resources, Timestamp now);

/// Maps an analysis onto the schema. Throws SchemaMismatch when the schema was
/// built from other dictionaries or lacks a column of an enabled group.
FeatureVector assemble(const TweetAnalysis& analysis, const FeatureDictionaries& dicts, const FeatureSchema& schema);

FeatureVector assemble(const TweetRecord& t, const Thread& thread, const FeatureDictionaries& dicts,
                       const ResourceBundle& resources, const FeatureSchema& schema, Timestamp now);

}  // namespace stance
