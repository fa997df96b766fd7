#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <regex>
#include <span>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "stance/text.hpp"

namespace stance {

using Vector = std::vector<double>;

/// Word -> dense vector; keys are lowercased at load time.
class EmbeddingTable {
public:
    EmbeddingTable() = default;
    explicit EmbeddingTable(std::size_t dimension) : dim_(dimension) {}

    std::size_t dimension() const noexcept { return dim_; }
    std::size_t size() const noexcept { return table_.size(); }

    /// Lookup is case-normalized.
    const Vector* find(std::string_view word) const;

    /// Inserts or replaces; returns false when the word was already present.
    bool insert(std::string_view word, Vector v);

private:
    std::size_t dim_ = 0;
    std::unordered_map<std::string, Vector> table_;
};

/// Plain-text word2vec layout (`word v1 ... vd`); an optional `<count> <dim>`
/// header line is skipped. Duplicate words: last entry wins, with a warning.
EmbeddingTable parse_embeddings(std::istream& in);
EmbeddingTable load_embeddings(const std::filesystem::path& path);

class BrownTable {
public:
    static constexpr std::size_t kClusterCount = 1000;

    std::optional<std::size_t> cluster(std::string_view word) const;
    std::size_t size() const noexcept { return words_.size(); }
    std::size_t distinct_clusters() const noexcept { return clusters_; }

    friend BrownTable parse_brown(std::istream& in);

private:
    std::unordered_map<std::string, std::size_t> words_;
    std::size_t clusters_ = 0;
};

/// `bitstring<TAB>word<TAB>count` lines; bitstrings become dense ids in order of
/// first appearance. Throws ParseError on >1000 clusters or a word listed under
/// two bitstrings.
BrownTable parse_brown(std::istream& in);
BrownTable load_brown(const std::filesystem::path& path);

/// Mean embedding of the in-vocabulary tokens; zero vector when none are.
Vector cumulative_vector(std::span<const std::string> tokens, const EmbeddingTable& table);

/// Cosine similarity, 0 when either norm is 0. Throws Error on length mismatch.
double cosine(std::span<const double> u, std::span<const double> v);

struct WordList {
    std::string name;
    std::vector<std::string> words;  // lowercased, file order
};

struct RegexPattern {
    std::string source;
    std::regex compiled;
};

struct LexiconSet {
    static constexpr std::size_t kRegexCount = 10;

    WordList surprise, doubt, no_doubt, support;
    std::array<WordList, 5> moods;  // amused, disappointed, indignant, satisfied, worried
    text::SentimentLexicon sentiment;
    std::unordered_set<std::string> interrogatives;
    std::map<std::string, std::unordered_set<std::string>> emoticons;  // category -> emoticons
    text::EmoticonSet all_emoticons;
    std::unordered_set<std::string> slang;
    std::unordered_set<std::string> google_bad;
    std::unordered_set<std::string> acronyms;
    std::vector<RegexPattern> regexes;
};

inline constexpr std::array<const char*, 5> kMoodNames{"amused", "disappointed", "indignant", "satisfied", "worried"};

/// Everything a featurizer reads; immutable after load.
struct ResourceBundle {
    std::filesystem::path root;
    EmbeddingTable embeddings;
    BrownTable brown;
    LexiconSet lexicon;
    text::Gazetteers gazetteers;
    std::uint64_t content_hash = 0;
};

/// Loads the bundle layout:
///   embeddings.txt, brown.tsv, regex.txt,
///   lists/{surprise,doubt,nodoubt,support,amused,disappointed,indignant,
///          satisfied,worried,interrogatives}.txt, lists/sentiment.tsv,
///   dicts/{emoticons.tsv,slang.txt,google_bad.txt,acronyms.txt},
///   gazetteers/{person,org,location}.txt
/// Throws Error naming the first missing or malformed file.
ResourceBundle load_bundle(const std::filesystem::path& dir);

/// FNV-1a over every regular file (sorted relative path + bytes).
std::uint64_t hash_directory(const std::filesystem::path& dir);

/// Reads one-word-per-line lists (lowercased, blanks and `#` comments skipped).
std::vector<std::string> read_word_list(const std::filesystem::path& path);

}  // namespace stance
