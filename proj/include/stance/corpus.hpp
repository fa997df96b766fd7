#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "stance/common.hpp"
#include "stance/timeutil.hpp"

namespace stance {

struct UserStats {
    std::int64_t statuses_count = 0;
    bool verified = false;
    std::int64_t followers = 0;
    std::int64_t followees = 0;
    std::int64_t favourites_count = 0;
    Timestamp account_created = 0;
    bool geo_enabled = false;
    std::optional<std::string> description;

    bool operator==(const UserStats&) const = default;
};

struct TweetRecord {
    std::string tweet_id;
    std::string text;
    Timestamp created_at = 0;
    std::optional<std::string> in_reply_to;
    bool is_source = false;
    std::string rumour_id;
    std::string event_id;
    UserStats user;
    std::optional<StanceLabel> label;

    bool operator==(const TweetRecord&) const = default;
};

/// A rumour's source tweet and its replies, ordered by (created_at, tweet_id).
struct Thread {
    TweetRecord source;
    std::vector<TweetRecord> replies;
};

/// Validated, immutable collection of tweets with rumour and event indexes.
class Dataset {
public:
    Dataset() = default;

    /// Validates the records, repairs dangling replies, and builds the indexes.
    /// Throws ValidationError.
    Dataset(std::string name, std::vector<TweetRecord> tweets);

    const std::string& name() const noexcept { return name_; }
    const std::vector<TweetRecord>& tweets() const noexcept { return tweets_; }
    std::size_t size() const noexcept { return tweets_.size(); }

    /// rumour_id -> tweet ids, in dataset order.
    const std::map<std::string, std::vector<std::string>>& rumour_index() const noexcept { return rumours_; }
    /// event_id -> sorted rumour ids.
    const std::map<std::string, std::vector<std::string>>& event_index() const noexcept { return events_; }

    const TweetRecord* find(std::string_view tweet_id) const;

    /// Keeps only the tweets of the given rumours (order preserved).
    Dataset subset(const std::vector<std::string>& rumour_ids, std::string name) const;

    /// Number of dangling in_reply_to references reattached to the rumour source at load.
    std::size_t repaired_replies() const noexcept { return repaired_; }

    /// Latest created_at over all tweets (0 when empty).
    Timestamp latest_timestamp() const noexcept;

private:
    std::string name_;
    std::vector<TweetRecord> tweets_;
    std::unordered_map<std::string, std::size_t> by_id_;
    std::map<std::string, std::vector<std::string>> rumours_;
    std::map<std::string, std::vector<std::string>> events_;
    std::size_t repaired_ = 0;
};

/// Per-label counts over labelled tweets, indexed by StanceLabel.
std::array<std::size_t, kNumLabels> label_counts(const Dataset& d);

// JSONL ingestion schema -------------------------------------------------

/// Parses one JSONL object. Throws ParseError (line number attached by callers).
TweetRecord parse_tweet_json(std::string_view line, std::size_t line_no = 0);
std::string tweet_to_json(const TweetRecord& t);

/// Parses a JSONL stream. Blank lines are skipped. Throws ParseError / ValidationError.
Dataset parse_dataset(std::istream& in, std::string name);
Dataset load_dataset(const std::filesystem::path& path);

void write_dataset(const Dataset& d, std::ostream& out);
void save_dataset(const Dataset& d, const std::filesystem::path& path);

/// Merges datasets; tweet ids must stay unique.
Dataset merge_datasets(const std::vector<Dataset>& parts, std::string name);

/// One thread per rumour, ordered by rumour_id. Throws ValidationError when a
/// rumour has no source or more than one.
std::vector<Thread> build_threads(const Dataset& d);

/// Reads a PHEME-layout export:
///   <root>/<event>/rumours/<thread>/source-tweet/<id>.json
///   <root>/<event>/rumours/<thread>/reactions/<id>.json
///   <root>/annotations.jsonl
/// Tweet files use the Twitter API object layout. Annotation lines carry
/// `tweetid` plus one of `stance`, `support` or `responsetype-vs-source`.
/// Unknown annotation values (e.g. "underspecified") leave the tweet unlabelled
/// and are counted in `dropped_labels`.
struct IngestResult {
    Dataset dataset;
    std::size_t dropped_labels = 0;
};
IngestResult ingest_pheme(const std::filesystem::path& root, std::string name);

}  // namespace stance
