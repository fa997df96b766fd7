#include "stance/corpus.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace stance {

using nlohmann::json;

namespace {

std::int64_t non_negative(const json& j, const char* key) {
    const auto& v = j.at(key);
    if (!v.is_number_integer()) throw ParseError(std::string("field '") + key + "' must be an integer");
    const auto n = v.get<std::int64_t>();
    if (n < 0) throw ParseError(std::string("field '") + key + "' must be non-negative");
    return n;
}

std::optional<std::string> optional_string(const json& j, const char* key) {
    auto it = j.find(key);
    if (it == j.end() || it->is_null()) return std::nullopt;
    if (!it->is_string()) throw ParseError(std::string("field '") + key + "' must be a string or null");
    return it->get<std::string>();
}

std::string required_string(const json& j, const char* key) {
    const auto& v = j.at(key);
    if (!v.is_string()) throw ParseError(std::string("field '") + key + "' must be a string");
    return v.get<std::string>();
}

bool required_bool(const json& j, const char* key) {
    const auto& v = j.at(key);
    if (!v.is_boolean()) throw ParseError(std::string("field '") + key + "' must be a boolean");
    return v.get<bool>();
}

}  // namespace

// ---------------------------------------------------------------------------
// Dataset

Dataset::Dataset(std::string name, std::vector<TweetRecord> tweets) : name_(std::move(name)), tweets_(std::move(tweets)) {
    std::map<std::string, std::string> rumour_event;
    std::map<std::string, std::string> rumour_source;
    for (std::size_t i = 0; i < tweets_.size(); ++i) {
        const auto& t = tweets_[i];
        if (t.tweet_id.empty()) throw ValidationError("empty tweet_id at record " + std::to_string(i + 1));
        if (!by_id_.emplace(t.tweet_id, i).second) throw ValidationError("duplicate tweet_id '" + t.tweet_id + "'");
        if (t.rumour_id.empty()) throw ValidationError("tweet '" + t.tweet_id + "' has an empty rumour_id");
        if (t.is_source == t.in_reply_to.has_value()) {
            throw ValidationError("tweet '" + t.tweet_id + "': is_source must hold exactly when in_reply_to is absent");
        }
        const auto& u = t.user;
        if (u.statuses_count < 0 || u.followers < 0 || u.followees < 0 || u.favourites_count < 0) {
            throw ValidationError("tweet '" + t.tweet_id + "': negative user count");
        }
        if (u.account_created > t.created_at) {
            throw ValidationError("tweet '" + t.tweet_id + "': account created after the tweet");
        }
        auto [it, inserted] = rumour_event.emplace(t.rumour_id, t.event_id);
        if (!inserted && it->second != t.event_id) {
            throw ValidationError("rumour '" + t.rumour_id + "' spans events '" + it->second + "' and '" + t.event_id + "'");
        }
        if (t.is_source) rumour_source.emplace(t.rumour_id, t.tweet_id);
    }

    for (auto& t : tweets_) {
        if (!t.in_reply_to || by_id_.count(*t.in_reply_to)) continue;
        auto src = rumour_source.find(t.rumour_id);
        if (src == rumour_source.end()) continue;  // build_threads reports the missing source
        log::warn("tweet '" + t.tweet_id + "' replies to missing '" + *t.in_reply_to + "'; reattached to source '" +
                  src->second + "'");
        t.in_reply_to = src->second;
        ++repaired_;
    }

    for (const auto& t : tweets_) rumours_[t.rumour_id].push_back(t.tweet_id);
    for (const auto& [rumour, event] : rumour_event) events_[event].push_back(rumour);
}

const TweetRecord* Dataset::find(std::string_view tweet_id) const {
    auto it = by_id_.find(std::string(tweet_id));
    return it == by_id_.end() ? nullptr : &tweets_[it->second];
}

Dataset Dataset::subset(const std::vector<std::string>& rumour_ids, std::string name) const {
    const std::set<std::string> keep(rumour_ids.begin(), rumour_ids.end());
    std::vector<TweetRecord> out;
    for (const auto& t : tweets_) {
        if (keep.count(t.rumour_id)) out.push_back(t);
    }
    return Dataset(std::move(name), std::move(out));
}

Timestamp Dataset::latest_timestamp() const noexcept {
    Timestamp latest = 0;
    for (const auto& t : tweets_) latest = std::max(latest, t.created_at);
    return latest;
}

std::array<std::size_t, kNumLabels> label_counts(const Dataset& d) {
    std::array<std::size_t, kNumLabels> counts{};
    for (const auto& t : d.tweets()) {
        if (t.label) ++counts[index_of(*t.label)];
    }
    return counts;
}

// ---------------------------------------------------------------------------
// JSONL

TweetRecord parse_tweet_json(std::string_view line, std::size_t line_no) {
    json j;
    try {
        j = json::parse(line);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("malformed JSON: ") + e.what(), line_no);
    }
    try {
        if (!j.is_object()) throw ParseError("record is not a JSON object");
        TweetRecord t;
        t.tweet_id = required_string(j, "tweet_id");
        t.text = required_string(j, "text");
        t.created_at = parse_rfc3339(required_string(j, "created_at"));
        t.in_reply_to = optional_string(j, "in_reply_to");
        t.is_source = !t.in_reply_to.has_value();
        t.rumour_id = required_string(j, "rumour_id");
        t.event_id = required_string(j, "event_id");
        if (auto label = optional_string(j, "label")) {
            t.label = parse_label(*label);
            if (!t.label) throw ParseError("unknown label '" + *label + "'");
        }
        const json& u = j.at("user");
        if (!u.is_object()) throw ParseError("field 'user' must be an object");
        t.user.statuses_count = non_negative(u, "statuses_count");
        t.user.verified = required_bool(u, "verified");
        t.user.followers = non_negative(u, "followers");
        t.user.followees = non_negative(u, "followees");
        t.user.favourites_count = non_negative(u, "favourites_count");
        t.user.account_created = parse_rfc3339(required_string(u, "account_created"));
        t.user.geo_enabled = required_bool(u, "geo_enabled");
        t.user.description = optional_string(u, "description");
        return t;
    } catch (const ParseError& e) {
        if (e.line() || !line_no) throw;
        throw ParseError(e.what(), line_no);
    } catch (const json::exception& e) {
        throw ParseError(std::string("invalid record: ") + e.what(), line_no);
    }
}

std::string tweet_to_json(const TweetRecord& t) {
    auto opt = [](const std::optional<std::string>& s) { return s ? json(*s) : json(nullptr); };
    nlohmann::ordered_json user{{"statuses_count", t.user.statuses_count},
                                {"verified", t.user.verified},
                                {"followers", t.user.followers},
                                {"followees", t.user.followees},
                                {"favourites_count", t.user.favourites_count},
                                {"account_created", format_rfc3339(t.user.account_created)},
                                {"geo_enabled", t.user.geo_enabled},
                                {"description", opt(t.user.description)}};
    nlohmann::ordered_json j{{"tweet_id", t.tweet_id},
                             {"text", t.text},
                             {"created_at", format_rfc3339(t.created_at)},
                             {"in_reply_to", opt(t.in_reply_to)},
                             {"rumour_id", t.rumour_id},
                             {"event_id", t.event_id},
                             {"label", t.label ? json(std::string(to_string(*t.label))) : json(nullptr)},
                             {"user", user}};
    return j.dump();
}

Dataset parse_dataset(std::istream& in, std::string name) {
    std::vector<TweetRecord> tweets;
    std::unordered_map<std::string, std::size_t> first_line;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r\n") == std::string::npos) continue;
        TweetRecord t = parse_tweet_json(line, line_no);
        auto [it, inserted] = first_line.emplace(t.tweet_id, line_no);
        if (!inserted) {
            throw ParseError("duplicate tweet_id '" + t.tweet_id + "' (first seen on line " + std::to_string(it->second) + ")",
                             line_no);
        }
        tweets.push_back(std::move(t));
    }
    return Dataset(std::move(name), std::move(tweets));
}

Dataset load_dataset(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open dataset '" + path.string() + "'");
    return parse_dataset(in, path.stem().string());
}

void write_dataset(const Dataset& d, std::ostream& out) {
    for (const auto& t : d.tweets()) out << tweet_to_json(t) << '\n';
}

void save_dataset(const Dataset& d, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write dataset '" + path.string() + "'");
    write_dataset(d, out);
}

Dataset merge_datasets(const std::vector<Dataset>& parts, std::string name) {
    std::vector<TweetRecord> all;
    for (const auto& p : parts) all.insert(all.end(), p.tweets().begin(), p.tweets().end());
    return Dataset(std::move(name), std::move(all));
}

// ---------------------------------------------------------------------------
// Threads

std::vector<Thread> build_threads(const Dataset& d) {
    std::vector<Thread> threads;
    threads.reserve(d.rumour_index().size());
    for (const auto& [rumour, ids] : d.rumour_index()) {
        const TweetRecord* source = nullptr;
        std::vector<TweetRecord> replies;
        for (const auto& id : ids) {
            const TweetRecord* t = d.find(id);
            if (t->is_source) {
                if (source) throw ValidationError("rumour '" + rumour + "' has multiple source tweets");
                source = t;
            } else {
                replies.push_back(*t);
            }
        }
        if (!source) throw ValidationError("rumour '" + rumour + "' has no source tweet");
        std::sort(replies.begin(), replies.end(), [](const TweetRecord& a, const TweetRecord& b) {
            if (a.created_at != b.created_at) return a.created_at < b.created_at;
            return a.tweet_id < b.tweet_id;
        });
        threads.push_back(Thread{*source, std::move(replies)});
    }
    return threads;
}

// ---------------------------------------------------------------------------
// PHEME-layout ingestion

namespace {

std::optional<StanceLabel> annotation_label(const json& a) {
    for (const char* key : {"stance", "support", "responsetype-vs-source"}) {
        auto it = a.find(key);
        if (it == a.end() || !it->is_string()) continue;
        const std::string v = to_lower_ascii(it->get<std::string>());
        if (auto l = parse_label(v)) return l;
        if (v == "agreed") return StanceLabel::Support;
        if (v == "disagreed") return StanceLabel::Deny;
        if (v == "appeal-for-more-information") return StanceLabel::Query;
        return std::nullopt;
    }
    return std::nullopt;
}

std::string id_string(const json& j, const char* str_key, const char* num_key) {
    if (auto it = j.find(str_key); it != j.end() && it->is_string()) return it->get<std::string>();
    if (auto it = j.find(num_key); it != j.end() && it->is_number_integer()) return std::to_string(it->get<std::int64_t>());
    return {};
}

TweetRecord raw_tweet(const std::filesystem::path& file, const std::string& rumour, const std::string& event, bool source) {
    std::ifstream in(file);
    if (!in) throw Error("cannot open '" + file.string() + "'");
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ParseError("malformed tweet file '" + file.string() + "': " + e.what());
    }
    try {
        TweetRecord t;
        t.tweet_id = id_string(j, "id_str", "id");
        if (t.tweet_id.empty()) throw ParseError("tweet file '" + file.string() + "' has no id");
        t.text = j.contains("full_text") ? j.at("full_text").get<std::string>() : j.at("text").get<std::string>();
        t.created_at = parse_twitter_time(j.at("created_at").get<std::string>());
        t.rumour_id = rumour;
        t.event_id = event;
        t.is_source = source;
        if (!source) {
            std::string parent = id_string(j, "in_reply_to_status_id_str", "in_reply_to_status_id");
            t.in_reply_to = parent.empty() ? rumour : parent;  // repaired against the source later
        }
        const json& u = j.at("user");
        t.user.statuses_count = u.value("statuses_count", std::int64_t{0});
        t.user.verified = u.value("verified", false);
        t.user.followers = u.value("followers_count", std::int64_t{0});
        t.user.followees = u.value("friends_count", std::int64_t{0});
        t.user.favourites_count = u.value("favourites_count", std::int64_t{0});
        t.user.account_created = parse_twitter_time(u.at("created_at").get<std::string>());
        t.user.geo_enabled = u.value("geo_enabled", false);
        if (auto it = u.find("description"); it != u.end() && it->is_string() && !it->get<std::string>().empty()) {
            t.user.description = it->get<std::string>();
        }
        return t;
    } catch (const json::exception& e) {
        throw ParseError("invalid tweet file '" + file.string() + "': " + e.what());
    }
}

std::vector<std::filesystem::path> sorted_entries(const std::filesystem::path& dir, bool directories) {
    std::vector<std::filesystem::path> out;
    if (!std::filesystem::is_directory(dir)) return out;
    for (const auto& e : std::filesystem::directory_iterator(dir)) {
        if (directories ? e.is_directory() : (e.is_regular_file() && e.path().extension() == ".json")) {
            out.push_back(e.path());
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace

IngestResult ingest_pheme(const std::filesystem::path& root, std::string name) {
    if (!std::filesystem::is_directory(root)) throw Error("raw export '" + root.string() + "' is not a directory");

    std::unordered_map<std::string, std::optional<StanceLabel>> annotations;
    IngestResult result;
    const auto ann_path = root / "annotations.jsonl";
    if (std::ifstream in(ann_path); in) {
        std::string line;
        std::size_t line_no = 0;
        while (std::getline(in, line)) {
            ++line_no;
            if (line.find_first_not_of(" \t\r\n") == std::string::npos) continue;
            json a;
            try {
                a = json::parse(line);
            } catch (const json::parse_error& e) {
                throw ParseError(std::string("malformed annotation: ") + e.what(), line_no);
            }
            const std::string id = id_string(a, "tweetid", "tweetid");
            if (id.empty()) throw ParseError("annotation without tweetid", line_no);
            annotations[id] = annotation_label(a);
        }
    }

    std::vector<TweetRecord> tweets;
    for (const auto& event_dir : sorted_entries(root, true)) {
        const std::string event = event_dir.filename().string();
        for (const auto& thread_dir : sorted_entries(event_dir / "rumours", true)) {
            const std::string rumour = thread_dir.filename().string();
            std::string source_id;
            for (const auto& f : sorted_entries(thread_dir / "source-tweet", false)) {
                tweets.push_back(raw_tweet(f, rumour, event, true));
                source_id = tweets.back().tweet_id;
            }
            for (const auto& f : sorted_entries(thread_dir / "reactions", false)) {
                TweetRecord t = raw_tweet(f, rumour, event, false);
                if (t.tweet_id == source_id) continue;  // some exports duplicate the source under reactions
                tweets.push_back(std::move(t));
            }
        }
    }
    for (auto& t : tweets) {
        auto it = annotations.find(t.tweet_id);
        if (it == annotations.end()) continue;
        if (it->second) {
            t.label = it->second;
        } else {
            ++result.dropped_labels;
        }
    }
    if (result.dropped_labels) {
        log::info("ingest: dropped " + std::to_string(result.dropped_labels) + " annotations outside the four-class scheme");
    }
    result.dataset = Dataset(std::move(name), std::move(tweets));
    return result;
}

}  // namespace stance
