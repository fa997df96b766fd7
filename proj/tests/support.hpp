#pragma once

#include <atomic>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <unistd.h>

#include "stance/corpus.hpp"
#include "stance/resources.hpp"

namespace stance::testing {

inline std::filesystem::path data_dir() { return STANCE_DATA_DIR; }
inline std::filesystem::path resources_dir() { return data_dir() / "resources"; }
inline std::filesystem::path micro_dir() { return data_dir() / "micro"; }

/// Removed (recursively) on destruction.
class TempDir {
public:
    TempDir() {
        static std::atomic<int> counter{0};
        path_ = std::filesystem::temp_directory_path() /
                ("stance-test-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
        std::filesystem::remove_all(path_);
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    const std::filesystem::path& path() const noexcept { return path_; }
    std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

private:
    std::filesystem::path path_;
};

inline void write_file(const std::filesystem::path& p, const std::string& content) {
    std::filesystem::create_directories(p.parent_path());
    std::ofstream out(p, std::ios::binary);
    out << content;
}

inline std::string read_file(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

/// Loaded once per process; tests must not modify it.
inline const ResourceBundle& shipped_bundle() {
    static const ResourceBundle bundle = load_bundle(resources_dir());
    return bundle;
}

inline const Dataset& micro_dataset() {
    static const Dataset d = load_dataset(micro_dir() / "micro.jsonl");
    return d;
}

inline TweetRecord make_tweet(std::string id, std::string text, std::string rumour, std::optional<std::string> reply_to = {},
                              Timestamp at = 1'400'000'000, std::optional<StanceLabel> label = StanceLabel::Comment,
                              std::string event = "ev") {
    TweetRecord t;
    t.tweet_id = std::move(id);
    t.text = std::move(text);
    t.created_at = at;
    t.is_source = !reply_to.has_value();
    t.in_reply_to = std::move(reply_to);
    t.rumour_id = std::move(rumour);
    t.event_id = std::move(event);
    t.user.account_created = at - 400 * kSecondsPerDay;
    t.label = label;
    return t;
}

/// Shipped lists and dictionaries with a small hand-made embedding table and
/// short AF and "worried" lists.
inline ResourceBundle toy_af_bundle() {
    ResourceBundle b = shipped_bundle();
    b.embeddings = EmbeddingTable(4);
    const std::vector<std::pair<std::string, Vector>> rows{
        {"amazed", {1, 0.2, 0, 0}},          {"wow", {0.9, 0, 0.1, 0}},       {"doubt", {0, 1, 0, 0.1}},
        {"unsure", {0.1, 0.8, 0, 0}},        {"certain", {0, 0, 1, 0}},       {"definitely", {0, 0.1, 0.9, 0.2}},
        {"support", {0, 0, 0, 1}},           {"confirm", {0.2, 0, 0.1, 0.9}}, {"bridge", {0.5, 0.5, 0.5, 0.5}},
        {"closed", {-0.3, 0.4, 0.2, -0.1}}, {"worry", {-1, 0.5, 0, 0}},      {"scared", {-0.8, 0.7, 0.1, 0}}};
    for (const auto& [w, v] : rows) b.embeddings.insert(w, v);
    b.lexicon.surprise.words = {"amazed", "wow"};
    b.lexicon.doubt.words = {"doubt", "unsure"};
    b.lexicon.no_doubt.words = {"certain", "definitely"};
    b.lexicon.support.words = {"support", "confirm", "missing"};
    b.lexicon.moods[4].words = {"worry", "scared"};
    return b;
}

}  // namespace stance::testing
