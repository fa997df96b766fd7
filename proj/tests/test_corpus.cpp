#include <gtest/gtest.h>

#include <algorithm>
#include <set>
#include <sstream>

#include "stance/corpus.hpp"
#include "support.hpp"

using namespace stance;
using stance::testing::make_tweet;

namespace {

const char* kLine =
    R"({"tweet_id":"%ID%","text":"hello","created_at":"2014-10-22T15:29:17Z","in_reply_to":%REPLY%,"rumour_id":"r1",)"
    R"("event_id":"e1","label":%LABEL%,"user":{"statuses_count":10,"verified":false,"followers":5,"followees":3,)"
    R"("favourites_count":0,"account_created":"2012-01-01T00:00:00Z","geo_enabled":false,"description":null}})";

std::string line(const std::string& id, const std::string& reply = "null", const std::string& label = "null") {
    std::string s = kLine;
    auto put = [&](const std::string& key, const std::string& v) { s.replace(s.find(key), key.size(), v); };
    put("%ID%", id);
    put("%REPLY%", reply);
    put("%LABEL%", label);
    return s;
}

Dataset parse(const std::string& text) {
    std::istringstream in(text);
    return parse_dataset(in, "t");
}

}  // namespace

TEST(Labels, ParsesCanonicalNamesAndSynonyms) {
    EXPECT_EQ(parse_label("support"), StanceLabel::Support);
    EXPECT_EQ(parse_label("DENYING"), StanceLabel::Deny);
    EXPECT_EQ(parse_label("Questioning"), StanceLabel::Query);
    EXPECT_EQ(parse_label("commenting"), StanceLabel::Comment);
    EXPECT_EQ(parse_label("underspecified"), std::nullopt);
    for (auto l : kAllLabels) EXPECT_EQ(parse_label(to_string(l)), l);
}

TEST(LoadDataset, EmptyFile) {
    auto d = parse("");
    EXPECT_EQ(d.size(), 0u);
    EXPECT_TRUE(d.rumour_index().empty());
}

TEST(LoadDataset, ParsesRecordAndLabelCaseInsensitively) {
    auto d = parse(line("1") + "\n" + line("2", "\"1\"", "\"SUPPORTING\"") + "\n");
    ASSERT_EQ(d.size(), 2u);
    const auto& reply = d.tweets()[1];
    EXPECT_EQ(reply.label, StanceLabel::Support);
    EXPECT_FALSE(reply.is_source);
    EXPECT_EQ(reply.created_at, parse_rfc3339("2014-10-22T15:29:17Z"));
    EXPECT_EQ(reply.user.followers, 5);
    EXPECT_TRUE(d.tweets()[0].is_source);
}

TEST(LoadDataset, DuplicateIdNamesIdAndLine) {
    try {
        parse(line("1") + "\n" + line("2", "\"1\"") + "\n" + line("2", "\"1\"") + "\n");
        FAIL() << "expected ParseError";
    } catch (const ParseError& e) {
        EXPECT_EQ(e.line(), 3u);
        EXPECT_NE(std::string(e.what()).find("'2'"), std::string::npos);
    }
}

TEST(LoadDataset, MalformedLineReportsLineNumber) {
    try {
        parse(line("1") + "\n{not json\n");
        FAIL();
    } catch (const ParseError& e) {
        EXPECT_EQ(e.line(), 2u);
    }
}

TEST(LoadDataset, UnknownLabelIsAnError) {
    EXPECT_THROW(parse(line("1", "null", "\"maybe\"")), ParseError);
}

TEST(LoadDataset, DanglingReplyIsReattachedToSource) {
    auto d = parse(line("1") + "\n" + line("2", "\"99\"") + "\n");
    EXPECT_EQ(d.repaired_replies(), 1u);
    EXPECT_EQ(d.find("2")->in_reply_to, "1");
}

TEST(LoadDataset, RoundTripIsStructurallyIdentical) {
    const auto& d = stance::testing::micro_dataset();
    std::ostringstream out;
    write_dataset(d, out);
    std::istringstream in(out.str());
    auto again = parse_dataset(in, d.name());
    EXPECT_EQ(again.tweets(), d.tweets());
    EXPECT_EQ(again.rumour_index(), d.rumour_index());
    EXPECT_EQ(again.event_index(), d.event_index());
}

TEST(Dataset, IndexesMatchTweetList) {
    const auto& d = stance::testing::micro_dataset();
    std::size_t indexed = 0;
    for (const auto& [rumour, ids] : d.rumour_index()) {
        for (const auto& id : ids) {
            ASSERT_NE(d.find(id), nullptr);
            EXPECT_EQ(d.find(id)->rumour_id, rumour);
        }
        indexed += ids.size();
    }
    EXPECT_EQ(indexed, d.size());
    std::set<std::string> from_events;
    for (const auto& [event, rumours] : d.event_index()) from_events.insert(rumours.begin(), rumours.end());
    EXPECT_EQ(from_events.size(), d.rumour_index().size());
}

TEST(BuildThreads, RepliesInTimestampOrder) {
    Dataset d("t", {make_tweet("s", "src", "r", {}, 100), make_tweet("b", "x", "r", "s", 300),
                    make_tweet("a", "y", "r", "s", 200)});
    auto threads = build_threads(d);
    ASSERT_EQ(threads.size(), 1u);
    ASSERT_EQ(threads[0].replies.size(), 2u);
    EXPECT_EQ(threads[0].replies[0].tweet_id, "a");
    EXPECT_EQ(threads[0].replies[1].tweet_id, "b");
}

TEST(BuildThreads, EqualTimestampsFallBackToTweetId) {
    Dataset d("t", {make_tweet("s", "src", "r", {}, 100), make_tweet("z", "x", "r", "s", 200),
                    make_tweet("m", "y", "r", "s", 200)});
    auto threads = build_threads(d);
    EXPECT_EQ(threads[0].replies[0].tweet_id, "m");
    EXPECT_EQ(threads[0].replies[1].tweet_id, "z");
}

TEST(BuildThreads, TwoSourcesIsAnError) {
    Dataset d("t", {make_tweet("s1", "a", "r"), make_tweet("s2", "b", "r")});
    try {
        build_threads(d);
        FAIL();
    } catch (const ValidationError& e) {
        EXPECT_NE(std::string(e.what()).find("'r'"), std::string::npos);
    }
}

TEST(BuildThreads, RumourWithoutSourceIsRejected) {
    // Only constructible through a reply whose parent lives in another rumour.
    EXPECT_THROW(build_threads(Dataset("t", {make_tweet("s", "a", "r1"), make_tweet("x", "b", "r2", "s", 1'400'000'100)})),
                 ValidationError);
}

TEST(BuildThreads, PartitionsTheDataset) {
    const auto& d = stance::testing::micro_dataset();
    std::multiset<std::string> seen;
    for (const auto& th : build_threads(d)) {
        EXPECT_TRUE(th.source.is_source);
        seen.insert(th.source.tweet_id);
        for (const auto& r : th.replies) {
            EXPECT_EQ(r.rumour_id, th.source.rumour_id);
            seen.insert(r.tweet_id);
        }
    }
    EXPECT_EQ(seen.size(), d.size());
    for (const auto& t : d.tweets()) EXPECT_EQ(seen.count(t.tweet_id), 1u);
}

TEST(Ingest, RawMicroExportMatchesBundledJsonl) {
    auto result = ingest_pheme(stance::testing::micro_dir() / "raw", "micro");
    EXPECT_EQ(result.dropped_labels, 1u);
    auto by_id = [](std::vector<TweetRecord> v) {
        std::sort(v.begin(), v.end(), [](const auto& a, const auto& b) { return a.tweet_id < b.tweet_id; });
        return v;
    };
    EXPECT_EQ(by_id(result.dataset.tweets()), by_id(stance::testing::micro_dataset().tweets()));
}

struct EventCounts {
    const char* file;
    std::size_t rumours, s, d, q, c;
};

class EventExport : public ::testing::TestWithParam<EventCounts> {};

TEST_P(EventExport, ReproducesPublishedCounts) {
    const auto& row = GetParam();
    auto d = load_dataset(stance::testing::data_dir() / "pheme_synthetic" / row.file);
    EXPECT_EQ(d.rumour_index().size(), row.rumours);
    auto counts = label_counts(d);
    EXPECT_EQ(counts[0], row.s);
    EXPECT_EQ(counts[1], row.d);
    EXPECT_EQ(counts[2], row.q);
    EXPECT_EQ(counts[3], row.c);
    EXPECT_NO_THROW(build_threads(d));
}

INSTANTIATE_TEST_SUITE_P(Pheme, EventExport,
                         ::testing::Values(EventCounts{"ottawa-shooting.jsonl", 58, 161, 76, 64, 481},
                                           EventCounts{"ferguson-riots.jsonl", 46, 192, 83, 94, 685},
                                           EventCounts{"charlie-hebdo.jsonl", 74, 236, 56, 51, 710},
                                           EventCounts{"sydney-siege.jsonl", 71, 89, 4, 99, 713}));

TEST(Time, Rfc3339AndTwitterLayouts) {
    EXPECT_EQ(parse_rfc3339("1970-01-02T00:00:00Z"), 86400);
    EXPECT_EQ(parse_rfc3339("2014-10-22T17:29:17+02:00"), parse_rfc3339("2014-10-22T15:29:17Z"));
    EXPECT_EQ(parse_twitter_time("Wed Oct 22 15:29:17 +0000 2014"), parse_rfc3339("2014-10-22T15:29:17Z"));
    EXPECT_EQ(format_rfc3339(parse_rfc3339("2016-02-29T23:59:59Z")), "2016-02-29T23:59:59Z");
    EXPECT_THROW(parse_rfc3339("2014-13-01T00:00:00Z"), ParseError);
    EXPECT_EQ(days_between(0, -1), -1);
}
