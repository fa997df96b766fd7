#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <set>

#include "stance/features.hpp"
#include "oracles.hpp"
#include "support.hpp"

using namespace stance;
using stance::testing::make_tweet;

namespace {

Thread thread_of(const TweetRecord& source, std::vector<TweetRecord> replies = {}) { return {source, std::move(replies)}; }

std::map<std::string, double> by_name(const NamedValues& values) {
    std::map<std::string, double> out;
    for (const auto& v : values) out[v.name] = v.value;
    return out;
}

std::map<std::string, double> by_name(const FeatureVector& v, const FeatureSchema& s) {
    std::map<std::string, double> out;
    for (const auto& e : v.entries()) out[s.column(e.index).name] = e.value;
    return out;
}

bool is_cosine_column(const Column& c) {
    return c.group == FeatureGroup::MOOD || c.group == FeatureGroup::AF_SS || c.group == FeatureGroup::AF_DS ||
           c.group == FeatureGroup::AF_NDS || c.group == FeatureGroup::AF_SPS || c.group == FeatureGroup::AF_ITS;
}

bool is_count_column(const Column& c) {
    return c.group == FeatureGroup::BOW || c.group == FeatureGroup::POSNG || c.name.rfind("numberOf", 0) == 0 ||
           c.name == "originality" || c.name == "followers" || c.name == "descriptionLength";
}

bool is_binary_column(const Column& c) {
    switch (c.group) {
        case FeatureGroup::BROWN:
        case FeatureGroup::NE:
        case FeatureGroup::REPLY:
        case FeatureGroup::EMOT:
        case FeatureGroup::URL:
        case FeatureGroup::LEX:
        case FeatureGroup::REGEX:
        case FeatureGroup::AF_IQ: return true;
        default: return c.name.rfind("has", 0) == 0 || c.name.rfind("is", 0) == 0;
    }
}

}  // namespace

TEST(GroupSet, ParseExpandsAndSubtracts) {
    EXPECT_EQ(GroupSet::parse("all"), GroupSet::all());
    EXPECT_EQ(GroupSet::parse("AF"), GroupSet::af());
    EXPECT_EQ(GroupSet::parse("all,-AF"), GroupSet::all() - GroupSet::af());
    EXPECT_EQ(GroupSet::parse("BOW,SENT"), (GroupSet{FeatureGroup::BOW, FeatureGroup::SENT}));
    EXPECT_EQ(GroupSet::parse("AF,-AF_IQ").size(), 5u);
    EXPECT_THROW(GroupSet::parse("BOW,NOPE"), ConfigError);
    EXPECT_EQ(GroupSet::af().label(), "AF");
    EXPECT_EQ((GroupSet{FeatureGroup::AF_SS}).label(), "AF_SS");
    for (std::size_t i = 0; i < kGroupCount; ++i) {
        auto g = static_cast<FeatureGroup>(i);
        EXPECT_EQ(parse_group(to_string(g)), g);
    }
}

TEST(BuildDictionaries, SharedWordOnly) {
    std::vector<TweetRecord> train{make_tweet("1", "is it true", "r"), make_tweet("2", "totally true", "r", "1")};
    auto d = build_dictionaries(train, stance::testing::shipped_bundle());
    EXPECT_EQ(d.bow_vocab(), std::vector<std::string>{"true"});
    EXPECT_EQ(d.provenance(), std::vector<std::string>{"r"});
}

TEST(BuildDictionaries, SingleTweetOfUniqueWords) {
    std::vector<TweetRecord> train{make_tweet("1", "every word differs here", "r")};
    EXPECT_TRUE(build_dictionaries(train, stance::testing::shipped_bundle()).bow_vocab().empty());
}

TEST(BuildDictionaries, EmptyTrainingSet) {
    EXPECT_THROW(build_dictionaries({}, stance::testing::shipped_bundle()), Error);
}

TEST(BuildDictionaries, MatchesFrequencyCountOracle) {
    const std::vector<std::string> texts{
        "Is this TRUE?",   "this is not true",  "#Ottawa police confirm", "police say it is fake",
        "wow is it real",  "#ottawa again",     "not sure at all",        "sure sure sure",
        "@bbc is this it", "it is what it is"};
    std::vector<TweetRecord> train;
    for (std::size_t i = 0; i < texts.size(); ++i)
        train.push_back(make_tweet(std::to_string(i), texts[i], i < 5 ? "a" : "b", i == 0 || i == 5 ? std::nullopt
                                                                                         : std::optional<std::string>(i < 5 ? "0" : "5")));
    const auto& bundle = stance::testing::shipped_bundle();
    std::map<std::string, int> words, grams;
    for (const auto& t : train) {
        auto tokens = text::tokenize(t.text, bundle.lexicon.all_emoticons);
        for (const auto& tok : tokens)
            if (tok.kind == text::TokenKind::Word || tok.kind == text::TokenKind::Hashtag) ++words[tok.lower];
        auto tags = text::pos_tag(tokens);
        for (std::size_t n = 2; n <= 4; ++n)
            for (std::size_t i = 0; i + n <= tags.size(); ++i) {
                std::string g;
                for (std::size_t k = 0; k < n; ++k) g += (k ? "_" : "") + std::string(text::to_string(tags[i + k]));
                ++grams[g];
            }
    }
    auto frequent = [](const std::map<std::string, int>& m) {
        std::vector<std::string> out;
        for (const auto& [w, n] : m)
            if (n >= 2) out.push_back(w);
        return out;
    };
    auto d = build_dictionaries(train, bundle);
    EXPECT_EQ(d.bow_vocab(), frequent(words));
    EXPECT_EQ(d.posng_vocab(), frequent(grams));
    EXPECT_EQ(d.provenance(), (std::vector<std::string>{"a", "b"}));
}

TEST(Schema, GroupsPartitionColumns) {
    const auto& bundle = stance::testing::shipped_bundle();
    const auto& tweets = stance::testing::micro_dataset().tweets();
    auto dicts = build_dictionaries(tweets, bundle);
    auto schema = FeatureSchema::build(dicts, bundle, GroupSet::all());
    std::set<std::string> names;
    std::map<FeatureGroup, std::size_t> per_group;
    for (const auto& c : schema.columns()) {
        EXPECT_TRUE(names.insert(c.name).second) << c.name;
        ++per_group[c.group];
    }
    EXPECT_EQ(per_group[FeatureGroup::BROWN], BrownTable::kClusterCount);
    EXPECT_EQ(per_group[FeatureGroup::REGEX], LexiconSet::kRegexCount);
    EXPECT_EQ(per_group[FeatureGroup::NE], 5u);
    EXPECT_EQ(per_group[FeatureGroup::MOOD], 5u);
    EXPECT_EQ(per_group[FeatureGroup::BOW], dicts.bow_vocab().size());
    for (auto g : GroupSet::af().list()) EXPECT_EQ(per_group[g], 1u);
    EXPECT_EQ(per_group.size(), kGroupCount);

    auto without = schema.without({FeatureGroup::AF_SS});
    EXPECT_EQ(without.size(), schema.size() - 1);
    EXPECT_FALSE(without.find("surpriseScore"));

    auto reread = FeatureSchema::from_tsv(schema.to_tsv(), dicts.fingerprint());
    EXPECT_EQ(reread.fingerprint(), schema.fingerprint());
    EXPECT_EQ(reread.size(), schema.size());
}

TEST(ExtractContent, QuestionMarksAndRegex) {
    const auto& bundle = stance::testing::shipped_bundle();
    auto v = by_name(extract_content(make_tweet("1", "is that true???", "r"), {}, bundle));
    EXPECT_EQ(v["hasQuestionMark"], 1.0);
    EXPECT_EQ(v["numberOfQuestionMark"], 3.0);
    ASSERT_EQ(bundle.lexicon.regexes[1].source, ".*is (that|this|it) true.*");
    EXPECT_EQ(v["regex:1"], 1.0);
    EXPECT_EQ(v["regex:0"], 0.0);
}

TEST(ExtractContent, WordsOutsideDictionaryLeaveBowEmpty) {
    const auto& bundle = stance::testing::shipped_bundle();
    std::vector<TweetRecord> train{make_tweet("1", "bridge bridge", "r")};
    auto dicts = build_dictionaries(train, bundle);
    for (const auto& nv : extract_content(make_tweet("2", "nothing shared", "r"), dicts, bundle))
        EXPECT_NE(nv.group, FeatureGroup::BOW);
    auto hit = by_name(extract_content(make_tweet("3", "Bridge and bridge", "r"), dicts, bundle));
    EXPECT_EQ(hit["bow:bridge"], 2.0);
}

TEST(ExtractContent, AverageWordLength) {
    auto v = by_name(extract_content(make_tweet("1", "abcd ef", "r"), {}, stance::testing::shipped_bundle()));
    EXPECT_DOUBLE_EQ(v["averageWordLength"], 3.0);
}

TEST(ExtractContent, UrlEllipsisAndNegation) {
    auto v = by_name(extract_content(make_tweet("1", "not again... see http://t.co/x!!", "r"), {},
                                     stance::testing::shipped_bundle()));
    EXPECT_EQ(v["hasUrl"], 1.0);
    EXPECT_EQ(v["hasDotDotDot"], 1.0);
    EXPECT_EQ(v["numberOfDotDotDot"], 1.0);
    EXPECT_EQ(v["numberOfExclamationMark"], 2.0);
    EXPECT_EQ(v["hasNegation"], 1.0);
}

TEST(ExtractContent, BrownColumnsAreTheImageOfTokens) {
    const auto& bundle = stance::testing::shipped_bundle();
    for (const auto& t : stance::testing::micro_dataset().tweets()) {
        std::set<std::string> expected;
        for (const auto& tok : text::tokenize(t.text, bundle.lexicon.all_emoticons))
            if (auto id = bundle.brown.cluster(tok.lower)) expected.insert("brown:" + std::to_string(*id));
        std::set<std::string> got;
        for (const auto& nv : extract_content(t, {}, bundle))
            if (nv.group == FeatureGroup::BROWN && nv.value != 0.0) got.insert(nv.name);
        EXPECT_EQ(got, expected) << t.text;
    }
}

TEST(ExtractUser, Formulas) {
    auto t = make_tweet("1", "x", "r");
    t.user.followers = 100;
    t.user.followees = 50;
    t.user.statuses_count = 300;
    t.user.favourites_count = 50;
    t.user.description = "local news desk";
    const Timestamp now = t.user.account_created + 100 * kSecondsPerDay;
    auto v = by_name(extract_user(t, now));
    EXPECT_EQ(v["role"], 2.0);
    EXPECT_EQ(v["engagement"], 3.0);
    EXPECT_EQ(v["favourites"], 0.5);
    EXPECT_EQ(v["originality"], 300.0);
    EXPECT_EQ(v["hasDescription"], 1.0);
    EXPECT_EQ(v["descriptionLength"], 3.0);
    EXPECT_EQ(v["reply"], 0.0);

    t.user.followees = 0;
    EXPECT_EQ(by_name(extract_user(t, now))["role"], 100.0);
    // Accounts younger than a day count as one active day.
    EXPECT_EQ(by_name(extract_user(t, t.user.account_created))["engagement"], 300.0);
}

TEST(ExtractMood, SelfSimilarityZeroVectorAndOracle) {
    auto b = stance::testing::toy_af_bundle();
    auto worried = extract_mood(make_tweet("1", "worry scared", "r"), b);
    EXPECT_NEAR(worried[4], 1.0, 1e-12);
    auto none = extract_mood(make_tweet("2", "zzz qqq", "r"), b);
    for (double s : none) EXPECT_EQ(s, 0.0);

    const std::vector<std::string> words{"bridge", "closed", "worry"};
    auto got = extract_mood(make_tweet("3", "bridge closed worry", "r"), b);
    for (std::size_t m = 0; m < 5; ++m) {
        double expected = oracle::cosine(oracle::mean_vector(words, b.embeddings), oracle::mean_vector(b.lexicon.moods[m].words, b.embeddings));
        EXPECT_NEAR(got[m], expected, 1e-9) << kMoodNames[m];
    }
}

TEST(ExtractAf, ScoresMatchAveragingCosineOracle) {
    auto b = stance::testing::toy_af_bundle();
    auto source = make_tweet("s", "bridge closed definitely", "r");
    const std::vector<std::vector<std::string>> replies{
        {"doubt", "unsure"}, {"wow", "bridge"}, {"confirm", "closed", "support"}, {"zzz"}, {"amazed", "certain", "worry"}};
    const auto src_mean = oracle::mean_vector({"bridge", "closed", "definitely"}, b.embeddings);
    for (std::size_t i = 0; i < replies.size(); ++i) {
        std::string text;
        for (const auto& w : replies[i]) text += w + " ";
        auto reply = make_tweet("x" + std::to_string(i), text, "r", "s", 1'400'000'100);
        auto af = extract_af(reply, thread_of(source), b);
        const auto mean = oracle::mean_vector(replies[i], b.embeddings);
        EXPECT_NEAR(af.surprise, oracle::cosine(mean, oracle::mean_vector(b.lexicon.surprise.words, b.embeddings)), 1e-9);
        EXPECT_NEAR(af.doubt, oracle::cosine(mean, oracle::mean_vector(b.lexicon.doubt.words, b.embeddings)), 1e-9);
        EXPECT_NEAR(af.no_doubt, oracle::cosine(mean, oracle::mean_vector(b.lexicon.no_doubt.words, b.embeddings)), 1e-9);
        EXPECT_NEAR(af.support, oracle::cosine(mean, oracle::mean_vector(b.lexicon.support.words, b.embeddings)), 1e-9);
        EXPECT_NEAR(af.initial_sim, oracle::cosine(mean, src_mean), 1e-9);
    }
}

TEST(ExtractAf, DoubtListYieldsUnitDoubtScore) {
    auto b = stance::testing::toy_af_bundle();
    auto source = make_tweet("s", "bridge closed", "r");
    auto af = extract_af(make_tweet("x", "doubt unsure", "r", "s", 1'400'000'100), thread_of(source), b);
    EXPECT_NEAR(af.doubt, 1.0, 1e-12);
}

TEST(ExtractAf, RetweetAndSourceGetUnitSimilarity) {
    auto b = stance::testing::toy_af_bundle();
    auto source = make_tweet("s", "Bridge closed  definitely", "r");
    auto th = thread_of(source);
    EXPECT_EQ(extract_af(source, th, b).initial_sim, 1.0);
    EXPECT_EQ(extract_af(make_tweet("a", "Bridge closed definitely", "r", "s", 1'400'000'100), th, b).initial_sim, 1.0);
    EXPECT_EQ(extract_af(make_tweet("b", "RT @desk: Bridge closed definitely", "r", "s", 1'400'000'100), th, b).initial_sim, 1.0);
    // No embeddable content and not a retweet: similarity is neutral.
    EXPECT_EQ(extract_af(make_tweet("c", "zzz", "r", "s", 1'400'000'100), th, b).initial_sim, 0.0);
    EXPECT_TRUE(is_retweet_of("RT @x: a  b", "a b"));
    EXPECT_FALSE(is_retweet_of("RT @x y: a b", "a b"));
}

TEST(ExtractAf, QuestionStart) {
    const auto& b = stance::testing::shipped_bundle();
    auto source = make_tweet("s", "bridge closed", "r");
    auto th = thread_of(source);
    EXPECT_TRUE(extract_af(make_tweet("a", "Is this confirmed?", "r", "s", 1'400'000'100), th, b).is_question);
    EXPECT_TRUE(extract_af(make_tweet("b", "@desk why now", "r", "s", 1'400'000'100), th, b).is_question);
    EXPECT_FALSE(extract_af(make_tweet("c", "this is confirmed", "r", "s", 1'400'000'100), th, b).is_question);
}

TEST(ContentTokens, DropUrlsAcronymsAndEntities) {
    auto b = stance::testing::toy_af_bundle();
    b.lexicon.acronyms = {"bbc"};
    b.gazetteers.location = {{"new", "york"}};
    EXPECT_EQ(content_tokens("BBC says bridge in New York closed http://t.co/x", b),
              (std::vector<std::string>{"says", "bridge", "in", "closed"}));
}

TEST(Assemble, StructureDeterminismAndAblation) {
    const auto& bundle = stance::testing::shipped_bundle();
    const auto& d = stance::testing::micro_dataset();
    auto dicts = build_dictionaries(d.tweets(), bundle);
    auto schema = FeatureSchema::build(dicts, bundle, GroupSet::all());
    auto reduced = schema.without({FeatureGroup::AF_SS});
    const Timestamp now = parse_rfc3339("2015-06-01T00:00:00Z");
    for (const auto& th : build_threads(d)) {
        std::vector<const TweetRecord*> all{&th.source};
        for (const auto& r : th.replies) all.push_back(&r);
        for (const auto* t : all) {
            auto v = assemble(*t, th, dicts, bundle, schema, now);
            EXPECT_EQ(v.length(), schema.size());
            EXPECT_EQ(v.fingerprint(), schema.fingerprint());
            for (const auto& e : v.entries()) EXPECT_LT(e.index, schema.size());
            EXPECT_EQ(v.label(), t->label);
            EXPECT_EQ(assemble(*t, th, dicts, bundle, schema, now), v);

            auto full = by_name(v, schema);
            full.erase("surpriseScore");
            EXPECT_EQ(by_name(assemble(*t, th, dicts, bundle, reduced, now), reduced), full);
        }
    }
}

TEST(Assemble, IdenticalTweetsGiveIdenticalVectors) {
    const auto& bundle = stance::testing::shipped_bundle();
    auto source = make_tweet("s", "bridge closed says police", "r");
    auto a = make_tweet("a", "is that true?", "r", "s", 1'400'000'100);
    auto b = a;
    b.tweet_id = "b";
    Thread th{source, {a, b}};
    std::vector<TweetRecord> train{source, a, b};
    auto dicts = build_dictionaries(train, bundle);
    auto schema = FeatureSchema::build(dicts, bundle, GroupSet::all());
    EXPECT_EQ(assemble(a, th, dicts, bundle, schema, 1'500'000'000), assemble(b, th, dicts, bundle, schema, 1'500'000'000));
}

TEST(Assemble, ForeignDictionariesAreRejected) {
    const auto& bundle = stance::testing::shipped_bundle();
    std::vector<TweetRecord> one{make_tweet("1", "a a", "r")}, two{make_tweet("2", "b b", "r")};
    auto d1 = build_dictionaries(one, bundle);
    auto d2 = build_dictionaries(two, bundle);
    auto schema = FeatureSchema::build(d1, bundle, GroupSet::all());
    auto analysis = analyze(one[0], thread_of(one[0]), bundle, 1'500'000'000);
    EXPECT_THROW(assemble(analysis, d2, schema), SchemaMismatch);
}

TEST(Assemble, RangeChecksAcrossMicroCorpus) {
    const auto& bundle = stance::testing::shipped_bundle();
    const auto& d = stance::testing::micro_dataset();
    auto dicts = build_dictionaries(d.tweets(), bundle);
    auto schema = FeatureSchema::build(dicts, bundle, GroupSet::all());
    std::size_t checked = 0;
    for (const auto& th : build_threads(d)) {
        std::vector<const TweetRecord*> all{&th.source};
        for (const auto& r : th.replies) all.push_back(&r);
        for (const auto* t : all) {
            auto v = assemble(*t, th, dicts, bundle, schema, parse_rfc3339("2015-06-01T00:00:00Z"));
            for (const auto& e : v.entries()) {
                const auto& c = schema.column(e.index);
                EXPECT_TRUE(std::isfinite(e.value));
                if (is_cosine_column(c)) {
                    EXPECT_GE(e.value, -1.0 - 1e-12) << c.name;
                    EXPECT_LE(e.value, 1.0 + 1e-12) << c.name;
                } else if (c.name == "sentiment") {
                    EXPECT_GE(e.value, 0.0);
                    EXPECT_LE(e.value, 4.0);
                } else if (is_count_column(c)) {
                    EXPECT_GE(e.value, 0.0) << c.name;
                    EXPECT_EQ(e.value, std::floor(e.value)) << c.name;
                } else if (is_binary_column(c)) {
                    EXPECT_EQ(e.value, 1.0) << c.name;  // zeros are never stored
                } else {
                    EXPECT_GE(e.value, 0.0) << c.name;
                }
                ++checked;
            }
        }
    }
    EXPECT_GT(checked, 0u);
}

TEST(FeatureVector, DropsZerosAndValidates) {
    FeatureVector v(7, 5, {{3, 2.0}, {1, 0.0}, {0, -1.0}});
    ASSERT_EQ(v.entries().size(), 2u);
    EXPECT_EQ(v.entries()[0].index, 0u);
    EXPECT_EQ(v.value(3), 2.0);
    EXPECT_EQ(v.value(1), 0.0);
    EXPECT_EQ(format_sparse(v), "0:-1 3:2");
    EXPECT_THROW(FeatureVector(0, 2, {{2, 1.0}}), Error);
    EXPECT_THROW(FeatureVector(0, 2, {{1, 1.0}, {1, 2.0}}), Error);
    EXPECT_THROW(FeatureVector(0, 2, {{1, std::nan("")}}), Error);
}
