#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <numeric>
#include <set>

#include "stance/eval.hpp"
#include "oracles.hpp"
#include "support.hpp"

using namespace stance;
using stance::testing::make_tweet;

namespace {

// Three-reply thread per rumour with the given labels.
std::vector<TweetRecord> rumour(const std::string& id, const std::string& event, const std::vector<StanceLabel>& labels,
                                const std::vector<std::string>& texts = {}) {
    std::vector<TweetRecord> out{make_tweet(id + "-s", "bridge closed says police", id, {}, 1'400'000'000,
                                            StanceLabel::Support, event)};
    for (std::size_t i = 0; i < labels.size(); ++i) {
        std::string text = i < texts.size() ? texts[i] : "reply number " + std::to_string(i);
        out.push_back(make_tweet(id + "-" + std::to_string(i), text, id, id + "-s", 1'400'000'100 + i, labels[i], event));
    }
    return out;
}

Dataset join(std::string name, std::vector<std::vector<TweetRecord>> parts) {
    std::vector<TweetRecord> all;
    for (auto& p : parts) all.insert(all.end(), p.begin(), p.end());
    return Dataset(std::move(name), std::move(all));
}

RunConfig micro_config(ClassifierKind kind = ClassifierKind::Forest) {
    RunConfig c;
    c.classifier.kind = kind;
    c.seed = 7;
    c.now = parse_rfc3339("2015-06-01T00:00:00Z");
    c.scope = LooScope::Global;
    return c;
}

}  // namespace

TEST(Folds, ThreeRumoursGiveThreeFolds) {
    auto d = join("t", {rumour("a", "e", {StanceLabel::Comment}), rumour("b", "e", {StanceLabel::Deny}),
                        rumour("c", "e", {StanceLabel::Query})});
    auto folds = make_loo_folds(d, LooScope::ByEvent);
    ASSERT_EQ(folds.size(), 3u);
    std::set<std::string> tests;
    for (const auto& f : folds) {
        EXPECT_EQ(f.train.size(), 2u);
        ASSERT_EQ(f.test.size(), 1u);
        EXPECT_EQ(std::count(f.train.begin(), f.train.end(), f.test[0]), 0);
        EXPECT_TRUE(tests.insert(f.test[0]).second);
    }
    EXPECT_EQ(tests, (std::set<std::string>{"a", "b", "c"}));
    EXPECT_EQ(folds[0].id, "e/a");
}

TEST(Folds, ByEventStaysInsideEachEvent) {
    auto d = join("t", {rumour("a", "e1", {StanceLabel::Comment}), rumour("b", "e1", {StanceLabel::Deny}),
                        rumour("c", "e2", {StanceLabel::Query}), rumour("d", "e2", {StanceLabel::Query})});
    for (const auto& f : make_loo_folds(d, LooScope::ByEvent)) {
        EXPECT_EQ(f.train.size(), 1u);
        EXPECT_EQ(d.find(f.train[0] + "-s")->event_id, f.scope);
    }
    auto global = make_loo_folds(d, LooScope::Global);
    ASSERT_EQ(global.size(), 4u);
    for (const auto& f : global) EXPECT_EQ(f.train.size(), 3u);
}

TEST(Folds, TooFewRumoursIsAnError) {
    auto d = join("t", {rumour("a", "e1", {StanceLabel::Comment}), rumour("b", "e2", {StanceLabel::Deny})});
    EXPECT_THROW(make_loo_folds(d, LooScope::ByEvent), ValidationError);
    EXPECT_EQ(make_loo_folds(d, LooScope::Global).size(), 2u);
}

TEST(Folds, OttawaExportGivesOneFoldPerRumour) {
    auto d = load_dataset(stance::testing::data_dir() / "pheme_synthetic/ottawa-shooting.jsonl");
    EXPECT_EQ(make_loo_folds(d, LooScope::ByEvent).size(), 58u);
}

TEST(Folds, MicroCorpusPartition) {
    const auto& d = stance::testing::micro_dataset();
    for (auto scope : {LooScope::ByEvent, LooScope::Global}) {
        std::multiset<std::string> tested;
        for (const auto& f : make_loo_folds(d, scope)) {
            tested.insert(f.test.begin(), f.test.end());
            std::set<std::string> train(f.train.begin(), f.train.end());
            for (const auto& r : f.test) EXPECT_FALSE(train.count(r));
        }
        std::multiset<std::string> all;
        for (const auto& [r, _] : d.rumour_index()) all.insert(r);
        EXPECT_EQ(tested, all);
    }
}

TEST(Accuracy, Examples) {
    using S = StanceLabel;
    std::vector<S> g{S::Support, S::Deny, S::Query, S::Comment};
    EXPECT_EQ(accuracy(g, g), 1.0);
    std::vector<S> wrong{S::Deny, S::Query, S::Comment, S::Support};
    EXPECT_EQ(accuracy(wrong, g), 0.0);
    std::vector<S> three{S::Support, S::Deny, S::Query, S::Support};
    EXPECT_EQ(accuracy(three, g), 0.75);
    EXPECT_THROW(accuracy(std::vector<S>{S::Deny}, g), Error);
    EXPECT_THROW(accuracy(std::vector<S>{}, std::vector<S>{}), Error);
}

TEST(Statistics, IncompleteBetaMatchesQuadrature) {
    // The quadrature oracle needs a, b >= 1 (no endpoint singularity).
    for (double a : {1.0, 2.5, 4.5})
        for (double b : {1.0, 3.0, 4.5})
            for (double x : {0.05, 0.3, 0.5, 0.9})
                EXPECT_NEAR(regularized_incomplete_beta(a, b, x), oracle::incomplete_beta(a, b, x), 1e-8) << a << " " << b << " " << x;
    EXPECT_NEAR(regularized_incomplete_beta(1, 1, 0.37), 0.37, 1e-14);
    EXPECT_NEAR(regularized_incomplete_beta(2.5, 0.5, 0.3), 1 - regularized_incomplete_beta(0.5, 2.5, 0.7), 1e-14);
    EXPECT_EQ(regularized_incomplete_beta(3, 2, 0), 0.0);
    EXPECT_EQ(regularized_incomplete_beta(3, 2, 1), 1.0);
}

TEST(Statistics, StudentTailMatchesQuadrature) {
    EXPECT_NEAR(student_t_two_sided_p(2.262, 9), 0.05, 1e-3);
    for (double df : {1.0, 4.0, 9.0, 30.0})
        for (double t : {0.0, 0.5, 1.3, 2.262, 4.0}) EXPECT_NEAR(student_t_two_sided_p(t, df), oracle::t_two_sided_p(t, df), 1e-8);
    EXPECT_DOUBLE_EQ(student_t_two_sided_p(-1.3, 9), student_t_two_sided_p(1.3, 9));
}

TEST(PairedTTest, CanonicalCase) {
    // d = 0.754 +/- 1 alternating: mean 0.754, sd sqrt(10/9), so t = 3 * 0.754 = 2.262.
    std::vector<double> a, b(10, 0.0);
    for (int i = 0; i < 10; ++i) a.push_back(0.754 + (i % 2 ? 1.0 : -1.0));
    auto r = paired_t_test(a, b);
    EXPECT_EQ(r.n, 10u);
    EXPECT_NEAR(r.t, 2.262, 1e-12);
    EXPECT_NEAR(r.p, 0.05, 1e-3);
    EXPECT_FALSE(r.significant);
    EXPECT_FALSE(r.degenerate);
}

TEST(PairedTTest, ZeroDifferences) {
    std::vector<double> a{0.7, 0.8, 0.9};
    auto r = paired_t_test(a, a);
    EXPECT_EQ(r.t, 0.0);
    EXPECT_EQ(r.p, 1.0);
    EXPECT_FALSE(r.significant);
}

TEST(PairedTTest, ConstantNonZeroDifferenceIsDegenerate) {
    std::vector<std::string> warnings;
    auto old = log::set_sink([&](log::Level l, std::string_view m) {
        if (l == log::Level::Warning) warnings.emplace_back(m);
    });
    auto r = paired_t_test(std::vector<double>{2, 2, 2, 2}, std::vector<double>{1, 1, 1, 1});
    log::set_sink(old);
    EXPECT_TRUE(r.degenerate);
    EXPECT_TRUE(std::isinf(r.t) && r.t > 0);
    EXPECT_EQ(r.p, 0.0);
    EXPECT_TRUE(r.significant);
    EXPECT_EQ(warnings.size(), 1u);
}

TEST(PairedTTest, SignificanceThreshold) {
    std::vector<double> a, b;
    for (int i = 0; i < 12; ++i) {
        a.push_back(0.80 + 0.001 * (i % 3));
        b.push_back(0.70);
    }
    auto r = paired_t_test(a, b);
    EXPECT_LT(r.p, kSignificanceLevel);
    EXPECT_TRUE(r.significant);
    EXPECT_THROW(paired_t_test(std::vector<double>{1}, std::vector<double>{2}), Error);
    EXPECT_THROW(paired_t_test(std::vector<double>{1, 2}, std::vector<double>{2}), Error);
}

TEST(Classifier, ParseNamesAndAliases) {
    EXPECT_EQ(parse_classifier("j48"), ClassifierKind::Tree);
    EXPECT_EQ(parse_classifier("rf"), ClassifierKind::Forest);
    EXPECT_EQ(parse_classifier("ibk"), ClassifierKind::Knn);
    EXPECT_EQ(parse_classifier("majority"), ClassifierKind::Majority);
    EXPECT_EQ(parse_classifier("svm"), std::nullopt);
}

TEST(RunSplit, MajorityPredictorScoresTestMajorityShare) {
    using S = StanceLabel;
    auto train = join("train", {rumour("a", "e", {S::Comment, S::Comment, S::Deny}), rumour("b", "e", {S::Comment, S::Query})});
    auto test = join("test", {rumour("c", "f", {S::Comment, S::Query, S::Comment, S::Deny, S::Comment})});
    auto cfg = micro_config(ClassifierKind::Majority);
    auto r = run_split(train, test, stance::testing::shipped_bundle(), cfg);
    // Test gold: the source (Support) plus five replies; Comment holds 3 of 6.
    EXPECT_EQ(r.overall, 0.5);
    EXPECT_EQ(r.headline(), 0.5);
    EXPECT_EQ(r.protocol, "split");
}

TEST(RunSplit, OverlappingTweetIdsAreRejected) {
    using S = StanceLabel;
    auto train = join("train", {rumour("a", "e", {S::Comment})});
    EXPECT_THROW(run_split(train, train, stance::testing::shipped_bundle(), micro_config()), ValidationError);
}

TEST(Leakage, GuardAcceptsTrainOnlyDictionaries) {
    FoldSpec fold{"e/c", "e", {"a", "b"}, {"c"}};
    EXPECT_NO_THROW(check_leakage(FeatureDictionaries({}, {}, {"a", "b"}), fold));
    EXPECT_THROW(check_leakage(FeatureDictionaries({}, {}, {"a", "b", "c"}), fold), LeakageError);
}

TEST(Leakage, InjectedLeakIsCaught) {
    auto cfg = micro_config();
    const auto& d = stance::testing::micro_dataset();
    const auto& bundle = stance::testing::shipped_bundle();
    EXPECT_NO_THROW(run_loo(d, bundle, cfg));
    cfg.inject_leak = true;
    EXPECT_THROW(run_loo(d, bundle, cfg), LeakageError);
    cfg.scope = LooScope::ByEvent;
    EXPECT_THROW(run_loo(d, bundle, cfg), LeakageError);
}

TEST(RunLoo, ReportInvariants) {
    const auto& d = stance::testing::micro_dataset();
    for (auto scope : {LooScope::ByEvent, LooScope::Global}) {
        auto cfg = micro_config();
        cfg.scope = scope;
        auto r = run_loo(d, stance::testing::shipped_bundle(), cfg);
        EXPECT_EQ(r.folds.size(), d.rumour_index().size());
        double sum = 0;
        for (const auto& e : r.events) sum += e.accuracy;
        EXPECT_NEAR(r.macro_mean, sum / r.events.size(), 1e-9);
        EXPECT_EQ(r.headline(), r.macro_mean);

        auto gold = label_counts(d);
        std::size_t total = 0, correct = 0;
        for (std::size_t g = 0; g < kNumLabels; ++g) {
            std::size_t row = 0;
            for (std::size_t p = 0; p < kNumLabels; ++p) row += r.confusion[g][p];
            EXPECT_EQ(row, gold[g]);
            EXPECT_EQ(r.per_class[g].support, gold[g]);
            total += row;
            correct += r.confusion[g][g];
        }
        EXPECT_DOUBLE_EQ(r.overall, static_cast<double>(correct) / total);

        std::map<std::string, std::pair<std::size_t, std::size_t>> pooled;
        for (const auto& f : r.folds)
            for (std::size_t i = 0; i < f.gold.size(); ++i) {
                auto& [ok, n] = pooled[f.events[i]];
                ok += f.gold[i] == f.predicted[i];
                ++n;
            }
        for (const auto& e : r.events) {
            EXPECT_EQ(e.n, pooled[e.event].second);
            EXPECT_DOUBLE_EQ(e.accuracy, static_cast<double>(pooled[e.event].first) / pooled[e.event].second);
        }
    }
}

TEST(RunLoo, IndependentOfJobs) {
    auto cfg = micro_config();
    cfg.jobs = 1;
    auto a = run_loo(stance::testing::micro_dataset(), stance::testing::shipped_bundle(), cfg);
    cfg.jobs = 8;
    auto b = run_loo(stance::testing::micro_dataset(), stance::testing::shipped_bundle(), cfg);
    EXPECT_EQ(to_json(a).dump(), to_json(b).dump());
    EXPECT_EQ(render_text(a), render_text(b));
}

TEST(RunLoo, ConfigEchoCarriesSeedAndResourceHash) {
    auto r = run_loo(stance::testing::micro_dataset(), stance::testing::shipped_bundle(), micro_config());
    auto j = to_json(r);
    EXPECT_EQ(j["config"]["seed"], 7);
    EXPECT_EQ(j["config"]["resources_hash"], to_hex(stance::testing::shipped_bundle().content_hash));
    EXPECT_EQ(j["config"]["af_lists"]["doubt"], stance::testing::shipped_bundle().lexicon.doubt.words.size());
    EXPECT_FALSE(j["config"].contains("jobs"));
}

TEST(Ablate, RowsAndAfTTest) {
    auto targets = parse_ablation_targets(std::vector<std::string>{"AF_SS", "AF_IQ", "AF"});
    auto r = ablate(stance::testing::micro_dataset(), std::nullopt, stance::testing::shipped_bundle(), micro_config(), targets);
    ASSERT_EQ(r.rows.size(), targets.size() + 1);
    EXPECT_EQ(r.rows[0].label, "all");
    EXPECT_EQ(r.rows[0].delta, 0.0);
    for (std::size_t i = 1; i < r.rows.size(); ++i) {
        EXPECT_EQ(r.rows[i].removed, targets[i - 1]);
        EXPECT_DOUBLE_EQ(r.rows[i].delta, r.rows[i].accuracy - r.rows[0].accuracy);
        EXPECT_EQ(r.rows[i].fold_scores.size(), r.rows[0].fold_scores.size());
        EXPECT_EQ(r.rows[i].t_test.has_value(), r.rows[i].label == "AF");
    }
    const auto text = render_text(r);
    EXPECT_NE(text.find("All without AF"), std::string::npos);
    EXPECT_NE(text.find("76.54"), std::string::npos);
}

TEST(Ablate, InertGroupHasZeroDelta) {
    const auto& d = stance::testing::micro_dataset();
    const auto& bundle = stance::testing::shipped_bundle();
    // Find a group that never fires on the corpus.
    std::set<FeatureGroup> active;
    auto threads = build_threads(d);
    for (const auto& th : threads) {
        std::vector<const TweetRecord*> all{&th.source};
        for (const auto& r : th.replies) all.push_back(&r);
        for (const auto* t : all)
            for (const auto& nv : analyze(*t, th, bundle, parse_rfc3339("2015-06-01T00:00:00Z")).fixed)
                if (nv.value != 0.0) active.insert(nv.group);
    }
    std::optional<FeatureGroup> inert;
    for (auto g : {FeatureGroup::EMOT, FeatureGroup::NE, FeatureGroup::URL, FeatureGroup::LEX, FeatureGroup::NEG})
        if (!active.count(g)) inert = g;
    ASSERT_TRUE(inert) << "micro corpus has no inert group";

    std::vector<GroupSet> targets{GroupSet{*inert}};
    for (auto kind : {ClassifierKind::Forest, ClassifierKind::Tree, ClassifierKind::Knn}) {
        auto r = ablate(d, std::nullopt, bundle, micro_config(kind), targets);
        EXPECT_EQ(r.rows[1].delta, 0.0) << to_string(kind);
        EXPECT_EQ(r.rows[1].fold_scores, r.rows[0].fold_scores);
    }
}

TEST(Ablate, UnknownOrDisabledTargets) {
    EXPECT_THROW(parse_ablation_targets(std::vector<std::string>{"AF_XX"}), ConfigError);
    auto cfg = micro_config();
    cfg.groups = GroupSet::all() - GroupSet{FeatureGroup::AF_SS};
    std::vector<GroupSet> targets{GroupSet{FeatureGroup::AF_SS}};
    EXPECT_THROW(ablate(stance::testing::micro_dataset(), std::nullopt, stance::testing::shipped_bundle(), cfg, targets),
                 ConfigError);
}

TEST(References, PublishedValues) {
    EXPECT_EQ(reference_accuracy(ClassifierKind::Forest, true), 79.02);
    EXPECT_EQ(reference_accuracy(ClassifierKind::Forest, false), 76.54);
    EXPECT_EQ(reference_accuracy(ClassifierKind::Tree, true), 74.16);
    EXPECT_EQ(reference_accuracy(ClassifierKind::Knn, false), 73.02);
    EXPECT_EQ(reference_accuracy(ClassifierKind::Tree, true, "ottawa-shooting"), 76.28);
    EXPECT_EQ(reference_accuracy(ClassifierKind::Forest, false, "sydney"), 72.57);
    EXPECT_EQ(reference_accuracy(ClassifierKind::Majority, true), std::nullopt);
    EXPECT_EQ(reference_ablation(GroupSet::af()), 76.54);
    EXPECT_EQ(reference_ablation({FeatureGroup::AF_SS}), 77.59);
    EXPECT_EQ(reference_ablation({FeatureGroup::AF_NDS}), 77.59);
    EXPECT_EQ(reference_ablation({FeatureGroup::AF_IQ}), 78.64);
    EXPECT_EQ(reference_ablation({FeatureGroup::BOW}), std::nullopt);
}
