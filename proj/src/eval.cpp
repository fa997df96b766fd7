#include "stance/eval.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <set>
#include <sstream>
#include <unordered_map>

#include "stance/parallel.hpp"

namespace stance {

using nlohmann::ordered_json;

// ---------------------------------------------------------------------------
// Folds and accuracy

std::vector<FoldSpec> make_loo_folds(const Dataset& d, LooScope scope) {
    std::vector<std::pair<std::string, std::vector<std::string>>> universes;
    if (scope == LooScope::ByEvent) {
        for (const auto& [event, rumours] : d.event_index()) {
            std::vector<std::string> sorted = rumours;
            std::sort(sorted.begin(), sorted.end());
            universes.emplace_back(event, std::move(sorted));
        }
    } else {
        std::vector<std::string> all;
        for (const auto& [rumour, ids] : d.rumour_index()) all.push_back(rumour);
        universes.emplace_back("*", std::move(all));
    }
    if (universes.empty()) throw ValidationError("dataset '" + d.name() + "' holds no rumours");

    std::vector<FoldSpec> folds;
    for (const auto& [name, rumours] : universes) {
        if (rumours.size() < 2) {
            throw ValidationError("leave-one-out needs at least 2 rumours in '" + name + "', found " +
                                  std::to_string(rumours.size()));
        }
        for (std::size_t i = 0; i < rumours.size(); ++i) {
            FoldSpec f;
            f.id = scope == LooScope::ByEvent ? name + "/" + rumours[i] : rumours[i];
            f.scope = name;
            f.test = {rumours[i]};
            for (std::size_t j = 0; j < rumours.size(); ++j) {
                if (j != i) f.train.push_back(rumours[j]);
            }
            folds.push_back(std::move(f));
        }
    }
    return folds;
}

double accuracy(std::span<const StanceLabel> predicted, std::span<const StanceLabel> gold) {
    if (predicted.size() != gold.size()) {
        throw Error("accuracy: " + std::to_string(predicted.size()) + " predictions for " + std::to_string(gold.size()) +
                    " gold labels");
    }
    if (gold.empty()) throw Error("accuracy of an empty prediction list");
    std::size_t hits = 0;
    for (std::size_t i = 0; i < gold.size(); ++i) hits += predicted[i] == gold[i];
    return static_cast<double>(hits) / static_cast<double>(gold.size());
}

// ---------------------------------------------------------------------------
// Statistics

namespace {

double beta_continued_fraction(double a, double b, double x) {
    constexpr int kMaxIterations = 300;
    constexpr double kEps = 1e-15;
    constexpr double kTiny = 1e-300;
    const double qab = a + b, qap = a + 1.0, qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::fabs(d) < kTiny) d = kTiny;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= kMaxIterations; ++m) {
        const double m2 = 2.0 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        const double delta = d * c;
        h *= delta;
        if (std::fabs(delta - 1.0) < kEps) break;
    }
    return h;
}

}  // namespace

double regularized_incomplete_beta(double a, double b, double x) {
    if (!(a > 0.0) || !(b > 0.0)) throw Error("incomplete beta needs positive shape parameters");
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    const double log_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) + a * std::log(x) + b * std::log1p(-x);
    const double front = std::exp(log_front);
    if (x < (a + 1.0) / (a + b + 2.0)) return front * beta_continued_fraction(a, b, x) / a;
    return 1.0 - front * beta_continued_fraction(b, a, 1.0 - x) / b;
}

double student_t_two_sided_p(double t, double df) {
    if (!(df > 0.0)) throw Error("student t needs positive degrees of freedom");
    if (std::isinf(t)) return 0.0;
    return regularized_incomplete_beta(df / 2.0, 0.5, df / (df + t * t));
}

TTestResult paired_t_test(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) {
        throw Error("paired t-test: " + std::to_string(a.size()) + " vs " + std::to_string(b.size()) + " scores");
    }
    if (a.size() < 2) throw Error("paired t-test needs at least 2 pairs, got " + std::to_string(a.size()));
    TTestResult r;
    r.n = a.size();
    const double n = static_cast<double>(r.n);
    std::vector<double> d(r.n);
    for (std::size_t i = 0; i < r.n; ++i) d[i] = a[i] - b[i];
    double sum = 0.0;
    for (double x : d) sum += x;
    r.mean_difference = sum / n;
    double ss = 0.0;
    for (double x : d) ss += (x - r.mean_difference) * (x - r.mean_difference);
    const double sd = std::sqrt(ss / (n - 1.0));

    if (std::all_of(d.begin(), d.end(), [](double x) { return x == 0.0; })) return r;  // t = 0, p = 1
    if (sd == 0.0) {
        log::warn("paired t-test: every difference equals " + std::to_string(r.mean_difference) +
                  "; zero variance, reporting p = 0");
        r.degenerate = true;
        r.t = std::copysign(std::numeric_limits<double>::infinity(), r.mean_difference);
        r.p = 0.0;
        r.significant = true;
        return r;
    }
    r.t = r.mean_difference * std::sqrt(n) / sd;
    r.p = student_t_two_sided_p(r.t, n - 1.0);
    r.significant = r.p < kSignificanceLevel;
    return r;
}

// ---------------------------------------------------------------------------
// Classifier configuration

std::string_view to_string(ClassifierKind k) noexcept {
    switch (k) {
        case ClassifierKind::Tree: return "tree";
        case ClassifierKind::Forest: return "forest";
        case ClassifierKind::Knn: return "knn";
        case ClassifierKind::Majority: return "majority";
    }
    return "?";
}

std::optional<ClassifierKind> parse_classifier(std::string_view s) noexcept {
    const std::string v = to_lower_ascii(s);
    if (v == "tree" || v == "j48" || v == "decision_tree") return ClassifierKind::Tree;
    if (v == "forest" || v == "random_forest" || v == "rf") return ClassifierKind::Forest;
    if (v == "knn" || v == "ibk") return ClassifierKind::Knn;
    if (v == "majority") return ClassifierKind::Majority;
    return std::nullopt;
}

namespace {

ordered_json opt_json(const std::optional<int>& v) { return v ? ordered_json(*v) : ordered_json(nullptr); }

}  // namespace

ordered_json ClassifierConfig::to_json() const {
    ordered_json j;
    j["kind"] = std::string(to_string(kind));
    switch (kind) {
        case ClassifierKind::Tree:
            j["pruning"] = tree.pruning;
            j["confidence"] = tree.confidence;
            j["min_leaf"] = tree.min_leaf;
            j["max_depth"] = opt_json(tree.max_depth);
            break;
        case ClassifierKind::Forest:
            j["n_trees"] = forest.n_trees;
            j["features_per_split"] = std::string(to_string(forest.features_per_split));
            j["bagging"] = forest.bagging;
            j["min_leaf"] = forest.min_leaf;
            j["max_depth"] = opt_json(forest.max_depth);
            break;
        case ClassifierKind::Knn:
            j["k"] = knn.k;
            j["weighting"] = std::string(to_string(knn.weighting));
            break;
        case ClassifierKind::Majority: break;
    }
    return j;
}

TrainedModel fit_classifier(const ClassifierConfig& c, std::span<const FeatureVector> x, std::span<const StanceLabel> y,
                            std::uint64_t seed, unsigned jobs) {
    switch (c.kind) {
        case ClassifierKind::Tree: return fit_tree(x, y, c.tree);
        case ClassifierKind::Forest: {
            ForestParams p = c.forest;
            p.seed = seed;
            return fit_forest(x, y, p, jobs);
        }
        case ClassifierKind::Knn: return fit_knn(x, y, c.knn);
        case ClassifierKind::Majority: {
            TreeParams p;
            p.pruning = false;
            p.max_depth = 0;
            return fit_tree(x, y, p);
        }
    }
    throw Error("unknown classifier kind");
}

// ---------------------------------------------------------------------------
// Protocol machinery

void check_leakage(const FeatureDictionaries& dicts, const FoldSpec& fold) {
    const auto& prov = dicts.provenance();
    for (const auto& r : fold.test) {
        if (std::binary_search(prov.begin(), prov.end(), r)) {
            throw LeakageError("fold '" + fold.id + "': feature dictionaries were built from test rumour '" + r + "'");
        }
    }
}

std::optional<double> FoldResult::accuracy() const {
    if (gold.empty()) return std::nullopt;
    return stance::accuracy(predicted, gold);
}

double EvalReport::headline() const { return protocol == "split" ? overall : macro_mean; }

std::vector<double> EvalReport::fold_scores() const {
    std::vector<double> out;
    for (const auto& f : folds) {
        if (auto a = f.accuracy()) out.push_back(*a);
    }
    return out;
}

namespace {

struct Item {
    std::size_t analysis;  // index into Prepared::analyses
    const TweetRecord* tweet;
};

/// Everything that does not depend on the enabled groups, computed once.
struct Prepared {
    std::string protocol;
    Timestamp now = 0;
    std::vector<TweetAnalysis> analyses;
    std::vector<FoldSpec> folds;
    std::vector<FeatureDictionaries> dicts;
    std::vector<std::vector<Item>> train;  // labelled only
    std::vector<std::vector<Item>> test;   // labelled only
    std::vector<std::size_t> n_train;      // all training tweets, labelled or not
};

/// Analyses every tweet of `sets`; returns per-dataset maps tweet id -> analysis index.
std::vector<std::unordered_map<std::string, std::size_t>> analyze_all(const std::vector<const Dataset*>& sets,
                                                                       const ResourceBundle& resources, Timestamp now,
                                                                       unsigned jobs, std::vector<TweetAnalysis>& out) {
    std::vector<Thread> threads;
    std::vector<std::size_t> owner;
    for (std::size_t s = 0; s < sets.size(); ++s) {
        for (auto& t : build_threads(*sets[s])) {
            threads.push_back(std::move(t));
            owner.push_back(s);
        }
    }
    std::vector<std::vector<TweetAnalysis>> per_thread(threads.size());
    parallel_for(threads.size(), jobs, [&](std::size_t i) {
        const Thread& th = threads[i];
        per_thread[i].push_back(analyze(th.source, th, resources, now));
        for (const auto& r : th.replies) per_thread[i].push_back(analyze(r, th, resources, now));
    });
    std::vector<std::unordered_map<std::string, std::size_t>> index(sets.size());
    for (std::size_t i = 0; i < threads.size(); ++i) {
        for (auto& a : per_thread[i]) {
            index[owner[i]].emplace(a.tweet_id, out.size());
            out.push_back(std::move(a));
        }
    }
    return index;
}

std::vector<const TweetRecord*> tweets_of(const Dataset& d, const std::vector<std::string>& rumours) {
    std::vector<const TweetRecord*> out;
    for (const auto& r : rumours) {
        auto it = d.rumour_index().find(r);
        if (it == d.rumour_index().end()) continue;
        for (const auto& id : it->second) out.push_back(d.find(id));
    }
    return out;
}

std::vector<Item> labelled_items(const std::vector<const TweetRecord*>& tweets,
                                 const std::unordered_map<std::string, std::size_t>& index) {
    std::vector<Item> out;
    for (const auto* t : tweets) {
        if (t->label) out.push_back({index.at(t->tweet_id), t});
    }
    return out;
}

FeatureDictionaries fold_dictionaries(const std::vector<const TweetRecord*>& train,
                                      const std::vector<const TweetRecord*>& test, const ResourceBundle& resources,
                                      bool inject_leak) {
    std::vector<TweetRecord> records;
    records.reserve(train.size() + (inject_leak ? test.size() : 0));
    for (const auto* t : train) records.push_back(*t);
    if (inject_leak) {
        for (const auto* t : test) records.push_back(*t);
    }
    return build_dictionaries(records, resources);
}

std::string scope_name(LooScope s) { return s == LooScope::ByEvent ? "loo_by_event" : "loo_global"; }

Prepared prepare_loo(const Dataset& d, const ResourceBundle& resources, const RunConfig& config) {
    Prepared p;
    p.protocol = scope_name(config.scope);
    p.now = config.now.value_or(d.latest_timestamp());
    p.folds = make_loo_folds(d, config.scope);
    const auto index = analyze_all({&d}, resources, p.now, config.jobs, p.analyses).front();
    const std::size_t n = p.folds.size();
    p.dicts.resize(n);
    p.train.resize(n);
    p.test.resize(n);
    p.n_train.resize(n);
    parallel_for(n, config.jobs, [&](std::size_t f) {
        const auto train = tweets_of(d, p.folds[f].train);
        const auto test = tweets_of(d, p.folds[f].test);
        p.dicts[f] = fold_dictionaries(train, test, resources, config.inject_leak);
        check_leakage(p.dicts[f], p.folds[f]);
        p.train[f] = labelled_items(train, index);
        p.test[f] = labelled_items(test, index);
        p.n_train[f] = train.size();
    });
    return p;
}

std::vector<std::string> rumour_ids(const Dataset& d) {
    std::vector<std::string> out;
    for (const auto& [r, ids] : d.rumour_index()) out.push_back(r);
    return out;
}

Prepared prepare_split(const Dataset& train_set, const Dataset& test_set, const ResourceBundle& resources,
                       const RunConfig& config) {
    for (const auto& t : test_set.tweets()) {
        if (train_set.find(t.tweet_id)) {
            throw ValidationError("tweet '" + t.tweet_id + "' occurs in both the training and the test data");
        }
    }
    Prepared p;
    p.protocol = "split";
    p.now = config.now.value_or(std::max(train_set.latest_timestamp(), test_set.latest_timestamp()));
    const auto index = analyze_all({&train_set, &test_set}, resources, p.now, config.jobs, p.analyses);

    FoldSpec fold;
    fold.id = "split";
    fold.scope = "*";
    fold.train = rumour_ids(train_set);
    // The guard can only see rumours that exist on the test side alone.
    for (auto& r : rumour_ids(test_set)) {
        if (!train_set.rumour_index().count(r)) fold.test.push_back(std::move(r));
    }
    const auto train = tweets_of(train_set, fold.train);
    const auto test = tweets_of(test_set, rumour_ids(test_set));
    p.dicts.push_back(fold_dictionaries(train, test, resources, config.inject_leak));
    check_leakage(p.dicts.front(), fold);
    p.train.push_back(labelled_items(train, index[0]));
    p.test.push_back(labelled_items(test, index[1]));
    p.n_train.push_back(train.size());
    p.folds.push_back(std::move(fold));
    return p;
}

std::uint64_t fold_seed(std::uint64_t seed, const std::string& fold_id) { return hash_combine(seed, fnv1a64(fold_id)); }

FoldResult run_fold(const Prepared& p, std::size_t f, const RunConfig& config, const GroupSet& groups, unsigned jobs,
                    const ResourceBundle& resources) {
    const FoldSpec& fold = p.folds[f];
    FoldResult r;
    r.id = fold.id;
    r.scope = fold.scope;
    r.test_rumours = fold.test;
    r.n_train = p.n_train[f];
    if (p.test[f].empty()) return r;
    if (p.train[f].empty()) throw ValidationError("fold '" + fold.id + "' has no labelled training tweets");

    const FeatureSchema schema = FeatureSchema::build(p.dicts[f], resources, groups);
    std::vector<FeatureVector> x;
    std::vector<StanceLabel> y;
    x.reserve(p.train[f].size());
    for (const auto& item : p.train[f]) {
        x.push_back(assemble(p.analyses[item.analysis], p.dicts[f], schema));
        y.push_back(*item.tweet->label);
    }
    const TrainedModel model = fit_classifier(config.classifier, x, y, fold_seed(config.seed, fold.id), jobs);
    for (const auto& item : p.test[f]) {
        const FeatureVector v = assemble(p.analyses[item.analysis], p.dicts[f], schema);
        r.tweet_ids.push_back(item.tweet->tweet_id);
        r.events.push_back(item.tweet->event_id);
        r.gold.push_back(*item.tweet->label);
        r.predicted.push_back(predict(model, v).label);
    }
    return r;
}

ordered_json config_echo(const RunConfig& config, const GroupSet& groups, const std::string& protocol, Timestamp now,
                         const ResourceBundle& resources) {
    ordered_json j;
    j["protocol"] = protocol;
    j["classifier"] = config.classifier.to_json();
    ordered_json list = ordered_json::array();
    for (auto g : groups.list()) list.push_back(std::string(to_string(g)));
    j["features"] = list;
    j["seed"] = config.seed;
    j["now"] = format_rfc3339(now);
    j["resources_hash"] = to_hex(resources.content_hash);
    // The AF word lists are a free choice of the bundle; their sizes travel with every report.
    ordered_json af_lists;
    for (const auto* l : {&resources.lexicon.surprise, &resources.lexicon.doubt, &resources.lexicon.no_doubt,
                          &resources.lexicon.support})
        af_lists[l->name] = l->words.size();
    j["af_lists"] = af_lists;
    j["t_test_unit"] = "per-fold accuracy";
    if (!config.context.is_null()) j["experiment"] = config.context;
    return j;
}

EvalReport summarize(const Prepared& p, std::vector<FoldResult> folds, ordered_json config) {
    EvalReport r;
    r.protocol = p.protocol;
    r.config = std::move(config);
    r.folds = std::move(folds);

    std::map<std::string, std::pair<std::size_t, std::size_t>> per_event;  // event -> (hits, n)
    std::size_t hits = 0, total = 0;
    for (const auto& f : r.folds) {
        for (std::size_t i = 0; i < f.gold.size(); ++i) {
            const bool hit = f.gold[i] == f.predicted[i];
            auto& e = per_event[f.events[i]];
            e.first += hit;
            ++e.second;
            hits += hit;
            ++total;
            ++r.confusion[index_of(f.gold[i])][index_of(f.predicted[i])];
        }
    }
    if (total == 0) throw ValidationError("evaluation produced no labelled test tweets");
    r.overall = static_cast<double>(hits) / static_cast<double>(total);
    double sum = 0.0;
    for (const auto& [event, c] : per_event) {
        const double acc = static_cast<double>(c.first) / static_cast<double>(c.second);
        r.events.push_back({event, c.second, acc});
        sum += acc;
    }
    r.macro_mean = sum / static_cast<double>(r.events.size());

    for (std::size_t c = 0; c < kNumLabels; ++c) {
        std::size_t row = 0, col = 0;
        for (std::size_t k = 0; k < kNumLabels; ++k) {
            row += r.confusion[c][k];
            col += r.confusion[k][c];
        }
        auto& m = r.per_class[c];
        m.support = row;
        m.recall = row ? static_cast<double>(r.confusion[c][c]) / static_cast<double>(row) : 0.0;
        m.precision = col ? static_cast<double>(r.confusion[c][c]) / static_cast<double>(col) : 0.0;
    }
    return r;
}

EvalReport evaluate(const Prepared& p, const RunConfig& config, const GroupSet& groups,
                    const ResourceBundle& resources) {
    const std::size_t n = p.folds.size();
    std::vector<FoldResult> results(n);
    // One fold: let the learner use the workers instead.
    const unsigned outer = n > 1 ? config.jobs : 1;
    const unsigned inner = n > 1 ? 1 : config.jobs;
    parallel_for(n, outer, [&](std::size_t f) { results[f] = run_fold(p, f, config, groups, inner, resources); });
    return summarize(p, std::move(results), config_echo(config, groups, p.protocol, p.now, resources));
}

void validate_config(const RunConfig& config) {
    if (config.groups.empty()) throw ConfigError("no feature groups enabled");
    config.classifier.tree.validate();
    config.classifier.forest.validate();
    config.classifier.knn.validate();
}

}  // namespace

EvalReport run_loo(const Dataset& d, const ResourceBundle& resources, const RunConfig& config) {
    validate_config(config);
    const Prepared p = prepare_loo(d, resources, config);
    return evaluate(p, config, config.groups, resources);
}

EvalReport run_split(const Dataset& train, const Dataset& test, const ResourceBundle& resources, const RunConfig& config) {
    validate_config(config);
    const Prepared p = prepare_split(train, test, resources, config);
    return evaluate(p, config, config.groups, resources);
}

// ---------------------------------------------------------------------------
// Ablation

std::vector<GroupSet> parse_ablation_targets(std::span<const std::string> tags) {
    std::vector<GroupSet> out;
    for (const auto& tag : tags) {
        if (tag == "AF" || tag == "af") {
            out.push_back(GroupSet::af());
        } else if (auto g = parse_group(tag)) {
            out.push_back(GroupSet{*g});
        } else {
            throw ConfigError("unknown feature group '" + tag + "'");
        }
    }
    return out;
}

AblationReport ablate(const Dataset& d, const std::optional<Dataset>& test, const ResourceBundle& resources,
                      const RunConfig& config, std::span<const GroupSet> targets) {
    validate_config(config);
    for (const auto& t : targets) {
        if (t.empty() || (t & config.groups) != t) {
            throw ConfigError("cannot remove '" + t.label() + "': not among the enabled feature groups");
        }
        if ((config.groups - t).empty()) throw ConfigError("removing '" + t.label() + "' leaves no features");
    }
    const Prepared p = test ? prepare_split(d, *test, resources, config) : prepare_loo(d, resources, config);

    AblationReport report;
    report.protocol = p.protocol;
    report.config = config_echo(config, config.groups, p.protocol, p.now, resources);
    ordered_json removed = ordered_json::array();
    for (const auto& t : targets) removed.push_back(t.label());
    report.config["ablate"] = removed;

    const EvalReport base = evaluate(p, config, config.groups, resources);
    AblationRow baseline;
    baseline.label = "all";
    baseline.accuracy = base.headline();
    baseline.fold_scores = base.fold_scores();
    report.rows.push_back(baseline);

    for (const auto& t : targets) {
        const EvalReport r = evaluate(p, config, config.groups - t, resources);
        AblationRow row;
        row.label = t.label();
        row.removed = t;
        row.accuracy = r.headline();
        row.delta = row.accuracy - baseline.accuracy;
        row.fold_scores = r.fold_scores();
        if (t == GroupSet::af()) {
            if (row.fold_scores.size() >= 2) {
                row.t_test = paired_t_test(baseline.fold_scores, row.fold_scores);
            } else {
                log::warn("ablation: the paired t-test needs at least 2 folds; skipped");
            }
        }
        report.rows.push_back(std::move(row));
    }
    return report;
}

// ---------------------------------------------------------------------------
// Reference values

namespace {

struct EventRefs {
    const char* key;
    double tree, forest, knn, tree_no_af, forest_no_af, knn_no_af;
};

constexpr EventRefs kEventRefs[] = {
    {"ottawa", 76.28, 69.39, 70.31, 75.62, 67.87, 69.26},
    {"ferguson", 75.20, 69.16, 72.35, 74.85, 68.31, 69.54},
    {"charlie", 78.21, 74.57, 78.33, 77.05, 75.40, 77.09},
    {"sydney", 80.01, 74.49, 75.44, 79.21, 72.57, 73.28},
    {"macro", 77.42, 71.90, 74.10, 76.68, 71.03, 72.29},
};

}  // namespace

std::optional<double> reference_accuracy(ClassifierKind kind, bool with_af, std::string_view event) {
    if (kind == ClassifierKind::Majority) return std::nullopt;
    if (event.empty()) {
        switch (kind) {
            case ClassifierKind::Tree: return with_af ? 74.16 : 72.25;
            case ClassifierKind::Forest: return with_af ? 79.02 : 76.54;
            case ClassifierKind::Knn: return with_af ? 75.59 : 73.02;
            default: return std::nullopt;
        }
    }
    const std::string lower = to_lower_ascii(event);
    for (const auto& e : kEventRefs) {
        if (lower.find(e.key) == std::string::npos) continue;
        switch (kind) {
            case ClassifierKind::Tree: return with_af ? e.tree : e.tree_no_af;
            case ClassifierKind::Forest: return with_af ? e.forest : e.forest_no_af;
            case ClassifierKind::Knn: return with_af ? e.knn : e.knn_no_af;
            default: return std::nullopt;
        }
    }
    return std::nullopt;
}

std::optional<double> reference_ablation(const GroupSet& removed) {
    if (removed.empty()) return 79.02;
    if (removed == GroupSet::af()) return 76.54;
    if (removed.size() != 1) return std::nullopt;
    switch (removed.list().front()) {
        case FeatureGroup::AF_ITS: return 78.55;
        case FeatureGroup::AF_SS: return 77.59;
        case FeatureGroup::AF_SPS: return 78.16;
        case FeatureGroup::AF_DS: return 78.36;
        case FeatureGroup::AF_NDS: return 77.59;
        case FeatureGroup::AF_IQ: return 78.64;
        default: return std::nullopt;
    }
}

// ---------------------------------------------------------------------------
// Rendering

namespace {

ordered_json ttest_json(const TTestResult& t) {
    ordered_json j;
    j["n"] = t.n;
    j["mean_difference"] = t.mean_difference;
    j["t"] = std::isinf(t.t) ? ordered_json(t.t > 0 ? "inf" : "-inf") : ordered_json(t.t);
    j["p"] = t.p;
    j["significant_p_lt_0.001"] = t.significant;
    j["degenerate_variance"] = t.degenerate;
    return j;
}

ordered_json ref_json(std::optional<double> v) { return v ? ordered_json(*v) : ordered_json(nullptr); }

std::string pct(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", 100.0 * v);
    return buf;
}

std::string num(double v, const char* fmt = "%.2f") {
    char buf[32];
    std::snprintf(buf, sizeof buf, fmt, v);
    return buf;
}

std::string pad(std::string s, std::size_t w, bool left = false) {
    if (s.size() >= w) return s;
    return left ? s + std::string(w - s.size(), ' ') : std::string(w - s.size(), ' ') + s;
}

ClassifierKind report_kind(const ordered_json& config) {
    return parse_classifier(config.at("classifier").at("kind").get<std::string>()).value_or(ClassifierKind::Majority);
}

bool report_has_af(const ordered_json& config) {
    GroupSet g;
    for (const auto& name : config.at("features")) {
        if (auto p = parse_group(name.get<std::string>())) g.insert(*p);
    }
    return (g & GroupSet::af()) == GroupSet::af();
}

std::string ref_cell(std::optional<double> v) { return v ? num(*v) : "-"; }

void header_lines(std::ostringstream& out, const ordered_json& config) {
    out << "protocol    " << config.at("protocol").get<std::string>() << '\n';
    out << "classifier  " << config.at("classifier").dump() << '\n';
    std::string features;
    for (const auto& f : config.at("features")) features += (features.empty() ? "" : ",") + f.get<std::string>();
    out << "features    " << features << '\n';
    out << "seed        " << config.at("seed").get<std::uint64_t>() << '\n';
    out << "now         " << config.at("now").get<std::string>() << '\n';
    out << "resources   " << config.at("resources_hash").get<std::string>() << '\n';
    std::string lists;
    for (const auto& [name, n] : config.at("af_lists").items())
        lists += (lists.empty() ? "" : ", ") + name + " " + std::to_string(n.get<std::size_t>());
    out << "af lists    " << lists << " words (bundle-defined)\n\n";
}

}  // namespace

ordered_json to_json(const EvalReport& r) {
    ordered_json j;
    j["report"] = "evaluation";
    j["protocol"] = r.protocol;
    j["config"] = r.config;
    j["headline_accuracy"] = r.headline();
    j["macro_mean"] = r.macro_mean;
    j["overall_accuracy"] = r.overall;

    const ClassifierKind kind = report_kind(r.config);
    const bool with_af = report_has_af(r.config);
    ordered_json events = ordered_json::array();
    for (const auto& e : r.events) {
        ordered_json ej;
        ej["event"] = e.event;
        ej["n"] = e.n;
        ej["accuracy"] = e.accuracy;
        ej["reference"] = ref_json(r.protocol == "split" ? std::nullopt : reference_accuracy(kind, with_af, e.event));
        events.push_back(ej);
    }
    j["events"] = events;
    j["reference_headline"] =
        ref_json(reference_accuracy(kind, with_af, r.protocol == "split" ? std::string_view{} : "macro"));

    ordered_json classes = ordered_json::array();
    for (std::size_t c = 0; c < kNumLabels; ++c) {
        ordered_json cj;
        cj["class"] = std::string(to_string(kAllLabels[c]));
        cj["support"] = r.per_class[c].support;
        cj["precision"] = r.per_class[c].precision;
        cj["recall"] = r.per_class[c].recall;
        classes.push_back(cj);
    }
    j["per_class"] = classes;
    ordered_json confusion = ordered_json::array();
    for (const auto& row : r.confusion) confusion.push_back(row);
    j["confusion"] = confusion;

    ordered_json folds = ordered_json::array();
    for (const auto& f : r.folds) {
        ordered_json fj;
        fj["id"] = f.id;
        fj["test_rumours"] = f.test_rumours;
        fj["n_train"] = f.n_train;
        fj["n_test"] = f.gold.size();
        auto acc = f.accuracy();
        fj["accuracy"] = acc ? ordered_json(*acc) : ordered_json(nullptr);
        ordered_json preds = ordered_json::array();
        for (std::size_t i = 0; i < f.gold.size(); ++i) {
            preds.push_back(ordered_json::array(
                {f.tweet_ids[i], std::string(to_string(f.gold[i])), std::string(to_string(f.predicted[i]))}));
        }
        fj["predictions"] = preds;
        folds.push_back(fj);
    }
    j["folds"] = folds;
    return j;
}

ordered_json to_json(const AblationReport& r) {
    ordered_json j;
    j["report"] = "ablation";
    j["protocol"] = r.protocol;
    j["config"] = r.config;
    const bool forest = report_kind(r.config) == ClassifierKind::Forest;
    ordered_json rows = ordered_json::array();
    for (const auto& row : r.rows) {
        ordered_json rj;
        rj["removed"] = row.label;
        rj["accuracy"] = row.accuracy;
        rj["delta"] = row.delta;
        rj["reference"] = ref_json(forest ? reference_ablation(row.removed) : std::nullopt);
        rj["fold_scores"] = row.fold_scores;
        rj["t_test"] = row.t_test ? ttest_json(*row.t_test) : ordered_json(nullptr);
        rows.push_back(rj);
    }
    j["rows"] = rows;
    return j;
}

std::string render_text(const EvalReport& r) {
    std::ostringstream out;
    header_lines(out, r.config);
    const ClassifierKind kind = report_kind(r.config);
    const bool with_af = report_has_af(r.config);
    const bool split = r.protocol == "split";

    out << pad("event", 28, true) << pad("tweets", 8) << pad("accuracy", 10) << pad("ref", 8) << '\n';
    for (const auto& e : r.events) {
        out << pad(e.event, 28, true) << pad(std::to_string(e.n), 8) << pad(pct(e.accuracy), 10)
            << pad(ref_cell(split ? std::nullopt : reference_accuracy(kind, with_af, e.event)), 8) << '\n';
    }
    if (split) {
        out << pad("accuracy", 28, true) << pad("", 8) << pad(pct(r.overall), 10)
            << pad(ref_cell(reference_accuracy(kind, with_af)), 8) << '\n';
    } else {
        out << pad("macro mean", 28, true) << pad("", 8) << pad(pct(r.macro_mean), 10)
            << pad(ref_cell(reference_accuracy(kind, with_af, "macro")), 8) << '\n';
        out << pad("overall", 28, true) << pad("", 8) << pad(pct(r.overall), 10) << pad("-", 8) << '\n';
    }

    out << "\nconfusion (rows gold, columns predicted)\n" << pad("", 10);
    for (auto l : kAllLabels) out << pad(std::string(to_string(l)), 9);
    out << '\n';
    for (std::size_t g = 0; g < kNumLabels; ++g) {
        out << pad(std::string(to_string(kAllLabels[g])), 10, true);
        for (std::size_t p = 0; p < kNumLabels; ++p) out << pad(std::to_string(r.confusion[g][p]), 9);
        out << '\n';
    }
    out << '\n' << pad("class", 10, true) << pad("precision", 11) << pad("recall", 9) << pad("support", 9) << '\n';
    for (std::size_t c = 0; c < kNumLabels; ++c) {
        out << pad(std::string(to_string(kAllLabels[c])), 10, true) << pad(pct(r.per_class[c].precision), 11)
            << pad(pct(r.per_class[c].recall), 9) << pad(std::to_string(r.per_class[c].support), 9) << '\n';
    }
    out << "\nfolds: " << r.folds.size() << '\n';
    return out.str();
}

std::string render_text(const AblationReport& r) {
    std::ostringstream out;
    header_lines(out, r.config);
    const bool forest = report_kind(r.config) == ClassifierKind::Forest;
    out << pad("features", 24, true) << pad("accuracy", 10) << pad("delta", 8) << pad("ref", 8) << '\n';
    for (const auto& row : r.rows) {
        const std::string name = row.label == "all" ? "All features" : "All without " + row.label;
        out << pad(name, 24, true) << pad(pct(row.accuracy), 10)
            << pad(row.label == "all" ? "" : num(100.0 * row.delta, "%+.2f"), 8)
            << pad(ref_cell(forest ? reference_ablation(row.removed) : std::nullopt), 8) << '\n';
    }
    for (const auto& row : r.rows) {
        if (!row.t_test) continue;
        const auto& t = *row.t_test;
        out << "\npaired t-test, all features vs without " << row.label << " (per-fold accuracy, n=" << t.n << ")\n";
        out << "  t = " << (std::isinf(t.t) ? std::string(t.t > 0 ? "inf" : "-inf") : num(t.t, "%.4f"))
            << "  p = " << num(t.p, "%.6g") << "  significant at p<0.001: " << (t.significant ? "yes" : "no")
            << (t.degenerate ? "  (zero variance)" : "") << '\n';
    }
    return out.str();
}

}  // namespace stance
