#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "stance/corpus.hpp"
#include "stance/features.hpp"
#include "stance/learners.hpp"
#include "stance/resources.hpp"

namespace stance {

enum class LooScope { ByEvent, Global };

struct FoldSpec {
    std::string id;     // "<event>/<rumour>" for by_event, the rumour id for global
    std::string scope;  // event id, or "*" for global
    std::vector<std::string> train;
    std::vector<std::string> test;
};

/// One fold per rumour, ordered by (scope, rumour id). Throws ValidationError
/// when a scope holds fewer than two rumours.
std::vector<FoldSpec> make_loo_folds(const Dataset& d, LooScope scope);

/// Throws Error on empty input or a length mismatch.
double accuracy(std::span<const StanceLabel> predicted, std::span<const StanceLabel> gold);

// ---------------------------------------------------------------------------
// Statistics

/// I_x(a, b) via Lentz's continued fraction.
double regularized_incomplete_beta(double a, double b, double x);

/// Two-sided tail probability of Student's t with `df` degrees of freedom.
double student_t_two_sided_p(double t, double df);

struct TTestResult {
    std::size_t n = 0;
    double mean_difference = 0.0;
    double t = 0.0;
    double p = 1.0;
    bool significant = false;  // p < 0.001
    bool degenerate = false;   // zero variance with a non-zero mean
};

inline constexpr double kSignificanceLevel = 0.001;

/// Paired two-sided test on d = a - b. Throws Error when n < 2 or the lengths differ.
TTestResult paired_t_test(std::span<const double> a, std::span<const double> b);

// ---------------------------------------------------------------------------
// Protocols

enum class ClassifierKind { Tree, Forest, Knn, Majority };

std::string_view to_string(ClassifierKind k) noexcept;
std::optional<ClassifierKind> parse_classifier(std::string_view s) noexcept;

struct ClassifierConfig {
    ClassifierKind kind = ClassifierKind::Forest;
    TreeParams tree;
    ForestParams forest;
    KnnParams knn;

    nlohmann::ordered_json to_json() const;
};

/// Fits the configured learner; `seed` replaces the forest seed.
TrainedModel fit_classifier(const ClassifierConfig& c, std::span<const FeatureVector> x, std::span<const StanceLabel> y,
                            std::uint64_t seed, unsigned jobs = 1);

struct RunConfig {
    ClassifierConfig classifier;
    GroupSet groups = GroupSet::all();
    std::uint64_t seed = 1;
    unsigned jobs = 1;                 // never echoed: results do not depend on it
    std::optional<Timestamp> now;      // default: latest timestamp in the data
    LooScope scope = LooScope::ByEvent;
    /// Echoed verbatim under "experiment" (dataset paths and the like).
    nlohmann::ordered_json context;
    /// Test hook: builds each fold's dictionaries over train and test rumours.
    bool inject_leak = false;
};

/// Throws LeakageError when the dictionaries were built from a test rumour.
void check_leakage(const FeatureDictionaries& dicts, const FoldSpec& fold);

struct FoldResult {
    std::string id;
    std::string scope;
    std::vector<std::string> test_rumours;
    std::size_t n_train = 0;
    std::vector<std::string> tweet_ids;
    std::vector<std::string> events;  // per test tweet
    std::vector<StanceLabel> gold;
    std::vector<StanceLabel> predicted;

    /// nullopt when the fold has no labelled test tweet.
    std::optional<double> accuracy() const;
};

struct EventResult {
    std::string event;
    std::size_t n = 0;
    double accuracy = 0.0;
};

struct ClassMetrics {
    std::size_t support = 0;
    double precision = 0.0;  // 0 when the class is never predicted
    double recall = 0.0;
};

struct EvalReport {
    std::string protocol;  // loo_by_event, loo_global or split
    nlohmann::ordered_json config;
    std::vector<FoldResult> folds;
    std::vector<EventResult> events;
    double macro_mean = 0.0;  // unweighted over events
    double overall = 0.0;     // pooled over every test tweet
    std::array<std::array<std::size_t, kNumLabels>, kNumLabels> confusion{};  // [gold][predicted]
    std::array<ClassMetrics, kNumLabels> per_class{};

    /// Macro mean for LOO, pooled accuracy for the split protocol.
    double headline() const;
    /// Accuracy of every fold with labelled test tweets, in fold order.
    std::vector<double> fold_scores() const;
};

EvalReport run_loo(const Dataset& d, const ResourceBundle& resources, const RunConfig& config);
/// Throws ValidationError when the two datasets share a tweet id.
EvalReport run_split(const Dataset& train, const Dataset& test, const ResourceBundle& resources, const RunConfig& config);

// ---------------------------------------------------------------------------
// Ablation

struct AblationRow {
    std::string label;   // "all" for the baseline
    GroupSet removed;
    double accuracy = 0.0;
    double delta = 0.0;  // accuracy - baseline accuracy
    std::vector<double> fold_scores;
    std::optional<TTestResult> t_test;  // only for the row removing every AF group
};

struct AblationReport {
    std::string protocol;
    nlohmann::ordered_json config;
    std::vector<AblationRow> rows;  // baseline first
};

/// Parses ablation targets: single group tags or `AF` (all six AF groups).
std::vector<GroupSet> parse_ablation_targets(std::span<const std::string> tags);

/// Baseline plus one run per target, sharing folds and seeds. `test` selects the
/// split protocol. Throws ConfigError when a target is not enabled in `config`.
AblationReport ablate(const Dataset& d, const std::optional<Dataset>& test, const ResourceBundle& resources,
                      const RunConfig& config, std::span<const GroupSet> targets);

// ---------------------------------------------------------------------------
// Rendering

nlohmann::ordered_json to_json(const EvalReport& r);
nlohmann::ordered_json to_json(const AblationReport& r);
std::string render_text(const EvalReport& r);
std::string render_text(const AblationReport& r);

/// Published accuracy for a classifier with or without the AF groups on the
/// fixed split, or on an event of the PHEME LOO setting (keyed by a substring
/// of the event name: ottawa, ferguson, charlie, sydney).
std::optional<double> reference_accuracy(ClassifierKind kind, bool with_af, std::string_view event = {});
/// Published forest accuracy with `removed` taken out; nullopt when unpublished.
std::optional<double> reference_ablation(const GroupSet& removed);

}  // namespace stance
