#pragma once

#include <array>
#include <filesystem>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include <json.hpp>

#include "stance/features.hpp"

namespace stance {

using ClassScores = std::array<double, kNumLabels>;

struct TreeParams {
    bool pruning = true;
    double confidence = 0.25;
    int min_leaf = 2;
    std::optional<int> max_depth;  // 0 gives a single leaf (majority predictor)

    void validate() const;
};

enum class FeatureSubset { Log2PlusOne, Sqrt, All };

std::string_view to_string(FeatureSubset s) noexcept;
std::optional<FeatureSubset> parse_feature_subset(std::string_view s) noexcept;

struct ForestParams {
    int n_trees = 50;
    FeatureSubset features_per_split = FeatureSubset::Log2PlusOne;
    bool bagging = true;
    std::uint64_t seed = 1;
    /// Growth limits of the member trees (never pruned).
    int min_leaf = 2;
    std::optional<int> max_depth;

    void validate() const;
};

enum class KnnWeighting { InverseDistance, Uniform };

std::string_view to_string(KnnWeighting w) noexcept;
std::optional<KnnWeighting> parse_knn_weighting(std::string_view s) noexcept;

struct KnnParams {
    int k = 10;
    KnnWeighting weighting = KnnWeighting::InverseDistance;

    void validate() const;
};

struct TreeNode {
    int feature = -1;  // -1 marks a leaf
    double threshold = 0.0;
    int left = -1;     // value <= threshold
    int right = -1;
    ClassScores counts{};  // training class counts reaching this node
};

/// Flat node array; node 0 is the root.
struct DecisionTree {
    std::vector<TreeNode> nodes;

    /// Normalized class distribution of the leaf reached by v.
    ClassScores distribution(const FeatureVector& v) const;
    std::size_t leaf_count() const;
    std::size_t depth() const;
};

struct ForestModel {
    ForestParams params;
    std::vector<DecisionTree> trees;
};

struct KnnModel {
    KnnParams params;
    int k = 0;                              // effective k after clamping
    std::vector<std::uint32_t> columns;     // columns with a non-zero training range
    std::vector<double> minimum, range;     // per entry of `columns`
    std::vector<std::vector<double>> rows;  // normalized training instances over `columns`
    std::vector<StanceLabel> labels;
};

enum class ModelKind { Tree, Forest, Knn };

std::string_view to_string(ModelKind k) noexcept;

struct TrainedModel {
    ModelKind kind = ModelKind::Tree;
    std::uint64_t schema_fingerprint = 0;
    std::size_t n_columns = 0;
    std::variant<DecisionTree, ForestModel, KnnModel> payload;
    /// Opaque caller data persisted with the model (e.g. the featurizer state).
    nlohmann::json attachments;
};

struct Prediction {
    StanceLabel label = StanceLabel::Support;
    ClassScores scores{};
};

/// Gain ratio of splitting at `value <= threshold`; 0 when the split entropy is 0.
double info_gain_ratio(std::span<const double> values, std::span<const StanceLabel> labels, double threshold);

/// Entropy (bits) of a class-count vector.
double entropy(const ClassScores& counts) noexcept;

/// Argmax with ties resolved in class order Support < Deny < Query < Comment.
StanceLabel argmax_label(const ClassScores& scores) noexcept;

TrainedModel fit_tree(std::span<const FeatureVector> x, std::span<const StanceLabel> y, const TreeParams& params);

/// `jobs` only changes speed: every tree draws from its own counter-based
/// stream keyed by (seed, tree index).
TrainedModel fit_forest(std::span<const FeatureVector> x, std::span<const StanceLabel> y, const ForestParams& params,
                        unsigned jobs = 1);

TrainedModel fit_knn(std::span<const FeatureVector> x, std::span<const StanceLabel> y, const KnnParams& params);

/// Throws SchemaMismatch when v was built against a different schema.
Prediction predict(const TrainedModel& model, const FeatureVector& v);

inline constexpr std::string_view kModelMagic = "STANCEMODEL";
inline constexpr int kModelVersion = 1;

nlohmann::json model_to_json(const TrainedModel& model);
/// Throws ModelFormatError on a wrong magic, version, or malformed payload.
TrainedModel model_from_json(const nlohmann::json& j);

void save_model(const TrainedModel& model, const std::filesystem::path& path);
TrainedModel load_model(const std::filesystem::path& path);

}  // namespace stance
