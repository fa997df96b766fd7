#include "stance/learners.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include "stance/parallel.hpp"
#include "stance/random.hpp"

namespace stance {

using nlohmann::json;

// ---------------------------------------------------------------------------
// Parameters

void TreeParams::validate() const {
    if (!(confidence > 0.0 && confidence < 1.0)) throw ConfigError("tree confidence must lie in (0, 1)");
    if (min_leaf < 1) throw ConfigError("tree min_leaf must be at least 1");
    if (max_depth && *max_depth < 0) throw ConfigError("tree max_depth must be non-negative");
}

void ForestParams::validate() const {
    if (n_trees < 1) throw ConfigError("forest n_trees must be at least 1");
    if (min_leaf < 1) throw ConfigError("forest min_leaf must be at least 1");
    if (max_depth && *max_depth < 0) throw ConfigError("forest max_depth must be non-negative");
}

void KnnParams::validate() const {
    if (k < 1) throw ConfigError("knn k must be at least 1");
}

std::string_view to_string(FeatureSubset s) noexcept {
    switch (s) {
        case FeatureSubset::Log2PlusOne: return "log2+1";
        case FeatureSubset::Sqrt: return "sqrt";
        case FeatureSubset::All: return "all";
    }
    return "?";
}

std::optional<FeatureSubset> parse_feature_subset(std::string_view s) noexcept {
    if (s == "log2+1" || s == "log2") return FeatureSubset::Log2PlusOne;
    if (s == "sqrt") return FeatureSubset::Sqrt;
    if (s == "all") return FeatureSubset::All;
    return std::nullopt;
}

std::string_view to_string(KnnWeighting w) noexcept {
    return w == KnnWeighting::InverseDistance ? "inverse_distance" : "uniform";
}

std::optional<KnnWeighting> parse_knn_weighting(std::string_view s) noexcept {
    if (s == "inverse_distance") return KnnWeighting::InverseDistance;
    if (s == "uniform") return KnnWeighting::Uniform;
    return std::nullopt;
}

std::string_view to_string(ModelKind k) noexcept {
    switch (k) {
        case ModelKind::Tree: return "tree";
        case ModelKind::Forest: return "forest";
        case ModelKind::Knn: return "knn";
    }
    return "?";
}

// ---------------------------------------------------------------------------
// Split criterion

double entropy(const ClassScores& counts) noexcept {
    double total = 0.0;
    for (double c : counts) total += c;
    if (total <= 0.0) return 0.0;
    double h = 0.0;
    for (double c : counts) {
        if (c > 0.0) {
            const double p = c / total;
            h -= p * std::log2(p);
        }
    }
    return h;
}

namespace {

struct SplitScore {
    double gain = 0.0;
    double ratio = 0.0;
};

SplitScore score_split(const ClassScores& parent, const ClassScores& left) noexcept {
    ClassScores right{};
    double n = 0.0, nl = 0.0;
    for (std::size_t c = 0; c < kNumLabels; ++c) {
        right[c] = parent[c] - left[c];
        n += parent[c];
        nl += left[c];
    }
    const double nr = n - nl;
    if (n <= 0.0) return {};
    const double gain = entropy(parent) - (nl / n) * entropy(left) - (nr / n) * entropy(right);
    const double split = entropy(ClassScores{nl, nr, 0.0, 0.0});
    if (split <= 0.0) return {gain, 0.0};
    return {gain, gain / split};
}

}  // namespace

double info_gain_ratio(std::span<const double> values, std::span<const StanceLabel> labels, double threshold) {
    if (values.size() != labels.size()) {
        throw Error("info_gain_ratio: " + std::to_string(values.size()) + " values but " + std::to_string(labels.size()) +
                    " labels");
    }
    ClassScores parent{}, left{};
    for (std::size_t i = 0; i < values.size(); ++i) {
        parent[index_of(labels[i])] += 1.0;
        if (values[i] <= threshold) left[index_of(labels[i])] += 1.0;
    }
    return score_split(parent, left).ratio;
}

StanceLabel argmax_label(const ClassScores& scores) noexcept {
    std::size_t best = 0;
    for (std::size_t c = 1; c < kNumLabels; ++c) {
        if (scores[c] > scores[best]) best = c;
    }
    return kAllLabels[best];
}

// ---------------------------------------------------------------------------
// Training matrix

namespace {

/// Column-major view of the non-constant columns of a training set.
struct Matrix {
    std::size_t rows = 0;
    std::size_t width = 0;  // schema length
    std::uint64_t fingerprint = 0;
    std::vector<std::uint32_t> column_ids;    // original index, ascending
    std::vector<std::vector<double>> values;  // values[j][row]
};

Matrix densify(std::span<const FeatureVector> x, std::span<const StanceLabel> y) {
    if (x.empty()) throw Error("cannot fit a model on an empty training set");
    if (x.size() != y.size()) {
        throw Error("training set has " + std::to_string(x.size()) + " vectors but " + std::to_string(y.size()) + " labels");
    }
    Matrix m;
    m.rows = x.size();
    m.width = x.front().length();
    m.fingerprint = x.front().fingerprint();
    for (const auto& v : x) {
        if (v.fingerprint() != m.fingerprint || v.length() != m.width) {
            throw SchemaMismatch("training vectors were built against different schemas");
        }
    }
    // Collect per-column non-zeros, then keep columns with at least two distinct values.
    std::vector<std::vector<std::pair<std::uint32_t, double>>> nz(m.width);
    for (std::size_t r = 0; r < x.size(); ++r) {
        for (const auto& e : x[r].entries()) nz[e.index].emplace_back(static_cast<std::uint32_t>(r), e.value);
    }
    for (std::size_t j = 0; j < m.width; ++j) {
        const auto& col = nz[j];
        if (col.empty()) continue;
        bool varies = col.size() < m.rows;
        for (std::size_t k = 1; k < col.size() && !varies; ++k) varies = col[k].second != col[0].second;
        if (!varies) continue;
        std::vector<double> dense(m.rows, 0.0);
        for (const auto& [r, v] : col) dense[r] = v;
        m.column_ids.push_back(static_cast<std::uint32_t>(j));
        m.values.push_back(std::move(dense));
    }
    return m;
}

struct BestSplit {
    bool found = false;
    std::size_t column = 0;  // compact index
    double threshold = 0.0;
    double ratio = 0.0;
};

struct GrowthLimits {
    int min_leaf = 2;
    std::optional<int> max_depth;
};

/// Random column sampling for forest members; absent for plain trees.
struct ColumnSampler {
    std::uint64_t seed = 0;
    std::uint64_t tree = 0;
    std::size_t per_split = 0;
};

class TreeGrower {
public:
    TreeGrower(const Matrix& m, std::span<const StanceLabel> y, GrowthLimits limits,
               std::optional<ColumnSampler> sampler)
        : m_(m), y_(y), limits_(limits), sampler_(sampler) {}

    DecisionTree grow(std::vector<std::uint32_t> rows) {
        tree_.nodes.clear();
        node_counter_ = 0;
        build(rows, 0);
        return std::move(tree_);
    }

private:
    int build(std::vector<std::uint32_t>& rows, int depth) {
        const int id = static_cast<int>(tree_.nodes.size());
        tree_.nodes.emplace_back();
        const std::uint64_t node_key = node_counter_++;
        ClassScores counts{};
        for (auto r : rows) counts[index_of(y_[r])] += 1.0;
        tree_.nodes[id].counts = counts;

        const double n = static_cast<double>(rows.size());
        const bool pure = std::any_of(counts.begin(), counts.end(), [&](double c) { return c == n; });
        const bool too_small = rows.size() < 2 * static_cast<std::size_t>(limits_.min_leaf);
        const bool too_deep = limits_.max_depth && depth >= *limits_.max_depth;
        if (pure || too_small || too_deep) return id;

        const BestSplit best = find_split(rows, counts, node_key);
        if (!best.found) return id;

        const auto& col = m_.values[best.column];
        std::vector<std::uint32_t> left, right;
        for (auto r : rows) (col[r] <= best.threshold ? left : right).push_back(r);
        rows.clear();
        rows.shrink_to_fit();

        tree_.nodes[id].feature = static_cast<int>(m_.column_ids[best.column]);
        tree_.nodes[id].threshold = best.threshold;
        const int l = build(left, depth + 1);
        const int r = build(right, depth + 1);
        tree_.nodes[id].left = l;
        tree_.nodes[id].right = r;
        return id;
    }

    void evaluate(std::size_t j, const std::vector<std::uint32_t>& rows, const ClassScores& parent, BestSplit& best,
                  bool& gain_found) {
        const auto& col = m_.values[j];
        scratch_.clear();
        for (auto r : rows) scratch_.emplace_back(col[r], index_of(y_[r]));
        std::sort(scratch_.begin(), scratch_.end());
        if (scratch_.front().first == scratch_.back().first) return;

        const std::size_t min_leaf = static_cast<std::size_t>(limits_.min_leaf);
        ClassScores left{};
        for (std::size_t i = 0; i + 1 < scratch_.size(); ++i) {
            left[scratch_[i].second] += 1.0;
            if (scratch_[i].first == scratch_[i + 1].first) continue;
            const std::size_t nl = i + 1;
            if (nl < min_leaf || scratch_.size() - nl < min_leaf) continue;
            const SplitScore s = score_split(parent, left);
            if (!(s.gain > kMinGain)) continue;
            gain_found = true;
            if (!best.found || s.ratio > best.ratio || (s.ratio == best.ratio && j < best.column)) {
                best = {true, j, scratch_[i].first + (scratch_[i + 1].first - scratch_[i].first) / 2.0, s.ratio};
            }
        }
    }

    BestSplit find_split(const std::vector<std::uint32_t>& rows, const ClassScores& parent, std::uint64_t node_key) {
        BestSplit best;
        const std::size_t width = m_.values.size();
        bool gain_found = false;
        if (!sampler_ || sampler_->per_split >= width) {
            for (std::size_t j = 0; j < width; ++j) evaluate(j, rows, parent, best, gain_found);
            return best;
        }
        // Draw columns without replacement; after the first `per_split`, keep
        // drawing until one yields positive gain.
        order_.resize(width);
        std::iota(order_.begin(), order_.end(), std::size_t{0});
        CounterRng rng = CounterRng::keyed({sampler_->seed, sampler_->tree, node_key + 1});
        for (std::size_t drawn = 0; drawn < width; ++drawn) {
            if (drawn >= sampler_->per_split && gain_found) break;
            const std::size_t pick = drawn + static_cast<std::size_t>(rng.below(width - drawn));
            std::swap(order_[drawn], order_[pick]);
            evaluate(order_[drawn], rows, parent, best, gain_found);
        }
        return best;
    }

    static constexpr double kMinGain = 1e-12;

    const Matrix& m_;
    std::span<const StanceLabel> y_;
    GrowthLimits limits_;
    std::optional<ColumnSampler> sampler_;
    DecisionTree tree_;
    std::uint64_t node_counter_ = 0;
    std::vector<std::pair<double, std::size_t>> scratch_;
    std::vector<std::size_t> order_;
};

// ---------------------------------------------------------------------------
// Error-based pruning

/// Inverse of the standard normal CDF (Acklam's rational approximation plus
/// one Halley refinement step).
double normal_quantile(double p) {
    static constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02, -2.759285104469687e+02,
                                   1.383577518672690e+02,  -3.066479806614716e+01, 2.506628277459239e+00};
    static constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02, -1.556989798598866e+02,
                                   6.680131188771972e+01,  -1.328068155288572e+01};
    static constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01, -2.400758277161838e+00,
                                   -2.549732539343734e+00, 4.374664141464968e+00,  2.938163982698783e+00};
    static constexpr double d[] = {7.784695709041462e-03, 3.224671290700398e-01, 2.445134137142996e+00,
                                   3.754408661907416e+00};
    constexpr double low = 0.02425;
    double x;
    if (p < low) {
        const double q = std::sqrt(-2 * std::log(p));
        x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1);
    } else if (p <= 1 - low) {
        const double q = p - 0.5;
        const double r = q * q;
        x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
            (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1);
    } else {
        const double q = std::sqrt(-2 * std::log(1 - p));
        x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1);
    }
    const double e = 0.5 * std::erfc(-x / std::sqrt(2.0)) - p;
    const double u = e * std::sqrt(2 * M_PI) * std::exp(x * x / 2);
    return x - u / (1 + x * u / 2);
}

/// Extra errors predicted for a leaf with `errors` misclassified out of `n`
/// at confidence `cf` (upper binomial bound, C4.5 style).
double added_errors(double n, double errors, double cf) {
    if (errors < 1.0) {
        const double base = n * (1.0 - std::pow(cf, 1.0 / n));
        if (errors == 0.0) return base;
        return base + errors * (added_errors(n, 1.0, cf) - base);
    }
    if (errors + 0.5 >= n) return std::max(n - errors, 0.0);
    const double z = normal_quantile(1.0 - cf);
    const double f = (errors + 0.5) / n;
    const double r = (f + z * z / (2 * n) + z * std::sqrt(f / n - f * f / n + z * z / (4 * n * n))) / (1 + z * z / n);
    return r * n - errors;
}

double total(const ClassScores& c) { return c[0] + c[1] + c[2] + c[3]; }

double leaf_errors(const TreeNode& node) { return total(node.counts) - node.counts[index_of(argmax_label(node.counts))]; }

void make_leaf(TreeNode& node) {
    node.feature = -1;
    node.left = node.right = -1;
    node.threshold = 0.0;
}

double subtree_training_errors(const DecisionTree& t, int id) {
    const auto& node = t.nodes[id];
    if (node.feature < 0) return leaf_errors(node);
    return subtree_training_errors(t, node.left) + subtree_training_errors(t, node.right);
}

void collapse(DecisionTree& t, int id) {
    auto& node = t.nodes[id];
    if (node.feature < 0) return;
    if (subtree_training_errors(t, id) >= leaf_errors(node) - 1e-3) {
        make_leaf(node);
        return;
    }
    collapse(t, node.left);
    collapse(t, node.right);
}

double estimated_leaf_errors(const TreeNode& node, double cf) {
    const double n = total(node.counts);
    if (n <= 0.0) return 0.0;
    const double e = leaf_errors(node);
    return e + added_errors(n, e, cf);
}

double prune(DecisionTree& t, int id, double cf) {
    auto& node = t.nodes[id];
    if (node.feature < 0) return estimated_leaf_errors(node, cf);
    const double subtree = prune(t, t.nodes[id].left, cf) + prune(t, t.nodes[id].right, cf);
    const double as_leaf = estimated_leaf_errors(t.nodes[id], cf);
    if (as_leaf <= subtree + 0.1) {
        make_leaf(t.nodes[id]);
        return as_leaf;
    }
    return subtree;
}

/// Drops nodes unreachable from the root, preserving preorder.
DecisionTree compact(const DecisionTree& t) {
    DecisionTree out;
    auto copy = [&](auto&& self, int id) -> int {
        const int nid = static_cast<int>(out.nodes.size());
        out.nodes.push_back(t.nodes[id]);
        if (t.nodes[id].feature >= 0) {
            const int l = self(self, t.nodes[id].left);
            const int r = self(self, t.nodes[id].right);
            out.nodes[nid].left = l;
            out.nodes[nid].right = r;
        }
        return nid;
    };
    copy(copy, 0);
    return out;
}

ClassScores normalized(const ClassScores& counts) {
    ClassScores out{};
    const double n = total(counts);
    if (n <= 0.0) return out;
    for (std::size_t c = 0; c < kNumLabels; ++c) out[c] = counts[c] / n;
    return out;
}

std::vector<std::uint32_t> all_rows(std::size_t n) {
    std::vector<std::uint32_t> rows(n);
    std::iota(rows.begin(), rows.end(), 0u);
    return rows;
}

}  // namespace

// ---------------------------------------------------------------------------
// Trees

ClassScores DecisionTree::distribution(const FeatureVector& v) const {
    int id = 0;
    while (nodes[id].feature >= 0) {
        const auto& n = nodes[id];
        id = v.value(static_cast<std::size_t>(n.feature)) <= n.threshold ? n.left : n.right;
    }
    return normalized(nodes[id].counts);
}

std::size_t DecisionTree::leaf_count() const {
    return static_cast<std::size_t>(std::count_if(nodes.begin(), nodes.end(), [](const TreeNode& n) { return n.feature < 0; }));
}

std::size_t DecisionTree::depth() const {
    auto rec = [&](auto&& self, int id) -> std::size_t {
        if (nodes[id].feature < 0) return 0;
        return 1 + std::max(self(self, nodes[id].left), self(self, nodes[id].right));
    };
    return nodes.empty() ? 0 : rec(rec, 0);
}

TrainedModel fit_tree(std::span<const FeatureVector> x, std::span<const StanceLabel> y, const TreeParams& params) {
    params.validate();
    const Matrix m = densify(x, y);
    TreeGrower grower(m, y, {params.min_leaf, params.max_depth}, std::nullopt);
    DecisionTree tree = grower.grow(all_rows(m.rows));
    if (params.pruning) {
        collapse(tree, 0);
        prune(tree, 0, params.confidence);
        tree = compact(tree);
    }
    TrainedModel model;
    model.kind = ModelKind::Tree;
    model.schema_fingerprint = m.fingerprint;
    model.n_columns = m.width;
    model.payload = std::move(tree);
    return model;
}

TrainedModel fit_forest(std::span<const FeatureVector> x, std::span<const StanceLabel> y, const ForestParams& params,
                        unsigned jobs) {
    params.validate();
    const Matrix m = densify(x, y);
    const std::size_t width = std::max<std::size_t>(1, m.values.size());
    std::size_t per_split = width;
    switch (params.features_per_split) {
        case FeatureSubset::Log2PlusOne: per_split = static_cast<std::size_t>(std::bit_width(width) - 1) + 1; break;
        case FeatureSubset::Sqrt: per_split = std::max<std::size_t>(1, static_cast<std::size_t>(std::sqrt(double(width)))); break;
        case FeatureSubset::All: per_split = width; break;
    }

    ForestModel forest;
    forest.params = params;
    forest.trees.resize(static_cast<std::size_t>(params.n_trees));
    parallel_for(forest.trees.size(), jobs, [&](std::size_t t) {
        std::vector<std::uint32_t> rows;
        if (params.bagging) {
            CounterRng rng = CounterRng::keyed({params.seed, t, 0});
            rows.resize(m.rows);
            for (auto& r : rows) r = static_cast<std::uint32_t>(rng.below(m.rows));
        } else {
            rows = all_rows(m.rows);
        }
        TreeGrower grower(m, y, {params.min_leaf, params.max_depth}, ColumnSampler{params.seed, t, per_split});
        forest.trees[t] = grower.grow(std::move(rows));
    });

    TrainedModel model;
    model.kind = ModelKind::Forest;
    model.schema_fingerprint = m.fingerprint;
    model.n_columns = m.width;
    model.payload = std::move(forest);
    return model;
}

// ---------------------------------------------------------------------------
// k-NN

TrainedModel fit_knn(std::span<const FeatureVector> x, std::span<const StanceLabel> y, const KnnParams& params) {
    params.validate();
    if (x.empty()) throw Error("cannot fit a model on an empty training set");
    if (x.size() != y.size()) throw Error("training set size and label count differ");
    const std::size_t width = x.front().length();
    const std::uint64_t fp = x.front().fingerprint();
    std::vector<double> lo(width, 0.0), hi(width, 0.0);
    std::vector<std::size_t> nonzeros(width, 0);
    for (const auto& v : x) {
        if (v.fingerprint() != fp || v.length() != width) throw SchemaMismatch("training vectors were built against different schemas");
        for (const auto& e : v.entries()) {
            if (nonzeros[e.index]++ == 0) {
                lo[e.index] = hi[e.index] = e.value;
            } else {
                lo[e.index] = std::min(lo[e.index], e.value);
                hi[e.index] = std::max(hi[e.index], e.value);
            }
        }
    }
    KnnModel knn;
    knn.params = params;
    for (std::size_t j = 0; j < width; ++j) {
        if (nonzeros[j] < x.size()) {  // implicit zeros take part in the range
            lo[j] = std::min(lo[j], 0.0);
            hi[j] = std::max(hi[j], 0.0);
        }
        if (hi[j] - lo[j] > 0.0) {
            knn.columns.push_back(static_cast<std::uint32_t>(j));
            knn.minimum.push_back(lo[j]);
            knn.range.push_back(hi[j] - lo[j]);
        }
    }
    knn.rows.reserve(x.size());
    for (const auto& v : x) {
        std::vector<double> row(knn.columns.size());
        for (std::size_t c = 0; c < knn.columns.size(); ++c) row[c] = (v.value(knn.columns[c]) - knn.minimum[c]) / knn.range[c];
        knn.rows.push_back(std::move(row));
    }
    knn.labels.assign(y.begin(), y.end());
    knn.k = params.k;
    if (static_cast<std::size_t>(params.k) > x.size()) {
        log::warn("knn: k=" + std::to_string(params.k) + " exceeds the " + std::to_string(x.size()) +
                  " training instances; clamped");
        knn.k = static_cast<int>(x.size());
    }

    TrainedModel model;
    model.kind = ModelKind::Knn;
    model.schema_fingerprint = fp;
    model.n_columns = width;
    model.payload = std::move(knn);
    return model;
}

namespace {

ClassScores knn_scores(const KnnModel& knn, const FeatureVector& v) {
    std::vector<double> q(knn.columns.size());
    for (std::size_t c = 0; c < q.size(); ++c) q[c] = (v.value(knn.columns[c]) - knn.minimum[c]) / knn.range[c];

    std::vector<std::pair<double, std::size_t>> dist(knn.rows.size());
    for (std::size_t i = 0; i < knn.rows.size(); ++i) {
        double s = 0.0;
        for (std::size_t c = 0; c < q.size(); ++c) {
            const double d = q[c] - knn.rows[i][c];
            s += d * d;
        }
        dist[i] = {std::sqrt(s), i};
    }
    const auto k = static_cast<std::size_t>(knn.k);
    std::partial_sort(dist.begin(), dist.begin() + static_cast<std::ptrdiff_t>(k), dist.end());

    ClassScores votes{};
    for (std::size_t i = 0; i < k; ++i) {
        const double w = knn.params.weighting == KnnWeighting::InverseDistance ? 1.0 / (dist[i].first + 1e-9) : 1.0;
        votes[index_of(knn.labels[dist[i].second])] += w;
    }
    return normalized(votes);
}

}  // namespace

// ---------------------------------------------------------------------------
// Prediction

Prediction predict(const TrainedModel& model, const FeatureVector& v) {
    if (v.fingerprint() != model.schema_fingerprint || v.length() != model.n_columns) {
        throw SchemaMismatch("feature vector schema " + to_hex(v.fingerprint()) + " does not match model schema " +
                             to_hex(model.schema_fingerprint));
    }
    Prediction p;
    switch (model.kind) {
        case ModelKind::Tree: p.scores = std::get<DecisionTree>(model.payload).distribution(v); break;
        case ModelKind::Forest: {
            const auto& forest = std::get<ForestModel>(model.payload);
            for (const auto& t : forest.trees) {
                const ClassScores d = t.distribution(v);
                for (std::size_t c = 0; c < kNumLabels; ++c) p.scores[c] += d[c];
            }
            for (double& s : p.scores) s /= static_cast<double>(forest.trees.size());
            break;
        }
        case ModelKind::Knn: p.scores = knn_scores(std::get<KnnModel>(model.payload), v); break;
    }
    p.label = argmax_label(p.scores);
    return p;
}

// ---------------------------------------------------------------------------
// Serialization

namespace {

json tree_to_json(const DecisionTree& t) {
    json nodes = json::array();
    for (const auto& n : t.nodes) {
        nodes.push_back(json::array({n.feature, n.threshold, n.left, n.right,
                                     json::array({n.counts[0], n.counts[1], n.counts[2], n.counts[3]})}));
    }
    return nodes;
}

DecisionTree tree_from_json(const json& j, std::size_t width) {
    DecisionTree t;
    for (const auto& n : j) {
        TreeNode node;
        node.feature = n.at(0).get<int>();
        node.threshold = n.at(1).get<double>();
        node.left = n.at(2).get<int>();
        node.right = n.at(3).get<int>();
        for (std::size_t c = 0; c < kNumLabels; ++c) node.counts[c] = n.at(4).at(c).get<double>();
        t.nodes.push_back(node);
    }
    const int count = static_cast<int>(t.nodes.size());
    if (count == 0) throw ModelFormatError("tree without nodes");
    for (int i = 0; i < count; ++i) {
        const auto& n = t.nodes[static_cast<std::size_t>(i)];
        if (n.feature < 0) continue;
        if (static_cast<std::size_t>(n.feature) >= width || n.left <= i || n.right <= i || n.left >= count ||
            n.right >= count) {
            throw ModelFormatError("tree node " + std::to_string(i) + " has invalid links");
        }
    }
    return t;
}

json opt_int(const std::optional<int>& v) { return v ? json(*v) : json(nullptr); }

std::optional<int> read_opt_int(const json& j) {
    if (j.is_null()) return std::nullopt;
    return j.get<int>();
}

}  // namespace

json model_to_json(const TrainedModel& model) {
    json j;
    j["magic"] = std::string(kModelMagic);
    j["version"] = kModelVersion;
    j["kind"] = std::string(to_string(model.kind));
    j["schema_fingerprint"] = to_hex(model.schema_fingerprint);
    j["n_columns"] = model.n_columns;
    j["classes"] = json::array({"support", "deny", "query", "comment"});
    json payload;
    switch (model.kind) {
        case ModelKind::Tree: payload["nodes"] = tree_to_json(std::get<DecisionTree>(model.payload)); break;
        case ModelKind::Forest: {
            const auto& f = std::get<ForestModel>(model.payload);
            payload["params"] = {{"n_trees", f.params.n_trees},
                                 {"features_per_split", to_string(f.params.features_per_split)},
                                 {"bagging", f.params.bagging},
                                 {"seed", f.params.seed},
                                 {"min_leaf", f.params.min_leaf},
                                 {"max_depth", opt_int(f.params.max_depth)}};
            payload["trees"] = json::array();
            for (const auto& t : f.trees) payload["trees"].push_back(tree_to_json(t));
            break;
        }
        case ModelKind::Knn: {
            const auto& k = std::get<KnnModel>(model.payload);
            payload["params"] = {{"k", k.params.k}, {"weighting", to_string(k.params.weighting)}};
            payload["k"] = k.k;
            payload["columns"] = k.columns;
            payload["minimum"] = k.minimum;
            payload["range"] = k.range;
            payload["rows"] = k.rows;
            json labels = json::array();
            for (auto l : k.labels) labels.push_back(index_of(l));
            payload["labels"] = labels;
            break;
        }
    }
    j["payload"] = payload;
    j["attachments"] = model.attachments;
    return j;
}

TrainedModel model_from_json(const json& j) {
    try {
        if (!j.is_object() || j.value("magic", std::string()) != kModelMagic) throw ModelFormatError("not a stance model (bad magic)");
        const int version = j.at("version").get<int>();
        if (version != kModelVersion) {
            throw ModelFormatError("unsupported model version " + std::to_string(version) + " (expected " +
                                   std::to_string(kModelVersion) + ")");
        }
        TrainedModel m;
        const std::string kind = j.at("kind").get<std::string>();
        auto fp = from_hex(j.at("schema_fingerprint").get<std::string>());
        if (!fp) throw ModelFormatError("malformed schema fingerprint");
        m.schema_fingerprint = *fp;
        m.n_columns = j.at("n_columns").get<std::size_t>();
        m.attachments = j.value("attachments", json());
        const json& p = j.at("payload");
        if (kind == "tree") {
            m.kind = ModelKind::Tree;
            m.payload = tree_from_json(p.at("nodes"), m.n_columns);
        } else if (kind == "forest") {
            m.kind = ModelKind::Forest;
            ForestModel f;
            const json& pp = p.at("params");
            f.params.n_trees = pp.at("n_trees").get<int>();
            auto subset = parse_feature_subset(pp.at("features_per_split").get<std::string>());
            if (!subset) throw ModelFormatError("unknown features_per_split");
            f.params.features_per_split = *subset;
            f.params.bagging = pp.at("bagging").get<bool>();
            f.params.seed = pp.at("seed").get<std::uint64_t>();
            f.params.min_leaf = pp.at("min_leaf").get<int>();
            f.params.max_depth = read_opt_int(pp.at("max_depth"));
            for (const auto& t : p.at("trees")) f.trees.push_back(tree_from_json(t, m.n_columns));
            if (f.trees.size() != static_cast<std::size_t>(f.params.n_trees)) {
                throw ModelFormatError("forest holds " + std::to_string(f.trees.size()) + " trees, expected " +
                                       std::to_string(f.params.n_trees));
            }
            m.payload = std::move(f);
        } else if (kind == "knn") {
            m.kind = ModelKind::Knn;
            KnnModel k;
            k.params.k = p.at("params").at("k").get<int>();
            auto w = parse_knn_weighting(p.at("params").at("weighting").get<std::string>());
            if (!w) throw ModelFormatError("unknown knn weighting");
            k.params.weighting = *w;
            k.k = p.at("k").get<int>();
            k.columns = p.at("columns").get<std::vector<std::uint32_t>>();
            k.minimum = p.at("minimum").get<std::vector<double>>();
            k.range = p.at("range").get<std::vector<double>>();
            k.rows = p.at("rows").get<std::vector<std::vector<double>>>();
            for (const auto& l : p.at("labels")) {
                const auto idx = l.get<std::size_t>();
                if (idx >= kNumLabels) throw ModelFormatError("bad label index");
                k.labels.push_back(kAllLabels[idx]);
            }
            const std::size_t cols = k.columns.size();
            if (k.minimum.size() != cols || k.range.size() != cols || k.rows.size() != k.labels.size() || k.k < 1 ||
                static_cast<std::size_t>(k.k) > k.rows.size() ||
                std::any_of(k.rows.begin(), k.rows.end(), [&](const auto& r) { return r.size() != cols; }) ||
                std::any_of(k.columns.begin(), k.columns.end(), [&](auto c) { return c >= m.n_columns; })) {
                throw ModelFormatError("inconsistent knn payload");
            }
            m.payload = std::move(k);
        } else {
            throw ModelFormatError("unknown model kind '" + kind + "'");
        }
        return m;
    } catch (const json::exception& e) {
        throw ModelFormatError(std::string("corrupted model payload: ") + e.what());
    }
}

void save_model(const TrainedModel& model, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write model '" + path.string() + "'");
    out << model_to_json(model).dump() << '\n';
    if (!out) throw Error("failed writing model '" + path.string() + "'");
}

TrainedModel load_model(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open model '" + path.string() + "'");
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ModelFormatError("corrupted model file '" + path.string() + "': " + e.what());
    }
    return model_from_json(j);
}

}  // namespace stance
