#pragma once

// Independent reference computations. Nothing here calls into the library
// except for plain lookups (embedding rows).

#include <algorithm>
#include <array>
#include <cmath>
#include <string>
#include <vector>

#include "stance/resources.hpp"

namespace stance::oracle {

inline long double entropy(const std::vector<int>& labels) {
    if (labels.empty()) return 0;
    long double h = 0;
    for (int c = 0; c < 4; ++c) {
        auto n = std::count(labels.begin(), labels.end(), c);
        if (n == 0) continue;
        long double p = static_cast<long double>(n) / labels.size();
        h -= p * std::log2(p);
    }
    return h;
}

inline double gain_ratio(const std::vector<double>& values, const std::vector<int>& labels, double threshold) {
    std::vector<int> left, right;
    for (std::size_t i = 0; i < values.size(); ++i) (values[i] <= threshold ? left : right).push_back(labels[i]);
    const long double n = values.size();
    const long double gain = entropy(labels) - left.size() / n * entropy(left) - right.size() / n * entropy(right);
    long double split = 0;
    for (auto part : {left.size(), right.size()}) {
        if (part == 0) continue;
        long double p = part / n;
        split -= p * std::log2(p);
    }
    return split == 0 ? 0.0 : static_cast<double>(gain / split);
}

/// Min-max normalization over training rows, Euclidean distance, (distance, index)
/// order, 1/(d+1e-9) or unit votes, ties to the lowest class.
inline int knn(const std::vector<std::vector<double>>& train, const std::vector<int>& y, const std::vector<double>& q, int k,
               bool inverse) {
    const std::size_t cols = train[0].size();
    std::vector<double> lo(cols), hi(cols);
    for (std::size_t c = 0; c < cols; ++c) {
        lo[c] = hi[c] = train[0][c];
        for (const auto& r : train) {
            lo[c] = std::min(lo[c], r[c]);
            hi[c] = std::max(hi[c], r[c]);
        }
    }
    std::vector<std::pair<double, std::size_t>> d;
    for (std::size_t i = 0; i < train.size(); ++i) {
        double s = 0;
        for (std::size_t c = 0; c < cols; ++c) {
            if (hi[c] - lo[c] <= 0) continue;
            double a = (q[c] - lo[c]) / (hi[c] - lo[c]), b = (train[i][c] - lo[c]) / (hi[c] - lo[c]);
            s += (a - b) * (a - b);
        }
        d.emplace_back(std::sqrt(s), i);
    }
    std::sort(d.begin(), d.end());
    std::array<double, 4> votes{};
    const int kk = std::min<int>(k, static_cast<int>(d.size()));
    for (int i = 0; i < kk; ++i) votes[y[d[i].second]] += inverse ? 1.0 / (d[i].first + 1e-9) : 1.0;
    int best = 0;
    for (int c = 1; c < 4; ++c)
        if (votes[c] > votes[best]) best = c;
    return best;
}

/// Mean of the rows of in-vocabulary words.
inline std::vector<long double> mean_vector(const std::vector<std::string>& words, const EmbeddingTable& e) {
    std::vector<long double> sum(e.dimension(), 0.0L);
    std::size_t n = 0;
    for (const auto& w : words) {
        const Vector* row = e.find(w);
        if (!row) continue;
        for (std::size_t k = 0; k < sum.size(); ++k) sum[k] += (*row)[k];
        ++n;
    }
    if (n)
        for (auto& x : sum) x /= n;
    return sum;
}

template <class T>
double cosine(const std::vector<T>& u, const std::vector<T>& v) {
    long double dot = 0, nu = 0, nv = 0;
    for (std::size_t k = 0; k < u.size(); ++k) {
        dot += static_cast<long double>(u[k]) * v[k];
        nu += static_cast<long double>(u[k]) * u[k];
        nv += static_cast<long double>(v[k]) * v[k];
    }
    if (nu == 0 || nv == 0) return 0.0;
    return static_cast<double>(dot / (std::sqrt(nu) * std::sqrt(nv)));
}

/// Composite Simpson rule with n (even) panels.
template <class F>
double simpson(F f, double lo, double hi, int n = 20000) {
    const double h = (hi - lo) / n;
    double s = f(lo) + f(hi);
    for (int i = 1; i < n; ++i) s += f(lo + i * h) * (i % 2 ? 4 : 2);
    return s * h / 3;
}

/// Two-sided Student t tail by integrating the density over [0, |t|].
inline double t_two_sided_p(double t, double df) {
    const double c = std::exp(std::lgamma((df + 1) / 2) - std::lgamma(df / 2)) / std::sqrt(df * M_PI);
    return 1.0 - 2.0 * simpson([&](double x) { return c * std::pow(1 + x * x / df, -(df + 1) / 2); }, 0.0, std::abs(t));
}

/// I_x(a, b) for a, b >= 1 by quadrature.
inline double incomplete_beta(double a, double b, double x) {
    auto f = [&](double u) { return std::pow(u, a - 1) * std::pow(1 - u, b - 1); };
    return simpson(f, 0, x) / simpson(f, 0, 1);
}

}  // namespace stance::oracle
