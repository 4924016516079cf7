// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The sreldiag Authors

#include <algorithm>
#include <limits>

#include "sreldiag/baselines.hpp"

namespace sreldiag {

void KMeansConfig::validate() const {
    if (k < 1) throw InvalidArgument("k must be >= 1");
    if (max_iter < 1) throw InvalidArgument("max_iter must be >= 1");
}

namespace {

double sq_dist(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        s += d * d;
    }
    return s;
}

std::pair<std::size_t, double> closest(const Matrix& centroids, std::span<const double> x) {
    std::size_t best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < centroids.rows; ++c) {
        const double d = sq_dist(centroids.row(c), x);
        if (d < best_d) {
            best_d = d;
            best = c;
        }
    }
    return {best, best_d};
}

Matrix kmeans_plus_plus(const Matrix& x, std::size_t k, Rng& rng) {
    Matrix c(k, x.cols);
    std::uniform_int_distribution<std::size_t> first(0, x.rows - 1);
    auto put = [&](std::size_t ci, std::size_t row) { std::copy(x.row(row).begin(), x.row(row).end(), c.row(ci).begin()); };
    put(0, first(rng));
    std::vector<double> d2(x.rows);
    for (std::size_t i = 0; i < x.rows; ++i) d2[i] = sq_dist(x.row(i), c.row(0));
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (std::size_t ci = 1; ci < k; ++ci) {
        double total = 0.0;
        for (double d : d2) total += d;
        std::size_t chosen = 0;
        if (total > 0.0) {
            double u = unit(rng) * total;
            chosen = x.rows - 1;
            for (std::size_t i = 0; i < x.rows; ++i) {
                if (u < d2[i]) {
                    chosen = i;
                    break;
                }
                u -= d2[i];
            }
        } else {
            chosen = std::uniform_int_distribution<std::size_t>(0, x.rows - 1)(rng);
        }
        put(ci, chosen);
        for (std::size_t i = 0; i < x.rows; ++i) d2[i] = std::min(d2[i], sq_dist(x.row(i), c.row(ci)));
    }
    return c;
}

}  // namespace

std::size_t KMeansModel::nearest(std::span<const double> x) const {
    if (x.size() != centroids.cols)
        throw InvalidArgument("k-means expects " + std::to_string(centroids.cols) + " features, got " +
                              std::to_string(x.size()));
    return closest(centroids, x).first;
}

double kmeans_inertia(const Matrix& x, const Matrix& centroids) {
    double s = 0.0;
    for (std::size_t i = 0; i < x.rows; ++i) s += closest(centroids, x.row(i)).second;
    return s;
}

KMeansModel kmeans_fit(const Matrix& x, std::span<const std::size_t> labels, std::size_t n_classes,
                       const KMeansConfig& cfg) {
    cfg.validate();
    if (x.rows < cfg.k)
        throw ClusterError("k-means needs at least k = " + std::to_string(cfg.k) + " samples, got " +
                           std::to_string(x.rows));
    if (labels.size() != x.rows) throw InvalidArgument("label count does not match rows");

    Rng rng(cfg.seed);
    KMeansModel m;
    m.centroids = kmeans_plus_plus(x, cfg.k, rng);
    std::vector<std::size_t> assign(x.rows, cfg.k);
    std::vector<double> dist(x.rows);

    for (std::size_t it = 1; it <= cfg.max_iter; ++it) {
        bool changed = false;
        double inertia = 0.0;
        for (std::size_t i = 0; i < x.rows; ++i) {
            const auto [c, d] = closest(m.centroids, x.row(i));
            changed |= c != assign[i];
            assign[i] = c;
            dist[i] = d;
            inertia += d;
        }
        m.inertia_history.push_back(inertia);
        m.iterations = it;
        if (!changed) {
            m.converged = true;
            break;
        }

        Matrix sums(cfg.k, x.cols);
        std::vector<std::size_t> sizes(cfg.k, 0);
        for (std::size_t i = 0; i < x.rows; ++i) {
            ++sizes[assign[i]];
            auto row = sums.row(assign[i]);
            const auto xi = x.row(i);
            for (std::size_t j = 0; j < x.cols; ++j) row[j] += xi[j];
        }
        std::vector<bool> taken(x.rows, false);
        for (std::size_t c = 0; c < cfg.k; ++c) {
            auto row = m.centroids.row(c);
            if (sizes[c] > 0) {
                const auto s = sums.row(c);
                for (std::size_t j = 0; j < x.cols; ++j) row[j] = s[j] / static_cast<double>(sizes[c]);
                continue;
            }
            std::size_t far = 0;
            double far_d = -1.0;
            for (std::size_t i = 0; i < x.rows; ++i)
                if (!taken[i] && dist[i] > far_d) {
                    far_d = dist[i];
                    far = i;
                }
            taken[far] = true;
            dist[far] = 0.0;
            std::copy(x.row(far).begin(), x.row(far).end(), row.begin());
        }
    }

    std::vector<std::size_t> overall(n_classes, 0);
    std::vector<std::vector<std::size_t>> per(cfg.k, std::vector<std::size_t>(n_classes, 0));
    for (std::size_t i = 0; i < x.rows; ++i) {
        if (labels[i] >= n_classes) throw InvalidArgument("label out of range");
        ++overall[labels[i]];
        ++per[closest(m.centroids, x.row(i)).first][labels[i]];
    }
    const auto argmax = [](const std::vector<std::size_t>& v) {
        return static_cast<std::size_t>(std::max_element(v.begin(), v.end()) - v.begin());
    };
    const std::size_t fallback = argmax(overall);
    for (std::size_t c = 0; c < cfg.k; ++c) {
        const bool empty = std::all_of(per[c].begin(), per[c].end(), [](std::size_t n) { return n == 0; });
        m.label_map.push_back(empty ? fallback : argmax(per[c]));
    }
    return m;
}

}  // namespace sreldiag
