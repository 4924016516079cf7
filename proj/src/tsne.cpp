// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The sreldiag Authors

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <ostream>

#include "sreldiag/analysis.hpp"

namespace sreldiag {

namespace {

constexpr double kEntropyTol = 1e-5;
constexpr int kMaxSearch = 200;

Matrix squared_distances(const Matrix& x) {
    Matrix d(x.rows, x.rows);
    for (std::size_t i = 0; i < x.rows; ++i)
        for (std::size_t j = i + 1; j < x.rows; ++j) {
            double s = 0.0;
            const auto a = x.row(i), b = x.row(j);
            for (std::size_t k = 0; k < x.cols; ++k) {
                const double t = a[k] - b[k];
                s += t * t;
            }
            d(i, j) = d(j, i) = s;
        }
    return d;
}

void check_perplexity(std::size_t n, double perplexity) {
    if (!(perplexity >= 5.0) || !(perplexity <= (static_cast<double>(n) - 1.0) / 3.0))
        throw PerplexityInfeasible("perplexity " + format_double(perplexity) + " is infeasible for " +
                                   std::to_string(n) + " samples (need 5 <= perplexity <= (n - 1) / 3)");
}

// Conditional row P_{.|i} for precision beta; returns the Shannon entropy (nats).
double conditional_row(const Matrix& d, std::size_t i, double beta, std::span<double> row) {
    double dmin = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < d.cols; ++j)
        if (j != i) dmin = std::min(dmin, d(i, j));
    double sum = 0.0, weighted = 0.0;
    for (std::size_t j = 0; j < d.cols; ++j) {
        if (j == i) {
            row[j] = 0.0;
            continue;
        }
        const double shifted = d(i, j) - dmin;
        row[j] = std::exp(-beta * shifted);
        sum += row[j];
        weighted += shifted * row[j];
    }
    for (auto& p : row) p /= sum;
    return std::log(sum) + beta * weighted / sum;
}

}  // namespace

Matrix tsne_affinities(const Matrix& x, double perplexity) {
    const std::size_t n = x.rows;
    check_perplexity(n, perplexity);
    const Matrix d = squared_distances(x);
    const double target = std::log(perplexity);
    Matrix cond(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        double beta = 1.0, lo = 0.0, hi = std::numeric_limits<double>::infinity();
        auto row = cond.row(i);
        for (int it = 0; it < kMaxSearch; ++it) {
            const double h = conditional_row(d, i, beta, row);
            const double diff = h - target;
            if (std::abs(diff) < kEntropyTol) break;
            if (diff > 0.0) {
                lo = beta;
                beta = std::isinf(hi) ? beta * 2.0 : (beta + hi) / 2.0;
            } else {
                hi = beta;
                beta = (beta + lo) / 2.0;
            }
        }
    }
    Matrix p(n, n);
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            p(i, j) = cond(i, j) + cond(j, i);
            total += p(i, j);
        }
    for (double& v : p.data) v /= total;
    return p;
}

double tsne_kl(const Matrix& p, const Matrix& y) {
    const std::size_t n = y.rows;
    double z = 0.0;
    Matrix num(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            const double dx = y(i, 0) - y(j, 0), dy = y(i, 1) - y(j, 1);
            num(i, j) = num(j, i) = 1.0 / (1.0 + dx * dx + dy * dy);
            z += 2.0 * num(i, j);
        }
    double kl = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            if (i == j || p(i, j) <= 0.0) continue;
            const double q = std::max(num(i, j) / z, 1e-300);
            kl += p(i, j) * std::log(p(i, j) / q);
        }
    return kl;
}

TsneResult tsne_embed(const Matrix& x, const TsneConfig& cfg) {
    const std::size_t n = x.rows;
    if (cfg.iterations < 1) throw InvalidArgument("t-SNE needs at least one iteration");
    if (!(cfg.learning_rate > 0.0)) throw InvalidArgument("t-SNE learning rate must be > 0");
    const Matrix p = tsne_affinities(x, cfg.perplexity);

    TsneResult out;
    out.embedding = Matrix(n, 2);
    Matrix& y = out.embedding;
    Rng rng(cfg.seed);
    std::normal_distribution<double> init(0.0, 1e-4);
    for (double& v : y.data) v = init(rng);
    out.initial_kl = tsne_kl(p, y);

    Matrix update(n, 2), gains(n, 2, 1.0), grad(n, 2), num(n, n);
    for (std::size_t it = 0; it < cfg.iterations; ++it) {
        const double exag = it < cfg.exaggeration_iters ? cfg.exaggeration : 1.0;
        const double momentum = it < cfg.momentum_switch ? cfg.momentum_initial : cfg.momentum_final;
        double z = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) {
                const double dx = y(i, 0) - y(j, 0), dy = y(i, 1) - y(j, 1);
                num(i, j) = num(j, i) = 1.0 / (1.0 + dx * dx + dy * dy);
                z += 2.0 * num(i, j);
            }
        std::fill(grad.data.begin(), grad.data.end(), 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            double gx = 0.0, gy = 0.0;
            for (std::size_t j = 0; j < n; ++j) {
                if (i == j) continue;
                const double w = (exag * p(i, j) - num(i, j) / z) * num(i, j);
                gx += w * (y(i, 0) - y(j, 0));
                gy += w * (y(i, 1) - y(j, 1));
            }
            grad(i, 0) = 4.0 * gx;
            grad(i, 1) = 4.0 * gy;
        }
        for (std::size_t k = 0; k < y.data.size(); ++k) {
            const bool same_sign = (grad.data[k] > 0.0) == (update.data[k] > 0.0);
            gains.data[k] = std::max(same_sign ? gains.data[k] * 0.8 : gains.data[k] + 0.2, 0.01);
            update.data[k] = momentum * update.data[k] - cfg.learning_rate * gains.data[k] * grad.data[k];
            y.data[k] += update.data[k];
        }
        for (std::size_t c = 0; c < 2; ++c) {
            double mean = 0.0;
            for (std::size_t i = 0; i < n; ++i) mean += y(i, c);
            mean /= static_cast<double>(n);
            for (std::size_t i = 0; i < n; ++i) y(i, c) -= mean;
        }
    }
    out.final_kl = tsne_kl(p, y);
    return out;
}

double silhouette_score(const Matrix& y, std::span<const std::size_t> labels) {
    if (labels.size() != y.rows) throw InvalidArgument("label count does not match rows");
    std::map<std::size_t, std::size_t> sizes;
    for (auto l : labels) ++sizes[l];
    if (sizes.size() < 2) throw InvalidArgument("silhouette needs at least two clusters");
    double total = 0.0;
    for (std::size_t i = 0; i < y.rows; ++i) {
        std::map<std::size_t, double> sum;
        for (std::size_t j = 0; j < y.rows; ++j) {
            if (i == j) continue;
            double s = 0.0;
            for (std::size_t k = 0; k < y.cols; ++k) {
                const double t = y(i, k) - y(j, k);
                s += t * t;
            }
            sum[labels[j]] += std::sqrt(s);
        }
        if (sizes[labels[i]] == 1) continue;
        const double a = sum[labels[i]] / static_cast<double>(sizes[labels[i]] - 1);
        double b = std::numeric_limits<double>::infinity();
        for (const auto& [l, cnt] : sizes)
            if (l != labels[i]) b = std::min(b, sum[l] / static_cast<double>(cnt));
        const double m = std::max(a, b);
        total += m > 0.0 ? (b - a) / m : 0.0;
    }
    return total / static_cast<double>(y.rows);
}

void write_embedding_csv(const LabeledDataset& ds, std::span<const std::size_t> indices, const Matrix& embedding,
                         std::ostream& out) {
    if (embedding.rows != indices.size() || embedding.cols != 2)
        throw InvalidArgument("embedding shape does not match the sample list");
    out << "id,cause,severity,x,y\n";
    for (std::size_t r = 0; r < indices.size(); ++r) {
        const auto& s = ds[indices[r]];
        out << s.id << ',' << cause_name(s.label.cause) << ',' << s.label.severity << ','
            << format_double(embedding(r, 0)) << ',' << format_double(embedding(r, 1)) << '\n';
    }
}

}  // namespace sreldiag
