// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The sreldiag Authors

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <spdlog/spdlog.h>

#include "sreldiag/nn.hpp"

namespace sreldiag {

void adam_step(std::span<double> params, std::span<const double> grads, AdamState& state, std::uint64_t t,
               const AdamConfig& cfg) {
    if (grads.size() != params.size()) throw InvalidArgument("adam_step: gradient/parameter size mismatch");
    if (t < 1) throw InvalidArgument("adam_step: t must be >= 1");
    if (state.m.empty()) {
        state.m.assign(params.size(), 0.0);
        state.v.assign(params.size(), 0.0);
    }
    if (state.m.size() != params.size()) throw InvalidArgument("adam_step: state size mismatch");
    const double bc1 = 1.0 - std::pow(cfg.beta1, static_cast<double>(t));
    const double bc2 = 1.0 - std::pow(cfg.beta2, static_cast<double>(t));
    for (std::size_t i = 0; i < params.size(); ++i) {
        const double g = grads[i];
        state.m[i] = cfg.beta1 * state.m[i] + (1.0 - cfg.beta1) * g;
        state.v[i] = cfg.beta2 * state.v[i] + (1.0 - cfg.beta2) * g * g;
        const double m_hat = state.m[i] / bc1;
        const double v_hat = state.v[i] / bc2;
        params[i] -= cfg.lr * m_hat / (std::sqrt(v_hat) + cfg.eps);
    }
}

void TrainConfig::validate() const {
    if (!(lr > 0.0)) throw InvalidArgument("learning rate must be > 0");
    if (batch < 1) throw InvalidArgument("batch size must be >= 1");
    if (patience < 1) throw InvalidArgument("patience must be >= 1");
    if (max_epochs < 1) throw InvalidArgument("max_epochs must be >= 1");
}

TrainResult train_network(Network net, const Matrix& x, std::span<const double> targets, const Matrix& x_val,
                          std::span<const double> val_targets, const TrainConfig& cfg) {
    cfg.validate();
    if (x.rows == 0) throw InvalidArgument("training set is empty");
    if (targets.size() != x.rows || val_targets.size() != x_val.rows)
        throw InvalidArgument("target count does not match sample count");
    if (x.cols != net.spec().input_dim || (x_val.rows > 0 && x_val.cols != net.spec().input_dim))
        throw InvalidArgument("feature width does not match the network input");

    Rng shuffle_rng(derive_seed(cfg.seed, 0x5348));
    std::vector<std::size_t> order(x.rows);
    std::iota(order.begin(), order.end(), 0);

    AdamConfig adam{cfg.lr};
    AdamState state;
    std::uint64_t step = 0;
    std::vector<double> grad(net.param_count());
    std::vector<double> best_params(net.params().begin(), net.params().end());
    Workspace ws;
    TrainLog log;
    log.best_val_loss = std::numeric_limits<double>::infinity();
    std::size_t since_best = 0;

    for (std::size_t epoch = 1; epoch <= cfg.max_epochs; ++epoch) {
        if (cfg.shuffle) std::shuffle(order.begin(), order.end(), shuffle_rng);
        double epoch_loss = 0.0;
        for (std::size_t start = 0; start < x.rows; start += cfg.batch) {
            const std::size_t end = std::min(start + cfg.batch, x.rows);
            std::fill(grad.begin(), grad.end(), 0.0);
            for (std::size_t k = start; k < end; ++k)
                epoch_loss += net.accumulate_gradient(x.row(order[k]), targets[order[k]], grad, ws);
            const double inv = 1.0 / static_cast<double>(end - start);
            for (double& gv : grad) gv *= inv;
            adam_step(net.params(), grad, state, ++step, adam);
        }
        const double train_loss = epoch_loss / static_cast<double>(x.rows);
        const double val_loss = x_val.rows > 0 ? net.mean_loss(x_val, val_targets) : net.mean_loss(x, targets);
        if (!std::isfinite(train_loss) || !std::isfinite(val_loss))
            throw TrainingDiverged("loss became non-finite at epoch " + std::to_string(epoch));
        log.train_loss.push_back(train_loss);
        log.val_loss.push_back(val_loss);
        if (val_loss < log.best_val_loss) {
            log.best_val_loss = val_loss;
            log.best_epoch = epoch;
            std::copy(net.params().begin(), net.params().end(), best_params.begin());
            since_best = 0;
        } else if (++since_best >= cfg.patience) {
            break;
        }
    }
    std::copy(best_params.begin(), best_params.end(), net.params().begin());
    spdlog::debug("trained {}: {} epochs, best epoch {} (val loss {:.6f})", net.spec().describe(), log.epochs_run(),
                  log.best_epoch, log.best_val_loss);
    return {std::move(net), std::move(log)};
}

TrainResult train_binary(const NetworkSpec& spec, const Matrix& x, std::span<const double> targets,
                         const Matrix& x_val, std::span<const double> val_targets, const TrainConfig& cfg) {
    if (spec.output_dim != 1) throw InvalidArgument("binary training needs output_dim == 1");
    for (double t : targets)
        if (t != 0.0 && t != 1.0) throw InvalidArgument("binary targets must be 0 or 1");
    return train_network(Network::initialized(spec, derive_seed(cfg.seed, 0x494E)), x, targets, x_val,
                         val_targets, cfg);
}

TrainResult train_multiclass(const NetworkSpec& spec, const Matrix& x, std::span<const double> labels,
                             const Matrix& x_val, std::span<const double> val_labels, const TrainConfig& cfg) {
    if (spec.output_dim < 2) throw InvalidArgument("multiclass training needs output_dim >= 2");
    return train_network(Network::initialized(spec, derive_seed(cfg.seed, 0x494E)), x, labels, x_val, val_labels,
                         cfg);
}

GradientCheck gradient_check(const Network& net, std::span<const double> x, double target, double h) {
    std::vector<double> analytic(net.param_count(), 0.0);
    Workspace ws;
    net.accumulate_gradient(x, target, analytic, ws);

    Network probe = net;
    auto loss_at = [&](std::size_t i, double value) {
        const double saved = probe.params()[i];
        probe.params()[i] = value;
        const double l = sample_loss(probe.spec(), probe.forward(x, ws), target);
        probe.params()[i] = saved;
        return l;
    };

    GradientCheck out;
    for (std::size_t i = 0; i < net.param_count(); ++i) {
        const double p = net.params()[i];
        const double numeric = (loss_at(i, p + h) - loss_at(i, p - h)) / (2.0 * h);
        const double denom = std::max({std::abs(analytic[i]), std::abs(numeric), 1e-4});
        const double rel = std::abs(analytic[i] - numeric) / denom;
        if (rel > out.max_relative_error) {
            out.max_relative_error = rel;
            out.worst_param = i;
        }
    }
    return out;
}

}  // namespace sreldiag
