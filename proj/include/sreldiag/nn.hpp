// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The sreldiag Authors

#pragma once

// Small dense / 1D-convolutional networks trained with Adam.
//
// Parameter layout (flat vector, layer by layer):
//   dense  : W[in][out] then b[out]
//   conv1d : W[out_ch][in_ch][kernel] then b[out_ch]   (valid padding, stride 1)
// Activations are channel-major [ch][len]; the input is a single channel.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "sreldiag/common.hpp"

namespace sreldiag {

enum class Backbone { Logistic, Mlp, Cnn1d };

std::string_view backbone_name(Backbone b);
Backbone parse_backbone(std::string_view s);

struct NetworkSpec {
    Backbone backbone = Backbone::Mlp;
    std::size_t input_dim = 201;
    std::size_t output_dim = 1;
    std::vector<std::size_t> hidden{64};  // Mlp widths
    std::vector<std::size_t> channels;    // Cnn1d conv widths
    std::size_t kernel = 7;
    bool pool = false;                    // max-pool(2) after each conv block

    static NetworkSpec logistic(std::size_t input_dim, std::size_t output_dim = 1);
    static NetworkSpec mlp(std::size_t input_dim, std::vector<std::size_t> hidden = {64}, std::size_t output_dim = 1);
    /// layers == 1: conv(7, 8) -> ReLU -> GAP -> dense.
    /// layers == 3: three conv(7, 8/16/32) -> ReLU -> maxpool(2) blocks -> GAP -> dense.
    static NetworkSpec cnn1d(std::size_t input_dim, int layers, std::size_t output_dim = 1);

    NetworkSpec with_output_dim(std::size_t out) const {
        NetworkSpec s = *this;
        s.output_dim = out;
        return s;
    }

    void validate() const;
    std::string describe() const;
    bool operator==(const NetworkSpec&) const = default;
};

std::size_t param_count(const NetworkSpec& spec);

struct LayerOp {
    enum class Kind { Dense, Relu, Conv, MaxPool, GlobalAvgPool } kind;
    std::size_t in_ch = 1, in_len = 0;
    std::size_t out_ch = 1, out_len = 0;
    std::size_t kernel = 0;
    std::size_t w_off = 0, b_off = 0;
    bool feeds_relu = false;

    std::size_t in_size() const { return in_ch * in_len; }
    std::size_t out_size() const { return out_ch * out_len; }
};

/// Scratch buffers for forward/backward passes; one per thread.
struct Workspace {
    std::vector<std::vector<double>> acts;
    std::vector<std::vector<double>> grads;
    std::vector<std::vector<std::uint32_t>> argmax;
    std::vector<double> out_grad;
};

class Network {
public:
    explicit Network(NetworkSpec spec);

    /// Kaiming-style uniform fan-in init: bound sqrt(6/fan_in) before a ReLU,
    /// sqrt(3/fan_in) for the output layer; biases zero.
    static Network initialized(NetworkSpec spec, std::uint64_t seed);

    const NetworkSpec& spec() const { return spec_; }
    const std::vector<LayerOp>& ops() const { return ops_; }
    std::span<double> params() { return params_; }
    std::span<const double> params() const { return params_; }
    std::size_t param_count() const { return params_.size(); }

    /// Output logits (output_dim values).
    std::vector<double> forward(std::span<const double> x) const;
    std::span<const double> forward(std::span<const double> x, Workspace& ws) const;

    /// Loss of one sample; adds d(loss)/d(params) into `grad`.
    /// Binary nets expect target 0/1, multiclass nets a class index.
    double accumulate_gradient(std::span<const double> x, double target, std::span<double> grad, Workspace& ws) const;

    /// Mean loss over the given rows (no gradient).
    double mean_loss(const Matrix& x, std::span<const double> targets) const;

    bool operator==(const Network& o) const { return spec_ == o.spec_ && params_ == o.params_; }

private:
    NetworkSpec spec_;
    std::vector<LayerOp> ops_;
    std::vector<double> params_;
};

double sigmoid(double z);
/// Numerically stable binary cross-entropy on a logit.
double bce_with_logit(double logit, double target);
/// Softmax cross-entropy on logits; writes probabilities if `probs` is non-empty.
double softmax_cross_entropy(std::span<const double> logits, std::size_t target, std::span<double> probs);
std::vector<double> softmax(std::span<const double> logits);

/// Sample loss for a network's head type.
double sample_loss(const NetworkSpec& spec, std::span<const double> logits, double target);

// Low-level layer kernels, exposed for tests.
void conv1d_forward(std::span<const double> x, std::size_t in_ch, std::size_t in_len, std::span<const double> w,
                    std::span<const double> b, std::size_t out_ch, std::size_t kernel, std::span<double> y);

struct AdamState {
    std::vector<double> m;
    std::vector<double> v;
};

struct AdamConfig {
    double lr = 5e-5;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
};

/// One bias-corrected Adam update at step t (t >= 1).
void adam_step(std::span<double> params, std::span<const double> grads, AdamState& state, std::uint64_t t,
               const AdamConfig& cfg);

struct TrainConfig {
    double lr = 5e-5;
    std::size_t batch = 256;
    std::size_t max_epochs = 2000;
    std::size_t patience = 20;
    std::uint64_t seed = 0;
    bool shuffle = true;

    void validate() const;
};

struct TrainLog {
    std::vector<double> train_loss;
    std::vector<double> val_loss;
    std::size_t best_epoch = 0;  // 1-based
    double best_val_loss = 0.0;
    std::size_t epochs_run() const { return train_loss.size(); }
};

struct TrainResult {
    Network network;
    TrainLog log;
};

class TrainingDiverged : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Mini-batch Adam with early stopping on validation loss; returns the best
/// epoch's weights. An empty validation set falls back to the training loss.
TrainResult train_network(Network init, const Matrix& x, std::span<const double> targets, const Matrix& x_val,
                          std::span<const double> val_targets, const TrainConfig& cfg);

/// Binary (BCE) training from a seeded init.
TrainResult train_binary(const NetworkSpec& spec, const Matrix& x, std::span<const double> targets,
                         const Matrix& x_val, std::span<const double> val_targets, const TrainConfig& cfg);

/// Softmax training; targets are class indices stored as doubles.
TrainResult train_multiclass(const NetworkSpec& spec, const Matrix& x, std::span<const double> labels,
                             const Matrix& x_val, std::span<const double> val_labels, const TrainConfig& cfg);

struct GradientCheck {
    double max_relative_error = 0.0;
    std::size_t worst_param = 0;
};

/// Central differences (step h) against the analytic gradient for one sample.
/// Relative error uses max(|analytic|, |numeric|, 1e-4) as denominator.
GradientCheck gradient_check(const Network& net, std::span<const double> x, double target, double h = 1e-5);

/// Trainable binary classifier producing a real-valued logit.
class BinaryScorer {
public:
    virtual ~BinaryScorer() = default;
    virtual double logit(std::span<const double> standardized) const = 0;
    virtual std::size_t input_dim() const = 0;
    virtual std::size_t param_count() const = 0;
};

class NetworkScorer final : public BinaryScorer {
public:
    explicit NetworkScorer(Network net);
    double logit(std::span<const double> standardized) const override;
    std::size_t input_dim() const override { return net_.spec().input_dim; }
    std::size_t param_count() const override { return net_.param_count(); }
    const Network& network() const { return net_; }

private:
    Network net_;
};

class MulticlassClassifier {
public:
    explicit MulticlassClassifier(Network net);
    std::vector<double> probabilities(std::span<const double> standardized) const;
    std::size_t predict(std::span<const double> standardized) const;
    const Network& network() const { return net_; }

private:
    Network net_;
};

class ModelFormatError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Binary network file, all integers and floats little-endian:
///   "SRDN" | u32 version(1) | u32 backbone | u32 flags(bit0 pool)
///   | u64 input_dim | u64 output_dim | u64 kernel
///   | u64 n_hidden | u64 hidden[n] | u64 n_channels | u64 channels[n]
///   | u64 n_params | f64 params[n]
void save_network(const Network& net, std::ostream& out);
Network load_network(std::istream& in);
void save_network(const Network& net, const std::filesystem::path& path);
Network load_network(const std::filesystem::path& path);

}  // namespace sreldiag
