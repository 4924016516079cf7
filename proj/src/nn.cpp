// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The sreldiag Authors

#include <algorithm>
#include <cmath>
#include <numeric>

#include "sreldiag/nn.hpp"

namespace sreldiag {

std::string_view backbone_name(Backbone b) {
    switch (b) {
        case Backbone::Logistic: return "logistic";
        case Backbone::Mlp: return "mlp";
        case Backbone::Cnn1d: return "cnn1d";
    }
    return "?";
}

Backbone parse_backbone(std::string_view s) {
    if (s == "logistic") return Backbone::Logistic;
    if (s == "mlp") return Backbone::Mlp;
    if (s == "cnn1d") return Backbone::Cnn1d;
    throw InvalidArgument("unknown backbone '" + std::string(s) + "'");
}

NetworkSpec NetworkSpec::logistic(std::size_t input_dim, std::size_t output_dim) {
    NetworkSpec s;
    s.backbone = Backbone::Logistic;
    s.input_dim = input_dim;
    s.output_dim = output_dim;
    s.hidden.clear();
    return s;
}

NetworkSpec NetworkSpec::mlp(std::size_t input_dim, std::vector<std::size_t> hidden, std::size_t output_dim) {
    NetworkSpec s;
    s.backbone = Backbone::Mlp;
    s.input_dim = input_dim;
    s.output_dim = output_dim;
    s.hidden = std::move(hidden);
    return s;
}

NetworkSpec NetworkSpec::cnn1d(std::size_t input_dim, int layers, std::size_t output_dim) {
    NetworkSpec s;
    s.backbone = Backbone::Cnn1d;
    s.input_dim = input_dim;
    s.output_dim = output_dim;
    s.hidden.clear();
    s.kernel = 7;
    if (layers == 1) {
        s.channels = {8};
        s.pool = false;
    } else if (layers == 3) {
        s.channels = {8, 16, 32};
        s.pool = true;
    } else {
        throw InvalidArgument("cnn1d supports 1 or 3 conv layers");
    }
    return s;
}

namespace {

std::vector<LayerOp> build_ops(const NetworkSpec& spec) {
    using K = LayerOp::Kind;
    std::vector<LayerOp> ops;
    std::size_t off = 0;
    auto dense = [&](std::size_t in, std::size_t out, bool relu) {
        LayerOp op{K::Dense};
        op.in_len = in;
        op.out_len = out;
        op.w_off = off;
        op.b_off = off + in * out;
        op.feeds_relu = relu;
        off += in * out + out;
        ops.push_back(op);
        if (relu) {
            LayerOp r{K::Relu};
            r.in_len = r.out_len = out;
            ops.push_back(r);
        }
    };
    switch (spec.backbone) {
        case Backbone::Logistic:
            dense(spec.input_dim, spec.output_dim, false);
            break;
        case Backbone::Mlp: {
            std::size_t prev = spec.input_dim;
            for (auto h : spec.hidden) {
                dense(prev, h, true);
                prev = h;
            }
            dense(prev, spec.output_dim, false);
            break;
        }
        case Backbone::Cnn1d: {
            std::size_t ch = 1, len = spec.input_dim;
            for (auto c : spec.channels) {
                if (len < spec.kernel) throw InvalidArgument("cnn1d input too short for its conv stack");
                LayerOp conv{K::Conv};
                conv.in_ch = ch;
                conv.in_len = len;
                conv.out_ch = c;
                conv.out_len = len - spec.kernel + 1;
                conv.kernel = spec.kernel;
                conv.w_off = off;
                conv.b_off = off + c * ch * spec.kernel;
                conv.feeds_relu = true;
                off += c * ch * spec.kernel + c;
                ops.push_back(conv);
                ch = c;
                len = conv.out_len;
                LayerOp r{K::Relu};
                r.in_ch = r.out_ch = ch;
                r.in_len = r.out_len = len;
                ops.push_back(r);
                if (spec.pool) {
                    if (len < 2) throw InvalidArgument("cnn1d input too short for pooling");
                    LayerOp p{K::MaxPool};
                    p.in_ch = p.out_ch = ch;
                    p.in_len = len;
                    p.out_len = len / 2;
                    ops.push_back(p);
                    len /= 2;
                }
            }
            LayerOp gap{K::GlobalAvgPool};
            gap.in_ch = ch;
            gap.in_len = len;
            gap.out_ch = 1;
            gap.out_len = ch;
            ops.push_back(gap);
            dense(ch, spec.output_dim, false);
            break;
        }
    }
    return ops;
}

std::size_t total_params(const std::vector<LayerOp>& ops) {
    std::size_t n = 0;
    for (const auto& op : ops) {
        if (op.kind == LayerOp::Kind::Dense) n += op.in_len * op.out_len + op.out_len;
        if (op.kind == LayerOp::Kind::Conv) n += op.out_ch * op.in_ch * op.kernel + op.out_ch;
    }
    return n;
}

}  // namespace

void NetworkSpec::validate() const {
    if (input_dim < 1 || output_dim < 1) throw InvalidArgument("network dimensions must be >= 1");
    for (auto h : hidden)
        if (h < 1) throw InvalidArgument("hidden layer sizes must be >= 1");
    if (backbone == Backbone::Cnn1d) {
        if (channels.empty()) throw InvalidArgument("cnn1d needs at least one conv layer");
        if (kernel < 1) throw InvalidArgument("kernel must be >= 1");
        for (auto c : channels)
            if (c < 1) throw InvalidArgument("channel counts must be >= 1");
    }
    build_ops(*this);
}

std::string NetworkSpec::describe() const {
    std::string s(backbone_name(backbone));
    auto list = [](const std::vector<std::size_t>& v) {
        std::string o;
        for (std::size_t i = 0; i < v.size(); ++i) o += (i ? "-" : "") + std::to_string(v[i]);
        return o;
    };
    if (backbone == Backbone::Mlp) s += "(" + list(hidden) + ")";
    if (backbone == Backbone::Cnn1d)
        s += "(k" + std::to_string(kernel) + ":" + list(channels) + (pool ? ",pool" : "") + ")";
    return s + " " + std::to_string(input_dim) + "->" + std::to_string(output_dim);
}

std::size_t param_count(const NetworkSpec& spec) {
    spec.validate();
    return total_params(build_ops(spec));
}

Network::Network(NetworkSpec spec) : spec_(std::move(spec)) {
    spec_.validate();
    ops_ = build_ops(spec_);
    params_.assign(total_params(ops_), 0.0);
}

Network Network::initialized(NetworkSpec spec, std::uint64_t seed) {
    Network net(std::move(spec));
    Rng rng(seed);
    for (const auto& op : net.ops_) {
        std::size_t fan_in = 0, n_w = 0;
        if (op.kind == LayerOp::Kind::Dense) {
            fan_in = op.in_len;
            n_w = op.in_len * op.out_len;
        } else if (op.kind == LayerOp::Kind::Conv) {
            fan_in = op.in_ch * op.kernel;
            n_w = op.out_ch * op.in_ch * op.kernel;
        } else {
            continue;
        }
        const double bound = std::sqrt((op.feeds_relu ? 6.0 : 3.0) / static_cast<double>(fan_in));
        std::uniform_real_distribution<double> u(-bound, bound);
        for (std::size_t i = 0; i < n_w; ++i) net.params_[op.w_off + i] = u(rng);
    }
    return net;
}

void conv1d_forward(std::span<const double> x, std::size_t in_ch, std::size_t in_len, std::span<const double> w,
                    std::span<const double> b, std::size_t out_ch, std::size_t kernel, std::span<double> y) {
    const std::size_t out_len = in_len - kernel + 1;
    for (std::size_t oc = 0; oc < out_ch; ++oc) {
        double* yo = y.data() + oc * out_len;
        std::fill(yo, yo + out_len, b[oc]);
        for (std::size_t ic = 0; ic < in_ch; ++ic) {
            const double* xi = x.data() + ic * in_len;
            const double* wk = w.data() + (oc * in_ch + ic) * kernel;
            for (std::size_t j = 0; j < kernel; ++j) {
                const double wj = wk[j];
                for (std::size_t t = 0; t < out_len; ++t) yo[t] += wj * xi[t + j];
            }
        }
    }
}

std::span<const double> Network::forward(std::span<const double> x, Workspace& ws) const {
    using K = LayerOp::Kind;
    if (x.size() != spec_.input_dim)
        throw InvalidArgument("network expects input of length " + std::to_string(spec_.input_dim) + ", got " +
                              std::to_string(x.size()));
    const std::size_t n = ops_.size();
    ws.acts.resize(n + 1);
    ws.argmax.resize(n);
    ws.acts[0].assign(x.begin(), x.end());
    const double* p = params_.data();
    for (std::size_t i = 0; i < n; ++i) {
        const auto& op = ops_[i];
        const auto& in = ws.acts[i];
        auto& out = ws.acts[i + 1];
        out.resize(op.out_size());
        switch (op.kind) {
            case K::Dense: {
                const std::size_t no = op.out_len;
                const double* w = p + op.w_off;
                std::copy(p + op.b_off, p + op.b_off + no, out.begin());
                double* y = out.data();
                for (std::size_t k = 0; k < op.in_len; ++k) {
                    const double xk = in[k];
                    if (xk == 0.0) continue;
                    const double* wr = w + k * no;
                    for (std::size_t o = 0; o < no; ++o) y[o] += xk * wr[o];
                }
                break;
            }
            case K::Relu:
                for (std::size_t k = 0; k < in.size(); ++k) out[k] = in[k] > 0.0 ? in[k] : 0.0;
                break;
            case K::Conv:
                conv1d_forward(in, op.in_ch, op.in_len, {p + op.w_off, op.out_ch * op.in_ch * op.kernel},
                               {p + op.b_off, op.out_ch}, op.out_ch, op.kernel, out);
                break;
            case K::MaxPool: {
                auto& am = ws.argmax[i];
                am.resize(op.out_size());
                for (std::size_t c = 0; c < op.in_ch; ++c)
                    for (std::size_t t = 0; t < op.out_len; ++t) {
                        const std::size_t a = c * op.in_len + 2 * t;
                        const std::size_t best = in[a + 1] > in[a] ? a + 1 : a;
                        out[c * op.out_len + t] = in[best];
                        am[c * op.out_len + t] = static_cast<std::uint32_t>(best);
                    }
                break;
            }
            case K::GlobalAvgPool:
                for (std::size_t c = 0; c < op.in_ch; ++c) {
                    double s = 0.0;
                    for (std::size_t t = 0; t < op.in_len; ++t) s += in[c * op.in_len + t];
                    out[c] = s / static_cast<double>(op.in_len);
                }
                break;
        }
    }
    return ws.acts[n];
}

std::vector<double> Network::forward(std::span<const double> x) const {
    Workspace ws;
    auto out = forward(x, ws);
    return {out.begin(), out.end()};
}

double sigmoid(double z) {
    if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
    const double e = std::exp(z);
    return e / (1.0 + e);
}

double bce_with_logit(double z, double y) { return std::max(z, 0.0) - z * y + std::log1p(std::exp(-std::abs(z))); }

double softmax_cross_entropy(std::span<const double> logits, std::size_t target, std::span<double> probs) {
    const double mx = *std::max_element(logits.begin(), logits.end());
    double sum = 0.0;
    for (double z : logits) sum += std::exp(z - mx);
    const double lse = mx + std::log(sum);
    if (!probs.empty())
        for (std::size_t k = 0; k < logits.size(); ++k) probs[k] = std::exp(logits[k] - lse);
    return lse - logits[target];
}

std::vector<double> softmax(std::span<const double> logits) {
    std::vector<double> p(logits.size());
    softmax_cross_entropy(logits, 0, p);
    return p;
}

double sample_loss(const NetworkSpec& spec, std::span<const double> logits, double target) {
    if (spec.output_dim == 1) return bce_with_logit(logits[0], target);
    return softmax_cross_entropy(logits, static_cast<std::size_t>(target), {});
}

double Network::accumulate_gradient(std::span<const double> x, double target, std::span<double> grad,
                                    Workspace& ws) const {
    using K = LayerOp::Kind;
    const auto logits = forward(x, ws);
    const std::size_t n = ops_.size();
    ws.grads.resize(n + 1);
    auto& gout = ws.grads[n];
    gout.resize(logits.size());
    double loss = 0.0;
    if (spec_.output_dim == 1) {
        loss = bce_with_logit(logits[0], target);
        gout[0] = sigmoid(logits[0]) - target;
    } else {
        const auto t = static_cast<std::size_t>(target);
        if (t >= spec_.output_dim) throw InvalidArgument("class target out of range");
        loss = softmax_cross_entropy(logits, t, gout);
        gout[t] -= 1.0;
    }

    const double* p = params_.data();
    double* g = grad.data();
    for (std::size_t i = n; i-- > 0;) {
        const auto& op = ops_[i];
        const auto& in = ws.acts[i];
        const auto& gy = ws.grads[i + 1];
        auto& gx = ws.grads[i];
        const bool need_gx = i > 0;
        if (need_gx) gx.assign(op.in_size(), 0.0);
        switch (op.kind) {
            case K::Dense: {
                const std::size_t no = op.out_len;
                const double* w = p + op.w_off;
                double* gw = g + op.w_off;
                double* gb = g + op.b_off;
                for (std::size_t o = 0; o < no; ++o) gb[o] += gy[o];
                for (std::size_t k = 0; k < op.in_len; ++k) {
                    const double xk = in[k];
                    const double* wr = w + k * no;
                    if (xk != 0.0) {
                        double* gr = gw + k * no;
                        for (std::size_t o = 0; o < no; ++o) gr[o] += xk * gy[o];
                    }
                    if (need_gx) {
                        double s = 0.0;
                        for (std::size_t o = 0; o < no; ++o) s += wr[o] * gy[o];
                        gx[k] = s;
                    }
                }
                break;
            }
            case K::Relu:
                if (need_gx)
                    for (std::size_t k = 0; k < in.size(); ++k) gx[k] = in[k] > 0.0 ? gy[k] : 0.0;
                break;
            case K::Conv: {
                const double* w = p + op.w_off;
                double* gw = g + op.w_off;
                double* gb = g + op.b_off;
                for (std::size_t oc = 0; oc < op.out_ch; ++oc) {
                    const double* go = gy.data() + oc * op.out_len;
                    double sb = 0.0;
                    for (std::size_t t = 0; t < op.out_len; ++t) sb += go[t];
                    gb[oc] += sb;
                    for (std::size_t ic = 0; ic < op.in_ch; ++ic) {
                        const double* xi = in.data() + ic * op.in_len;
                        const std::size_t wbase = (oc * op.in_ch + ic) * op.kernel;
                        for (std::size_t j = 0; j < op.kernel; ++j) {
                            double s = 0.0;
                            for (std::size_t t = 0; t < op.out_len; ++t) s += go[t] * xi[t + j];
                            gw[wbase + j] += s;
                            if (need_gx) {
                                const double wj = w[wbase + j];
                                double* gxi = gx.data() + ic * op.in_len + j;
                                for (std::size_t t = 0; t < op.out_len; ++t) gxi[t] += wj * go[t];
                            }
                        }
                    }
                }
                break;
            }
            case K::MaxPool:
                if (need_gx) {
                    const auto& am = ws.argmax[i];
                    for (std::size_t k = 0; k < am.size(); ++k) gx[am[k]] += gy[k];
                }
                break;
            case K::GlobalAvgPool:
                if (need_gx) {
                    const double inv = 1.0 / static_cast<double>(op.in_len);
                    for (std::size_t c = 0; c < op.in_ch; ++c)
                        for (std::size_t t = 0; t < op.in_len; ++t) gx[c * op.in_len + t] = gy[c] * inv;
                }
                break;
        }
    }
    return loss;
}

double Network::mean_loss(const Matrix& x, std::span<const double> targets) const {
    if (x.rows == 0) return 0.0;
    Workspace ws;
    double sum = 0.0;
    for (std::size_t r = 0; r < x.rows; ++r) sum += sample_loss(spec_, forward(x.row(r), ws), targets[r]);
    return sum / static_cast<double>(x.rows);
}

NetworkScorer::NetworkScorer(Network net) : net_(std::move(net)) {
    if (net_.spec().output_dim != 1) throw InvalidArgument("binary scorer needs a single-output network");
}

double NetworkScorer::logit(std::span<const double> x) const {
    Workspace ws;
    return net_.forward(x, ws)[0];
}

MulticlassClassifier::MulticlassClassifier(Network net) : net_(std::move(net)) {
    if (net_.spec().output_dim < 2) throw InvalidArgument("multiclass classifier needs >= 2 outputs");
}

std::vector<double> MulticlassClassifier::probabilities(std::span<const double> x) const {
    Workspace ws;
    return softmax(net_.forward(x, ws));
}

std::size_t MulticlassClassifier::predict(std::span<const double> x) const {
    Workspace ws;
    const auto z = net_.forward(x, ws);
    return static_cast<std::size_t>(std::max_element(z.begin(), z.end()) - z.begin());
}

}  // namespace sreldiag
