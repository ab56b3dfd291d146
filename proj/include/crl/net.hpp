#pragma once

#include <cmath>
#include <span>
#include <stdexcept>
#include <vector>

#include "crl/errors.hpp"
#include "crl/rng.hpp"

namespace crl {

enum class Activation { linear, relu, bounded };  // bounded = tanh squashing

/// Fully connected network with one flat parameter vector. Layout per affine
/// layer: weight matrix row-major (fan_out x fan_in), then bias. Hidden
/// layers are rectified; the output head is linear (critic) or bounded
/// (actor).
struct DenseNet {
    std::vector<int> sizes;                // {input, hidden..., output}
    std::vector<Activation> activation;    // one tag per affine layer
    std::vector<double> theta;             // flat parameters
    std::vector<std::size_t> w_offset;     // per layer
    std::vector<std::size_t> b_offset;     // per layer

    int num_layers() const { return static_cast<int>(sizes.size()) - 1; }
    int input_size() const { return sizes.front(); }
    int output_size() const { return sizes.back(); }
    std::size_t param_count() const { return theta.size(); }
};

inline DenseNet make_net(std::vector<int> sizes, std::vector<Activation> activation) {
    if (sizes.size() < 2) throw std::invalid_argument("make_net: need at least input and output sizes");
    if (activation.size() != sizes.size() - 1)
        throw std::invalid_argument("make_net: one activation tag per affine layer");
    for (int s : sizes)
        if (s <= 0) throw std::invalid_argument("make_net: layer sizes must be positive");
    DenseNet net;
    net.sizes = std::move(sizes);
    net.activation = std::move(activation);
    std::size_t count = 0;
    for (int l = 0; l + 1 < static_cast<int>(net.sizes.size()); ++l) {
        net.w_offset.push_back(count);
        count += static_cast<std::size_t>(net.sizes[l]) * net.sizes[l + 1];
        net.b_offset.push_back(count);
        count += net.sizes[l + 1];
    }
    net.theta.assign(count, 0.0);
    return net;
}

/// Two 128-wide rectified hidden layers; head bounded for the policy, linear
/// for the value estimate.
inline DenseNet make_actor_net(int obs_dim, int hidden = 128) {
    return make_net({obs_dim, hidden, hidden, 1},
                    {Activation::relu, Activation::relu, Activation::bounded});
}

inline DenseNet make_critic_net(int obs_dim, int act_dim = 1, int hidden = 128) {
    return make_net({obs_dim + act_dim, hidden, hidden, 1},
                    {Activation::relu, Activation::relu, Activation::linear});
}

/// Uniform +-1/sqrt(fan_in) init per layer; the final layer is scaled down
/// (actor: keeps the initial residual action near zero).
inline void init_uniform(DenseNet& net, Rng& rng, double final_layer_scale = 1.0) {
    for (int l = 0; l < net.num_layers(); ++l) {
        const double bound = 1.0 / std::sqrt(static_cast<double>(net.sizes[l]));
        const double scale = l + 1 == net.num_layers() ? final_layer_scale : 1.0;
        const std::size_t w0 = net.w_offset[l];
        const std::size_t b0 = net.b_offset[l];
        const std::size_t nw = static_cast<std::size_t>(net.sizes[l]) * net.sizes[l + 1];
        for (std::size_t i = 0; i < nw; ++i) net.theta[w0 + i] = scale * uniform(rng, -bound, bound);
        for (int i = 0; i < net.sizes[l + 1]; ++i) net.theta[b0 + i] = scale * uniform(rng, -bound, bound);
    }
}

/// Per-layer pre-activations and outputs kept for the backward pass.
struct ForwardCache {
    std::vector<double> input;
    std::vector<std::vector<double>> pre;   // z_l per layer
    std::vector<std::vector<double>> post;  // act(z_l) per layer
};

namespace detail {

inline double apply_activation(Activation a, double z) {
    switch (a) {
        case Activation::linear: return z;
        case Activation::relu: return z > 0.0 ? z : 0.0;
        case Activation::bounded: return std::tanh(z);
    }
    return z;
}

/// Derivative expressed through pre-activation z and output y = act(z).
inline double activation_deriv(Activation a, double z, double y) {
    switch (a) {
        case Activation::linear: return 1.0;
        case Activation::relu: return z > 0.0 ? 1.0 : 0.0;
        case Activation::bounded: return 1.0 - y * y;
    }
    return 1.0;
}

}  // namespace detail

inline std::vector<double> forward(const DenseNet& net, std::span<const double> input,
                                   ForwardCache* cache = nullptr) {
    if (static_cast<int>(input.size()) != net.input_size())
        throw std::invalid_argument("forward: input size mismatch");
    std::vector<double> act(input.begin(), input.end());
    if (cache) {
        cache->input = act;
        cache->pre.assign(net.num_layers(), {});
        cache->post.assign(net.num_layers(), {});
    }
    for (int l = 0; l < net.num_layers(); ++l) {
        const int fan_in = net.sizes[l];
        const int fan_out = net.sizes[l + 1];
        const double* w = net.theta.data() + net.w_offset[l];
        const double* b = net.theta.data() + net.b_offset[l];
        std::vector<double> z(fan_out);
        for (int i = 0; i < fan_out; ++i) {
            const double* row = w + static_cast<std::size_t>(i) * fan_in;
            double acc = b[i];
            for (int j = 0; j < fan_in; ++j) acc += row[j] * act[j];
            z[i] = acc;
        }
        std::vector<double> out(fan_out);
        for (int i = 0; i < fan_out; ++i) out[i] = detail::apply_activation(net.activation[l], z[i]);
        if (cache) {
            cache->pre[l] = z;
            cache->post[l] = out;
        }
        act = std::move(out);
    }
    return act;
}

struct BackwardResult {
    std::vector<double> param_grad;  // same length as theta
    std::vector<double> input_grad;  // same length as input
};

/// Exact reverse-mode gradient of <upstream, output> for the forward pass
/// recorded in `cache`. The cache must come from a forward() call on the same
/// network shape.
inline BackwardResult backward(const DenseNet& net, const ForwardCache& cache,
                               std::span<const double> upstream) {
    const int layers = net.num_layers();
    if (static_cast<int>(cache.pre.size()) != layers ||
        static_cast<int>(cache.input.size()) != net.input_size())
        throw std::invalid_argument("backward: stale cache");
    if (static_cast<int>(upstream.size()) != net.output_size())
        throw std::invalid_argument("backward: upstream size mismatch");
    for (int l = 0; l < layers; ++l)
        if (static_cast<int>(cache.pre[l].size()) != net.sizes[l + 1])
            throw std::invalid_argument("backward: stale cache");

    BackwardResult res;
    res.param_grad.assign(net.param_count(), 0.0);
    std::vector<double> delta(upstream.begin(), upstream.end());
    for (int l = layers - 1; l >= 0; --l) {
        const int fan_in = net.sizes[l];
        const int fan_out = net.sizes[l + 1];
        for (int i = 0; i < fan_out; ++i)
            delta[i] *= detail::activation_deriv(net.activation[l], cache.pre[l][i], cache.post[l][i]);

        const std::vector<double>& below = l == 0 ? cache.input : cache.post[l - 1];
        double* gw = res.param_grad.data() + net.w_offset[l];
        double* gb = res.param_grad.data() + net.b_offset[l];
        for (int i = 0; i < fan_out; ++i) {
            double* row = gw + static_cast<std::size_t>(i) * fan_in;
            const double d = delta[i];
            for (int j = 0; j < fan_in; ++j) row[j] = d * below[j];
            gb[i] = d;
        }

        std::vector<double> next(fan_in, 0.0);
        const double* w = net.theta.data() + net.w_offset[l];
        for (int i = 0; i < fan_out; ++i) {
            const double* row = w + static_cast<std::size_t>(i) * fan_in;
            const double d = delta[i];
            for (int j = 0; j < fan_in; ++j) next[j] += d * row[j];
        }
        delta = std::move(next);
    }
    res.input_grad = std::move(delta);
    return res;
}

/// target <- eta * source + (1 - eta) * target, elementwise.
inline void soft_update(std::vector<double>& target, const std::vector<double>& source, double eta) {
    if (target.size() != source.size()) throw std::invalid_argument("soft_update: length mismatch");
    if (!(eta > 0.0 && eta <= 1.0)) throw std::invalid_argument("soft_update: eta must be in (0, 1]");
    for (std::size_t i = 0; i < target.size(); ++i)
        target[i] = eta * source[i] + (1.0 - eta) * target[i];
}

}  // namespace crl
