#include "poolforge/nn.hpp"

#include <cmath>
#include <cstring>
#include <numbers>

#include "poolforge/kernels.hpp"

namespace poolforge {

std::size_t Mlp::parameter_count() const noexcept {
    std::size_t total = 0;
    for (const auto& layer : layers) total += layer.weight.size() + layer.bias.size();
    return total;
}

Mlp make_mlp(std::span<const std::size_t> widths, Rng& rng) {
    require(!widths.empty(), ErrorCode::invalid_argument, "make_mlp needs an input width");
    Mlp net;
    net.input_dim = widths.front();
    for (std::size_t l = 1; l < widths.size(); ++l) {
        const std::size_t fan_in = widths[l - 1];
        require(fan_in >= 1 && widths[l] >= 1, ErrorCode::invalid_argument, "layer widths must be positive");
        const double bound = 1.0 / std::sqrt(static_cast<double>(fan_in));
        DenseLayer layer{Matrix(widths[l], fan_in), std::vector<double>(widths[l])};
        for (double& w : layer.weight.values()) w = uniform(rng, -bound, bound);
        for (double& b : layer.bias) b = uniform(rng, -bound, bound);
        net.layers.push_back(std::move(layer));
    }
    return net;
}

Mlp zeros_like(const Mlp& net) {
    Mlp out;
    out.input_dim = net.input_dim;
    for (const auto& layer : net.layers) {
        out.layers.push_back({Matrix(layer.outputs(), layer.inputs()), std::vector<double>(layer.outputs(), 0.0)});
    }
    return out;
}

MlpTape forward_tape(const Mlp& net, const Matrix& x) {
    require(x.cols() == net.input_dim, ErrorCode::dimension_mismatch,
            "input has " + std::to_string(x.cols()) + " features, network expects " + std::to_string(net.input_dim));
    MlpTape tape;
    tape.activations.reserve(net.layers.size() + 1);
    tape.activations.push_back(x);
    for (std::size_t l = 0; l < net.layers.size(); ++l) {
        const auto& layer = net.layers[l];
        Matrix out(x.rows(), layer.outputs());
        kernels::dense_forward(tape.activations.back(), layer.weight, layer.bias, out);
        if (l + 1 < net.layers.size()) {
            for (double& v : out.values()) v = std::tanh(v);
        }
        tape.activations.push_back(std::move(out));
    }
    return tape;
}

Matrix forward(const Mlp& net, const Matrix& x) { return std::move(forward_tape(net, x).activations.back()); }

Matrix backward(const Mlp& net, const MlpTape& tape, const Matrix& grad_out, Mlp& grads) {
    require(grads.layers.size() == net.layers.size(), ErrorCode::dimension_mismatch, "gradient shape");
    Matrix delta = grad_out;
    for (std::size_t l = net.layers.size(); l-- > 0;) {
        const auto& layer = net.layers[l];
        if (l + 1 < net.layers.size()) {
            // tanh'(u) = 1 - tanh(u)^2, and the tape holds tanh(u).
            auto act = tape.activations[l + 1].values();
            auto d = delta.values();
            for (std::size_t i = 0; i < d.size(); ++i) d[i] *= 1.0 - act[i] * act[i];
        }
        kernels::dense_weight_grad(delta, tape.activations[l], grads.layers[l].weight, grads.layers[l].bias);
        Matrix grad_in(delta.rows(), layer.inputs());
        kernels::dense_input_grad(delta, layer.weight, grad_in);
        delta = std::move(grad_in);
    }
    return delta;
}

std::vector<std::span<double>> parameter_views(Mlp& net) {
    std::vector<std::span<double>> views;
    for (auto& layer : net.layers) {
        views.push_back(layer.weight.values());
        views.push_back(layer.bias);
    }
    return views;
}

std::vector<std::span<const double>> parameter_views(const Mlp& net) {
    std::vector<std::span<const double>> views;
    for (const auto& layer : net.layers) {
        views.push_back(layer.weight.values());
        views.push_back(layer.bias);
    }
    return views;
}

std::uint64_t parameter_hash(const Mlp& net) {
    std::uint64_t hash = 0xcbf29ce484222325ULL;
    for (auto view : parameter_views(net)) {
        for (double v : view) {
            unsigned char bytes[sizeof(double)];
            std::memcpy(bytes, &v, sizeof(double));
            hash = fnv1a(std::string_view(reinterpret_cast<const char*>(bytes), sizeof(double)), hash);
        }
    }
    return hash;
}

void MomentumSgd::step(std::span<const std::span<double>> params, std::span<const std::span<const double>> grads,
                       double lr) {
    require(params.size() == grads.size(), ErrorCode::dimension_mismatch, "optimizer parameter groups");
    if (velocity_.empty()) {
        for (auto p : params) velocity_.emplace_back(p.size(), 0.0);
    }
    require(velocity_.size() == params.size(), ErrorCode::dimension_mismatch, "optimizer state");
    for (std::size_t g = 0; g < params.size(); ++g) {
        auto theta = params[g];
        auto grad = grads[g];
        auto& vel = velocity_[g];
        require(theta.size() == grad.size() && theta.size() == vel.size(), ErrorCode::dimension_mismatch,
                "optimizer group size");
        for (std::size_t i = 0; i < theta.size(); ++i) {
            const double step = grad[i] + weight_decay_ * theta[i];
            vel[i] = momentum_ * vel[i] + step;
            theta[i] -= lr * vel[i];
        }
    }
}

double scheduled_lr(double base, LrSchedule schedule, std::size_t epoch, std::size_t epochs) {
    if (schedule == LrSchedule::constant || epochs == 0) return base;
    const double progress = static_cast<double>(epoch) / static_cast<double>(epochs);
    return base * 0.5 * (1.0 + std::cos(std::numbers::pi * progress));
}

}  // namespace poolforge
