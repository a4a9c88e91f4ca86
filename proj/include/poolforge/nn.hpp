#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "poolforge/matrix.hpp"
#include "poolforge/rng.hpp"

namespace poolforge {

/// y = W x + b with W stored out x in.
struct DenseLayer {
    Matrix weight;
    std::vector<double> bias;

    std::size_t inputs() const noexcept { return weight.cols(); }
    std::size_t outputs() const noexcept { return weight.rows(); }

    bool operator==(const DenseLayer&) const = default;
};

/// Stack of dense layers with tanh between them; the last layer is linear.
/// An empty stack is the identity on `input_dim` features.
struct Mlp {
    std::size_t input_dim = 0;
    std::vector<DenseLayer> layers;

    std::size_t output_dim() const noexcept { return layers.empty() ? input_dim : layers.back().outputs(); }
    std::size_t parameter_count() const noexcept;

    bool operator==(const Mlp&) const = default;
};

/// Layer widths {d, h1, ..., out}; weights and biases drawn from
/// uniform(-1/sqrt(fan_in), 1/sqrt(fan_in)).
Mlp make_mlp(std::span<const std::size_t> widths, Rng& rng);

/// Same shapes as `net`, all zeros. Used for gradients and optimizer state.
Mlp zeros_like(const Mlp& net);

/// Batched forward pass, one row per sample.
Matrix forward(const Mlp& net, const Matrix& x);

/// Activations kept for back-propagation: inputs[l] feeds layer l,
/// inputs.back() is the network output.
struct MlpTape {
    std::vector<Matrix> activations;

    const Matrix& output() const { return activations.back(); }
};

MlpTape forward_tape(const Mlp& net, const Matrix& x);

/// Accumulates parameter gradients of sum_i <grad_out_i, f(x_i)> into
/// `grads` (overwrites). Returns the gradient with respect to the input.
Matrix backward(const Mlp& net, const MlpTape& tape, const Matrix& grad_out, Mlp& grads);

/// Flat views over every parameter, in a fixed order (layer by layer,
/// weights then bias).
std::vector<std::span<double>> parameter_views(Mlp& net);
std::vector<std::span<const double>> parameter_views(const Mlp& net);

/// FNV-1a over the raw bytes of every parameter.
std::uint64_t parameter_hash(const Mlp& net);

/// Momentum SGD matching the usual deep-learning update:
/// g += wd * theta; v = mu * v + g; theta -= lr * v.
class MomentumSgd {
public:
    MomentumSgd(double momentum, double weight_decay) : momentum_(momentum), weight_decay_(weight_decay) {}

    void step(std::span<const std::span<double>> params, std::span<const std::span<const double>> grads, double lr);

private:
    double momentum_;
    double weight_decay_;
    std::vector<std::vector<double>> velocity_;
};

enum class LrSchedule { cosine, constant };

/// Learning rate for `epoch` (0-based) out of `epochs`; cosine decays from
/// base at epoch 0 toward zero.
double scheduled_lr(double base, LrSchedule schedule, std::size_t epoch, std::size_t epochs);

}  // namespace poolforge
