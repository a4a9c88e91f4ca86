#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "poolforge/data.hpp"
#include "poolforge/matrix.hpp"
#include "poolforge/nn.hpp"
#include "poolforge/rng.hpp"

namespace poolforge {

/// Siamese network: the encoder (backbone + projection) maps inputs to
/// embeddings z, the predictor maps z to p. Both views share everything.
struct SiamNet {
    Mlp encoder;
    Mlp predictor;

    std::size_t input_dim() const noexcept { return encoder.input_dim; }
    std::size_t embedding_dim() const noexcept { return encoder.output_dim(); }

    bool operator==(const SiamNet&) const = default;
};

enum class InitScheme { uniform, zeros };

struct SiamNetConfig {
    std::vector<std::size_t> encoder_widths = {64, 32};  // after the input layer
    std::size_t predictor_hidden = 16;
    InitScheme init = InitScheme::uniform;
};

SiamNet make_siam_net(std::size_t input_dim, const SiamNetConfig& config, Rng& rng);

struct AugmentConfig {
    double noise_sigma = 0.3;
    double scale_lo = 0.8;
    double scale_hi = 1.2;
    double drop_prob = 0.1;
};

void validate(const AugmentConfig& config);

/// y = mask * (s * x + eps), s ~ U[lo, hi], eps ~ N(0, sigma^2 I),
/// mask_i ~ Bernoulli(1 - drop_prob).
std::vector<double> augment_vector(std::span<const double> x, const AugmentConfig& config, Rng& rng);

struct ViewPair {
    std::vector<double> x1, x2;
    std::vector<double> z1, z2;
    std::vector<double> p1, p2;
};

ViewPair siam_forward(const SiamNet& net, std::span<const double> x1, std::span<const double> x2);

/// D(p, z) = -(p / |p|) . (z / |z|). Throws degenerate_embedding on a zero norm.
double negative_cosine(std::span<const double> p, std::span<const double> z);

/// dD(p, z)/dp with z held constant.
std::vector<double> negative_cosine_grad(std::span<const double> p, std::span<const double> z);

/// L = D(p1, z2) / 2 + D(p2, z1) / 2.
double siam_loss(const ViewPair& pair);

struct SiamGradients {
    double loss = 0.0;
    Mlp encoder;
    Mlp predictor;
};

/// Gradient of siam_loss with z1, z2 treated as constants (stop-gradient):
/// only the p branches carry gradient back through predictor and encoder.
SiamGradients siam_gradients(const SiamNet& net, std::span<const double> x1, std::span<const double> x2);

/// Mean of the per-row losses and their stop-gradient gradients.
SiamGradients siam_batch_gradients(const SiamNet& net, const Matrix& x1, const Matrix& x2);

struct SiamTrainConfig {
    std::size_t epochs = 50;
    std::size_t batch_size = 64;
    double base_lr = 0.1;
    double momentum = 0.9;
    double weight_decay = 1e-4;
    std::uint64_t seed = 0;
};

void validate(const SiamTrainConfig& config);

struct SiamTrainTrace {
    std::vector<double> epoch_losses;
};

/// Self-supervised training on feature rows only; labels never enter.
/// Cosine-decayed learning rate, momentum SGD.
SiamNet train_simsiam(const Matrix& features, const SiamNetConfig& net_config, const AugmentConfig& aug,
                      const SiamTrainConfig& config, SiamTrainTrace* trace = nullptr);

inline SiamNet train_simsiam(const FeatureDataset& dataset, const SiamNetConfig& net_config,
                             const AugmentConfig& aug, const SiamTrainConfig& config,
                             SiamTrainTrace* trace = nullptr) {
    return train_simsiam(widen(dataset.features), net_config, aug, config, trace);
}

/// Frozen embeddings z (encoder output, no predictor).
Matrix encode(const SiamNet& net, const Matrix& features);

/// Mean over dimensions of the per-dimension standard deviation of the
/// L2-normalised rows. Collapsed embeddings drive this to zero.
double embedding_spread(const Matrix& embeddings);

// Net file: "PSN1" | u32 layer_count | per layer: u32 rows | u32 cols |
// float64 row-major weights | float64 biases. Encoder layers come first;
// the last two layers are the predictor.
std::vector<std::uint8_t> encode_siam_net(const SiamNet& net);
SiamNet decode_siam_net(std::span<const std::uint8_t> bytes);
void save_siam_net(const SiamNet& net, const std::filesystem::path& path);
SiamNet load_siam_net(const std::filesystem::path& path);

}  // namespace poolforge
