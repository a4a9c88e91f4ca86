#include "poolforge/simsiam.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <limits>
#include <numeric>
#include <string>

namespace poolforge {

SiamNet make_siam_net(std::size_t input_dim, const SiamNetConfig& config, Rng& rng) {
    require(input_dim >= 1, ErrorCode::invalid_argument, "input dimension must be positive");
    require(!config.encoder_widths.empty(), ErrorCode::invalid_argument, "encoder needs at least one layer");
    require(config.predictor_hidden >= 1, ErrorCode::invalid_argument, "predictor hidden width must be positive");
    std::vector<std::size_t> encoder_widths{input_dim};
    encoder_widths.insert(encoder_widths.end(), config.encoder_widths.begin(), config.encoder_widths.end());
    const std::size_t embed = encoder_widths.back();
    const std::size_t predictor_widths[] = {embed, config.predictor_hidden, embed};
    SiamNet net{make_mlp(encoder_widths, rng), make_mlp(predictor_widths, rng)};
    if (config.init == InitScheme::zeros) {
        net.encoder = zeros_like(net.encoder);
        net.predictor = zeros_like(net.predictor);
    }
    return net;
}

void validate(const AugmentConfig& config) {
    require(config.noise_sigma >= 0.0 && std::isfinite(config.noise_sigma), ErrorCode::invalid_argument,
            "augmentation noise must be non-negative");
    require(config.scale_lo > 0.0 && config.scale_lo <= config.scale_hi && std::isfinite(config.scale_hi),
            ErrorCode::invalid_argument, "augmentation scale range needs 0 < lo <= hi");
    require(config.drop_prob >= 0.0 && config.drop_prob < 1.0, ErrorCode::invalid_argument,
            "drop probability must lie in [0, 1)");
}

std::vector<double> augment_vector(std::span<const double> x, const AugmentConfig& config, Rng& rng) {
    const double scale = uniform(rng, config.scale_lo, config.scale_hi);
    std::vector<double> y(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double noise = config.noise_sigma * standard_normal(rng);
        const bool keep = uniform01(rng) >= config.drop_prob;
        y[i] = keep ? scale * x[i] + noise : 0.0;
    }
    return y;
}

namespace {

double norm2(std::span<const double> v) {
    double sq = 0.0;
    for (double x : v) sq += x * x;
    return std::sqrt(sq);
}

Matrix row_matrix(std::span<const double> x) { return Matrix(1, x.size(), std::vector<double>(x.begin(), x.end())); }

std::vector<double> to_vector(std::span<const double> x) { return {x.begin(), x.end()}; }

}  // namespace

ViewPair siam_forward(const SiamNet& net, std::span<const double> x1, std::span<const double> x2) {
    require(x1.size() == net.input_dim() && x2.size() == net.input_dim(), ErrorCode::dimension_mismatch,
            "view dimension does not match the encoder");
    ViewPair pair;
    pair.x1 = to_vector(x1);
    pair.x2 = to_vector(x2);
    const Matrix z1 = forward(net.encoder, row_matrix(x1));
    const Matrix z2 = forward(net.encoder, row_matrix(x2));
    pair.z1 = to_vector(z1.values());
    pair.z2 = to_vector(z2.values());
    pair.p1 = to_vector(forward(net.predictor, z1).values());
    pair.p2 = to_vector(forward(net.predictor, z2).values());
    return pair;
}

double negative_cosine(std::span<const double> p, std::span<const double> z) {
    require(p.size() == z.size(), ErrorCode::dimension_mismatch, "negative_cosine operands");
    const double np = norm2(p);
    const double nz = norm2(z);
    require(np > 0.0 && nz > 0.0, ErrorCode::degenerate_embedding, "zero-norm embedding in cosine loss");
    double dot = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) dot += p[i] * z[i];
    return -dot / (np * nz);
}

std::vector<double> negative_cosine_grad(std::span<const double> p, std::span<const double> z) {
    require(p.size() == z.size(), ErrorCode::dimension_mismatch, "negative_cosine operands");
    const double np = norm2(p);
    const double nz = norm2(z);
    require(np > 0.0 && nz > 0.0, ErrorCode::degenerate_embedding, "zero-norm embedding in cosine loss");
    double cos = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) cos += (p[i] / np) * (z[i] / nz);
    // d/dp [-p.z / (|p||z|)] = -(z_hat - cos * p_hat) / |p|
    std::vector<double> grad(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) grad[i] = -(z[i] / nz - cos * p[i] / np) / np;
    return grad;
}

double siam_loss(const ViewPair& pair) {
    return 0.5 * negative_cosine(pair.p1, pair.z2) + 0.5 * negative_cosine(pair.p2, pair.z1);
}

SiamGradients siam_batch_gradients(const SiamNet& net, const Matrix& x1, const Matrix& x2) {
    require(x1.rows() == x2.rows() && x1.rows() >= 1, ErrorCode::dimension_mismatch, "view batches differ");
    require(x1.cols() == net.input_dim() && x2.cols() == net.input_dim(), ErrorCode::dimension_mismatch,
            "view dimension does not match the encoder");
    const std::size_t m = x1.rows();

    // Both views go through the shared encoder as one stacked batch:
    // rows [0, m) are view 1, rows [m, 2m) view 2.
    Matrix stacked(2 * m, x1.cols());
    std::ranges::copy(x1.values(), stacked.values().begin());
    std::ranges::copy(x2.values(), stacked.values().begin() + static_cast<std::ptrdiff_t>(x1.size()));
    const MlpTape enc_tape = forward_tape(net.encoder, stacked);
    const Matrix& z = enc_tape.output();
    const MlpTape pred_tape = forward_tape(net.predictor, z);
    const Matrix& p = pred_tape.output();

    // z rows enter only as constants: the gradient reaches the encoder
    // exclusively through p = predictor(z).
    const double weight = 0.5 / static_cast<double>(m);
    Matrix grad_p(2 * m, p.cols());
    double total = 0.0;
    for (std::size_t i = 0; i < 2 * m; ++i) {
        const std::size_t partner = i < m ? i + m : i - m;
        total += negative_cosine(p.row(i), z.row(partner));
        const auto g = negative_cosine_grad(p.row(i), z.row(partner));
        auto out = grad_p.row(i);
        for (std::size_t k = 0; k < g.size(); ++k) out[k] = weight * g[k];
    }

    SiamGradients grads{total * weight, zeros_like(net.encoder), zeros_like(net.predictor)};
    const Matrix grad_z = backward(net.predictor, pred_tape, grad_p, grads.predictor);
    backward(net.encoder, enc_tape, grad_z, grads.encoder);
    return grads;
}

SiamGradients siam_gradients(const SiamNet& net, std::span<const double> x1, std::span<const double> x2) {
    return siam_batch_gradients(net, row_matrix(x1), row_matrix(x2));
}

void validate(const SiamTrainConfig& config) {
    require(config.epochs >= 1, ErrorCode::invalid_argument, "self-supervised epochs must be >= 1");
    require(config.batch_size >= 1, ErrorCode::invalid_argument, "self-supervised batch size must be >= 1");
    require(config.base_lr >= 0.0 && std::isfinite(config.base_lr), ErrorCode::invalid_argument,
            "self-supervised learning rate must be finite and non-negative");
    require(config.momentum >= 0.0 && config.momentum < 1.0, ErrorCode::invalid_argument, "momentum in [0, 1)");
    require(config.weight_decay >= 0.0, ErrorCode::invalid_argument, "weight decay must be non-negative");
}

SiamNet train_simsiam(const Matrix& features, const SiamNetConfig& net_config, const AugmentConfig& aug,
                      const SiamTrainConfig& config, SiamTrainTrace* trace) {
    validate(config);
    validate(aug);
    require(features.rows() >= 1, ErrorCode::invalid_argument, "no samples to pre-train on");
    require(all_finite(features.values()), ErrorCode::non_finite, "features contain NaN or Inf");

    Rng init_rng = make_rng(config.seed, "siam-init");
    Rng batch_rng = make_rng(config.seed, "siam-batches");
    Rng aug_rng = make_rng(config.seed, "siam-augment");
    SiamNet net = make_siam_net(features.cols(), net_config, init_rng);
    MomentumSgd optimizer(config.momentum, config.weight_decay);

    const std::size_t n = features.rows();
    const std::size_t batch = std::min(config.batch_size, n);
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    if (trace != nullptr) trace->epoch_losses.clear();

    for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
        const double lr = scheduled_lr(config.base_lr, LrSchedule::cosine, epoch, config.epochs);
        shuffle(order, batch_rng);
        double epoch_loss = 0.0;
        std::size_t batches = 0;
        for (std::size_t start = 0; start < n; start += batch) {
            const std::size_t stop = std::min(n, start + batch);
            Matrix v1(stop - start, features.cols());
            Matrix v2(stop - start, features.cols());
            for (std::size_t i = start; i < stop; ++i) {
                const auto a = augment_vector(features.row(order[i]), aug, aug_rng);
                const auto b = augment_vector(features.row(order[i]), aug, aug_rng);
                std::ranges::copy(a, v1.row(i - start).begin());
                std::ranges::copy(b, v2.row(i - start).begin());
            }
            SiamGradients grads = siam_batch_gradients(net, v1, v2);
            require(std::isfinite(grads.loss), ErrorCode::non_finite,
                    "self-supervised loss diverged at epoch " + std::to_string(epoch));

            auto params = parameter_views(net.encoder);
            for (auto view : parameter_views(net.predictor)) params.push_back(view);
            auto grad_views = parameter_views(std::as_const(grads.encoder));
            for (auto view : parameter_views(std::as_const(grads.predictor))) grad_views.push_back(view);
            optimizer.step(params, grad_views, lr);

            epoch_loss += grads.loss;
            ++batches;
        }
        if (trace != nullptr) trace->epoch_losses.push_back(epoch_loss / static_cast<double>(batches));
    }
    return net;
}

Matrix encode(const SiamNet& net, const Matrix& features) { return forward(net.encoder, features); }

double embedding_spread(const Matrix& embeddings) {
    const std::size_t m = embeddings.rows();
    const std::size_t e = embeddings.cols();
    require(m >= 1 && e >= 1, ErrorCode::invalid_argument, "embedding_spread needs a non-empty matrix");
    Matrix unit = embeddings;
    for (std::size_t i = 0; i < m; ++i) {
        auto row = unit.row(i);
        const double n = norm2(row);
        require(n > 0.0, ErrorCode::degenerate_embedding, "zero embedding row");
        for (double& v : row) v /= n;
    }
    double total = 0.0;
    for (std::size_t k = 0; k < e; ++k) {
        double mean = 0.0;
        for (std::size_t i = 0; i < m; ++i) mean += unit(i, k);
        mean /= static_cast<double>(m);
        double var = 0.0;
        for (std::size_t i = 0; i < m; ++i) var += (unit(i, k) - mean) * (unit(i, k) - mean);
        total += std::sqrt(var / static_cast<double>(m));
    }
    return total / static_cast<double>(e);
}

// --- Net file codec ----------------------------------------------------------

namespace {

constexpr char kNetMagic[4] = {'P', 'S', 'N', '1'};

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
    for (int shift = 0; shift < 32; shift += 8) out.push_back(static_cast<std::uint8_t>(v >> shift));
}

void put_f64(std::vector<std::uint8_t>& out, double v) {
    const auto bits = std::bit_cast<std::uint64_t>(v);
    for (int shift = 0; shift < 64; shift += 8) out.push_back(static_cast<std::uint8_t>(bits >> shift));
}

class Reader {
public:
    explicit Reader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

    std::uint32_t u32() {
        need(4);
        std::uint32_t v = 0;
        for (int b = 0; b < 4; ++b) v |= static_cast<std::uint32_t>(bytes_[pos_ + b]) << (8 * b);
        pos_ += 4;
        return v;
    }

    double f64() {
        need(8);
        std::uint64_t v = 0;
        for (int b = 0; b < 8; ++b) v |= static_cast<std::uint64_t>(bytes_[pos_ + b]) << (8 * b);
        pos_ += 8;
        return std::bit_cast<double>(v);
    }

    bool done() const noexcept { return pos_ == bytes_.size(); }

private:
    void need(std::size_t count) const {
        require(bytes_.size() - pos_ >= count, ErrorCode::truncated, "net file ends mid-record");
    }

    std::span<const std::uint8_t> bytes_;
    std::size_t pos_ = 0;
};

}  // namespace

std::vector<std::uint8_t> encode_siam_net(const SiamNet& net) {
    require(net.predictor.layers.size() == 2, ErrorCode::invalid_argument, "predictor must have two layers");
    std::vector<std::uint8_t> out(std::begin(kNetMagic), std::end(kNetMagic));
    put_u32(out, static_cast<std::uint32_t>(net.encoder.layers.size() + net.predictor.layers.size()));
    for (const Mlp* part : {&net.encoder, &net.predictor}) {
        for (const auto& layer : part->layers) {
            put_u32(out, static_cast<std::uint32_t>(layer.outputs()));
            put_u32(out, static_cast<std::uint32_t>(layer.inputs()));
            for (double w : layer.weight.values()) put_f64(out, w);
            for (double b : layer.bias) put_f64(out, b);
        }
    }
    return out;
}

SiamNet decode_siam_net(std::span<const std::uint8_t> bytes) {
    require(bytes.size() >= 4 && std::memcmp(bytes.data(), kNetMagic, 4) == 0, ErrorCode::bad_magic,
            "net file does not start with PSN1");
    Reader reader(bytes.subspan(4));
    const std::uint32_t count = reader.u32();
    require(count >= 3, ErrorCode::invalid_argument, "net file needs encoder and two predictor layers");
    std::vector<DenseLayer> layers;
    for (std::uint32_t l = 0; l < count; ++l) {
        const std::size_t rows = reader.u32();
        const std::size_t cols = reader.u32();
        require(rows >= 1 && cols >= 1, ErrorCode::invalid_argument, "empty layer in net file");
        require(layers.empty() || layers.back().outputs() == cols, ErrorCode::dimension_mismatch,
                "layer " + std::to_string(l) + " input does not match previous output");
        DenseLayer layer{Matrix(rows, cols), std::vector<double>(rows)};
        for (double& w : layer.weight.values()) w = reader.f64();
        for (double& b : layer.bias) b = reader.f64();
        layers.push_back(std::move(layer));
    }
    require(reader.done(), ErrorCode::invalid_argument, "trailing bytes after last layer");

    SiamNet net;
    const std::size_t split = layers.size() - 2;
    net.encoder.input_dim = layers.front().inputs();
    net.encoder.layers.assign(std::make_move_iterator(layers.begin()),
                              std::make_move_iterator(layers.begin() + static_cast<std::ptrdiff_t>(split)));
    net.predictor.input_dim = net.encoder.output_dim();
    net.predictor.layers.assign(std::make_move_iterator(layers.begin() + static_cast<std::ptrdiff_t>(split)),
                                std::make_move_iterator(layers.end()));
    require(net.predictor.output_dim() == net.encoder.output_dim(), ErrorCode::dimension_mismatch,
            "predictor output must match the embedding width");
    return net;
}

void save_siam_net(const SiamNet& net, const std::filesystem::path& path) {
    const auto bytes = encode_siam_net(net);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    require(out.good(), ErrorCode::io_failure, "cannot open " + path.string() + " for writing");
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    out.flush();
    require(out.good(), ErrorCode::io_failure, "write failed for " + path.string());
}

SiamNet load_siam_net(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    require(in.good(), ErrorCode::missing_file, "cannot open " + path.string());
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return decode_siam_net(bytes);
}

}  // namespace poolforge
