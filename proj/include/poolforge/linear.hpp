#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "poolforge/data.hpp"
#include "poolforge/matrix.hpp"
#include "poolforge/nn.hpp"

namespace poolforge {

/// Multinomial logistic regression over frozen features.
struct SoftmaxProbe {
    Matrix weights;  // C x d
    std::vector<double> bias;

    std::size_t num_classes() const noexcept { return weights.rows(); }
    std::size_t dim() const noexcept { return weights.cols(); }

    bool operator==(const SoftmaxProbe&) const = default;
};

struct ProbeTrainConfig {
    std::size_t epochs = 100;
    std::size_t batch_size = 256;
    double base_lr = 1.0;
    double momentum = 0.9;
    double weight_decay = 0.0;
    LrSchedule lr_schedule = LrSchedule::cosine;
    std::uint64_t seed = 0;
};

void validate(const ProbeTrainConfig& config);

/// Loss bookkeeping from a training run. Full-data losses are measured
/// before the first and after the last update.
struct TrainTrace {
    double initial_loss = 0.0;
    double final_loss = 0.0;
    std::vector<double> epoch_losses;  // mean minibatch loss per epoch
};

/// Probe with weights and bias drawn from uniform(-1/sqrt(d), 1/sqrt(d)).
SoftmaxProbe init_probe(std::size_t num_classes, std::size_t dim, Rng& rng);

Matrix probe_logits(const SoftmaxProbe& probe, const Matrix& features);
Matrix predict_proba(const SoftmaxProbe& probe, const Matrix& features);

/// Mean softmax cross-entropy.
double probe_loss(const SoftmaxProbe& probe, const Matrix& features, std::span<const Label> labels);

struct ProbeGradient {
    double loss = 0.0;
    Matrix weights;
    std::vector<double> bias;
};

/// Analytic gradient of probe_loss.
ProbeGradient probe_gradient(const SoftmaxProbe& probe, const Matrix& features, std::span<const Label> labels);

/// Minibatch momentum SGD on mean cross-entropy. `num_classes` may exceed
/// the classes present in `labels`; absent classes keep their columns.
SoftmaxProbe train_probe(const Matrix& features, std::span<const Label> labels, std::size_t num_classes,
                         const ProbeTrainConfig& config, TrainTrace* trace = nullptr);

/// Row-wise argmax; ties go to the lower class id.
std::vector<Label> argmax_rows(const Matrix& scores);

// --- Supervised encoder + head ("from scratch") ---------------------------

/// Widths after the input layer; empty means the encoder is the identity.
struct EncoderConfig {
    std::vector<std::size_t> widths = {64, 32};
};

/// Encoder followed by a softmax head. With a frozen self-supervised encoder
/// this is the linear probe pipeline; trained jointly it is the scratch model.
struct EncoderClassifier {
    Mlp encoder;
    SoftmaxProbe head;

    Matrix embed(const Matrix& features) const { return forward(encoder, features); }
    Matrix predict_proba(const Matrix& features) const;
};

/// Trains encoder and softmax head jointly on labeled data only. With an
/// empty encoder this is exactly train_probe.
EncoderClassifier train_encoder_supervised(const Matrix& features, std::span<const Label> labels, std::size_t num_classes,
                                       const EncoderConfig& net_config, const ProbeTrainConfig& config,
                                       TrainTrace* trace = nullptr);

// --- One-vs-rest linear SVM -----------------------------------------------

struct SvmOvrModel {
    Matrix weights;  // C x d
    std::vector<double> bias;
    std::vector<bool> present;  // classes absent from training score -inf
    double reg_c = 5.0;

    std::size_t num_classes() const noexcept { return weights.rows(); }
    std::size_t dim() const noexcept { return weights.cols(); }
};

struct SvmSolverConfig {
    double tolerance = 1e-6;
    std::size_t max_sweeps = 10000;
    std::uint64_t seed = 0;
};

/// Per-class solver diagnostics: dual objective after every sweep and the
/// final relative duality gap.
struct SvmTrace {
    std::vector<std::vector<double>> dual_objective;
    std::vector<double> duality_gap;
    std::vector<std::size_t> sweeps;
};

/// One soft-margin binary SVM per class present, solved in the dual by
/// coordinate descent. The bias is learned as the weight of a constant
/// feature, as in liblinear.
SvmOvrModel train_svm_ovr(const Matrix& features, std::span<const Label> labels, std::size_t num_classes,
                          double reg_c, const SvmSolverConfig& solver = {}, SvmTrace* trace = nullptr);

/// Entry (i, k) = w_k . x_i + b_k, or -inf for classes without a model.
Matrix svm_decision_values(const SvmOvrModel& model, const Matrix& features);

/// Decision values divided by ||w_k||: geometric distance to each hyperplane.
Matrix svm_normalized_decision_values(const SvmOvrModel& model, const Matrix& features);

}  // namespace poolforge
