#include "poolforge/linear.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "poolforge/kernels.hpp"

namespace poolforge {

void validate(const ProbeTrainConfig& config) {
    require(config.epochs >= 1, ErrorCode::invalid_argument, "probe epochs must be >= 1");
    require(config.batch_size >= 1, ErrorCode::invalid_argument, "probe batch size must be >= 1");
    require(config.base_lr >= 0.0 && std::isfinite(config.base_lr), ErrorCode::invalid_argument,
            "probe learning rate must be finite and non-negative");
    require(config.momentum >= 0.0 && config.momentum < 1.0, ErrorCode::invalid_argument, "momentum in [0, 1)");
    require(config.weight_decay >= 0.0, ErrorCode::invalid_argument, "weight decay must be non-negative");
}

namespace {

void check_labeled(const Matrix& features, std::span<const Label> labels, std::size_t num_classes) {
    require(features.rows() >= 1, ErrorCode::invalid_argument, "no labeled samples");
    require(features.rows() == labels.size(), ErrorCode::dimension_mismatch,
            std::to_string(features.rows()) + " rows vs " + std::to_string(labels.size()) + " labels");
    require(num_classes >= 1, ErrorCode::invalid_argument, "num_classes must be positive");
    require(all_finite(features.values()), ErrorCode::non_finite, "features contain NaN or Inf");
    for (Label label : labels) {
        require(label >= 0 && static_cast<std::size_t>(label) < num_classes, ErrorCode::label_out_of_range,
                "label " + std::to_string(label));
    }
}

/// Mean cross-entropy from logits via log-sum-exp; optionally writes
/// d(loss)/d(logits) into `grad`.
double cross_entropy(const Matrix& logits, std::span<const Label> labels, Matrix* grad) {
    const std::size_t m = logits.rows();
    const double inv_m = 1.0 / static_cast<double>(m);
    double total = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        auto row = logits.row(i);
        const double peak = *std::ranges::max_element(row);
        double sum = 0.0;
        for (double v : row) sum += std::exp(v - peak);
        const double lse = peak + std::log(sum);
        const auto y = static_cast<std::size_t>(labels[i]);
        total += lse - row[y];
        if (grad != nullptr) {
            auto g = grad->row(i);
            for (std::size_t k = 0; k < row.size(); ++k) g[k] = std::exp(row[k] - lse) * inv_m;
            g[y] -= inv_m;
        }
    }
    return total * inv_m;
}

std::vector<std::span<double>> head_views(SoftmaxProbe& probe) { return {probe.weights.values(), probe.bias}; }

/// Shared trainer for the bare probe and the encoder + head network.
EncoderClassifier fit_classifier(Mlp encoder, SoftmaxProbe head, const Matrix& features, std::span<const Label> labels,
                             const ProbeTrainConfig& config, TrainTrace* trace) {
    const std::size_t n = features.rows();
    const std::size_t batch = std::min(config.batch_size, n);
    Rng batch_rng = make_rng(config.seed, "probe-batches");
    MomentumSgd optimizer(config.momentum, config.weight_decay);
    Mlp encoder_grad = zeros_like(encoder);
    ProbeGradient head_grad{0.0, Matrix(head.num_classes(), head.dim()), std::vector<double>(head.num_classes())};

    auto full_loss = [&] {
        return cross_entropy(probe_logits(head, forward(encoder, features)), labels, nullptr);
    };
    if (trace != nullptr) {
        trace->initial_loss = full_loss();
        trace->epoch_losses.clear();
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::vector<Label> batch_labels;
    for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
        const double lr = scheduled_lr(config.base_lr, config.lr_schedule, epoch, config.epochs);
        shuffle(order, batch_rng);
        double epoch_loss = 0.0;
        std::size_t batches = 0;
        for (std::size_t start = 0; start < n; start += batch) {
            const std::size_t stop = std::min(n, start + batch);
            std::span<const std::size_t> rows(order.data() + start, stop - start);
            const Matrix xb = gather_rows(features, rows);
            batch_labels.resize(rows.size());
            for (std::size_t i = 0; i < rows.size(); ++i) batch_labels[i] = labels[rows[i]];

            const MlpTape tape = forward_tape(encoder, xb);
            const Matrix logits = probe_logits(head, tape.output());
            Matrix grad_logits(logits.rows(), logits.cols());
            const double loss = cross_entropy(logits, batch_labels, &grad_logits);
            require(std::isfinite(loss), ErrorCode::non_finite,
                    "training loss diverged at epoch " + std::to_string(epoch));
            kernels::dense_weight_grad(grad_logits, tape.output(), head_grad.weights, head_grad.bias);

            std::vector<std::span<double>> params;
            std::vector<std::span<const double>> grads;
            if (!encoder.layers.empty()) {
                Matrix grad_embed(grad_logits.rows(), head.dim());
                kernels::dense_input_grad(grad_logits, head.weights, grad_embed);
                backward(encoder, tape, grad_embed, encoder_grad);
                params = parameter_views(encoder);
                grads = parameter_views(std::as_const(encoder_grad));
            }
            for (auto view : head_views(head)) params.push_back(view);
            grads.push_back(head_grad.weights.values());
            grads.push_back(head_grad.bias);
            optimizer.step(params, grads, lr);

            epoch_loss += loss;
            ++batches;
        }
        if (trace != nullptr) trace->epoch_losses.push_back(epoch_loss / static_cast<double>(batches));
    }

    require(all_finite(head.weights.values()) && all_finite(head.bias), ErrorCode::non_finite,
            "classifier parameters diverged");
    if (trace != nullptr) trace->final_loss = full_loss();
    return {std::move(encoder), std::move(head)};
}

}  // namespace

SoftmaxProbe init_probe(std::size_t num_classes, std::size_t dim, Rng& rng) {
    require(num_classes >= 1 && dim >= 1, ErrorCode::invalid_argument, "probe shape");
    const double bound = 1.0 / std::sqrt(static_cast<double>(dim));
    SoftmaxProbe probe{Matrix(num_classes, dim), std::vector<double>(num_classes)};
    for (double& w : probe.weights.values()) w = uniform(rng, -bound, bound);
    for (double& b : probe.bias) b = uniform(rng, -bound, bound);
    return probe;
}

Matrix probe_logits(const SoftmaxProbe& probe, const Matrix& features) {
    require(features.cols() == probe.dim(), ErrorCode::dimension_mismatch,
            "features have " + std::to_string(features.cols()) + " columns, probe expects " +
                std::to_string(probe.dim()));
    Matrix logits(features.rows(), probe.num_classes());
    kernels::dense_forward(features, probe.weights, probe.bias, logits);
    return logits;
}

Matrix predict_proba(const SoftmaxProbe& probe, const Matrix& features) {
    Matrix proba = probe_logits(probe, features);
    kernels::softmax_rows(proba);
    return proba;
}

double probe_loss(const SoftmaxProbe& probe, const Matrix& features, std::span<const Label> labels) {
    check_labeled(features, labels, probe.num_classes());
    return cross_entropy(probe_logits(probe, features), labels, nullptr);
}

ProbeGradient probe_gradient(const SoftmaxProbe& probe, const Matrix& features, std::span<const Label> labels) {
    check_labeled(features, labels, probe.num_classes());
    const Matrix logits = probe_logits(probe, features);
    Matrix grad_logits(logits.rows(), logits.cols());
    ProbeGradient out{0.0, Matrix(probe.num_classes(), probe.dim()), std::vector<double>(probe.num_classes())};
    out.loss = cross_entropy(logits, labels, &grad_logits);
    kernels::dense_weight_grad(grad_logits, features, out.weights, out.bias);
    return out;
}

SoftmaxProbe train_probe(const Matrix& features, std::span<const Label> labels, std::size_t num_classes,
                         const ProbeTrainConfig& config, TrainTrace* trace) {
    validate(config);
    check_labeled(features, labels, num_classes);
    Rng init_rng = make_rng(config.seed, "probe-init");
    SoftmaxProbe head = init_probe(num_classes, features.cols(), init_rng);
    Mlp identity;
    identity.input_dim = features.cols();
    return fit_classifier(std::move(identity), std::move(head), features, labels, config, trace).head;
}

std::vector<Label> argmax_rows(const Matrix& scores) {
    std::vector<Label> out(scores.rows());
    for (std::size_t i = 0; i < scores.rows(); ++i) {
        auto row = scores.row(i);
        // max_element returns the first maximum, i.e. the lower class id on ties.
        out[i] = static_cast<Label>(std::ranges::max_element(row) - row.begin());
    }
    return out;
}

Matrix EncoderClassifier::predict_proba(const Matrix& features) const {
    return poolforge::predict_proba(head, embed(features));
}

EncoderClassifier train_encoder_supervised(const Matrix& features, std::span<const Label> labels, std::size_t num_classes,
                                       const EncoderConfig& net_config, const ProbeTrainConfig& config,
                                       TrainTrace* trace) {
    validate(config);
    check_labeled(features, labels, num_classes);
    std::vector<std::size_t> widths{features.cols()};
    widths.insert(widths.end(), net_config.widths.begin(), net_config.widths.end());
    Rng encoder_rng = make_rng(config.seed, "encoder-init");
    Mlp encoder = make_mlp(widths, encoder_rng);
    Rng init_rng = make_rng(config.seed, "probe-init");
    SoftmaxProbe head = init_probe(num_classes, encoder.output_dim(), init_rng);
    return fit_classifier(std::move(encoder), std::move(head), features, labels, config, trace);
}

// --- SVM ------------------------------------------------------------------

namespace {

struct BinarySvm {
    std::vector<double> w;  // d weights followed by the bias
    std::vector<double> dual_trace;
    double gap = 0.0;
    std::size_t sweeps = 0;
};

double dot_aug(std::span<const double> w, std::span<const double> x) {
    double acc = w[x.size()];
    for (std::size_t k = 0; k < x.size(); ++k) acc += w[k] * x[k];
    return acc;
}

/// Dual coordinate descent for the L1-loss SVM
///   min_w 1/2 |w|^2 + C sum_i max(0, 1 - y_i w.[x_i, 1]).
BinarySvm solve_binary(const Matrix& x, std::span<const double> y, double reg_c, const SvmSolverConfig& solver,
                       Rng& rng) {
    const std::size_t n = x.rows();
    const std::size_t d = x.cols();
    BinarySvm out;
    out.w.assign(d + 1, 0.0);
    std::vector<double> alpha(n, 0.0);
    std::vector<double> q_diag(n);
    for (std::size_t i = 0; i < n; ++i) {
        double sq = 1.0;
        for (double v : x.row(i)) sq += v * v;
        q_diag[i] = sq;
    }
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});

    auto objectives = [&](double& primal, double& dual) {
        double wsq = 0.0;
        for (double v : out.w) wsq += v * v;
        double hinge = 0.0;
        double alpha_sum = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            hinge += std::max(0.0, 1.0 - y[i] * dot_aug(out.w, x.row(i)));
            alpha_sum += alpha[i];
        }
        primal = 0.5 * wsq + reg_c * hinge;
        dual = alpha_sum - 0.5 * wsq;
    };

    for (std::size_t sweep = 0; sweep < solver.max_sweeps; ++sweep) {
        shuffle(order, rng);
        for (std::size_t i : order) {
            auto xi = x.row(i);
            const double grad = y[i] * dot_aug(out.w, xi) - 1.0;
            const double next = std::clamp(alpha[i] - grad / q_diag[i], 0.0, reg_c);
            const double delta = (next - alpha[i]) * y[i];
            if (delta == 0.0) continue;
            alpha[i] = next;
            for (std::size_t k = 0; k < d; ++k) out.w[k] += delta * xi[k];
            out.w[d] += delta;
        }
        double primal = 0.0;
        double dual = 0.0;
        objectives(primal, dual);
        out.dual_trace.push_back(dual);
        out.sweeps = sweep + 1;
        out.gap = (primal - dual) / std::max(1.0, std::abs(primal));
        if (out.gap <= solver.tolerance) break;
    }
    return out;
}

}  // namespace

SvmOvrModel train_svm_ovr(const Matrix& features, std::span<const Label> labels, std::size_t num_classes,
                          double reg_c, const SvmSolverConfig& solver, SvmTrace* trace) {
    check_labeled(features, labels, num_classes);
    require(features.rows() >= 2, ErrorCode::invalid_argument, "SVM needs at least two labeled samples");
    require(reg_c > 0.0 && std::isfinite(reg_c), ErrorCode::invalid_argument, "SVM regularization must be positive");
    require(solver.max_sweeps >= 1, ErrorCode::invalid_argument, "SVM needs at least one sweep");
    const auto counts = class_counts(labels, num_classes);
    const auto distinct = std::ranges::count_if(counts, [](std::size_t c) { return c > 0; });
    require(distinct >= 2, ErrorCode::single_class, "SVM needs at least two distinct labels");

    const std::size_t d = features.cols();
    SvmOvrModel model{Matrix(num_classes, d), std::vector<double>(num_classes, 0.0),
                      std::vector<bool>(num_classes, false), reg_c};
    if (trace != nullptr) *trace = SvmTrace{};
    Rng rng = make_rng(solver.seed, "svm");
    std::vector<double> y(features.rows());
    for (std::size_t k = 0; k < num_classes; ++k) {
        if (counts[k] == 0) continue;
        for (std::size_t i = 0; i < y.size(); ++i) y[i] = labels[i] == static_cast<Label>(k) ? 1.0 : -1.0;
        BinarySvm binary = solve_binary(features, y, reg_c, solver, rng);
        std::copy_n(binary.w.begin(), d, model.weights.row(k).begin());
        model.bias[k] = binary.w[d];
        model.present[k] = true;
        if (trace != nullptr) {
            trace->dual_objective.push_back(std::move(binary.dual_trace));
            trace->duality_gap.push_back(binary.gap);
            trace->sweeps.push_back(binary.sweeps);
        }
    }
    return model;
}

Matrix svm_decision_values(const SvmOvrModel& model, const Matrix& features) {
    require(features.cols() == model.dim(), ErrorCode::dimension_mismatch,
            "features have " + std::to_string(features.cols()) + " columns, SVM expects " +
                std::to_string(model.dim()));
    Matrix values(features.rows(), model.num_classes());
    kernels::dense_forward(features, model.weights, model.bias, values);
    for (std::size_t k = 0; k < model.num_classes(); ++k) {
        if (model.present[k]) continue;
        for (std::size_t i = 0; i < values.rows(); ++i) values(i, k) = -std::numeric_limits<double>::infinity();
    }
    return values;
}

Matrix svm_normalized_decision_values(const SvmOvrModel& model, const Matrix& features) {
    Matrix values = svm_decision_values(model, features);
    for (std::size_t k = 0; k < model.num_classes(); ++k) {
        if (!model.present[k]) continue;
        double norm = 0.0;
        for (double w : model.weights.row(k)) norm += w * w;
        norm = std::sqrt(norm);
        if (norm == 0.0) continue;
        for (std::size_t i = 0; i < values.rows(); ++i) values(i, k) /= norm;
    }
    return values;
}

}  // namespace poolforge
