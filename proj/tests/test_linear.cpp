#include <gtest/gtest.h>

#include <cmath>

#include "poolforge/linear.hpp"
#include "support.hpp"

using namespace poolforge;
using namespace poolforge::testing;

namespace {

SoftmaxProbe random_probe(std::size_t c, std::size_t d, Rng& rng) {
    SoftmaxProbe p;
    p.weights = random_matrix(c, d, rng);
    p.bias.resize(c);
    for (double& b : p.bias) b = uniform(rng, -1.0, 1.0);
    return p;
}

/// Mean cross-entropy written out directly.
double cross_entropy_oracle(const SoftmaxProbe& p, const Matrix& x, std::span<const Label> y) {
    double total = 0.0;
    for (std::size_t i = 0; i < x.rows(); ++i) {
        std::vector<double> logits(p.num_classes());
        for (std::size_t k = 0; k < logits.size(); ++k) {
            logits[k] = p.bias[k];
            for (std::size_t j = 0; j < x.cols(); ++j) logits[k] += p.weights(k, j) * x(i, j);
        }
        double z = 0.0;
        for (double l : logits) z += std::exp(l);
        total += std::log(z) - logits[y[i]];
    }
    return total / static_cast<double>(x.rows());
}

double accuracy(const Matrix& scores, std::span<const Label> labels) {
    const auto predicted = argmax_rows(scores);
    std::size_t correct = 0;
    for (std::size_t i = 0; i < labels.size(); ++i) correct += predicted[i] == labels[i];
    return static_cast<double>(correct) / static_cast<double>(labels.size());
}

}  // namespace

TEST(Softmax, KnownValues) {
    SoftmaxProbe p;
    p.weights = Matrix(2, 1, std::vector<double>{1.0, 0.0});
    p.bias = {0.0, 0.0};
    const auto proba = predict_proba(p, Matrix(1, 1, std::vector<double>{2.0}));
    const double expected = 1.0 / (1.0 + std::exp(-2.0));
    EXPECT_NEAR(proba(0, 0), expected, 1e-15);
    EXPECT_NEAR(proba(0, 0), 0.8808, 5e-5);
    EXPECT_NEAR(proba(0, 1), 0.1192, 5e-5);
}

TEST(Softmax, ZeroProbeIsUniform) {
    SoftmaxProbe p{Matrix(4, 3), std::vector<double>(4, 0.0)};
    Rng rng(1);
    const auto proba = predict_proba(p, random_matrix(5, 3, rng, -10, 10));
    for (double v : proba.values()) EXPECT_DOUBLE_EQ(v, 0.25);
}

TEST(Softmax, RowsSumToOneAndShiftInvariant) {
    Rng rng(2);
    for (int trial = 0; trial < 20; ++trial) {
        auto p = random_probe(7, 5, rng);
        const Matrix x = random_matrix(30, 5, rng, -50, 50);
        const auto proba = predict_proba(p, x);
        for (std::size_t i = 0; i < proba.rows(); ++i) {
            double sum = 0.0;
            for (double v : proba.row(i)) {
                EXPECT_GE(v, 0.0);
                sum += v;
            }
            EXPECT_NEAR(sum, 1.0, 1e-9);
        }
        for (double& b : p.bias) b += 123.0;
        const auto shifted = predict_proba(p, x);
        for (std::size_t i = 0; i < proba.size(); ++i) EXPECT_NEAR(shifted.values()[i], proba.values()[i], 1e-12);
    }
}

TEST(ProbeGradient, MatchesCentralDifferences) {
    Rng rng(3);
    for (int trial = 0; trial < 10; ++trial) {
        const std::size_t c = 2 + trial % 5, d = 1 + trial % 4, n = 3 + trial;
        auto p = random_probe(c, d, rng);
        const Matrix x = random_matrix(n, d, rng, -2, 2);
        std::vector<Label> y(n);
        for (auto& l : y) l = static_cast<Label>(uniform_index(rng, c));

        const auto g = probe_gradient(p, x, y);
        EXPECT_NEAR(g.loss, cross_entropy_oracle(p, x, y), 1e-12);

        std::vector<double> analytic(g.weights.values().begin(), g.weights.values().end());
        analytic.insert(analytic.end(), g.bias.begin(), g.bias.end());
        std::vector<double*> params;
        for (double& w : p.weights.values()) params.push_back(&w);
        for (double& b : p.bias) params.push_back(&b);
        std::vector<double> numeric;
        const double h = 1e-5;
        for (double* theta : params) {
            const double saved = *theta;
            *theta = saved + h;
            const double up = cross_entropy_oracle(p, x, y);
            *theta = saved - h;
            const double down = cross_entropy_oracle(p, x, y);
            *theta = saved;
            numeric.push_back((up - down) / (2 * h));
        }
        EXPECT_LE(max_relative_error(analytic, numeric), 1e-6) << "trial " << trial;
    }
}

TEST(TrainProbe, OverfitsSingleSample) {
    const Matrix x(1, 3, std::vector<double>{0.3, -0.7, 1.1});
    const std::vector<Label> y{2};
    ProbeTrainConfig cfg;
    cfg.seed = 4;
    const auto p = train_probe(x, y, 4, cfg);
    EXPECT_GT(predict_proba(p, x)(0, 2), 0.9);
}

TEST(TrainProbe, LossDecreasesAndIsDeterministic) {
    const auto [train, test] = generate_blobs({4, 40, 3, 2, 0.4, 7});
    const Matrix x = widen(train.features);
    ProbeTrainConfig cfg;
    cfg.seed = 5;
    cfg.batch_size = 16;
    TrainTrace trace;
    const auto p = train_probe(x, train.labels, 4, cfg, &trace);
    EXPECT_LE(trace.final_loss, trace.initial_loss);
    EXPECT_EQ(trace.epoch_losses.size(), cfg.epochs);
    for (double l : trace.epoch_losses) EXPECT_TRUE(std::isfinite(l));
    EXPECT_EQ(train_probe(x, train.labels, 4, cfg), p);
}

TEST(TrainProbe, ZeroLearningRateKeepsInit) {
    const auto [train, test] = generate_blobs({3, 10, 2, 0, 0.3, 1});
    const Matrix x = widen(train.features);
    ProbeTrainConfig cfg;
    cfg.base_lr = 0.0;
    cfg.seed = 6;
    const auto p = train_probe(x, train.labels, 3, cfg);
    Rng rng = make_rng(cfg.seed, "probe-init");
    EXPECT_EQ(p, init_probe(3, 2, rng));
}

TEST(TrainProbe, Validation) {
    const Matrix x(2, 2, std::vector<double>{1, 2, 3, 4});
    const std::vector<Label> y{0, 1};
    ProbeTrainConfig cfg;
    cfg.epochs = 0;
    EXPECT_EQ(code_of([&] { train_probe(x, y, 2, cfg); }), ErrorCode::invalid_argument);
    cfg.epochs = 1;
    const auto p = train_probe(x, y, 2, cfg);
    EXPECT_TRUE(all_finite(p.weights.values()));
    EXPECT_EQ(code_of([&] { train_probe(x, std::vector<Label>{0}, 2, cfg); }), ErrorCode::dimension_mismatch);
    Matrix bad = x;
    bad(0, 0) = std::nan("");
    EXPECT_EQ(code_of([&] { train_probe(bad, y, 2, cfg); }), ErrorCode::non_finite);
}

TEST(SupervisedEncoder, NoHiddenLayersReducesToProbe) {
    const auto [train, test] = generate_blobs({3, 20, 2, 1, 0.3, 8});
    const Matrix x = widen(train.features);
    ProbeTrainConfig cfg;
    cfg.seed = 9;
    const auto net = train_encoder_supervised(x, train.labels, 3, EncoderConfig{{}}, cfg);
    EXPECT_TRUE(net.encoder.layers.empty());
    const auto probe = train_probe(x, train.labels, 3, cfg);
    for (std::size_t i = 0; i < probe.weights.size(); ++i) {
        EXPECT_NEAR(net.head.weights.values()[i], probe.weights.values()[i], 1e-12);
    }
}

TEST(SupervisedEncoder, SeparableBlobsFullyLabeled) {
    const auto [train, test] = generate_blobs({3, 60, 4, 4, 0.1, 10});
    const Matrix x = widen(train.features);
    ProbeTrainConfig cfg;
    cfg.base_lr = 0.1;  // the end-to-end net's default; 1.0 is tuned for the linear probe
    cfg.seed = 11;
    const auto net = train_encoder_supervised(x, train.labels, 3, EncoderConfig{}, cfg);
    const double net_acc = accuracy(net.predict_proba(widen(test.features)), test.labels);
    const auto probe = train_probe(x, train.labels, 3, cfg);
    const double probe_acc = accuracy(predict_proba(probe, widen(test.features)), test.labels);
    EXPECT_GE(net_acc, 0.95);
    EXPECT_GE(net_acc, probe_acc);
}

TEST(Svm, OneDimensionalHardMargin) {
    const Matrix x(2, 1, std::vector<double>{-1.0, 1.0});
    const std::vector<Label> y{0, 1};
    const auto model = train_svm_ovr(x, y, 2, 5.0);
    EXPECT_NEAR(model.weights(1, 0), 1.0, 1e-4);
    EXPECT_NEAR(model.bias[1], 0.0, 1e-4);
    const auto f = svm_decision_values(model, x);
    EXPECT_NEAR(f(0, 1), -1.0, 1e-4);
    EXPECT_NEAR(f(1, 1), 1.0, 1e-4);
    const auto at = svm_decision_values(model, Matrix(1, 1, std::vector<double>{0.3}));
    EXPECT_NEAR(at(0, 1), 0.3, 1e-4);
}

TEST(Svm, DecisionValuesAreLinear) {
    SvmOvrModel model;
    model.weights = Matrix(1, 2, std::vector<double>{1.0, -2.0});
    model.bias = {0.0};
    model.present = {true};
    const auto a = svm_decision_values(model, Matrix(1, 2, std::vector<double>{0.5, 0.25}));
    const auto b = svm_decision_values(model, Matrix(1, 2, std::vector<double>{1.0, 0.5}));
    EXPECT_DOUBLE_EQ(a(0, 0), 0.0);
    EXPECT_DOUBLE_EQ(b(0, 0), 2 * a(0, 0));
    const auto c = svm_decision_values(model, Matrix(1, 2, std::vector<double>{1.0, 0.0}));
    EXPECT_DOUBLE_EQ(c(0, 0), 1.0);
}

TEST(Svm, DuplicatedDataSameFunction) {
    const auto [train, test] = generate_blobs({3, 15, 2, 0, 0.05, 12});
    const Matrix x = widen(train.features);
    Matrix doubled(2 * x.rows(), x.cols());
    std::vector<Label> y2;
    for (std::size_t i = 0; i < 2 * x.rows(); ++i) {
        const auto src = x.row(i % x.rows());
        std::copy(src.begin(), src.end(), doubled.row(i).begin());
        y2.push_back(train.labels[i % x.rows()]);
    }
    const auto a = svm_decision_values(train_svm_ovr(x, train.labels, 3, 100.0), x);
    const auto b = svm_decision_values(train_svm_ovr(doubled, y2, 3, 100.0), x);
    for (std::size_t i = 0; i < a.size(); ++i) EXPECT_NEAR(a.values()[i], b.values()[i], 1e-4);
}

TEST(Svm, SeparableMarginsAndMonotoneDual) {
    // Tight clusters on the vertices of a triangle: each class is linearly
    // separable from the other two.
    Rng rng(13);
    const double pi = std::acos(-1.0);
    Matrix x(60, 2);
    std::vector<Label> labels;
    for (std::size_t i = 0; i < 60; ++i) {
        const auto k = static_cast<Label>(i % 3);
        x(i, 0) = std::cos(2 * pi * k / 3) + 0.05 * standard_normal(rng);
        x(i, 1) = std::sin(2 * pi * k / 3) + 0.05 * standard_normal(rng);
        labels.push_back(k);
    }
    SvmTrace trace;
    const auto model = train_svm_ovr(x, labels, 3, 1000.0, {}, &trace);
    const auto f = svm_decision_values(model, x);
    std::size_t own_positive = 0;
    for (std::size_t i = 0; i < x.rows(); ++i) {
        for (std::size_t k = 0; k < 3; ++k) {
            const double sign = static_cast<Label>(k) == labels[i] ? 1.0 : -1.0;
            EXPECT_GE(sign * f(i, k), 1.0 - 1e-3);
        }
        own_positive += f(i, labels[i]) > 0;
    }
    EXPECT_GE(static_cast<double>(own_positive) / x.rows(), 0.99);
    ASSERT_EQ(trace.dual_objective.size(), 3u);
    for (const auto& history : trace.dual_objective) {
        for (std::size_t s = 1; s < history.size(); ++s) EXPECT_GE(history[s], history[s - 1] - 1e-12);
    }
    for (double gap : trace.duality_gap) EXPECT_LE(gap, 1e-6);
}

TEST(Svm, AbsentClassScoresNegativeInfinity) {
    const Matrix x(3, 1, std::vector<double>{-1.0, 0.0, 1.0});
    const std::vector<Label> y{0, 0, 2};
    const auto model = train_svm_ovr(x, y, 3, 5.0);
    EXPECT_FALSE(model.present[1]);
    const auto f = svm_decision_values(model, x);
    for (std::size_t i = 0; i < 3; ++i) EXPECT_EQ(f(i, 1), -std::numeric_limits<double>::infinity());
}

TEST(Svm, Errors) {
    const Matrix x(2, 1, std::vector<double>{-1.0, 1.0});
    EXPECT_EQ(code_of([&] { train_svm_ovr(x, std::vector<Label>{1, 1}, 2, 5.0); }), ErrorCode::single_class);
    EXPECT_EQ(code_of([&] { train_svm_ovr(x, std::vector<Label>{0}, 2, 5.0); }), ErrorCode::dimension_mismatch);
    const auto model = train_svm_ovr(x, std::vector<Label>{0, 1}, 2, 5.0);
    EXPECT_EQ(code_of([&] { svm_decision_values(model, Matrix(1, 2)); }), ErrorCode::dimension_mismatch);
}
