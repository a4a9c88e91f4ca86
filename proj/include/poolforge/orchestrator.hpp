#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "poolforge/acquisition.hpp"
#include "poolforge/advisor.hpp"
#include "poolforge/data.hpp"
#include "poolforge/linear.hpp"
#include "poolforge/simsiam.hpp"

namespace poolforge {

enum class Mode { self_train, scratch };

std::string_view to_string(Mode mode);
Mode parse_mode(std::string_view name);

struct ExperimentConfig {
    BudgetSchedule schedule;
    Mode mode = Mode::self_train;
    Method method = Method::random;
    bool balanced_split = true;

    ProbeTrainConfig probe;                          // linear probe on frozen embeddings
    ProbeTrainConfig scratch{.base_lr = 0.1};        // end-to-end net in scratch mode
    SiamNetConfig siam_net;  // the scratch model reuses its encoder widths
    AugmentConfig augment;
    SiamTrainConfig siam;
    std::optional<SiamNet> pretrained;  // skips pre-training when set

    double svm_c = 5.0;
    bool svm_normalize = false;
    SvmSolverConfig svm_solver;

    std::uint64_t seed = 0;
    bool measure_time = false;
    std::string data_description;  // folded into the fingerprint
};

/// Canonical key=value text of every setting; the fingerprint hashes it.
std::string canonical_text(const ExperimentConfig& config);
std::uint64_t fingerprint(const ExperimentConfig& config);

struct CycleRecord {
    std::size_t cycle = 0;
    std::size_t labeled_count = 0;
    double test_accuracy = 0.0;
    Method method = Method::random;
    Mode mode = Mode::self_train;
    double wall_time = 0.0;  // seconds; 0 unless measure_time

    bool operator==(const CycleRecord&) const = default;
};

/// Counters gathered while running, for invariant checks.
struct RunDiagnostics {
    std::size_t simsiam_trainings = 0;
    std::size_t oracle_reveals = 0;
    std::vector<std::uint64_t> encoder_hashes;  // self_train: one per evaluation point
    std::vector<std::size_t> labeled_sizes;
    std::vector<std::size_t> unlabeled_sizes;
    std::vector<std::vector<std::size_t>> queried;  // selection per cycle
    std::optional<double> embedding_spread;         // self_train only

    bool operator==(const RunDiagnostics&) const = default;
};

struct RunResult {
    std::vector<CycleRecord> records;
    std::uint64_t fingerprint = 0;
    RunDiagnostics diagnostics;

    bool operator==(const RunResult&) const = default;
};

/// Fraction of rows whose argmax (ties to the lower class id) equals the label.
double evaluate_accuracy(const Matrix& proba, std::span<const Label> labels);
double evaluate_accuracy(const EncoderClassifier& classifier, const FeatureDataset& test);

/// Optional self-supervised pre-training, then `cycles + 1` rounds of
/// train -> evaluate -> (acquire -> query) with the last round evaluating only.
RunResult run_experiment(const ExperimentConfig& config, const FeatureDataset& train, const FeatureDataset& test);

LearningCurve emit_curve(const RunResult& result);

}  // namespace poolforge
