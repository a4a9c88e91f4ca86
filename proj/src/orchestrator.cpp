#include "poolforge/orchestrator.hpp"

#include <chrono>
#include <cmath>
#include <sstream>

#include "poolforge/rng.hpp"

namespace poolforge {

std::string_view to_string(Mode mode) { return mode == Mode::self_train ? "self_train" : "scratch"; }

Mode parse_mode(std::string_view name) {
    if (name == "self_train") return Mode::self_train;
    if (name == "scratch") return Mode::scratch;
    fail(ErrorCode::config_error, "unknown mode \"" + std::string(name) + "\"");
}

namespace {

std::string join(std::span<const std::size_t> values) {
    std::string out;
    for (std::size_t i = 0; i < values.size(); ++i) out += (i ? "," : "") + std::to_string(values[i]);
    return out;
}

std::string number(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

}  // namespace

namespace {

std::string train_text(std::string_view prefix, const ProbeTrainConfig& t) {
    std::ostringstream os;
    const std::string p(prefix);
    os << p << ".epochs=" << t.epochs << '\n'
       << p << ".batch_size=" << t.batch_size << '\n'
       << p << ".base_lr=" << number(t.base_lr) << '\n'
       << p << ".momentum=" << number(t.momentum) << '\n'
       << p << ".weight_decay=" << number(t.weight_decay) << '\n'
       << p << ".lr_schedule=" << (t.lr_schedule == LrSchedule::cosine ? "cosine" : "constant") << '\n';
    return os.str();
}

}  // namespace

std::string canonical_text(const ExperimentConfig& c) {
    std::ostringstream os;
    os << "data=" << c.data_description << '\n'
       << "schedule.initial=" << c.schedule.initial << '\n'
       << "schedule.per_cycle=" << c.schedule.per_cycle << '\n'
       << "schedule.cycles=" << c.schedule.cycles << '\n'
       << "mode=" << to_string(c.mode) << '\n'
       << "method=" << to_string(c.method) << '\n'
       << "balanced=" << c.balanced_split << '\n'
       << train_text("probe", c.probe) << train_text("scratch", c.scratch)
       << "net.encoder_widths=" << join(c.siam_net.encoder_widths) << '\n'
       << "net.predictor_hidden=" << c.siam_net.predictor_hidden << '\n'
       << "augment.noise_sigma=" << number(c.augment.noise_sigma) << '\n'
       << "augment.scale=" << number(c.augment.scale_lo) << ',' << number(c.augment.scale_hi) << '\n'
       << "augment.drop_prob=" << number(c.augment.drop_prob) << '\n'
       << "siam.epochs=" << c.siam.epochs << '\n'
       << "siam.batch_size=" << c.siam.batch_size << '\n'
       << "siam.base_lr=" << number(c.siam.base_lr) << '\n'
       << "siam.momentum=" << number(c.siam.momentum) << '\n'
       << "siam.weight_decay=" << number(c.siam.weight_decay) << '\n'
       << "pretrained=" << (c.pretrained ? std::to_string(parameter_hash(c.pretrained->encoder)) : "none") << '\n'
       << "svm.c=" << number(c.svm_c) << '\n'
       << "svm.normalize=" << c.svm_normalize << '\n'
       << "svm.tolerance=" << number(c.svm_solver.tolerance) << '\n'
       << "svm.max_sweeps=" << c.svm_solver.max_sweeps << '\n'
       << "seed=" << c.seed << '\n';
    return os.str();
}

std::uint64_t fingerprint(const ExperimentConfig& config) { return fnv1a(canonical_text(config)); }

double evaluate_accuracy(const Matrix& proba, std::span<const Label> labels) {
    require(proba.rows() == labels.size(), ErrorCode::dimension_mismatch, "predictions vs labels");
    require(!labels.empty(), ErrorCode::invalid_argument, "empty evaluation set");
    const auto predicted = argmax_rows(proba);
    std::size_t hits = 0;
    for (std::size_t i = 0; i < labels.size(); ++i) hits += predicted[i] == labels[i];
    return static_cast<double>(hits) / static_cast<double>(labels.size());
}

double evaluate_accuracy(const EncoderClassifier& classifier, const FeatureDataset& test) {
    require(test.dim() == classifier.encoder.input_dim, ErrorCode::dimension_mismatch,
            "test features do not match the classifier input");
    return evaluate_accuracy(classifier.predict_proba(widen(test.features)), test.labels);
}

namespace {

/// What one cycle's classifier exposes to evaluation and acquisition.
struct CycleModel {
    EncoderClassifier classifier;
    Matrix train_embeddings;  // every pool row
};

}  // namespace

RunResult run_experiment(const ExperimentConfig& config, const FeatureDataset& train, const FeatureDataset& test) {
    validate(train);
    validate(test);
    require(train.dim() == test.dim(), ErrorCode::dimension_mismatch, "train and test feature widths differ");
    require(train.num_classes == test.num_classes, ErrorCode::dimension_mismatch, "train and test class counts differ");
    validate(config.schedule, train.size());
    validate(config.probe);
    validate(config.scratch);

    RunResult result;
    result.fingerprint = fingerprint(config);
    auto& diag = result.diagnostics;
    const std::size_t classes = train.num_classes;
    const Matrix train_x = widen(train.features);

    // Stage (i): one self-supervised pre-training before any cycle.
    std::optional<SiamNet> backbone;
    Matrix frozen_embeddings;
    if (config.mode == Mode::self_train) {
        if (config.pretrained) {
            require(config.pretrained->input_dim() == train.dim(), ErrorCode::dimension_mismatch,
                    "pre-trained net does not match the feature width");
            backbone = config.pretrained;
        } else {
            SiamTrainConfig siam = config.siam;
            siam.seed = derive_seed(config.seed, "siam");
            backbone = train_simsiam(train_x, config.siam_net, config.augment, siam);
            ++diag.simsiam_trainings;
        }
        frozen_embeddings = encode(*backbone, train_x);
        diag.embedding_spread = embedding_spread(frozen_embeddings);
    }

    PoolState pool = initial_split(train, config.schedule, {derive_seed(config.seed, "split"), config.balanced_split});
    Oracle oracle(train);

    for (std::size_t cycle = 0; cycle <= config.schedule.cycles; ++cycle) {
        const auto started = std::chrono::steady_clock::now();
        require(pool.labeled().size() == config.schedule.labeled_after(cycle) && pool.pool_size() == train.size(),
                ErrorCode::invalid_argument, "pool bookkeeping broke at cycle " + std::to_string(cycle));
        diag.labeled_sizes.push_back(pool.labeled().size());
        diag.unlabeled_sizes.push_back(pool.unlabeled().size());

        try {
            ProbeTrainConfig probe = config.mode == Mode::self_train ? config.probe : config.scratch;
            probe.seed = derive_seed(config.seed, "probe", cycle);
            const auto labels = pool.labeled_labels();

            CycleModel model;
            if (config.mode == Mode::self_train) {
                diag.encoder_hashes.push_back(parameter_hash(backbone->encoder));
                const Matrix labeled_x = gather_rows(frozen_embeddings, pool.labeled());
                model.classifier = {backbone->encoder, train_probe(labeled_x, labels, classes, probe)};
                model.train_embeddings = frozen_embeddings;
            } else {
                const Matrix labeled_x = gather_rows(train_x, pool.labeled());
                model.classifier = train_encoder_supervised(labeled_x, labels, classes,
                                                            {config.siam_net.encoder_widths}, probe);
                model.train_embeddings = model.classifier.embed(train_x);
            }

            CycleRecord record;
            record.cycle = cycle;
            record.labeled_count = pool.labeled().size();
            record.test_accuracy = evaluate_accuracy(model.classifier, test);
            record.method = config.method;
            record.mode = config.mode;

            if (cycle < config.schedule.cycles) {
                AcquisitionRequest request{pool, config.schedule.per_cycle, config.method,
                                           derive_seed(config.seed, "acquire", cycle)};
                ScoredSelection selection;
                switch (config.method) {
                    case Method::random: selection = acquire_random(request); break;
                    case Method::entropy: {
                        const Matrix unlabeled = gather_rows(model.train_embeddings, pool.unlabeled());
                        selection = acquire_entropy(predict_proba(model.classifier.head, unlabeled), request);
                        break;
                    }
                    case Method::kcenter: selection = acquire_kcenter_greedy(model.train_embeddings, request); break;
                    case Method::svm_min_margin: {
                        SvmSolverConfig solver = config.svm_solver;
                        solver.seed = derive_seed(config.seed, "svm", cycle);
                        const Matrix labeled = gather_rows(model.train_embeddings, pool.labeled());
                        const SvmOvrModel svm = train_svm_ovr(labeled, labels, classes, config.svm_c, solver);
                        const Matrix unlabeled = gather_rows(model.train_embeddings, pool.unlabeled());
                        const Matrix values = config.svm_normalize ? svm_normalized_decision_values(svm, unlabeled)
                                                                   : svm_decision_values(svm, unlabeled);
                        selection = acquire_svm_min_margin(values, classes, request);
                        break;
                    }
                }
                pool = oracle.query(pool, selection.chosen);
                diag.queried.push_back(std::move(selection.chosen));
            }
            if (config.measure_time) {
                record.wall_time =
                    std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
            }
            result.records.push_back(record);
        } catch (const Error& e) {
            throw Error(e.code(), "cycle " + std::to_string(cycle) + ": " + e.what());
        }
    }
    diag.oracle_reveals = oracle.reveal_count();
    return result;
}

LearningCurve emit_curve(const RunResult& result) {
    require(!result.records.empty(), ErrorCode::invalid_argument, "run has no records");
    LearningCurve curve;
    curve.method = std::string(to_string(result.records.front().method));
    curve.mode = std::string(to_string(result.records.front().mode));
    for (const auto& record : result.records) {
        curve.budgets.push_back(record.labeled_count);
        curve.accuracies.push_back(record.test_accuracy);
    }
    validate(curve);
    return curve;
}

}  // namespace poolforge
