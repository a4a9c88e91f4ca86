#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <utility>
#include <vector>

#include "poolforge/matrix.hpp"

namespace poolforge {

using Label = std::int32_t;

enum class Split { train, test };

/// n x d feature matrix plus ground-truth labels. Immutable once built.
struct FeatureDataset {
    FloatMatrix features;
    std::vector<Label> labels;
    std::size_t num_classes = 0;
    Split split = Split::train;

    std::size_t size() const noexcept { return features.rows(); }
    std::size_t dim() const noexcept { return features.cols(); }

    bool operator==(const FeatureDataset&) const = default;
};

/// Checks the dataset invariants: n, d >= 1, C >= 2, labels in range, finite rows.
void validate(const FeatureDataset& dataset);

/// Counts of each class among `labels`.
std::vector<std::size_t> class_counts(std::span<const Label> labels, std::size_t num_classes);

// --- Feature file codec -----------------------------------------------------
//
// Little-endian: "PFV1" | u32 n | u32 d | u32 C | n*d float32 row-major | n u32 labels.
// The split tag is not stored; load_dataset takes it from the caller.

FeatureDataset load_dataset(const std::filesystem::path& path, Split split = Split::train);
void save_dataset(const FeatureDataset& dataset, const std::filesystem::path& path);

std::vector<std::uint8_t> encode_dataset(const FeatureDataset& dataset);
FeatureDataset decode_dataset(std::span<const std::uint8_t> bytes, Split split = Split::train);

// --- Synthetic pools -------------------------------------------------------

struct BlobSpec {
    std::size_t num_classes = 10;
    std::size_t per_class = 100;
    std::size_t dim = 16;
    std::size_t noise_dim = 48;
    double sigma = 0.3;
    std::uint64_t seed = 0;
};

/// Gaussian clusters whose means are at least one unit apart, padded with
/// pure-noise coordinates and mixed by a random rotation. Each class is
/// split 80/20 into train and test.
std::pair<FeatureDataset, FeatureDataset> generate_blobs(const BlobSpec& spec);

// --- Pool bookkeeping ------------------------------------------------------

struct BudgetSchedule {
    std::size_t initial = 0;
    std::size_t per_cycle = 0;
    std::size_t cycles = 0;

    std::size_t total() const noexcept { return initial + cycles * per_cycle; }
    std::size_t labeled_after(std::size_t cycle) const noexcept { return initial + cycle * per_cycle; }

    /// Schedule in which every cycle labels as many samples as the initial pool.
    static BudgetSchedule equal(std::size_t initial, std::size_t cycles) { return {initial, initial, cycles}; }
};

void validate(const BudgetSchedule& schedule, std::size_t pool_size);

struct SplitSpec {
    std::uint64_t seed = 0;
    bool balanced = true;
};

/// Disjoint labeled / unlabeled index sets. Both are kept sorted ascending.
/// Labels are held only for the labeled set, so anything downstream of the
/// pool can never see an unrevealed label.
class PoolState {
public:
    PoolState() = default;

    std::span<const std::size_t> labeled() const noexcept { return labeled_; }
    std::span<const std::size_t> unlabeled() const noexcept { return unlabeled_; }
    /// Labels aligned with labeled().
    std::span<const Label> labeled_labels() const noexcept { return labels_; }
    std::size_t cycle() const noexcept { return cycle_; }
    std::size_t pool_size() const noexcept { return labeled_.size() + unlabeled_.size(); }

    bool is_labeled(std::size_t index) const;

    bool operator==(const PoolState&) const = default;

private:
    friend PoolState make_pool(std::size_t, std::vector<std::pair<std::size_t, Label>>);
    friend class Oracle;

    std::vector<std::size_t> labeled_;
    std::vector<Label> labels_;
    std::vector<std::size_t> unlabeled_;
    std::size_t cycle_ = 0;
};

/// Pool over n samples with the given (index, label) pairs already labeled.
PoolState make_pool(std::size_t pool_size, std::vector<std::pair<std::size_t, Label>> labeled);

/// Simulated annotator. Ground-truth labels leave the dataset only through
/// here, and every reveal is counted.
class Oracle {
public:
    explicit Oracle(const FeatureDataset& dataset) : dataset_(&dataset) {}

    /// Moves `indices` from D_U to D_L, revealing their labels; cycle + 1.
    PoolState query(const PoolState& pool, std::span<const std::size_t> indices);

    /// Labels revealed by query() so far.
    std::size_t reveal_count() const noexcept { return reveals_; }
    const FeatureDataset& dataset() const noexcept { return *dataset_; }

private:
    const FeatureDataset* dataset_;
    std::size_t reveals_ = 0;
};

/// Initial labeled pool. When balanced, per-class counts differ by at most
/// one; the classes receiving the remainder are the first ones of a seeded
/// shuffle of class ids.
PoolState initial_split(const FeatureDataset& dataset, const BudgetSchedule& schedule, const SplitSpec& spec);

/// Free-function form of Oracle::query.
inline PoolState query_oracle(const PoolState& pool, Oracle& oracle, std::span<const std::size_t> indices) {
    return oracle.query(pool, indices);
}

}  // namespace poolforge
