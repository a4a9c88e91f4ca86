#include "poolforge/data.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <limits>
#include <numeric>
#include <string>

#include "poolforge/rng.hpp"

namespace poolforge {

namespace {

constexpr char kMagic[4] = {'P', 'F', 'V', '1'};
constexpr std::size_t kHeaderBytes = 16;

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
    for (int shift = 0; shift < 32; shift += 8) out.push_back(static_cast<std::uint8_t>(v >> shift));
}

std::uint32_t get_u32(std::span<const std::uint8_t> bytes, std::size_t offset) {
    std::uint32_t v = 0;
    for (int b = 0; b < 4; ++b) v |= static_cast<std::uint32_t>(bytes[offset + b]) << (8 * b);
    return v;
}

std::uint32_t checked_u32(std::size_t v, const char* what) {
    require(v <= std::numeric_limits<std::uint32_t>::max(), ErrorCode::invalid_argument,
            std::string(what) + " does not fit the feature format");
    return static_cast<std::uint32_t>(v);
}

}  // namespace

void validate(const FeatureDataset& dataset) {
    require(dataset.size() >= 1, ErrorCode::invalid_argument, "dataset needs at least one row");
    require(dataset.dim() >= 1, ErrorCode::invalid_argument, "dataset needs at least one feature");
    require(dataset.num_classes >= 2, ErrorCode::invalid_argument, "dataset needs at least two classes");
    require(dataset.labels.size() == dataset.size(), ErrorCode::dimension_mismatch, "labels vs rows");
    for (Label label : dataset.labels) {
        require(label >= 0 && static_cast<std::size_t>(label) < dataset.num_classes, ErrorCode::label_out_of_range,
                "label " + std::to_string(label) + " outside [0, " + std::to_string(dataset.num_classes) + ")");
    }
    require(all_finite(dataset.features.values()), ErrorCode::non_finite, "dataset contains NaN or Inf");
}

std::vector<std::size_t> class_counts(std::span<const Label> labels, std::size_t num_classes) {
    std::vector<std::size_t> counts(num_classes, 0);
    for (Label label : labels) {
        require(label >= 0 && static_cast<std::size_t>(label) < num_classes, ErrorCode::label_out_of_range,
                "class_counts");
        ++counts[static_cast<std::size_t>(label)];
    }
    return counts;
}

std::vector<std::uint8_t> encode_dataset(const FeatureDataset& dataset) {
    validate(dataset);
    const std::size_t n = dataset.size();
    const std::size_t d = dataset.dim();
    std::vector<std::uint8_t> out;
    out.reserve(kHeaderBytes + 4 * n * d + 4 * n);
    out.insert(out.end(), std::begin(kMagic), std::end(kMagic));
    put_u32(out, checked_u32(n, "row count"));
    put_u32(out, checked_u32(d, "dimension"));
    put_u32(out, checked_u32(dataset.num_classes, "class count"));
    for (float v : dataset.features.values()) put_u32(out, std::bit_cast<std::uint32_t>(v));
    for (Label label : dataset.labels) put_u32(out, static_cast<std::uint32_t>(label));
    return out;
}

FeatureDataset decode_dataset(std::span<const std::uint8_t> bytes, Split split) {
    require(bytes.size() >= sizeof(kMagic) && std::memcmp(bytes.data(), kMagic, sizeof(kMagic)) == 0,
            ErrorCode::bad_magic, "feature file does not start with PFV1");
    require(bytes.size() >= kHeaderBytes, ErrorCode::truncated, "feature header is incomplete");
    const std::size_t n = get_u32(bytes, 4);
    const std::size_t d = get_u32(bytes, 8);
    const std::size_t c = get_u32(bytes, 12);
    require(n >= 1 && d >= 1, ErrorCode::invalid_argument, "feature file declares an empty matrix");
    require(c >= 2, ErrorCode::invalid_argument, "feature file declares fewer than two classes");
    const std::size_t expected = kHeaderBytes + 4 * n * d + 4 * n;
    require(bytes.size() >= expected, ErrorCode::truncated,
            "declared " + std::to_string(n) + "x" + std::to_string(d) + " needs " + std::to_string(expected) +
                " bytes, file has " + std::to_string(bytes.size()));
    require(bytes.size() == expected, ErrorCode::invalid_argument, "trailing bytes after label block");

    FeatureDataset dataset;
    dataset.num_classes = c;
    dataset.split = split;
    std::vector<float> values(n * d);
    std::size_t offset = kHeaderBytes;
    for (float& v : values) {
        v = std::bit_cast<float>(get_u32(bytes, offset));
        offset += 4;
    }
    dataset.features = FloatMatrix(n, d, std::move(values));
    dataset.labels.resize(n);
    for (std::size_t i = 0; i < n; ++i, offset += 4) {
        const std::uint32_t raw = get_u32(bytes, offset);
        require(raw < c, ErrorCode::label_out_of_range,
                "row " + std::to_string(i) + " has label " + std::to_string(raw) + " >= " + std::to_string(c));
        dataset.labels[i] = static_cast<Label>(raw);
    }
    require(all_finite(dataset.features.values()), ErrorCode::non_finite, "feature file contains NaN or Inf");
    return dataset;
}

FeatureDataset load_dataset(const std::filesystem::path& path, Split split) {
    std::ifstream in(path, std::ios::binary);
    require(in.good(), ErrorCode::missing_file, "cannot open " + path.string());
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    require(!in.bad(), ErrorCode::io_failure, "read failed for " + path.string());
    return decode_dataset(bytes, split);
}

void save_dataset(const FeatureDataset& dataset, const std::filesystem::path& path) {
    const auto bytes = encode_dataset(dataset);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    require(out.good(), ErrorCode::io_failure, "cannot open " + path.string() + " for writing");
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    out.flush();
    require(out.good(), ErrorCode::io_failure, "write failed for " + path.string());
}

// --- generate_blobs ----------------------------------------------------------

namespace {

/// Random orthogonal matrix via modified Gram-Schmidt on a Gaussian matrix.
Matrix random_rotation(std::size_t dim, Rng& rng) {
    Matrix q(dim, dim);
    for (double& v : q.values()) v = standard_normal(rng);
    for (std::size_t i = 0; i < dim; ++i) {
        auto qi = q.row(i);
        for (std::size_t j = 0; j < i; ++j) {
            auto qj = q.row(j);
            double dot = 0.0;
            for (std::size_t k = 0; k < dim; ++k) dot += qi[k] * qj[k];
            for (std::size_t k = 0; k < dim; ++k) qi[k] -= dot * qj[k];
        }
        double norm = 0.0;
        for (double v : qi) norm += v * v;
        norm = std::sqrt(norm);
        for (double& v : qi) v /= norm;
    }
    return q;
}

double min_pairwise_distance(const Matrix& points) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t a = 0; a < points.rows(); ++a) {
        for (std::size_t b = a + 1; b < points.rows(); ++b) {
            double sq = 0.0;
            for (std::size_t k = 0; k < points.cols(); ++k) {
                const double diff = points(a, k) - points(b, k);
                sq += diff * diff;
            }
            best = std::min(best, std::sqrt(sq));
        }
    }
    return best;
}

struct Sample {
    std::vector<float> x;
    Label label;
};

FeatureDataset assemble(std::vector<Sample>& samples, std::size_t dim, std::size_t num_classes, Split split,
                        Rng& rng) {
    shuffle(samples, rng);
    FeatureDataset out;
    out.num_classes = num_classes;
    out.split = split;
    out.features = FloatMatrix(samples.size(), dim);
    out.labels.reserve(samples.size());
    for (std::size_t i = 0; i < samples.size(); ++i) {
        std::ranges::copy(samples[i].x, out.features.row(i).begin());
        out.labels.push_back(samples[i].label);
    }
    return out;
}

}  // namespace

std::pair<FeatureDataset, FeatureDataset> generate_blobs(const BlobSpec& spec) {
    require(spec.num_classes >= 2, ErrorCode::invalid_argument, "generate_blobs needs at least two classes");
    require(spec.per_class >= 2, ErrorCode::invalid_argument, "generate_blobs needs at least two samples per class");
    require(spec.dim >= 1, ErrorCode::invalid_argument, "generate_blobs needs dim >= 1");
    require(spec.sigma >= 0.0 && std::isfinite(spec.sigma), ErrorCode::invalid_argument, "sigma must be non-negative");

    Rng rng = make_rng(spec.seed, "blobs");
    Matrix means(spec.num_classes, spec.dim);
    for (double& v : means.values()) v = standard_normal(rng);
    const double closest = min_pairwise_distance(means);
    require(closest > 0.0, ErrorCode::invalid_argument, "coincident class means");
    for (double& v : means.values()) v /= closest;

    const std::size_t full_dim = spec.dim + spec.noise_dim;
    const Matrix rotation = random_rotation(full_dim, rng);

    const auto train_per_class = std::clamp<std::size_t>(
        static_cast<std::size_t>(std::llround(0.8 * static_cast<double>(spec.per_class))), 1, spec.per_class - 1);

    std::vector<Sample> train;
    std::vector<Sample> test;
    std::vector<double> raw(full_dim);
    for (std::size_t c = 0; c < spec.num_classes; ++c) {
        for (std::size_t s = 0; s < spec.per_class; ++s) {
            for (std::size_t k = 0; k < full_dim; ++k) {
                const double centre = k < spec.dim ? means(c, k) : 0.0;
                raw[k] = centre + spec.sigma * standard_normal(rng);
            }
            Sample sample{std::vector<float>(full_dim), static_cast<Label>(c)};
            for (std::size_t r = 0; r < full_dim; ++r) {
                double acc = 0.0;
                for (std::size_t k = 0; k < full_dim; ++k) acc += rotation(r, k) * raw[k];
                sample.x[r] = static_cast<float>(acc);
            }
            (s < train_per_class ? train : test).push_back(std::move(sample));
        }
    }
    auto train_set = assemble(train, full_dim, spec.num_classes, Split::train, rng);
    auto test_set = assemble(test, full_dim, spec.num_classes, Split::test, rng);
    return {std::move(train_set), std::move(test_set)};
}

// --- Pool bookkeeping ------------------------------------------------------

void validate(const BudgetSchedule& schedule, std::size_t pool_size) {
    require(schedule.initial >= 1, ErrorCode::invalid_argument, "initial budget must be positive");
    require(schedule.total() <= pool_size, ErrorCode::budget_exceeded,
            "total budget " + std::to_string(schedule.total()) + " exceeds pool of " + std::to_string(pool_size));
}

bool PoolState::is_labeled(std::size_t index) const { return std::ranges::binary_search(labeled_, index); }

PoolState make_pool(std::size_t pool_size, std::vector<std::pair<std::size_t, Label>> labeled) {
    std::ranges::sort(labeled);
    PoolState pool;
    pool.labeled_.reserve(labeled.size());
    pool.labels_.reserve(labeled.size());
    for (std::size_t i = 0; i < labeled.size(); ++i) {
        require(labeled[i].first < pool_size, ErrorCode::index_out_of_range, "make_pool");
        require(i == 0 || labeled[i].first != labeled[i - 1].first, ErrorCode::duplicate_index, "make_pool");
        pool.labeled_.push_back(labeled[i].first);
        pool.labels_.push_back(labeled[i].second);
    }
    pool.unlabeled_.reserve(pool_size - labeled.size());
    for (std::size_t i = 0, next = 0; i < pool_size; ++i) {
        if (next < pool.labeled_.size() && pool.labeled_[next] == i) {
            ++next;
        } else {
            pool.unlabeled_.push_back(i);
        }
    }
    return pool;
}

PoolState Oracle::query(const PoolState& pool, std::span<const std::size_t> indices) {
    const std::size_t n = dataset_->size();
    require(pool.pool_size() == n, ErrorCode::dimension_mismatch, "pool and dataset sizes differ");
    std::vector<std::size_t> sorted(indices.begin(), indices.end());
    for (std::size_t index : sorted) {
        require(index < n, ErrorCode::index_out_of_range, "query index " + std::to_string(index));
    }
    std::ranges::sort(sorted);
    require(std::ranges::adjacent_find(sorted) == sorted.end(), ErrorCode::duplicate_index, "query has duplicates");
    for (std::size_t index : sorted) {
        require(!pool.is_labeled(index), ErrorCode::already_labeled, "index " + std::to_string(index));
    }

    std::vector<std::pair<std::size_t, Label>> labeled;
    labeled.reserve(pool.labeled_.size() + sorted.size());
    for (std::size_t i = 0; i < pool.labeled_.size(); ++i) labeled.emplace_back(pool.labeled_[i], pool.labels_[i]);
    for (std::size_t index : sorted) labeled.emplace_back(index, dataset_->labels[index]);
    reveals_ += sorted.size();

    PoolState next = make_pool(n, std::move(labeled));
    next.cycle_ = pool.cycle_ + 1;
    return next;
}

PoolState initial_split(const FeatureDataset& dataset, const BudgetSchedule& schedule, const SplitSpec& spec) {
    const std::size_t n = dataset.size();
    const std::size_t classes = dataset.num_classes;
    require(schedule.initial <= n, ErrorCode::budget_exceeded,
            "initial budget " + std::to_string(schedule.initial) + " exceeds pool of " + std::to_string(n));
    require(!spec.balanced || schedule.initial >= classes, ErrorCode::invalid_argument,
            "balanced split needs at least one sample per class");

    Rng rng = make_rng(spec.seed, "split");
    std::vector<std::size_t> chosen;
    if (spec.balanced) {
        std::vector<std::size_t> order(classes);
        std::iota(order.begin(), order.end(), std::size_t{0});
        shuffle(order, rng);
        std::vector<std::size_t> quota(classes, schedule.initial / classes);
        for (std::size_t r = 0; r < schedule.initial % classes; ++r) ++quota[order[r]];

        std::vector<std::vector<std::size_t>> members(classes);
        for (std::size_t i = 0; i < n; ++i) members[static_cast<std::size_t>(dataset.labels[i])].push_back(i);
        for (std::size_t c = 0; c < classes; ++c) {
            require(members[c].size() >= quota[c], ErrorCode::budget_exceeded,
                    "class " + std::to_string(c) + " has fewer samples than its initial quota");
            shuffle(members[c], rng);
            chosen.insert(chosen.end(), members[c].begin(), members[c].begin() + static_cast<std::ptrdiff_t>(quota[c]));
        }
    } else {
        std::vector<std::size_t> all(n);
        std::iota(all.begin(), all.end(), std::size_t{0});
        shuffle(all, rng);
        chosen.assign(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(schedule.initial));
    }

    std::vector<std::pair<std::size_t, Label>> labeled;
    labeled.reserve(chosen.size());
    for (std::size_t index : chosen) labeled.emplace_back(index, dataset.labels[index]);
    return make_pool(n, std::move(labeled));
}

}  // namespace poolforge
