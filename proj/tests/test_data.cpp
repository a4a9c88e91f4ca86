#include <gtest/gtest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <set>

#include "poolforge/data.hpp"
#include "poolforge/linear.hpp"
#include "support.hpp"

using namespace poolforge;
using poolforge::testing::code_of;

namespace {

std::filesystem::path temp_path(const std::string& name) {
    return std::filesystem::temp_directory_path() / ("poolforge_test_" + name);
}

FeatureDataset small_dataset() {
    FeatureDataset d;
    d.features = FloatMatrix(3, 2, std::vector<float>{0.5f, -1.25f, 3.0f, 1e-7f, -0.0f, 42.0f});
    d.labels = {0, 2, 1};
    d.num_classes = 3;
    return d;
}

void write_bytes(const std::filesystem::path& path, const std::vector<std::uint8_t>& bytes) {
    std::ofstream out(path, std::ios::binary);
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
}

}  // namespace

TEST(DatasetCodec, RoundTripIsBitExact) {
    const auto d = small_dataset();
    const auto path = temp_path("roundtrip.pfv");
    save_dataset(d, path);
    EXPECT_EQ(std::filesystem::file_size(path), 16 + 4 * 3 * 2 + 4 * 3);
    const auto back = load_dataset(path);
    EXPECT_EQ(back, d);
    EXPECT_TRUE(std::signbit(back.features(2, 0)));
}

TEST(DatasetCodec, SingleRowFileIs24Bytes) {
    FeatureDataset d;
    d.features = FloatMatrix(1, 1, std::vector<float>{1.0f});
    d.labels = {0};
    d.num_classes = 2;
    EXPECT_EQ(encode_dataset(d).size(), 24u);
}

TEST(DatasetCodec, ErrorsAreDistinct) {
    const auto bytes = encode_dataset(small_dataset());

    auto bad_magic = bytes;
    std::copy_n("XXXX", 4, bad_magic.begin());
    EXPECT_EQ(code_of([&] { decode_dataset(bad_magic); }), ErrorCode::bad_magic);

    // Header says n=3 but only two rows and their labels follow.
    auto short_payload = bytes;
    short_payload.resize(16 + 4 * 2 * 2 + 4 * 2);
    EXPECT_EQ(code_of([&] { decode_dataset(short_payload); }), ErrorCode::truncated);

    auto short_header = bytes;
    short_header.resize(10);
    EXPECT_EQ(code_of([&] { decode_dataset(short_header); }), ErrorCode::truncated);

    auto bad_label = bytes;
    bad_label[bad_label.size() - 4] = 7;
    EXPECT_EQ(code_of([&] { decode_dataset(bad_label); }), ErrorCode::label_out_of_range);

    EXPECT_EQ(code_of([&] { load_dataset(temp_path("does_not_exist.pfv")); }), ErrorCode::missing_file);

    const auto path = temp_path("bad_magic.pfv");
    write_bytes(path, bad_magic);
    EXPECT_EQ(code_of([&] { load_dataset(path); }), ErrorCode::bad_magic);
}

TEST(Blobs, DeterministicInSeed) {
    const BlobSpec spec{4, 30, 3, 5, 0.2, 11};
    EXPECT_EQ(generate_blobs(spec), generate_blobs(spec));
    BlobSpec other = spec;
    other.seed = 12;
    EXPECT_NE(generate_blobs(spec).first, generate_blobs(other).first);
}

TEST(Blobs, ShapeAndSplit) {
    const auto [train, test] = generate_blobs({10, 200, 16, 48, 0.3, 0});
    EXPECT_EQ(train.size(), 1600u);
    EXPECT_EQ(test.size(), 400u);
    EXPECT_EQ(train.dim(), 64u);
    EXPECT_EQ(train.split, Split::train);
    EXPECT_EQ(test.split, Split::test);
    for (auto c : class_counts(train.labels, 10)) EXPECT_EQ(c, 160u);
    for (auto c : class_counts(test.labels, 10)) EXPECT_EQ(c, 40u);
}

TEST(Blobs, SeparableTwoClassesAreLearnedByProbe) {
    const auto [train, test] = generate_blobs({2, 50, 2, 0, 0.05, 3});
    ProbeTrainConfig cfg;
    cfg.seed = 1;
    const Matrix x = widen(train.features);
    const auto probe = train_probe(x, train.labels, 2, cfg);
    const auto predicted = argmax_rows(predict_proba(probe, x));
    std::size_t correct = 0;
    for (std::size_t i = 0; i < predicted.size(); ++i) correct += predicted[i] == train.labels[i];
    EXPECT_GE(static_cast<double>(correct) / predicted.size(), 0.99);
}

TEST(Blobs, ZeroNoiseGivesRepeatedPoints) {
    const auto [train, test] = generate_blobs({3, 10, 2, 0, 0.0, 5});
    // Nearest class mean (computed from train) classifies every test row.
    std::vector<std::vector<double>> means(3, std::vector<double>(2, 0.0));
    std::set<std::pair<float, float>> distinct;
    for (std::size_t i = 0; i < train.size(); ++i) {
        distinct.insert({train.features(i, 0), train.features(i, 1)});
        for (std::size_t j = 0; j < 2; ++j) means[train.labels[i]][j] += train.features(i, j) / 8.0;
    }
    EXPECT_EQ(distinct.size(), 3u);
    for (std::size_t i = 0; i < test.size(); ++i) {
        std::size_t best = 0;
        double best_d = 1e300;
        for (std::size_t k = 0; k < 3; ++k) {
            const double dx = test.features(i, 0) - means[k][0], dy = test.features(i, 1) - means[k][1];
            if (dx * dx + dy * dy < best_d) {
                best_d = dx * dx + dy * dy;
                best = k;
            }
        }
        EXPECT_EQ(static_cast<Label>(best), test.labels[i]);
    }
}

TEST(InitialSplit, OnePerClass) {
    const auto [train, test] = generate_blobs({10, 20, 2, 0, 0.3, 1});
    const auto pool = initial_split(train, BudgetSchedule::equal(10, 1), {9, true});
    auto counts = class_counts(pool.labeled_labels(), 10);
    EXPECT_TRUE(std::ranges::all_of(counts, [](std::size_t c) { return c == 1; }));
}

TEST(InitialSplit, RemainderGoesToShuffledClasses) {
    const auto [train, test] = generate_blobs({3, 20, 2, 0, 0.3, 1});
    std::set<std::vector<std::size_t>> patterns;
    for (std::uint64_t seed = 0; seed < 40; ++seed) {
        const auto pool = initial_split(train, BudgetSchedule::equal(5, 1), {seed, true});
        auto counts = class_counts(pool.labeled_labels(), 3);
        auto sorted = counts;
        std::ranges::sort(sorted);
        EXPECT_EQ(sorted, (std::vector<std::size_t>{1, 2, 2}));
        patterns.insert(counts);
    }
    EXPECT_EQ(patterns.size(), 3u);
}

TEST(InitialSplit, BalancedForManySeeds) {
    const auto [train, test] = generate_blobs({7, 15, 2, 0, 0.3, 2});
    for (std::uint64_t seed = 0; seed < 1000; ++seed) {
        const auto pool = initial_split(train, BudgetSchedule::equal(7 + seed % 40, 1), {seed, true});
        const auto counts = class_counts(pool.labeled_labels(), 7);
        const auto [lo, hi] = std::ranges::minmax(counts);
        ASSERT_LE(hi - lo, 1u) << "seed " << seed;
        ASSERT_EQ(pool.pool_size(), train.size());
    }
}

TEST(InitialSplit, WholePoolAndErrors) {
    const auto [train, test] = generate_blobs({2, 10, 2, 0, 0.3, 1});
    const auto pool = initial_split(train, {train.size(), 0, 0}, {1, false});
    EXPECT_TRUE(pool.unlabeled().empty());
    EXPECT_EQ(code_of([&] { initial_split(train, {train.size() + 1, 0, 0}, {1, false}); }),
              ErrorCode::budget_exceeded);
    EXPECT_EQ(code_of([&] { initial_split(train, {1, 1, 1}, {1, true}); }), ErrorCode::invalid_argument);
    EXPECT_EQ(initial_split(train, {5, 5, 1}, {3, true}), initial_split(train, {5, 5, 1}, {3, true}));
}

TEST(Oracle, MovesIndicesAndCountsReveals) {
    FeatureDataset d = small_dataset();
    Oracle oracle(d);
    const auto pool = make_pool(3, {{0, 0}});
    const auto next = oracle.query(pool, std::vector<std::size_t>{2});
    EXPECT_EQ(std::vector<std::size_t>(next.labeled().begin(), next.labeled().end()),
              (std::vector<std::size_t>{0, 2}));
    EXPECT_EQ(std::vector<std::size_t>(next.unlabeled().begin(), next.unlabeled().end()),
              (std::vector<std::size_t>{1}));
    EXPECT_EQ(next.labeled_labels()[1], 1);
    EXPECT_EQ(next.cycle(), 1u);
    EXPECT_EQ(oracle.reveal_count(), 1u);

    const auto same = oracle.query(next, {});
    EXPECT_EQ(same.labeled().size(), 2u);
    EXPECT_EQ(same.cycle(), 2u);

    EXPECT_EQ(code_of([&] { oracle.query(pool, std::vector<std::size_t>{0}); }), ErrorCode::already_labeled);
    EXPECT_EQ(code_of([&] { oracle.query(pool, std::vector<std::size_t>{3}); }), ErrorCode::index_out_of_range);
    EXPECT_EQ(code_of([&] { oracle.query(pool, std::vector<std::size_t>{1, 1}); }), ErrorCode::duplicate_index);
    EXPECT_EQ(oracle.reveal_count(), 1u);
}

TEST(Schedule, Arithmetic) {
    const auto s = BudgetSchedule::equal(16, 10);
    EXPECT_EQ(s.total(), 176u);
    EXPECT_EQ(s.labeled_after(3), 64u);
    EXPECT_THROW(validate(s, 100), Error);
    EXPECT_NO_THROW(validate(s, 176));
}
