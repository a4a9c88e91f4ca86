// Serial reference kernels against their OpenMP counterparts.
//
//   ./poolforge_bench --benchmark_filter=Forward
//   OMP_NUM_THREADS=8 ./poolforge_bench

#include <benchmark/benchmark.h>

#include <limits>
#include <numeric>

#include "poolforge/kernels.hpp"
#include "poolforge/rng.hpp"

using namespace poolforge;

namespace {

Matrix random_matrix(std::size_t rows, std::size_t cols, std::uint64_t seed) {
    Rng rng(seed);
    Matrix m(rows, cols);
    for (double& v : m.values()) v = uniform(rng, -1.0, 1.0);
    return m;
}

template <auto Kernel>
void BM_DenseForward(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const Matrix in = random_matrix(n, 64, 1), w = random_matrix(64, 64, 2);
    const std::vector<double> bias(64, 0.1);
    Matrix out(n, 64);
    for (auto _ : state) {
        Kernel(in, w, bias, out);
        benchmark::DoNotOptimize(out.values().data());
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n));
}

template <auto Kernel>
void BM_DenseWeightGrad(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const Matrix in = random_matrix(n, 64, 1), g = random_matrix(n, 64, 2);
    Matrix gw(64, 64);
    std::vector<double> gb(64);
    for (auto _ : state) {
        Kernel(g, in, gw, gb);
        benchmark::DoNotOptimize(gw.values().data());
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n));
}

template <auto Kernel>
void BM_Softmax(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const Matrix logits = random_matrix(n, 10, 3);
    for (auto _ : state) {
        Matrix m = logits;
        Kernel(m);
        benchmark::DoNotOptimize(m.values().data());
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n));
}

template <auto Kernel>
void BM_MinDist(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const Matrix points = random_matrix(n, 32, 4);
    std::vector<std::size_t> rows(n);
    std::iota(rows.begin(), rows.end(), std::size_t{0});
    std::vector<double> dist(n, std::numeric_limits<double>::infinity());
    for (auto _ : state) {
        Kernel(points, rows, points.row(0), dist);
        benchmark::DoNotOptimize(dist.data());
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n));
}

}  // namespace

BENCHMARK(BM_DenseForward<kernels::serial::dense_forward>)->Name("DenseForward/serial")->Arg(256)->Arg(4096);
BENCHMARK(BM_DenseForward<kernels::omp::dense_forward>)->Name("DenseForward/omp")->Arg(256)->Arg(4096);
BENCHMARK(BM_DenseWeightGrad<kernels::serial::dense_weight_grad>)->Name("DenseWeightGrad/serial")->Arg(256)->Arg(4096);
BENCHMARK(BM_DenseWeightGrad<kernels::omp::dense_weight_grad>)->Name("DenseWeightGrad/omp")->Arg(256)->Arg(4096);
BENCHMARK(BM_Softmax<kernels::serial::softmax_rows>)->Name("Softmax/serial")->Arg(1600)->Arg(50000);
BENCHMARK(BM_Softmax<kernels::omp::softmax_rows>)->Name("Softmax/omp")->Arg(1600)->Arg(50000);
BENCHMARK(BM_MinDist<kernels::serial::update_min_dist>)->Name("MinDist/serial")->Arg(1600)->Arg(50000);
BENCHMARK(BM_MinDist<kernels::omp::update_min_dist>)->Name("MinDist/omp")->Arg(1600)->Arg(50000);

BENCHMARK_MAIN();
