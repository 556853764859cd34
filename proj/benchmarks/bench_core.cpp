#include <benchmark/benchmark.h>

#include "oddu/common.hpp"
#include "oddu/mat.hpp"
#include "oddu/ring.hpp"
#include "oddu/zmodlin.hpp"

using namespace oddu;

namespace {

Mat random_mat(const Ring& K, std::size_t d, Rng& rng) {
    Mat m(K, d, d);
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j)
            m.at(i, j) = static_cast<Ring::Elem>(rng.below(K.size()));
    return m;
}

void BM_mat_mul_f2(benchmark::State& state) {
    Ring K = Ring::build(RingSpec::modular(2));
    Rng rng(1);
    std::size_t d = static_cast<std::size_t>(state.range(0));
    Mat a = random_mat(K, d, rng), b = random_mat(K, d, rng);
    for (auto _ : state) benchmark::DoNotOptimize(mat_mul(a, b));
}
BENCHMARK(BM_mat_mul_f2)->Arg(6)->Arg(9);

void BM_mat_mul_z4(benchmark::State& state) {
    Ring K = Ring::build(RingSpec::modular(4));
    Rng rng(1);
    std::size_t d = static_cast<std::size_t>(state.range(0));
    Mat a = random_mat(K, d, rng), b = random_mat(K, d, rng);
    for (auto _ : state) benchmark::DoNotOptimize(mat_mul(a, b));
}
BENCHMARK(BM_mat_mul_z4)->Arg(6);

void BM_mat_inverse(benchmark::State& state) {
    Ring K = Ring::build(RingSpec::modular(4));
    Rng rng(1);
    Mat a = Mat::identity(K, 6);
    // unipotent perturbation keeps it invertible
    for (std::size_t i = 0; i < 6; ++i)
        for (std::size_t j = i + 1; j < 6; ++j)
            a.at(i, j) = static_cast<Ring::Elem>(rng.below(4));
    for (auto _ : state) benchmark::DoNotOptimize(mat_inverse(a));
}
BENCHMARK(BM_mat_inverse);

void BM_mat_key(benchmark::State& state) {
    Ring K = Ring::build(RingSpec::modular(2));
    Rng rng(1);
    Mat a = random_mat(K, 6, rng);
    for (auto _ : state) benchmark::DoNotOptimize(mat_key(a));
}
BENCHMARK(BM_mat_key);

void BM_howell_add(benchmark::State& state) {
    Rng rng(1);
    std::vector<ZRow> rows;
    for (int i = 0; i < 16; ++i) {
        ZRow r(24);
        for (auto& x : r) x = static_cast<unsigned>(rng.below(4));
        rows.push_back(r);
    }
    for (auto _ : state) {
        HowellBasis H(4, 24);
        for (const auto& r : rows) H.add(r);
        benchmark::DoNotOptimize(H.count());
    }
}
BENCHMARK(BM_howell_add);

} // namespace

BENCHMARK_MAIN();
