#include <benchmark/benchmark.h>

#include <random>
#include <string>
#include <vector>

#include "toral/azumaya.hpp"
#include "toral/quadform.hpp"

using namespace toral;

namespace {

RDiagonalForm random_form(const FieldDescriptor& k, std::size_t n, std::size_t dim, std::mt19937_64& rng) {
    const std::vector<std::string> coeffs{"1", "-1", "2", "-3", "5", "-6"};
    std::uniform_int_distribution<std::size_t> pick(0, coeffs.size() - 1);
    std::uniform_int_distribution<int> exp(-2, 2);
    std::vector<std::string> entries;
    for (std::size_t e = 0; e < dim; ++e) {
        std::string s = coeffs[pick(rng)];
        for (std::size_t v = 1; v <= n; ++v) s += "*t" + std::to_string(v) + "^" + std::to_string(exp(rng));
        entries.push_back(s);
    }
    return RDiagonalForm::parse(k, n, entries);
}

BrauerMatrix random_brauer(std::size_t n, i64 max_den, std::mt19937_64& rng) {
    BrauerMatrix b(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            i64 den = std::uniform_int_distribution<i64>(1, max_den)(rng);
            b.set(i, j, QZ::make(std::uniform_int_distribution<i64>(0, den - 1)(rng), den));
        }
    return b;
}

void BM_LoopNormalForm(benchmark::State& state) {
    std::mt19937_64 rng(1);
    auto k = FieldDescriptor::rationals();
    auto q = random_form(k, 3, static_cast<std::size_t>(state.range(0)), rng);
    for (auto _ : state) benchmark::DoNotOptimize(loop_normal_form(q));
}
BENCHMARK(BM_LoopNormalForm)->Arg(4)->Arg(16)->Arg(64);

void BM_CountLoopClasses(benchmark::State& state) {
    auto k = FieldDescriptor::finite(5);
    for (auto _ : state) benchmark::DoNotOptimize(count_loop_classes(k, 2, static_cast<std::size_t>(state.range(0))));
}
BENCHMARK(BM_CountLoopClasses)->Arg(2)->Arg(4)->Arg(8);

void BM_SkewNormalForm(benchmark::State& state) {
    std::mt19937_64 rng(2);
    auto b = random_brauer(static_cast<std::size_t>(state.range(0)), 6, rng);
    for (auto _ : state) benchmark::DoNotOptimize(skew_normal_form(b));
}
BENCHMARK(BM_SkewNormalForm)->Arg(2)->Arg(3)->Arg(4);

void BM_SkewBlocks(benchmark::State& state) {
    std::mt19937_64 rng(3);
    auto b = random_brauer(static_cast<std::size_t>(state.range(0)), 12, rng);
    for (auto _ : state) benchmark::DoNotOptimize(skew_blocks(b));
}
BENCHMARK(BM_SkewBlocks)->Arg(4)->Arg(8)->Arg(16);

void BM_EnumerateToral(benchmark::State& state) {
    for (auto _ : state) benchmark::DoNotOptimize(enumerate_toral(state.range(0), 4));
}
BENCHMARK(BM_EnumerateToral)->Arg(12)->Arg(60)->Arg(360);

// Full-rank n = 4 pair with equal ord-lists: the search runs to its budget.
void BM_OrbitSearch(benchmark::State& state) {
    BrauerMatrix a(4), b(4);
    a.set(0, 1, QZ::make(1, 5));
    a.set(2, 3, QZ::make(1, 5));
    b.set(0, 1, QZ::make(1, 5));
    b.set(2, 3, QZ::make(2, 5));
    for (auto _ : state) benchmark::DoNotOptimize(orbit_equivalent(a, b, static_cast<std::size_t>(state.range(0))));
}
BENCHMARK(BM_OrbitSearch)->Arg(1000)->Arg(10000)->Unit(benchmark::kMillisecond);

} // namespace

BENCHMARK_MAIN();
