// Microbenchmarks for the hot paths: digit sampling dominates the Monte-Carlo
// constant check, the column scan dominates the max-of-columns build, and the
// brute covering enumeration is the main cost of the chain cross-check.

#include <benchmark/benchmark.h>

#include <cfspectra/cf_core.hpp>
#include <cfspectra/dimension_tools.hpp>
#include <cfspectra/growth_model.hpp>
#include <cfspectra/rng.hpp>
#include <cfspectra/spectra_constructions.hpp>

using namespace cfspectra;

namespace {

void BM_cf_expand(benchmark::State& state) {
    Xoshiro256 rng(1);
    std::vector<Rational> xs;
    for (int i = 0; i < 256; ++i) {
        Rational x(1 + static_cast<long>(rng.below(999999)),
                   2 + static_cast<long>(rng.below(1000000)));
        x.canonicalize();
        if (x >= 1) x = 1 / x;
        if (x == 0) x = Rational(1, 2);
        xs.push_back(x);
    }
    std::size_t i = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(cf_expand(xs[i % xs.size()], 1 << 20));
        ++i;
    }
}
BENCHMARK(BM_cf_expand);

void BM_cylinder(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    std::vector<BigInt> w;
    Xoshiro256 rng(2);
    for (std::size_t i = 0; i < n; ++i) w.emplace_back(1 + static_cast<long>(rng.below(50)));
    for (auto _ : state) benchmark::DoNotOptimize(make_cylinder(w));
}
BENCHMARK(BM_cylinder)->Arg(8)->Arg(20)->Arg(64);

void BM_sampler_digits(benchmark::State& state) {
    LebesgueCF gen(7);
    std::uint64_t sink = 0;
    for (auto _ : state) sink += gen.next_digit();
    benchmark::DoNotOptimize(sink);
    state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_sampler_digits);

void BM_khintchine_point(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    std::uint64_t seed = 1;
    for (auto _ : state) {
        benchmark::DoNotOptimize(khintchine_mc_mean(1, n, seed++));
    }
    state.SetItemsProcessed(state.iterations() * n);
}
BENCHMARK(BM_khintchine_point)->Arg(1000)->Arg(10000);

void BM_seq_t_columns(benchmark::State& state) {
    const auto j = static_cast<std::size_t>(state.range(0));
    GrowthFunction fb = GrowthFunction::factorial_blocks();
    for (auto _ : state) benchmark::DoNotOptimize(build_seq_t(fb, Rational(1, 2), j));
}
BENCHMARK(BM_seq_t_columns)->Arg(100)->Arg(400)->Unit(benchmark::kMillisecond);

void BM_covering_brute(benchmark::State& state) {
    const auto cap = static_cast<unsigned long>(state.range(0));
    for (auto _ : state)
        benchmark::DoNotOptimize(brute_covering_term(2, Rational(30), Rational(1), cap));
}
BENCHMARK(BM_covering_brute)->Arg(100)->Arg(200)->Unit(benchmark::kMillisecond);

void BM_witness(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    GrowthFunction ex2 = GrowthFunction::exponential(Rational(2));
    for (auto _ : state)
        benchmark::DoNotOptimize(build_witness(ex2, WitnessMode::UpperLimsup, n));
}
BENCHMARK(BM_witness)->Arg(50)->Arg(200)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
