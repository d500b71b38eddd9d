#include <benchmark/benchmark.h>

#include <random>

#include "supershift/orbit.hpp"
#include "supershift/right_inverse.hpp"
#include "supershift/sampler.hpp"

using namespace supershift;

namespace {

template <ScalarField K>
WeightSeq<K> geoHalf() {
    using T = ScalarTraits<K>;
    return WeightSeq<K>::geometric(T::fromRatio(1, 2), T::fromRatio(1, 2));
}

template <ScalarField K>
void solveArgs(std::mt19937_64& rng, long d, SparseVec<K>& lambda, SparseVec<K>& y) {
    SampleProfile lamProfile{5, 3, 8};
    lambda = sampleSparseVec<K>(rng, lamProfile);
    SampleProfile yProfile{d, 4, 8};
    y = sampleSparseVec<K>(rng, yProfile);
}

template <ScalarField K>
void BM_SolveRightInverse(benchmark::State& state) {
    const long d = state.range(0);
    std::mt19937_64 rng(42);
    SparseVec<K> lambda, y;
    solveArgs(rng, d, lambda, y);
    auto w = geoHalf<K>();
    for (auto _ : state) {
        benchmark::DoNotOptimize(solveRightInverse(lambda, w, d, y));
    }
}

void BM_OracleInverse(benchmark::State& state) {
    const long d = state.range(0);
    std::mt19937_64 rng(42);
    SparseVec<Rational> lambda, y;
    solveArgs(rng, d, lambda, y);
    auto m = buildM(lambda, geoHalf<Rational>(), d);
    for (auto _ : state) {
        benchmark::DoNotOptimize(invMatrixOracle(m));
    }
}

void BM_ApplySeries(benchmark::State& state) {
    std::mt19937_64 rng(42);
    SampleProfile lamProfile{6, 4, 8};
    auto lambda = sampleSparseVec<Rational>(rng, lamProfile);
    SampleProfile xProfile{state.range(0), 8, 8};
    auto x = sampleSparseVec<Rational>(rng, xProfile);
    OperatorSeries<Rational> t{lambda, geoHalf<Rational>(), std::nullopt};
    for (auto _ : state) {
        benchmark::DoNotOptimize(applySeries(t, x));
    }
}

void BM_ProjDistance(benchmark::State& state) {
    std::mt19937_64 rng(42);
    SampleProfile profile{state.range(0), 6, 8};
    auto x = sampleSparseVec<Rational>(rng, profile);
    auto y = sampleSparseVec<Rational>(rng, profile);
    for (auto _ : state) {
        benchmark::DoNotOptimize(projDistance(x, y, 1e-6));
    }
}

}  // namespace

BENCHMARK(BM_SolveRightInverse<Rational>)->Arg(4)->Arg(10)->Arg(20)->Arg(40);
BENCHMARK(BM_SolveRightInverse<double>)->Arg(4)->Arg(10)->Arg(20)->Arg(40);
BENCHMARK(BM_OracleInverse)->DenseRange(2, 8, 2);
BENCHMARK(BM_ApplySeries)->Arg(8)->Arg(32)->Arg(128);
BENCHMARK(BM_ProjDistance)->Arg(6)->Arg(12);

BENCHMARK_MAIN();
