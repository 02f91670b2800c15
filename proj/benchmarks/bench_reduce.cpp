#include "jdr/relations.hpp"
#include "jdr/reduce.hpp"

#include <benchmark/benchmark.h>

using namespace jdr;

static void BM_Reduc6Sweep(benchmark::State& state) {
    ReduceContext ctx = ReduceContext::cyclic2(AnnihilatorSpec::cyclic_symbolic(), Mode::Quotient);
    for (auto _ : state) {
        for (int mask = 0; mask < 4096; mask += 7) {
            std::array<int, 6> k;
            int m = mask;
            for (int i = 0; i < 6; ++i, m /= 4) k[i] = m % 4 - 1;
            std::array<Leg, 6> t = {g(k[0], 1), g(k[1], 2), g(k[2], 2), g(k[3], 1), g(k[4], 2), g(k[5], 2)};
            benchmark::DoNotOptimize(reduc6(t, ctx));
        }
    }
}
BENCHMARK(BM_Reduc6Sweep);

static void BM_LambdaGamma2(benchmark::State& state) {
    ReduceContext ctx = ReduceContext::cyclic2(AnnihilatorSpec::cyclic(Rational(1)), Mode::Quotient, true);
    for (auto _ : state) {
        benchmark::DoNotOptimize(lambda_relation("Gamma2", ctx));
    }
}
BENCHMARK(BM_LambdaGamma2);

static void BM_Cyclic3Relations(benchmark::State& state) {
    ReduceContext ctx = ReduceContext::cyclic3(AnnihilatorSpec::cyclic_symbolic(), Mode::Full);
    for (auto _ : state) {
        benchmark::DoNotOptimize(cyclic3_relations(ctx));
    }
}
BENCHMARK(BM_Cyclic3Relations);

BENCHMARK_MAIN();
