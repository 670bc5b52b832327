#include <benchmark/benchmark.h>

#include "paragroup/composite.hpp"
#include "paragroup/connection.hpp"
#include "paragroup/fusion.hpp"
#include "paragroup/state_sum.hpp"
#include "paragroup/string_algebra.hpp"

using namespace paragroup;

namespace {

void BM_perron_frobenius(benchmark::State& state) {
    auto g = build_dynkin_connection(static_cast<int>(state.range(0))).bottom();
    for (auto _ : state) benchmark::DoNotOptimize(perron_frobenius(g));
}
BENCHMARK(BM_perron_frobenius)->Arg(4)->Arg(8)->Arg(16);

void BM_build_y(benchmark::State& state) {
    auto w = *builtin_connection(state.range(0) == 0 ? "A3" : "S3");
    for (auto _ : state) benchmark::DoNotOptimize(build_y(w));
}
BENCHMARK(BM_build_y)->Arg(0)->Arg(1);

void BM_check_gybe(benchmark::State& state) {
    auto y = build_y(*builtin_connection(state.range(0) == 0 ? "A3" : "S3"));
    for (auto _ : state) benchmark::DoNotOptimize(check_gybe(y, 1e-9));
}
BENCHMARK(BM_check_gybe)->Arg(0)->Arg(1);

void BM_transport_w0(benchmark::State& state) {
    auto y = build_y(*builtin_connection("S3"));
    int s = static_cast<int>(state.range(0));
    std::vector<int> from(s), to(s);
    for (int i = 0; i < s; ++i) {
        from[i] = i;
        to[i] = s - 1 - i;
    }
    PathModel pm(y, 8192);
    pm.basis(s);
    for (auto _ : state) benchmark::DoNotOptimize(pm.transport(from, to));
}
BENCHMARK(BM_transport_w0)->Arg(3)->Arg(4);

void BM_commuting_square(benchmark::State& state) {
    StringModel sm(build_y(*builtin_connection("S3")), 8192);
    LatticePoint n{static_cast<int>(state.range(0)), 0};
    for (auto _ : state) benchmark::DoNotOptimize(sm.check_commuting_square(n, 0, 1, 1e-9));
}
BENCHMARK(BM_commuting_square)->Arg(0)->Arg(1)->Arg(2);

void BM_fusion_identity(benchmark::State& state) {
    auto f = su2_even_ring(static_cast<int>(state.range(0)));
    for (auto _ : state)
        benchmark::DoNotOptimize(fusion_identity_check(f, 4, 0, 1e-9));
}
BENCHMARK(BM_fusion_identity)->Arg(4)->Arg(8);

}  // namespace

BENCHMARK_MAIN();
