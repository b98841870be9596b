#include <random>

#include <benchmark/benchmark.h>

#include "sdlab/kernels.hpp"
#include "sdlab/reference.hpp"

using namespace sdlab;

namespace {

GridFunction noise(const GridSpec& g, unsigned seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> N(0.0, 1.0);
    GridFunction f(g);
    for (auto& v : f.values()) v = N(rng);
    return f;
}

GridFunction local_kernel(const GridSpec& g, std::int64_t radius) {
    GridFunction k(g);
    for (std::int64_t i = -radius; i <= radius; ++i) k.at(k.cell_index(g.origin() + i)) = 1.0 / (2 * radius + 1);
    return k;
}

void BM_LatticeMaximal(benchmark::State& st) {
    GridSpec g(1, st.range(0), 4.0);
    GridFunction f = noise(g, 1);
    PrefixSums ps(f, 1.0);
    auto lats = DyadicLattice::shifted_family(1);
    std::vector<double> out;
    for (auto _ : st) {
        kernels::lattice_maximal(ps, lats, coarsest_generation(g), finest_generation(g), out);
        benchmark::DoNotOptimize(out.data());
    }
}

void BM_LatticeMaximalReference(benchmark::State& st) {
    GridSpec g(1, st.range(0), 4.0);
    GridFunction f = noise(g, 1);
    auto lats = DyadicLattice::shifted_family(1);
    for (auto _ : st) {
        auto out = reference::lattice_maximal(f, 1.0, lats, coarsest_generation(g), finest_generation(g));
        benchmark::DoNotOptimize(out.data());
    }
}

void BM_ConvolveDirect(benchmark::State& st) {
    GridSpec g(1, st.range(0), 4.0);
    GridFunction f = noise(g, 2).restricted(CellBox{1, {g.n / 4, 0}, {3 * g.n / 4, 1}});
    GridFunction k = local_kernel(g, 16);
    for (auto _ : st) {
        GridFunction out(g);
        kernels::convolve_direct(f, k, out);
        benchmark::DoNotOptimize(out.values().data());
    }
}

void BM_ConvolveDirectReference(benchmark::State& st) {
    GridSpec g(1, st.range(0), 4.0);
    GridFunction f = noise(g, 2).restricted(CellBox{1, {g.n / 4, 0}, {3 * g.n / 4, 1}});
    GridFunction k = local_kernel(g, 16);
    for (auto _ : st) {
        auto out = reference::convolve_direct(f, k);
        benchmark::DoNotOptimize(out.values().data());
    }
}

std::vector<GridFunction> sequence(std::int64_t n, int len) {
    GridSpec g(1, n, 4.0);
    std::vector<GridFunction> seq;
    for (int i = 0; i < len; ++i) seq.push_back(noise(g, 10 + static_cast<unsigned>(i)));
    return seq;
}

void BM_PointwiseVariation(benchmark::State& st) {
    auto seq = sequence(st.range(0), 12);
    for (auto _ : st) benchmark::DoNotOptimize(kernels::pointwise_variation(seq, 2.0).data());
}

void BM_PointwiseVariationReference(benchmark::State& st) {
    auto seq = sequence(st.range(0), 12);
    for (auto _ : st) benchmark::DoNotOptimize(reference::pointwise_variation(seq, 2.0).data());
}

}  // namespace

BENCHMARK(BM_LatticeMaximal)->Arg(1024)->Arg(4096);
BENCHMARK(BM_LatticeMaximalReference)->Arg(1024);
BENCHMARK(BM_ConvolveDirect)->Arg(4096)->Arg(16384);
BENCHMARK(BM_ConvolveDirectReference)->Arg(4096);
BENCHMARK(BM_PointwiseVariation)->Arg(4096);
BENCHMARK(BM_PointwiseVariationReference)->Arg(4096);

BENCHMARK_MAIN();
