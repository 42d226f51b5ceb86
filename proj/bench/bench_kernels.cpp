// Serial reference kernels against their OpenMP counterparts.
#include <benchmark/benchmark.h>

#include <random>

#include "margconv/geometry.hpp"
#include "margconv/kernels.hpp"
#include "margconv/radon.hpp"

using namespace margconv;
namespace k = margconv::kernels;

namespace {

ScalarField disk_field(int n) { return to_field(rasterize(Disk{{0, 0}, 0.5}, GridSpec::centered(n, 2.0))); }

BinaryGrid noisy_disk(int n) {
    auto g = rasterize(Disk{{0, 0}, 0.5}, GridSpec::centered(n, 2.0));
    std::mt19937_64 rng(7);
    for (auto& c : g.cells)
        if (rng() % 50 == 0) c ^= 1;
    return g;
}

template <auto Fn>
void sinogram(benchmark::State& state) {
    const auto f = disk_field(static_cast<int>(state.range(0)));
    const auto thetas = angle_lattice(64);
    for (auto _ : state) benchmark::DoNotOptimize(Fn(f, thetas, rotation_extent(f.spec.n)));
}

template <auto Fn>
void crossings(benchmark::State& state) {
    const auto f = disk_field(static_cast<int>(state.range(0)));
    const auto thetas = angle_lattice(64);
    for (auto _ : state) benchmark::DoNotOptimize(Fn(f, thetas, rotation_extent(f.spec.n), 0.5, k::Interp::bilinear));
}

template <auto Fn>
void pair_energy(benchmark::State& state) {
    const auto f = disk_field(static_cast<int>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(Fn(f));
}

template <auto Fn>
void density(benchmark::State& state) {
    const auto g = noisy_disk(static_cast<int>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(Fn(g, 2, 0.75));
}

}  // namespace

BENCHMARK(sinogram<k::serial::footprint_sinogram>)->Arg(256)->Arg(512)->Unit(benchmark::kMillisecond);
BENCHMARK(sinogram<k::parallel::footprint_sinogram>)->Arg(256)->Arg(512)->Unit(benchmark::kMillisecond);
BENCHMARK(crossings<k::serial::crossing_counts>)->Arg(256)->Arg(512)->Unit(benchmark::kMillisecond);
BENCHMARK(crossings<k::parallel::crossing_counts>)->Arg(256)->Arg(512)->Unit(benchmark::kMillisecond);
BENCHMARK(pair_energy<k::serial::pair_energy_all>)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);
BENCHMARK(pair_energy<k::parallel::pair_energy_all>)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);
BENCHMARK(density<k::serial::density_filter>)->Arg(512)->Arg(1024)->Unit(benchmark::kMillisecond);
BENCHMARK(density<k::parallel::density_filter>)->Arg(512)->Arg(1024)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
