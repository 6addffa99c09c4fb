#include "lipsquash/compose.hpp"
#include "lipsquash/content.hpp"
#include "lipsquash/planar.hpp"
#include "lipsquash/realline.hpp"

#include <benchmark/benchmark.h>

#include <random>

using namespace lipsquash;

namespace {

DiscreteMeasure uniform_line(int n)
{
    std::vector<double> x, w(n, 1.0 / n);
    for (int i = 0; i < n; ++i) x.push_back(-1.0 + 2.0 * i / (n - 1));
    return DiscreteMeasure::on_line(x, w);
}

}  // namespace

static void BM_BuildH(benchmark::State& state)
{
    auto mu = uniform_line(static_cast<int>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(build_h(mu, 0.1, 0.05, 0.01, 1.0));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_BuildH)->Arg(100)->Arg(1000)->Arg(10000)->Unit(benchmark::kMillisecond);

static void BM_ProfileG(benchmark::State& state)
{
    SquashProfile p(0.01, 10, 0.003);
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(-5.0, 5.0);
    std::vector<double> ts(4096);
    for (auto& t : ts) t = u(rng);
    for (auto _ : state)
        for (double t : ts) benchmark::DoNotOptimize(p.g(t));
    state.SetItemsProcessed(state.iterations() * static_cast<long>(ts.size()));
}
BENCHMARK(BM_ProfileG);

static void BM_ContentFourCorner(benchmark::State& state)
{
    auto fix = four_corner(static_cast<int>(state.range(0)));
    auto leaves = cell_leaves(fix.points, fix.cell_side);
    for (auto _ : state) benchmark::DoNotOptimize(hausdorff_content_boxes(leaves, 1.0));
    state.SetItemsProcessed(state.iterations() * static_cast<long>(leaves.size()));
}
BENCHMARK(BM_ContentFourCorner)->DenseRange(3, 6)->Unit(benchmark::kMillisecond);

static void BM_PlanarPairCheck(benchmark::State& state)
{
    auto fix = four_corner(static_cast<int>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(build_planar_squash(fix, 0.125));
    state.SetComplexityN(static_cast<long>(fix.points.size()));
}
BENCHMARK(BM_PlanarPairCheck)->DenseRange(3, 5)->Unit(benchmark::kMillisecond)->Complexity();

static void BM_ComposeProduct(benchmark::State& state)
{
    auto fix = four_corner(4);
    for (auto _ : state) benchmark::DoNotOptimize(compose_fixture(fix, ComposeMode::Product));
}
BENCHMARK(BM_ComposeProduct)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
