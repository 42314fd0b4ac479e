#include <benchmark/benchmark.h>

#include <cmath>
#include <numbers>

#include "subrig/catalog.hpp"
#include "subrig/flows.hpp"
#include "subrig/shape.hpp"

using namespace subrig;

namespace {

Hypersurface surface(const std::string& phi, const Coordinates& c)
{
    return {parse(phi, c), 1, 1e-8};
}

} // namespace

static void BM_Parse(benchmark::State& state)
{
    const Coordinates c{"x", "y", "t"};
    for (auto _ : state) {
        benchmark::DoNotOptimize(parse("x*y/2 + sin(x)^3 - t*exp(-(x^2 + y^2)/4)", c));
    }
}
BENCHMARK(BM_Parse);

static void BM_Jet2(benchmark::State& state)
{
    const Coordinates c{"x", "y", "t"};
    const Expression e = parse("x*y/2 + sin(x)^3 - t*exp(-(x^2 + y^2)/4)", c);
    const Eigen::Vector3d p(0.3, -0.7, 1.1);
    for (auto _ : state) {
        benchmark::DoNotOptimize(eval_jet2(e, p));
    }
}
BENCHMARK(BM_Jet2);

static void BM_SecondFundamentalForm(benchmark::State& state)
{
    const VRStructure h = heisenberg(static_cast<int>(state.range(0)));
    std::string phi = "t";
    for (int i = 1; i <= state.range(0); ++i) {
        const std::string k = h.dim() == 3 ? "" : std::to_string(i);
        phi += " + x" + k + "^2 - y" + k + "^3/3";
    }
    const Hypersurface surf = surface(phi, h.coords);
    const Point p = project_to_surface(surf, Eigen::VectorXd::Constant(static_cast<Eigen::Index>(h.dim()), 0.4));
    for (auto _ : state) {
        benchmark::DoNotOptimize(second_fundamental_form(h, surf, p));
    }
}
BENCHMARK(BM_SecondFundamentalForm)->Arg(1)->Arg(2)->Arg(3);

static void BM_Ruling(benchmark::State& state)
{
    const VRStructure h = heisenberg(1);
    const Hypersurface surf = surface("x*y/2 - t", h.coords);
    for (auto _ : state) {
        benchmark::DoNotOptimize(integrate_ruling(h, surf, Eigen::Vector3d(1, 1, 0.5), 1.0, 1e-3));
    }
}
BENCHMARK(BM_Ruling)->Unit(benchmark::kMillisecond);

static void BM_Perimeter(benchmark::State& state)
{
    const VRStructure h = heisenberg(1);
    const Coordinates rt{"r", "th"};
    const Patch disk{rt, {parse("r*cos(th)", rt), parse("r*sin(th)", rt), parse("0", rt)},
                     {{0, 1}, {0, 2 * std::numbers::pi}}};
    const Hypersurface surf = surface("t", h.coords);
    for (auto _ : state) {
        benchmark::DoNotOptimize(perimeter(h, surf, disk, static_cast<int>(state.range(0))));
    }
}
BENCHMARK(BM_Perimeter)->Arg(8)->Arg(16)->Arg(32)->Unit(benchmark::kMicrosecond);

static void BM_ConeVolume(benchmark::State& state)
{
    const VRStructure h = heisenberg(1);
    const Coordinates uv{"u", "v"};
    const Patch plane{uv, {parse("u", uv), parse("v", uv), parse("1", uv)}, {{0.2, 0.8}, {0.2, 0.8}}};
    const Hypersurface surf = surface("t - 1", h.coords);
    for (auto _ : state) {
        benchmark::DoNotOptimize(cone_volume(h, *h.flow, surf, plane, 16));
    }
}
BENCHMARK(BM_ConeVolume)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
