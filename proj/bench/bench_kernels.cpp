#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "nudgelab/kernels.hpp"
#include "nudgelab/model.hpp"
#include "nudgelab/random_fields.hpp"

using namespace nudge;

namespace {

struct Data {
    std::vector<cplx> x, y, z, obs;
    std::vector<double> k2, mask, w, re;

    explicit Data(std::size_t n) : x(n), y(n), z(n), obs(n), k2(n), mask(n), w(n), re(n) {
        std::mt19937_64 rng(1);
        std::normal_distribution<double> g(0.0, 1.0);
        for (std::size_t i = 0; i < n; ++i) {
            x[i] = {g(rng), g(rng)};
            y[i] = {g(rng), g(rng)};
            z[i] = {g(rng), g(rng)};
            obs[i] = {g(rng), g(rng)};
            k2[i] = 1.0 + static_cast<double>(i % 4096);
            mask[i] = i % 7 == 0 ? 1.0 : 0.0;
            w[i] = 2.0;
            re[i] = g(rng);
        }
    }
};

const kernels::Table& table(int which) { return which == 0 ? kernels::serial() : kernels::openmp(); }

void set_labels(benchmark::State& state, std::size_t n) {
    state.SetLabel(table(static_cast<int>(state.range(1))).name);
    state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * n));
}

void BM_axpby(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    Data d(n);
    const auto& t = table(static_cast<int>(state.range(1)));
    for (auto _ : state) {
        t.axpby(d.y.data(), d.x.data(), 0.5, 0.25, n);
        benchmark::DoNotOptimize(d.y.data());
    }
    set_labels(state, n);
}

void BM_imex_update(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    Data d(n);
    const auto& t = table(static_cast<int>(state.range(1)));
    for (auto _ : state) {
        t.imex_update(d.y.data(), d.x.data(), d.z.data(), d.k2.data(), d.mask.data(), d.obs.data(), 1e-2, 100.0, 8e-4,
                      1.5, -0.5, n);
        benchmark::DoNotOptimize(d.y.data());
    }
    set_labels(state, n);
}

void BM_norm2(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    Data d(n);
    const auto& t = table(static_cast<int>(state.range(1)));
    for (auto _ : state) benchmark::DoNotOptimize(t.norm2(d.x.data(), d.w.data(), d.k2.data(), n));
    set_labels(state, n);
}

void BM_sum_abs_pow(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    Data d(n);
    const auto& t = table(static_cast<int>(state.range(1)));
    for (auto _ : state) benchmark::DoNotOptimize(t.sum_abs_pow(d.re.data(), 4.0, n));
    set_labels(state, n);
}

void BM_reference_step(benchmark::State& state) {
    const double L = 0.3535533905932738;
    const auto g = Grid::torus({static_cast<int>(state.range(0)), static_cast<int>(state.range(0))}, {L, L});
    RandomSpectrum spec;
    spec.kmax = static_cast<double>(state.range(0)) / 8.0;
    spec.energy = 1e-5;
    FlowState s = FlowState::zero(g);
    s.u = random_velocity(g, 1, spec);
    s.theta = random_scalar(g, 2, spec);
    Params p;
    Integrator in(g, p);
    for (auto _ : state) in.step_reference(s, 8e-4);
    state.SetLabel(kernels::active().name);
}

// The second argument selects the table: 0 serial, 1 OpenMP.
#define KERNEL_ARGS ->ArgsProduct({{1 << 14, 1 << 17, 1 << 20}, {0, 1}})
BENCHMARK(BM_axpby) KERNEL_ARGS;
BENCHMARK(BM_imex_update) KERNEL_ARGS;
BENCHMARK(BM_norm2) KERNEL_ARGS;
BENCHMARK(BM_sum_abs_pow) KERNEL_ARGS;
BENCHMARK(BM_reference_step)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);

}  // namespace

int main(int argc, char** argv) {
    kernels::configure_threads();
    benchmark::Initialize(&argc, argv);
    benchmark::RunSpecifiedBenchmarks();
    benchmark::Shutdown();
    return 0;
}
