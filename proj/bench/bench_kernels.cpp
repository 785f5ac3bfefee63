// Serial reference against the OpenMP kernels, and dense against tier-compressed clearing.

#include "clearsim/calibration.hpp"
#include "clearsim/clearing.hpp"
#include "clearsim/risk.hpp"

#include <benchmark/benchmark.h>

#include <random>
#include <vector>

using namespace clearsim;

namespace {

constexpr std::uint64_t kSeed = 1977;

struct Calibrated {
    GalacticNetwork network = build_network(CalibrationParams{});
    ShockParams shock;
    LossConfig config;

    Calibrated() { shock.n_banks = network.bank_count(); }
};

const Calibrated& calibrated()
{
    static const Calibrated c;
    return c;
}

void BM_MonteCarloSerial(benchmark::State& state)
{
    const auto& c = calibrated();
    for (auto _ : state)
        benchmark::DoNotOptimize(run_monte_carlo_serial(c.network, c.shock, {}, c.config, state.range(0), kSeed));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_MonteCarloParallel(benchmark::State& state)
{
    const auto& c = calibrated();
    RunOptions options;
    options.threads = static_cast<int>(state.range(1));
    for (auto _ : state)
        benchmark::DoNotOptimize(run_monte_carlo(c.network, c.shock, {}, c.config, state.range(0), kSeed, options));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

struct SmallNetwork {
    GalacticNetwork network;
    std::vector<Money> assets;
};

SmallNetwork small_network(std::int64_t big_banks)
{
    NetworkSpec s;
    s.counts = {1, big_banks / 10 + 1, big_banks};
    s.profiles = {LiabilityProfile{0, 0, 0, 50}, LiabilityProfile{3, 1, 1, 0}, LiabilityProfile{0.1, 0.05, 0.02, 0}};
    SmallNetwork out{GalacticNetwork(s), {}};
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(0.0, 1.2);
    for (std::int64_t i = 0; i < out.network.bank_count(); ++i)
        out.assets.push_back(u(rng) * out.network.obligation(out.network.tier_of(i)));
    return out;
}

void BM_ClearingDense(benchmark::State& state)
{
    const auto net = small_network(state.range(0));
    const DenseNetwork dense = expand_to_dense(net.network, net.assets);
    for (auto _ : state)
        benchmark::DoNotOptimize(clearing_dense(dense));
}

void BM_ClearingTiered(benchmark::State& state)
{
    const auto net = small_network(state.range(0));
    for (auto _ : state)
        benchmark::DoNotOptimize(clearing_compressed(net.network, net.assets));
}

}  // namespace

BENCHMARK(BM_MonteCarloSerial)->Arg(64)->UseRealTime()->Unit(benchmark::kMillisecond);
BENCHMARK(BM_MonteCarloParallel)->Args({64, 1})->Args({64, 2})->Args({64, 4})->Args({64, 8})->UseRealTime()->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ClearingDense)->Arg(100)->Arg(400)->Arg(1600)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_ClearingTiered)->Arg(100)->Arg(400)->Arg(1600)->Arg(17325)->Unit(benchmark::kMicrosecond);

BENCHMARK_MAIN();
