#include "clearsim/risk.hpp"

#include "clearsim/error.hpp"

#include <algorithm>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace clearsim {

ScenarioEngine::ScenarioEngine(const GalacticNetwork& network, const ShockParams& shock, double bond_recovery,
                               ClearingOptions clearing)
    : network_(&network),
      shock_(shock),
      sampler_(shock),
      bond_recovery_(bond_recovery),
      clearing_(clearing),
      topology_(network)
{
    if (shock.n_banks != network.bank_count())
        fail(ErrorKind::Input, "shock n_banks does not match the network bank count");
}

void ScenarioEngine::prepare(std::uint64_t seed, std::int64_t scenario_index, PreparedScenario& out,
                             Workspace& ws) const
{
    ws.losses.resize(static_cast<std::size_t>(network_->bank_count()));
    sampler_.sample(seed, scenario_index, ws.losses);
    prepare_from_losses(scenario_index, ws.losses, out, ws);
}

void ScenarioEngine::prepare_from_losses(std::int64_t scenario_index, std::span<const double> losses,
                                         PreparedScenario& out, Workspace& ws) const
{
    ws.assets.resize(static_cast<std::size_t>(network_->bank_count()));
    scenario_assets(*network_, shock_, bond_recovery_, losses, ws.assets);
    out.scenario_index = scenario_index;
    const std::span<const Money> all(ws.assets);
    for (Tier t : kTiers)
        out.tiers[index_of(t)].assign(all.subspan(static_cast<std::size_t>(network_->first_bank(t)),
                                                  static_cast<std::size_t>(network_->count(t))));
}

ScenarioOutcome ScenarioEngine::evaluate(const PreparedScenario& scenario, const BailoutAllocation& bailout) const
{
    const PerTier<const SortedAssets*> blocks{&scenario.tiers[0], &scenario.tiers[1], &scenario.tiers[2]};
    const auto sol = solve_tiered(topology_, blocks, bailout.per_tier(), clearing_);

    ScenarioOutcome o;
    o.scenario_index = scenario.scenario_index;
    o.iterations = sol.iterations;
    o.defaults = sol.defaults;
    Money external = 0;
    for (Tier t : kTiers) {
        const auto d = index_of(t);
        external += static_cast<double>(topology_.counts[d]) * network_->profile(t).external;
        o.deposits_at_defaulted += static_cast<double>(sol.defaults[d]) * topology_.deposits[d];
    }
    const auto c = index_of(Tier::Central);
    o.external_shortfall = std::max(0.0, external - sol.external_paid);
    o.central_shortfall =
        std::max(0.0, static_cast<double>(topology_.counts[c]) * topology_.obligation[c] - sol.payment_sum[c]);
    return o;
}

std::vector<ScenarioOutcome> simulate_outcomes(const GalacticNetwork& network, const ShockParams& shock,
                                               const BailoutAllocation& bailout, double bond_recovery,
                                               std::int64_t n_scenarios, std::uint64_t seed,
                                               const RunOptions& options)
{
    if (n_scenarios < 1)
        fail(ErrorKind::Input, "run_monte_carlo: need at least one scenario");
    const ScenarioEngine engine(network, shock, bond_recovery, options.clearing);
    std::vector<ScenarioOutcome> out(static_cast<std::size_t>(n_scenarios));

#ifdef _OPENMP
    const int threads = options.threads > 0 ? options.threads : omp_get_max_threads();
#pragma omp parallel num_threads(threads)
#endif
    {
        ScenarioEngine::Workspace ws;
        PreparedScenario prepared;
#ifdef _OPENMP
#pragma omp for schedule(dynamic, 8)
#endif
        for (std::int64_t i = 0; i < n_scenarios; ++i) {
            engine.prepare(seed, i, prepared, ws);
            out[static_cast<std::size_t>(i)] = engine.evaluate(prepared, bailout);
        }
    }
    return out;
}

std::vector<LossSample> run_monte_carlo(const GalacticNetwork& network, const ShockParams& shock,
                                        const BailoutAllocation& bailout, const LossConfig& config,
                                        std::int64_t n_scenarios, std::uint64_t seed, const RunOptions& options)
{
    validate(config);
    const auto outcomes = simulate_outcomes(network, shock, bailout, config.bond_recovery, n_scenarios, seed, options);
    std::vector<LossSample> samples;
    samples.reserve(outcomes.size());
    for (const auto& o : outcomes)
        samples.push_back(to_loss_sample(o, config));
    return samples;
}

std::vector<LossSample> run_monte_carlo_serial(const GalacticNetwork& network, const ShockParams& shock,
                                               const BailoutAllocation& bailout, const LossConfig& config,
                                               std::int64_t n_scenarios, std::uint64_t seed,
                                               const ClearingOptions& clearing)
{
    validate(config);
    if (n_scenarios < 1)
        fail(ErrorKind::Input, "run_monte_carlo: need at least one scenario");

    // Per-bank route: draw, build assets, clear with the expanded outcome.
    const LossSampler sampler(shock);
    if (shock.n_banks != network.bank_count())
        fail(ErrorKind::Input, "shock n_banks does not match the network bank count");
    const auto n = static_cast<std::size_t>(network.bank_count());
    std::vector<double> losses(n);
    std::vector<Money> assets(n);
    std::vector<LossSample> samples;
    samples.reserve(static_cast<std::size_t>(n_scenarios));
    for (std::int64_t i = 0; i < n_scenarios; ++i) {
        sampler.sample(seed, i, losses);
        scenario_assets(network, shock, config.bond_recovery, losses, assets);
        std::size_t b = 0;
        for (Tier t : kTiers)
            for (std::int64_t k = 0; k < network.count(t); ++k, ++b)
                assets[b] += bailout.per_tier()[index_of(t)];
        const auto outcome = clearing_compressed(network, assets, clearing);
        samples.push_back(real_economy_loss(outcome, network, config, i));
    }
    return samples;
}

}  // namespace clearsim
