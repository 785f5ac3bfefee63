#include "clearsim/clearing.hpp"

#include "clearsim/error.hpp"

#include <algorithm>
#include <cmath>

namespace clearsim {

void SortedAssets::assign(std::span<const Money> values)
{
    values_.assign(values.begin(), values.end());
    std::sort(values_.begin(), values_.end());
    block_prefix_.assign(values_.size() / kBlock + 1, 0.0);
    Money acc = 0;
    for (std::size_t i = 0; i < values_.size(); ++i) {
        if (i % kBlock == 0)
            block_prefix_[i / kBlock] = acc;
        acc += values_[i];
    }
    if (values_.size() % kBlock == 0)
        block_prefix_[values_.size() / kBlock] = acc;
}

Money SortedAssets::prefix_sum(std::size_t k) const noexcept
{
    const std::size_t b = k / kBlock;
    Money acc = block_prefix_[b];
    for (std::size_t i = b * kBlock; i < k; ++i)
        acc += values_[i];
    return acc;
}

TierTopology::TierTopology(const GalacticNetwork& network)
{
    for (Tier t : kTiers) {
        const auto d = index_of(t);
        counts[d] = network.count(t);
        obligation[d] = network.obligation(t);
        deposits[d] = network.sheet(t).deposits;
        max_obligation = std::max(max_obligation, obligation[d]);
        external_share[d] = obligation[d] > 0 ? network.profile(t).external / obligation[d] : 0.0;
        self_coupling[d] = obligation[d] > 0 && counts[d] > 1
                               ? network.liability(t, t) / (obligation[d] * static_cast<double>(counts[d] - 1))
                               : 0.0;
    }
    for (Tier c : kTiers)
        for (Tier d : kTiers) {
            const auto ci = index_of(c);
            cross[ci][index_of(d)] = c != d && obligation[ci] > 0
                                         ? network.liability(c, d) /
                                               (obligation[ci] * static_cast<double>(counts[index_of(d)]))
                                         : 0.0;
        }
}

Money TierTopology::payment(Tier t, Money assets, Money w) const noexcept
{
    const auto d = index_of(t);
    return std::min(obligation[d], (assets + w) / (1.0 + self_coupling[d]));
}

namespace {

PerTier<Money> shifts_for(const TierTopology& topo, const PerTier<Money>& sums, const PerTier<Money>& shift)
{
    PerTier<Money> w{};
    for (std::size_t d = 0; d < kTierCount; ++d) {
        Money acc = shift[d];
        for (std::size_t c = 0; c < kTierCount; ++c)
            if (c != d)
                acc += sums[c] * topo.cross[c][d];
        w[d] = acc + topo.self_coupling[d] * sums[d];
    }
    return w;
}

Money tier_sum(const TierTopology& topo, Tier t, const SortedAssets& sorted, Money w)
{
    const auto d = index_of(t);
    const Money pbar = topo.obligation[d];
    if (pbar == 0)
        return 0.0;
    const auto v = sorted.values();
    const auto uncapped = static_cast<std::size_t>(
        std::partition_point(v.begin(), v.end(), [&](Money a) { return topo.payment(t, a, w) < pbar; }) -
        v.begin());
    const Money capped = static_cast<double>(v.size() - uncapped) * pbar;
    return capped + (sorted.prefix_sum(uncapped) + static_cast<double>(uncapped) * w) / (1.0 + topo.self_coupling[d]);
}

}  // namespace

TierSolution solve_tiered(const TierTopology& topo, const PerTier<const SortedAssets*>& assets,
                          const PerTier<Money>& shift, const ClearingOptions& options, ClearingStart start)
{
    if (!(options.tolerance > 0))
        fail(ErrorKind::Domain, "clearing tolerance must be positive");
    for (Tier t : kTiers)
        if (assets[index_of(t)] == nullptr ||
            assets[index_of(t)]->size() != static_cast<std::size_t>(topo.counts[index_of(t)]))
            fail(ErrorKind::Input, "solve_tiered: asset block does not match tier size");

    PerTier<Money> sums{};
    if (start == ClearingStart::Greatest)
        for (std::size_t d = 0; d < kTierCount; ++d)
            sums[d] = static_cast<double>(topo.counts[d]) * topo.obligation[d];

    TierSolution sol;
    auto w = shifts_for(topo, sums, shift);
    const Money stop = options.tolerance * topo.max_obligation;
    for (;;) {
        if (sol.iterations >= options.max_iterations)
            fail(ErrorKind::Convergence, "tiered clearing did not converge within the iteration cap");
        for (Tier t : kTiers)
            sums[index_of(t)] = tier_sum(topo, t, *assets[index_of(t)], w[index_of(t)]);
        const auto next = shifts_for(topo, sums, shift);
        Money residual = 0;
        for (std::size_t d = 0; d < kTierCount; ++d)
            residual = std::max(residual, std::fabs(next[d] - w[d]) / (1.0 + topo.self_coupling[d]));
        w = next;
        ++sol.iterations;
        if (residual <= stop)
            break;
    }

    sol.w = w;
    for (Tier t : kTiers) {
        const auto d = index_of(t);
        const auto v = assets[d]->values();
        sol.payment_sum[d] = tier_sum(topo, t, *assets[d], w[d]);
        const Money pbar = topo.obligation[d];
        const double threshold = options.default_threshold;
        sol.defaults[d] = std::partition_point(v.begin(), v.end(),
                                               [&](Money a) { return pbar - topo.payment(t, a, w[d]) > threshold; }) -
                          v.begin();
        sol.external_paid += sol.payment_sum[d] * topo.external_share[d];
    }
    return sol;
}

ClearingOutcome clearing_compressed(const GalacticNetwork& network, std::span<const Money> scenario_assets,
                                    const ClearingOptions& options, ClearingStart start)
{
    if (scenario_assets.size() != static_cast<std::size_t>(network.bank_count()))
        fail(ErrorKind::Input, "clearing_compressed: asset vector does not match bank count");
    for (Money a : scenario_assets)
        if (!(a >= 0))
            fail(ErrorKind::Input, "clearing_compressed: assets must be non-negative");

    const TierTopology topo(network);
    PerTier<SortedAssets> sorted;
    PerTier<const SortedAssets*> blocks{};
    for (Tier t : kTiers) {
        const auto d = index_of(t);
        sorted[d].assign(scenario_assets.subspan(static_cast<std::size_t>(network.first_bank(t)),
                                                 static_cast<std::size_t>(network.count(t))));
        blocks[d] = &sorted[d];
    }
    const auto sol = solve_tiered(topo, blocks, PerTier<Money>{}, options, start);

    ClearingOutcome out;
    out.iterations = sol.iterations;
    const auto n = scenario_assets.size();
    out.payments.resize(n);
    out.shortfall.resize(n);
    out.defaulted.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const Tier t = network.tier_of(static_cast<std::int64_t>(i));
        const auto d = index_of(t);
        const Money p = topo.payment(t, scenario_assets[i], sol.w[d]);
        out.payments[i] = topo.obligation[d] == 0 ? 0.0 : p;
        out.shortfall[i] = topo.obligation[d] - out.payments[i];
        out.defaulted[i] = out.shortfall[i] > options.default_threshold ? 1 : 0;
        out.external_paid += out.payments[i] * topo.external_share[d];
    }
    return out;
}

}  // namespace clearsim
