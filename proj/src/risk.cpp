#include "clearsim/risk.hpp"

#include "clearsim/error.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace clearsim {

void validate(const LossConfig& c)
{
    if (!(c.threshold_fraction > 0 && c.threshold_fraction <= 1))
        fail(ErrorKind::Config, "loss: threshold_fraction must lie in (0, 1]");
    if (!(c.confidence > 0 && c.confidence < 1))
        fail(ErrorKind::Config, "loss: confidence must lie in (0, 1)");
    if (!(c.bond_recovery >= 0 && c.bond_recovery <= 1))
        fail(ErrorKind::Config, "loss: bond_recovery must lie in [0, 1]");
    if (!(c.ggp > 0))
        fail(ErrorKind::Config, "loss: ggp must be positive");
}

Money BailoutAllocation::total(const GalacticNetwork& network) const noexcept
{
    return static_cast<double>(network.count(Tier::Massive)) * per_massive +
           static_cast<double>(network.count(Tier::Big)) * per_big;
}

LossSample to_loss_sample(const ScenarioOutcome& o, const LossConfig& config)
{
    LossSample s;
    s.scenario_index = o.scenario_index;
    s.central_shortfall = o.central_shortfall;
    s.defaults = o.defaults;
    s.n_defaults = o.defaults[0] + o.defaults[1] + o.defaults[2];
    if (config.deposit_insurance) {
        s.real_economy_loss = o.external_shortfall;
        s.insurance_payout = o.deposits_at_defaulted;
    } else {
        s.real_economy_loss = o.external_shortfall + o.deposits_at_defaulted;
    }
    return s;
}

namespace {

Money external_obligations(const GalacticNetwork& network)
{
    Money total = 0;
    for (Tier t : kTiers)
        total += static_cast<double>(network.count(t)) * network.profile(t).external;
    return total;
}

}  // namespace

LossSample real_economy_loss(const ClearingOutcome& outcome, const GalacticNetwork& network,
                             const LossConfig& config, std::int64_t scenario_index)
{
    const auto n = static_cast<std::size_t>(network.bank_count());
    if (outcome.payments.size() != n || outcome.defaulted.size() != n || outcome.shortfall.size() != n)
        fail(ErrorKind::Input, "real_economy_loss: outcome does not match network size");

    ScenarioOutcome o;
    o.scenario_index = scenario_index;
    o.iterations = outcome.iterations;
    o.external_shortfall = std::max(0.0, external_obligations(network) - outcome.external_paid);
    for (std::size_t i = 0; i < n; ++i) {
        const Tier t = network.tier_of(static_cast<std::int64_t>(i));
        if (t == Tier::Central)
            o.central_shortfall += outcome.shortfall[i];
        if (outcome.defaulted[i])
            ++o.defaults[index_of(t)];
    }
    for (Tier t : kTiers)
        o.deposits_at_defaulted += static_cast<double>(o.defaults[index_of(t)]) * network.sheet(t).deposits;
    return to_loss_sample(o, config);
}

Money green_line_loss(Money outstanding_debt, double bond_recovery)
{
    return outstanding_debt * (1.0 - bond_recovery);
}

void scenario_assets(const GalacticNetwork& network, const ShockParams& shock, double bond_recovery,
                     std::span<const double> loss_fraction, std::span<Money> out)
{
    const auto n = static_cast<std::size_t>(network.bank_count());
    if (loss_fraction.size() != n || out.size() != n)
        fail(ErrorKind::Input, "scenario_assets: scenario does not match network size");

    std::size_t i = 0;
    for (Tier t : kTiers) {
        const auto& sheet = network.sheet(t);
        const Money bonds = sheet.bond_holdings_face * bond_recovery;
        const bool exempt = shock.exempt_central && t == Tier::Central;
        for (std::int64_t k = 0; k < network.count(t); ++k, ++i) {
            const double kept = exempt ? 1.0 : 1.0 - loss_fraction[i];
            out[i] = shock.applies_to == ShockTarget::AllAssets ? (sheet.external_assets + bonds) * kept
                                                                : sheet.external_assets * kept + bonds;
        }
    }
}

Money expected_loss(std::span<const LossSample> samples)
{
    if (samples.empty())
        fail(ErrorKind::Input, "expected_loss: no samples");
    Money sum = 0;
    for (const auto& s : samples)
        sum += s.real_economy_loss;
    return sum / static_cast<double>(samples.size());
}

double exceedance_probability(std::span<const LossSample> samples, Money threshold)
{
    if (samples.empty())
        fail(ErrorKind::Input, "exceedance_probability: no samples");
    const auto above = std::count_if(samples.begin(), samples.end(),
                                     [&](const LossSample& s) { return s.real_economy_loss > threshold; });
    return static_cast<double>(above) / static_cast<double>(samples.size());
}

std::size_t tail_count(std::size_t n, double confidence)
{
    const double raw = confidence * static_cast<double>(n);
    auto k = static_cast<std::size_t>(std::ceil(raw - 1e-9 * std::max(1.0, raw)));
    return std::clamp<std::size_t>(k, 1, n);
}

Money average_var(std::span<const LossSample> samples, double confidence)
{
    if (samples.empty())
        fail(ErrorKind::Input, "average_var: no samples");
    if (!(confidence > 0 && confidence < 1))
        fail(ErrorKind::Domain, "average_var: confidence must lie in (0, 1)");

    std::vector<std::size_t> order(samples.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    const std::size_t k = tail_count(samples.size(), confidence);
    auto worse = [&](std::size_t a, std::size_t b) {
        if (samples[a].real_economy_loss != samples[b].real_economy_loss)
            return samples[a].real_economy_loss > samples[b].real_economy_loss;
        return samples[a].scenario_index < samples[b].scenario_index;
    };
    std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(k), order.end(), worse);
    Money sum = 0;
    for (std::size_t i = 0; i < k; ++i)
        sum += samples[order[i]].real_economy_loss;
    return sum / static_cast<double>(k);
}

Money empirical_quantile(std::span<const LossSample> samples, double level)
{
    if (samples.empty())
        fail(ErrorKind::Input, "empirical_quantile: no samples");
    if (!(level > 0 && level <= 1))
        fail(ErrorKind::Domain, "empirical_quantile: level must lie in (0, 1]");
    std::vector<Money> losses;
    losses.reserve(samples.size());
    for (const auto& s : samples)
        losses.push_back(s.real_economy_loss);
    std::sort(losses.begin(), losses.end());
    return losses[tail_count(losses.size(), level) - 1];
}

std::string_view criterion_name(Criterion c) noexcept
{
    switch (c) {
    case Criterion::Expectation: return "expectation";
    case Criterion::ValueAtRisk: return "var";
    case Criterion::AverageValueAtRisk: return "avar";
    }
    return "unknown";
}

Criterion parse_criterion(std::string_view name)
{
    for (Criterion c : {Criterion::Expectation, Criterion::ValueAtRisk, Criterion::AverageValueAtRisk})
        if (criterion_name(c) == name)
            return c;
    fail(ErrorKind::Config, "unknown criterion '" + std::string(name) + "' (expected expectation, var or avar)");
}

bool criterion_satisfied(std::span<const LossSample> samples, Criterion criterion, const LossConfig& config)
{
    const Money threshold = config.threshold();
    switch (criterion) {
    case Criterion::Expectation: return expected_loss(samples) <= threshold;
    case Criterion::ValueAtRisk: return exceedance_probability(samples, threshold) < config.confidence;
    case Criterion::AverageValueAtRisk: return average_var(samples, config.confidence) <= threshold;
    }
    return false;
}

}  // namespace clearsim
