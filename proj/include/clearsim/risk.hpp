#pragma once

#include "clearsim/clearing.hpp"
#include "clearsim/network.hpp"
#include "clearsim/shock.hpp"

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

namespace clearsim {

struct LossConfig {
    bool deposit_insurance = false;
    Money ggp = 6090.0;
    double threshold_fraction = 0.01;
    double confidence = 0.10;
    double bond_recovery = 0.0;

    Money threshold() const noexcept { return threshold_fraction * ggp; }
};

void validate(const LossConfig& config);

/// Cash injected into every bank of a tier before clearing. The central
/// bank is never bailed out.
struct BailoutAllocation {
    Money per_massive = 0;
    Money per_big = 0;

    static constexpr Money per_central = 0;

    PerTier<Money> per_tier() const noexcept { return {per_central, per_massive, per_big}; }
    Money total(const GalacticNetwork& network) const noexcept;
};

/// Insurance-independent result of clearing one scenario.
struct ScenarioOutcome {
    std::int64_t scenario_index = 0;
    Money external_shortfall = 0;  // outside creditors' unpaid claims
    Money central_shortfall = 0;
    Money deposits_at_defaulted = 0;
    PerTier<std::int64_t> defaults{};
    std::int64_t iterations = 0;
};

struct LossSample {
    std::int64_t scenario_index = 0;
    Money real_economy_loss = 0;
    Money insurance_payout = 0;
    std::int64_t n_defaults = 0;
    Money central_shortfall = 0;
    PerTier<std::int64_t> defaults{};
};

LossSample to_loss_sample(const ScenarioOutcome& outcome, const LossConfig& config);

/// Loss to the real economy from a per-bank clearing outcome: unpaid
/// external claims plus, without insurance, the deposits of every
/// defaulted bank.
LossSample real_economy_loss(const ClearingOutcome& outcome, const GalacticNetwork& network,
                             const LossConfig& config, std::int64_t scenario_index = 0);

/// Loss when the public holds the sovereign bonds directly.
Money green_line_loss(Money outstanding_debt, double bond_recovery);

/// Post-shock, pre-bailout assets per bank (global order).
void scenario_assets(const GalacticNetwork& network, const ShockParams& shock, double bond_recovery,
                     std::span<const double> loss_fraction, std::span<Money> out);

struct RunOptions {
    int threads = 0;  // 0: OpenMP default
    ClearingOptions clearing{};
};

/// One scenario with its per-tier assets sorted, ready to be cleared under
/// any bailout.
struct PreparedScenario {
    std::int64_t scenario_index = 0;
    PerTier<SortedAssets> tiers;
};

class ScenarioEngine {
public:
    ScenarioEngine(const GalacticNetwork& network, const ShockParams& shock, double bond_recovery,
                   ClearingOptions clearing = {});

    const GalacticNetwork& network() const noexcept { return *network_; }
    const TierTopology& topology() const noexcept { return topology_; }

    struct Workspace {
        std::vector<double> losses;
        std::vector<Money> assets;
    };

    void prepare(std::uint64_t seed, std::int64_t scenario_index, PreparedScenario& out, Workspace& ws) const;
    void prepare_from_losses(std::int64_t scenario_index, std::span<const double> losses, PreparedScenario& out,
                             Workspace& ws) const;
    ScenarioOutcome evaluate(const PreparedScenario& scenario, const BailoutAllocation& bailout) const;

private:
    const GalacticNetwork* network_;
    ShockParams shock_;
    LossSampler sampler_;
    double bond_recovery_;
    ClearingOptions clearing_;
    TierTopology topology_;
};

/// OpenMP over scenarios; scenario i depends only on (seed, i, inputs).
std::vector<ScenarioOutcome> simulate_outcomes(const GalacticNetwork& network, const ShockParams& shock,
                                               const BailoutAllocation& bailout, double bond_recovery,
                                               std::int64_t n_scenarios, std::uint64_t seed,
                                               const RunOptions& options = {});

std::vector<LossSample> run_monte_carlo(const GalacticNetwork& network, const ShockParams& shock,
                                        const BailoutAllocation& bailout, const LossConfig& config,
                                        std::int64_t n_scenarios, std::uint64_t seed,
                                        const RunOptions& options = {});

/// Single-threaded reference for run_monte_carlo.
std::vector<LossSample> run_monte_carlo_serial(const GalacticNetwork& network, const ShockParams& shock,
                                               const BailoutAllocation& bailout, const LossConfig& config,
                                               std::int64_t n_scenarios, std::uint64_t seed,
                                               const ClearingOptions& clearing = {});

// Risk measures over a sample set.

Money expected_loss(std::span<const LossSample> samples);
/// Fraction of samples strictly above `threshold`.
double exceedance_probability(std::span<const LossSample> samples, Money threshold);
/// Mean of the worst ceil(confidence * N) samples; ties go to the lower
/// scenario index.
Money average_var(std::span<const LossSample> samples, double confidence);
/// Lower empirical quantile: smallest loss x with F_N(x) >= level.
Money empirical_quantile(std::span<const LossSample> samples, double level);
/// ceil(confidence * n), robust to representation error, in [1, n].
std::size_t tail_count(std::size_t n, double confidence);

enum class Criterion { Expectation, ValueAtRisk, AverageValueAtRisk };

std::string_view criterion_name(Criterion c) noexcept;
Criterion parse_criterion(std::string_view name);

bool criterion_satisfied(std::span<const LossSample> samples, Criterion criterion, const LossConfig& config);

}  // namespace clearsim
