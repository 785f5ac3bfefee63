#pragma once

#include "clearsim/risk.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace clearsim {

/// Loss samples for any bailout over a fixed scenario set (common random
/// numbers). Prepared scenarios are kept in memory when they fit within
/// `cache_limit_bytes`; otherwise they are regenerated per evaluation with
/// identical results.
class BailoutEvaluator {
public:
    static constexpr std::size_t kDefaultCacheLimit = std::size_t{2} << 30;

    BailoutEvaluator(const GalacticNetwork& network, const ShockParams& shock, const LossConfig& config,
                     std::int64_t n_scenarios, std::uint64_t seed, RunOptions options = {},
                     std::size_t cache_limit_bytes = kDefaultCacheLimit);

    std::vector<LossSample> losses(const BailoutAllocation& bailout);

    const GalacticNetwork& network() const noexcept { return engine_.network(); }
    const LossConfig& config() const noexcept { return config_; }
    std::int64_t scenario_count() const noexcept { return n_scenarios_; }
    bool cached() const noexcept { return !prepared_.empty(); }
    std::int64_t evaluations() const noexcept { return evaluations_; }

    static std::size_t cache_bytes(const GalacticNetwork& network, std::int64_t n_scenarios);

private:
    ScenarioEngine engine_;
    LossConfig config_;
    std::int64_t n_scenarios_;
    std::uint64_t seed_;
    RunOptions options_;
    std::vector<PreparedScenario> prepared_;
    std::int64_t evaluations_ = 0;
};

struct FrontierSearch {
    Money resolution = 0.001;  // one quadrillion
    /// Largest per-massive injection tried; 0 means the massive tier's
    /// per-bank obligation, beyond which extra cash cannot change payments.
    Money massive_upper = 0;
};

struct FrontierPoint {
    Money per_big = 0;
    std::optional<Money> minimal_per_massive;

    bool attainable() const noexcept { return minimal_per_massive.has_value(); }
};

struct FrontierResult {
    Criterion criterion = Criterion::Expectation;
    std::vector<FrontierPoint> points;
    std::int64_t evaluations = 0;
    /// Scenario losses that rose when the bailout grew, and frontier
    /// values that rose with per_big. Both must be zero.
    std::int64_t loss_monotonicity_violations = 0;
    std::int64_t frontier_monotonicity_violations = 0;

    bool has_gaps() const noexcept;
};

/// For each per_big grid value (ascending), the smallest per_massive on the
/// resolution lattice meeting the criterion, by bisection.
FrontierResult bailout_frontier(BailoutEvaluator& evaluator, Criterion criterion, std::span<const Money> per_big_grid,
                                const FrontierSearch& search = {});

FrontierResult bailout_frontier(const GalacticNetwork& network, const ShockParams& shock, const LossConfig& config,
                                Criterion criterion, std::span<const Money> per_big_grid, std::uint64_t seed,
                                std::int64_t n_scenarios, const FrontierSearch& search = {},
                                const RunOptions& options = {});

struct MinimalBailout {
    Money per_massive = 0;
    Money per_big = 0;
    Money total = 0;
    double ggp_fraction = 0;
};

/// Cheapest attainable frontier point; ties go to the smaller per_big.
MinimalBailout minimal_total_bailout(std::span<const FrontierPoint> frontier, const GalacticNetwork& network);

}  // namespace clearsim
