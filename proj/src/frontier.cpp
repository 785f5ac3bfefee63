#include "clearsim/frontier.hpp"

#include "clearsim/error.hpp"

#include <algorithm>
#include <cmath>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace clearsim {

std::size_t BailoutEvaluator::cache_bytes(const GalacticNetwork& network, std::int64_t n_scenarios)
{
    std::size_t per = sizeof(PreparedScenario);
    for (Tier t : kTiers) {
        const auto n = static_cast<std::size_t>(network.count(t));
        per += sizeof(Money) * (n + n / SortedAssets::kBlock + 1);
    }
    return per * static_cast<std::size_t>(n_scenarios);
}

BailoutEvaluator::BailoutEvaluator(const GalacticNetwork& network, const ShockParams& shock, const LossConfig& config,
                                   std::int64_t n_scenarios, std::uint64_t seed, RunOptions options,
                                   std::size_t cache_limit_bytes)
    : engine_(network, shock, config.bond_recovery, options.clearing),
      config_(config),
      n_scenarios_(n_scenarios),
      seed_(seed),
      options_(options)
{
    validate(config_);
    if (n_scenarios_ < 1)
        fail(ErrorKind::Input, "bailout evaluator: need at least one scenario");
    if (cache_bytes(network, n_scenarios_) > cache_limit_bytes)
        return;

    prepared_.resize(static_cast<std::size_t>(n_scenarios_));
#ifdef _OPENMP
    const int threads = options_.threads > 0 ? options_.threads : omp_get_max_threads();
#pragma omp parallel num_threads(threads)
#endif
    {
        ScenarioEngine::Workspace ws;
#ifdef _OPENMP
#pragma omp for schedule(dynamic, 8)
#endif
        for (std::int64_t i = 0; i < n_scenarios_; ++i)
            engine_.prepare(seed_, i, prepared_[static_cast<std::size_t>(i)], ws);
    }
}

std::vector<LossSample> BailoutEvaluator::losses(const BailoutAllocation& bailout)
{
    if (!(bailout.per_massive >= 0) || !(bailout.per_big >= 0))
        fail(ErrorKind::Domain, "bailout amounts must be non-negative");
    ++evaluations_;
    std::vector<LossSample> out(static_cast<std::size_t>(n_scenarios_));
#ifdef _OPENMP
    const int threads = options_.threads > 0 ? options_.threads : omp_get_max_threads();
#pragma omp parallel num_threads(threads)
#endif
    {
        ScenarioEngine::Workspace ws;
        PreparedScenario scratch;
#ifdef _OPENMP
#pragma omp for schedule(dynamic, 16)
#endif
        for (std::int64_t i = 0; i < n_scenarios_; ++i) {
            const PreparedScenario* s = nullptr;
            if (cached()) {
                s = &prepared_[static_cast<std::size_t>(i)];
            } else {
                engine_.prepare(seed_, i, scratch, ws);
                s = &scratch;
            }
            out[static_cast<std::size_t>(i)] = to_loss_sample(engine_.evaluate(*s, bailout), config_);
        }
    }
    return out;
}

bool FrontierResult::has_gaps() const noexcept
{
    return std::any_of(points.begin(), points.end(), [](const FrontierPoint& p) { return !p.attainable(); });
}

namespace {

/// Counts scenarios whose loss under `more` (the larger bailout) exceeds
/// the loss under `less` beyond solver slack.
std::int64_t rises(const std::vector<LossSample>& less, const std::vector<LossSample>& more, Money slack)
{
    std::int64_t n = 0;
    for (std::size_t i = 0; i < less.size(); ++i)
        if (more[i].real_economy_loss > less[i].real_economy_loss + slack)
            ++n;
    return n;
}

}  // namespace

FrontierResult bailout_frontier(BailoutEvaluator& evaluator, Criterion criterion, std::span<const Money> grid,
                                const FrontierSearch& search)
{
    if (grid.empty())
        fail(ErrorKind::Input, "bailout_frontier: empty per_big grid");
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (!(grid[i] >= 0))
            fail(ErrorKind::Input, "bailout_frontier: per_big values must be non-negative");
        if (i > 0 && !(grid[i] > grid[i - 1]))
            fail(ErrorKind::Input, "bailout_frontier: per_big grid must be strictly ascending");
    }
    if (!(search.resolution > 0))
        fail(ErrorKind::Input, "bailout_frontier: resolution must be positive");

    const auto& network = evaluator.network();
    const auto& config = evaluator.config();
    const Money upper = search.massive_upper > 0 ? search.massive_upper : network.obligation(Tier::Massive);
    const auto top = static_cast<std::int64_t>(std::ceil(upper / search.resolution - 1e-9));
    // Loss comparisons tolerate the clearing stopping rule.
    const Money slack = 1e-6 * std::max(1.0, network.obligation(Tier::Central));

    FrontierResult result;
    result.criterion = criterion;
    const auto before = evaluator.evaluations();
    std::vector<LossSample> previous_floor;

    for (Money per_big : grid) {
        auto at = [&](std::int64_t k) {
            return evaluator.losses({static_cast<double>(k) * search.resolution, per_big});
        };
        FrontierPoint point{per_big, std::nullopt};

        auto floor = at(0);
        if (!previous_floor.empty())
            result.loss_monotonicity_violations += rises(previous_floor, floor, slack);

        if (criterion_satisfied(floor, criterion, config)) {
            point.minimal_per_massive = 0.0;
        } else {
            auto ceiling = at(top);
            result.loss_monotonicity_violations += rises(floor, ceiling, slack);
            if (criterion_satisfied(ceiling, criterion, config)) {
                std::int64_t lo = 0;
                std::int64_t hi = top;
                auto lo_losses = floor;
                auto hi_losses = ceiling;
                while (hi - lo > 1) {
                    const std::int64_t mid = lo + (hi - lo) / 2;
                    auto mid_losses = at(mid);
                    result.loss_monotonicity_violations +=
                        rises(lo_losses, mid_losses, slack) + rises(mid_losses, hi_losses, slack);
                    if (criterion_satisfied(mid_losses, criterion, config)) {
                        hi = mid;
                        hi_losses = std::move(mid_losses);
                    } else {
                        lo = mid;
                        lo_losses = std::move(mid_losses);
                    }
                }
                point.minimal_per_massive = static_cast<double>(hi) * search.resolution;
            }
        }
        previous_floor = std::move(floor);

        if (!result.points.empty()) {
            const auto& prev = result.points.back();
            // An unattainable point may not follow an attainable one.
            if (prev.attainable() &&
                (!point.attainable() || *point.minimal_per_massive > *prev.minimal_per_massive))
                ++result.frontier_monotonicity_violations;
        }
        result.points.push_back(point);
    }
    result.evaluations = evaluator.evaluations() - before;
    return result;
}

FrontierResult bailout_frontier(const GalacticNetwork& network, const ShockParams& shock, const LossConfig& config,
                                Criterion criterion, std::span<const Money> per_big_grid, std::uint64_t seed,
                                std::int64_t n_scenarios, const FrontierSearch& search, const RunOptions& options)
{
    BailoutEvaluator evaluator(network, shock, config, n_scenarios, seed, options);
    return bailout_frontier(evaluator, criterion, per_big_grid, search);
}

MinimalBailout minimal_total_bailout(std::span<const FrontierPoint> frontier, const GalacticNetwork& network)
{
    if (frontier.empty())
        fail(ErrorKind::Input, "minimal_total_bailout: empty frontier");
    std::optional<MinimalBailout> best;
    for (const auto& p : frontier) {
        if (!p.attainable())
            continue;
        const BailoutAllocation alloc{*p.minimal_per_massive, p.per_big};
        const Money total = alloc.total(network);
        if (!best || total < best->total || (total == best->total && p.per_big < best->per_big))
            best = MinimalBailout{alloc.per_massive, alloc.per_big, total, total / network.ggp()};
    }
    if (!best)
        fail(ErrorKind::Input, "minimal_total_bailout: no attainable frontier point");
    return *best;
}

}  // namespace clearsim
