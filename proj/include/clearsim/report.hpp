#pragma once

#include "clearsim/calibration.hpp"
#include "clearsim/frontier.hpp"
#include "clearsim/risk.hpp"

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace clearsim {

/// 17 significant digits, '.' decimal separator, locale-independent.
std::string format_number(double value);

/// Both insurance settings derived from one set of clearing outcomes.
struct SimulationResult {
    std::vector<ScenarioOutcome> outcomes;
    std::vector<LossSample> no_insurance;
    std::vector<LossSample> insurance;
};

SimulationResult simulate(const GalacticNetwork& network, const ShockParams& shock, const BailoutAllocation& bailout,
                          const LossConfig& config, std::int64_t n_scenarios, std::uint64_t seed,
                          const RunOptions& options = {});

struct LossSummary {
    Money green_line = 0;
    Money threshold = 0;
    std::int64_t scenarios = 0;
    Money mean_loss_no_insurance = 0;
    Money mean_loss_insurance = 0;
    Money median_loss_no_insurance = 0;
    Money quantile_90_no_insurance = 0;
    Money quantile_99_no_insurance = 0;
    Money avar_no_insurance = 0;
    double exceedance_no_insurance = 0;
    /// No-insurance losses at or below the green line.
    double fraction_below_green = 0;
    /// Among scenarios above the green line: median share of massive and
    /// big banks in default.
    double median_systemic_default_fraction_above_green = 0;
    double mean_defaults = 0;
    Money mean_central_shortfall = 0;
    Money mean_insurance_payout = 0;
    Money mean_payout_below_green = 0;
    Money mean_payout_above_green = 0;
};

LossSummary summarize(const SimulationResult& result, const GalacticNetwork& network, const LossConfig& config);

struct Histogram {
    std::vector<double> edges;  // % of GGP, bins + 1 entries
    std::vector<std::int64_t> counts_no_insurance;
    std::vector<std::int64_t> counts_insurance;
};

/// Equal-width bins over [0, largest loss of either setting] in % of GGP.
Histogram loss_histogram(std::span<const LossSample> no_insurance, std::span<const LossSample> insurance, Money ggp,
                         int bins = 100);

struct MinimaRow {
    Criterion criterion = Criterion::Expectation;
    bool attainable = false;
    MinimalBailout minimum{};
};

MinimaRow minima_row(const FrontierResult& frontier, const GalacticNetwork& network);

// CSV writers. Each file starts with a '# units' comment line; failures
// raise ErrorKind::Io naming the path.

void write_network_summary(const std::filesystem::path& path, const GalacticNetwork& network,
                           const CalibrationParams& params);
void write_losses(const std::filesystem::path& path, std::span<const LossSample> samples);
void write_histogram(const std::filesystem::path& path, const Histogram& histogram);
void write_summary(const std::filesystem::path& path, const LossSummary& summary, Money ggp);
void write_frontier(const std::filesystem::path& path, std::span<const FrontierResult> frontiers,
                    const GalacticNetwork& network, Money ggp);
void write_minima(const std::filesystem::path& path, std::span<const MinimaRow> rows);
void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace clearsim
