#pragma once

#include "clearsim/calibration.hpp"
#include "clearsim/frontier.hpp"
#include "clearsim/risk.hpp"
#include "clearsim/shock.hpp"

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace clearsim {

inline constexpr std::uint64_t kDefaultSeed = 1977;

/// Evenly spaced per-big grid, both ends included.
std::vector<Money> grid_range(Money start, Money stop, Money step);

struct RunConfig {
    CalibrationParams calibration{};
    ShockParams shock{};
    /// `loss.ggp` follows `calibration.ggp_endor`.
    LossConfig loss{};
    std::int64_t n_scenarios = 10000;
    std::uint64_t seed = kDefaultSeed;
    std::vector<Money> grid = grid_range(0.0, 0.06, 0.002);
    FrontierSearch search{};
    /// Empty: a fresh timestamped directory per run.
    std::string output_dir;
};

/// Parses a JSON document. Unknown or ill-typed fields raise
/// ErrorKind::Config with the offending path, e.g. `shock.correlation`.
RunConfig parse_config(std::string_view json_text);
RunConfig load_config(const std::string& path);

/// Resolved configuration as JSON, accepted back by parse_config.
std::string config_to_json(const RunConfig& config);

void validate(const RunConfig& config);

}  // namespace clearsim
