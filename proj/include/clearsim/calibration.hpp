#pragma once

#include "clearsim/network.hpp"

#include <vector>

namespace clearsim {

struct YearAmount {
    int year = 0;
    double amount = 0;
};

/// Per-bank liability totals of the calibrated network (quintillions).
struct LiabilityCalibration {
    LiabilityProfile central{0.0, 0.0, 0.0, 2500.0};
    LiabilityProfile massive{3.0, 0.333, 0.5, 0.0};
    LiabilityProfile big{0.1, 0.47, 0.002, 0.0};
};

struct CalibrationParams {
    Money ds1_total_cost = 193.0;
    double ds1_paid_fraction = 0.5;
    Money ds2_total_cost = 419.0;
    Money ggp_endor = 6090.0;
    double growth_rate = 0.02;
    /// Manhattan Project spending, millions of 1945 dollars.
    std::vector<YearAmount> manhattan_expenditures{
        {1942, 16.1}, {1943, 344.6}, {1944, 939.4}, {1945, 610.3}, {1946, 281.0}};
    /// US GDP, billions of 1945 dollars.
    std::vector<YearAmount> us_gdp{
        {1942, 182.5}, {1943, 213.2}, {1944, 230.3}, {1945, 228.2}, {1946, 202.4}};
    int construction_years = 20;
    PerTier<std::int64_t> tier_counts{1, 175, 17325};
    /// Residual-rule buffer: external assets top total assets up to
    /// (1 + buffer) x total obligation. May be negative.
    PerTier<double> capital_buffer{0.825, 12.85, -0.985};
    double banking_sector_ggp_fraction = 0.60;
    LiabilityCalibration liabilities{};
};

/// Throws ErrorKind::Config on out-of-range fields.
void validate(const CalibrationParams& params);

/// Cube-law volume scaling of a steel bill between two sphere diameters.
Money steel_cost_scaled(Money base_steel_cost, double base_diameter_km, double new_diameter_km);

/// Sum of spending (millions) over sum of GDP (billions), as a plain fraction.
double manhattan_gdp_fraction(const std::vector<YearAmount>& expenditures_millions,
                              const std::vector<YearAmount>& gdp_billions);

struct ProjectGgp {
    Money total = 0;
    Money annual_average = 0;
};

ProjectGgp ggp_from_project(Money project_cost, double gdp_fraction, int years);

/// Sensitivity helper; the calibrated GGP itself is the `ggp_endor` constant.
Money compound_growth(Money base, double rate, int years);

/// DS1 unpaid remainder plus the full DS2 bill.
Money outstanding_debt(const CalibrationParams& params);

struct BondAllocation {
    Money central = 0;
    Money per_massive = 0;
};

/// Central holds two thirds; the rest is split evenly over the massive tier.
BondAllocation bond_allocation(Money outstanding, std::int64_t massive_count);

GalacticNetwork build_network(const CalibrationParams& params);

}  // namespace clearsim
