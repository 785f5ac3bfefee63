#include "clearsim/calibration.hpp"

#include "clearsim/error.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace clearsim {

void validate(const CalibrationParams& p)
{
    auto bad = [](const std::string& msg) { fail(ErrorKind::Config, "calibration: " + msg); };
    if (!(p.ds1_paid_fraction >= 0 && p.ds1_paid_fraction <= 1))
        bad("ds1_paid_fraction must lie in [0, 1]");
    if (!(p.growth_rate > -1))
        bad("growth_rate must exceed -1");
    if (!(p.ds1_total_cost >= 0) || !(p.ds2_total_cost >= 0))
        bad("project costs must be non-negative");
    if (!(p.ggp_endor > 0))
        bad("ggp_endor must be positive");
    if (p.construction_years <= 0)
        bad("construction_years must be positive");
    for (Tier t : kTiers) {
        if (p.tier_counts[index_of(t)] <= 0)
            bad("tier count for '" + std::string(tier_name(t)) + "' must be positive");
        if (!std::isfinite(p.capital_buffer[index_of(t)]) || p.capital_buffer[index_of(t)] < -1)
            bad("capital buffer for '" + std::string(tier_name(t)) + "' must be finite and >= -1");
    }
}

Money steel_cost_scaled(Money base_steel_cost, double base_diameter_km, double new_diameter_km)
{
    if (!(base_diameter_km > 0) || !(new_diameter_km > 0))
        fail(ErrorKind::Domain, "steel_cost_scaled: diameters must be positive");
    const double ratio = new_diameter_km / base_diameter_km;
    return base_steel_cost * ratio * ratio * ratio;
}

double manhattan_gdp_fraction(const std::vector<YearAmount>& expenditures_millions,
                              const std::vector<YearAmount>& gdp_billions)
{
    auto years = [](const std::vector<YearAmount>& rows) {
        std::vector<int> y;
        y.reserve(rows.size());
        for (const auto& r : rows)
            y.push_back(r.year);
        std::sort(y.begin(), y.end());
        return y;
    };
    if (years(expenditures_millions) != years(gdp_billions))
        fail(ErrorKind::Input, "manhattan_gdp_fraction: expenditure and GDP years differ");

    double spent = 0;
    double gdp = 0;
    for (const auto& r : expenditures_millions)
        spent += r.amount;
    for (const auto& r : gdp_billions)
        gdp += r.amount;
    if (!(gdp > 0))
        fail(ErrorKind::Input, "manhattan_gdp_fraction: total GDP must be positive");
    return spent / (gdp * 1000.0);
}

ProjectGgp ggp_from_project(Money project_cost, double gdp_fraction, int years)
{
    if (!(gdp_fraction > 0))
        fail(ErrorKind::Domain, "ggp_from_project: GDP fraction must be positive");
    if (years <= 0)
        fail(ErrorKind::Domain, "ggp_from_project: years must be positive");
    const Money total = project_cost / gdp_fraction;
    return {total, total / years};
}

Money compound_growth(Money base, double rate, int years)
{
    if (!(rate > -1))
        fail(ErrorKind::Domain, "compound_growth: rate must exceed -1");
    return base * std::pow(1.0 + rate, years);
}

Money outstanding_debt(const CalibrationParams& params)
{
    return params.ds1_total_cost * (1.0 - params.ds1_paid_fraction) + params.ds2_total_cost;
}

BondAllocation bond_allocation(Money outstanding, std::int64_t massive_count)
{
    if (massive_count <= 0)
        fail(ErrorKind::Degenerate, "bond_allocation: massive tier is empty");
    return {outstanding * 2.0 / 3.0, outstanding / (3.0 * static_cast<double>(massive_count))};
}

GalacticNetwork build_network(const CalibrationParams& params)
{
    validate(params);

    NetworkSpec spec;
    spec.counts = params.tier_counts;
    spec.profiles = {params.liabilities.central, params.liabilities.massive, params.liabilities.big};
    spec.ggp = params.ggp_endor;
    spec.outstanding_debt = outstanding_debt(params);

    const auto bonds = bond_allocation(spec.outstanding_debt, spec.counts[index_of(Tier::Massive)]);
    spec.bond_holdings = {bonds.central, bonds.per_massive, 0.0};

    for (Tier t : kTiers) {
        const auto i = index_of(t);
        const Money claims = interbank_claims_face(spec.counts, spec.profiles, t);
        const Money target = (1.0 + params.capital_buffer[i]) * total_obligation(spec.profiles[i]);
        spec.external_assets[i] = std::max(0.0, target - claims - spec.bond_holdings[i]);
    }
    return GalacticNetwork(spec);
}

}  // namespace clearsim
