#include "clearsim/config.hpp"

#include "clearsim/error.hpp"

#include <json.hpp>

#include <cmath>
#include <fstream>
#include <initializer_list>
#include <sstream>

namespace clearsim {

using nlohmann::json;

namespace {

[[noreturn]] void config_error(const std::string& where, const std::string& what)
{
    fail(ErrorKind::Config, "config" + (where.empty() ? std::string() : "." + where) + ": " + what);
}

std::string join(const std::string& base, const std::string& key)
{
    return base.empty() ? key : base + "." + key;
}

void require_object(const json& j, const std::string& where)
{
    if (!j.is_object())
        config_error(where, "expected an object");
}

void check_keys(const json& j, const std::string& where, std::initializer_list<std::string_view> allowed)
{
    require_object(j, where);
    for (auto it = j.begin(); it != j.end(); ++it) {
        bool known = false;
        for (auto a : allowed)
            known = known || it.key() == a;
        if (!known)
            config_error(join(where, it.key()), "unknown field");
    }
}

double as_number(const json& v, const std::string& where)
{
    if (!v.is_number())
        config_error(where, "expected a number");
    const double x = v.get<double>();
    if (!std::isfinite(x))
        config_error(where, "expected a finite number");
    return x;
}

std::int64_t as_integer(const json& v, const std::string& where)
{
    if (!v.is_number_integer())
        config_error(where, "expected an integer");
    if (v.is_number_unsigned() && v.get<std::uint64_t>() > static_cast<std::uint64_t>(INT64_MAX))
        config_error(where, "integer out of range");
    return v.get<std::int64_t>();
}

void read(const json& j, const std::string& where, const char* key, double& out)
{
    if (j.contains(key))
        out = as_number(j.at(key), join(where, key));
}

void read(const json& j, const std::string& where, const char* key, int& out)
{
    if (!j.contains(key))
        return;
    const auto v = as_integer(j.at(key), join(where, key));
    if (v < INT32_MIN || v > INT32_MAX)
        config_error(join(where, key), "integer out of range");
    out = static_cast<int>(v);
}

void read(const json& j, const std::string& where, const char* key, std::int64_t& out)
{
    if (j.contains(key))
        out = as_integer(j.at(key), join(where, key));
}

void read(const json& j, const std::string& where, const char* key, bool& out)
{
    if (!j.contains(key))
        return;
    if (!j.at(key).is_boolean())
        config_error(join(where, key), "expected true or false");
    out = j.at(key).get<bool>();
}

template <typename T>
void read_per_tier(const json& j, const std::string& where, const char* key, PerTier<T>& out)
{
    if (!j.contains(key))
        return;
    const std::string here = join(where, key);
    const json& v = j.at(key);
    check_keys(v, here, {"central", "massive", "big"});
    for (Tier t : kTiers) {
        const std::string name(tier_name(t));
        read(v, here, name.c_str(), out[index_of(t)]);
    }
}

void read_year_amounts(const json& j, const std::string& where, const char* key, std::vector<YearAmount>& out)
{
    if (!j.contains(key))
        return;
    const std::string here = join(where, key);
    const json& v = j.at(key);
    if (!v.is_array())
        config_error(here, "expected an array of {year, amount} objects");
    out.clear();
    for (std::size_t i = 0; i < v.size(); ++i) {
        const std::string item = here + "[" + std::to_string(i) + "]";
        check_keys(v[i], item, {"year", "amount"});
        if (!v[i].contains("year") || !v[i].contains("amount"))
            config_error(item, "both 'year' and 'amount' are required");
        YearAmount row;
        read(v[i], item, "year", row.year);
        read(v[i], item, "amount", row.amount);
        out.push_back(row);
    }
}

void read_profile(const json& j, const std::string& where, const char* key, LiabilityProfile& out)
{
    if (!j.contains(key))
        return;
    const std::string here = join(where, key);
    const json& v = j.at(key);
    check_keys(v, here, {"to_central", "to_massive", "to_big", "external"});
    read(v, here, "to_central", out.to_central);
    read(v, here, "to_massive", out.to_massive);
    read(v, here, "to_big", out.to_big);
    read(v, here, "external", out.external);
}

void read_calibration(const json& j, CalibrationParams& p)
{
    const std::string here = "calibration";
    check_keys(j, here,
               {"ds1_total_cost", "ds1_paid_fraction", "ds2_total_cost", "ggp_endor", "growth_rate",
                "manhattan_expenditures", "us_gdp", "construction_years", "tier_counts", "capital_buffer",
                "banking_sector_ggp_fraction", "liabilities"});
    read(j, here, "ds1_total_cost", p.ds1_total_cost);
    read(j, here, "ds1_paid_fraction", p.ds1_paid_fraction);
    read(j, here, "ds2_total_cost", p.ds2_total_cost);
    read(j, here, "ggp_endor", p.ggp_endor);
    read(j, here, "growth_rate", p.growth_rate);
    read_year_amounts(j, here, "manhattan_expenditures", p.manhattan_expenditures);
    read_year_amounts(j, here, "us_gdp", p.us_gdp);
    read(j, here, "construction_years", p.construction_years);
    read_per_tier(j, here, "tier_counts", p.tier_counts);
    read_per_tier(j, here, "capital_buffer", p.capital_buffer);
    read(j, here, "banking_sector_ggp_fraction", p.banking_sector_ggp_fraction);
    if (j.contains("liabilities")) {
        const std::string sub = join(here, "liabilities");
        const json& v = j.at("liabilities");
        check_keys(v, sub, {"central", "massive", "big"});
        read_profile(v, sub, "central", p.liabilities.central);
        read_profile(v, sub, "massive", p.liabilities.massive);
        read_profile(v, sub, "big", p.liabilities.big);
    }
}

void read_shock(const json& j, ShockParams& s)
{
    const std::string here = "shock";
    check_keys(j, here, {"correlation", "beta_a", "beta_b", "applies_to", "exempt_central"});
    read(j, here, "correlation", s.correlation);
    read(j, here, "beta_a", s.beta_a);
    read(j, here, "beta_b", s.beta_b);
    read(j, here, "exempt_central", s.exempt_central);
    if (j.contains("applies_to")) {
        const json& v = j.at("applies_to");
        const std::string name = v.is_string() ? v.get<std::string>() : std::string();
        if (name == "external_assets")
            s.applies_to = ShockTarget::ExternalAssetsOnly;
        else if (name == "all_assets")
            s.applies_to = ShockTarget::AllAssets;
        else
            config_error(join(here, "applies_to"), "expected \"external_assets\" or \"all_assets\"");
    }
}

void read_loss(const json& j, LossConfig& l)
{
    const std::string here = "loss";
    check_keys(j, here, {"deposit_insurance", "threshold_fraction", "confidence", "bond_recovery"});
    read(j, here, "deposit_insurance", l.deposit_insurance);
    read(j, here, "threshold_fraction", l.threshold_fraction);
    read(j, here, "confidence", l.confidence);
    read(j, here, "bond_recovery", l.bond_recovery);
}

void read_grid(const json& j, std::vector<Money>& grid)
{
    const std::string here = "grid";
    check_keys(j, here, {"per_big", "start", "stop", "step"});
    const bool listed = j.contains("per_big");
    const bool ranged = j.contains("start") || j.contains("stop") || j.contains("step");
    if (listed && ranged)
        config_error(here, "give either 'per_big' or 'start'/'stop'/'step', not both");
    if (listed) {
        const json& v = j.at("per_big");
        if (!v.is_array() || v.empty())
            config_error(join(here, "per_big"), "expected a non-empty array of numbers");
        grid.clear();
        for (std::size_t i = 0; i < v.size(); ++i)
            grid.push_back(as_number(v[i], join(here, "per_big") + "[" + std::to_string(i) + "]"));
    } else if (ranged) {
        if (!j.contains("start") || !j.contains("stop") || !j.contains("step"))
            config_error(here, "'start', 'stop' and 'step' must be given together");
        const double start = as_number(j.at("start"), join(here, "start"));
        const double stop = as_number(j.at("stop"), join(here, "stop"));
        const double step = as_number(j.at("step"), join(here, "step"));
        if (!(step > 0) || stop < start)
            config_error(here, "need step > 0 and stop >= start");
        grid = grid_range(start, stop, step);
    }
}

void read_search(const json& j, FrontierSearch& s)
{
    const std::string here = "frontier";
    check_keys(j, here, {"resolution", "massive_upper"});
    read(j, here, "resolution", s.resolution);
    read(j, here, "massive_upper", s.massive_upper);
}

json per_tier_json(const auto& values)
{
    json out = json::object();
    for (Tier t : kTiers)
        out[std::string(tier_name(t))] = values[index_of(t)];
    return out;
}

json profile_json(const LiabilityProfile& p)
{
    return {{"to_central", p.to_central}, {"to_massive", p.to_massive}, {"to_big", p.to_big}, {"external", p.external}};
}

json year_amounts_json(const std::vector<YearAmount>& rows)
{
    json out = json::array();
    for (const auto& r : rows)
        out.push_back({{"year", r.year}, {"amount", r.amount}});
    return out;
}

}  // namespace

std::vector<Money> grid_range(Money start, Money stop, Money step)
{
    if (!(step > 0) || !(stop >= start))
        fail(ErrorKind::Config, "grid_range: need step > 0 and stop >= start");
    const auto n = static_cast<std::int64_t>(std::floor((stop - start) / step + 1e-9));
    std::vector<Money> out;
    out.reserve(static_cast<std::size_t>(n + 1));
    for (std::int64_t i = 0; i <= n; ++i)
        out.push_back(start + static_cast<double>(i) * step);
    return out;
}

void validate(const RunConfig& c)
{
    validate(c.calibration);
    validate(c.shock);
    validate(c.loss);
    if (c.n_scenarios < 1)
        config_error("n_scenarios", "must be at least 1");
    if (c.grid.empty())
        config_error("grid", "must not be empty");
    for (std::size_t i = 0; i < c.grid.size(); ++i) {
        if (!(c.grid[i] >= 0))
            config_error("grid.per_big", "values must be non-negative");
        if (i > 0 && !(c.grid[i] > c.grid[i - 1]))
            config_error("grid.per_big", "values must be strictly ascending");
    }
    if (!(c.search.resolution > 0))
        config_error("frontier.resolution", "must be positive");
    if (!(c.search.massive_upper >= 0))
        config_error("frontier.massive_upper", "must be non-negative");
}

RunConfig parse_config(std::string_view json_text)
{
    json doc;
    try {
        doc = json::parse(json_text.begin(), json_text.end());
    } catch (const json::parse_error& e) {
        fail(ErrorKind::Config, std::string("config: malformed JSON: ") + e.what());
    }

    RunConfig c;
    check_keys(doc, "", {"calibration", "shock", "loss", "n_scenarios", "seed", "grid", "frontier", "output_dir"});
    if (doc.contains("calibration"))
        read_calibration(doc.at("calibration"), c.calibration);
    if (doc.contains("shock"))
        read_shock(doc.at("shock"), c.shock);
    if (doc.contains("loss"))
        read_loss(doc.at("loss"), c.loss);
    read(doc, "", "n_scenarios", c.n_scenarios);
    if (doc.contains("seed")) {
        const json& v = doc.at("seed");
        if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0))
            config_error("seed", "expected a non-negative integer");
        c.seed = v.get<std::uint64_t>();
    }
    if (doc.contains("grid"))
        read_grid(doc.at("grid"), c.grid);
    if (doc.contains("frontier"))
        read_search(doc.at("frontier"), c.search);
    if (doc.contains("output_dir")) {
        if (!doc.at("output_dir").is_string())
            config_error("output_dir", "expected a string");
        c.output_dir = doc.at("output_dir").get<std::string>();
    }
    c.loss.ggp = c.calibration.ggp_endor;
    c.shock.n_banks = 0;
    for (auto n : c.calibration.tier_counts)
        c.shock.n_banks += n;
    validate(c);
    return c;
}

RunConfig load_config(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        fail(ErrorKind::Io, "cannot open config file '" + path + "'");
    std::ostringstream text;
    text << in.rdbuf();
    if (in.bad())
        fail(ErrorKind::Io, "failed reading config file '" + path + "'");
    return parse_config(text.str());
}

std::string config_to_json(const RunConfig& c)
{
    const auto& p = c.calibration;
    json doc;
    doc["calibration"] = {
        {"ds1_total_cost", p.ds1_total_cost},
        {"ds1_paid_fraction", p.ds1_paid_fraction},
        {"ds2_total_cost", p.ds2_total_cost},
        {"ggp_endor", p.ggp_endor},
        {"growth_rate", p.growth_rate},
        {"manhattan_expenditures", year_amounts_json(p.manhattan_expenditures)},
        {"us_gdp", year_amounts_json(p.us_gdp)},
        {"construction_years", p.construction_years},
        {"tier_counts", per_tier_json(p.tier_counts)},
        {"capital_buffer", per_tier_json(p.capital_buffer)},
        {"banking_sector_ggp_fraction", p.banking_sector_ggp_fraction},
        {"liabilities",
         {{"central", profile_json(p.liabilities.central)},
          {"massive", profile_json(p.liabilities.massive)},
          {"big", profile_json(p.liabilities.big)}}},
    };
    doc["shock"] = {
        {"correlation", c.shock.correlation},
        {"beta_a", c.shock.beta_a},
        {"beta_b", c.shock.beta_b},
        {"applies_to", c.shock.applies_to == ShockTarget::AllAssets ? "all_assets" : "external_assets"},
        {"exempt_central", c.shock.exempt_central},
    };
    doc["loss"] = {
        {"deposit_insurance", c.loss.deposit_insurance},
        {"threshold_fraction", c.loss.threshold_fraction},
        {"confidence", c.loss.confidence},
        {"bond_recovery", c.loss.bond_recovery},
    };
    doc["n_scenarios"] = c.n_scenarios;
    doc["seed"] = c.seed;
    doc["grid"] = {{"per_big", c.grid}};
    doc["frontier"] = {{"resolution", c.search.resolution}, {"massive_upper", c.search.massive_upper}};
    if (!c.output_dir.empty())
        doc["output_dir"] = c.output_dir;
    return doc.dump(2) + "\n";
}

}  // namespace clearsim
