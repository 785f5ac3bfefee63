#include "clearsim/report.hpp"

#include "clearsim/error.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace clearsim {

namespace {

class CsvFile {
public:
    CsvFile(const std::filesystem::path& path, const std::string& units) : path_(path), out_(path, std::ios::binary)
    {
        if (!out_)
            fail(ErrorKind::Io, "cannot open '" + path.string() + "' for writing");
        out_ << "# units: " << units << '\n';
    }

    CsvFile& cell(const std::string& text)
    {
        if (!first_)
            out_ << ',';
        out_ << text;
        first_ = false;
        return *this;
    }
    CsvFile& cell(double v) { return cell(format_number(v)); }
    CsvFile& cell(std::int64_t v) { return cell(std::to_string(v)); }

    void end_row()
    {
        out_ << '\n';
        first_ = true;
    }

    void close()
    {
        out_.close();
        if (!out_)
            fail(ErrorKind::Io, "failed writing '" + path_.string() + "'");
    }

private:
    std::filesystem::path path_;
    std::ofstream out_;
    bool first_ = true;
};

double lower_median(std::vector<double> v)
{
    if (v.empty())
        return std::nan("");
    const auto mid = v.begin() + static_cast<std::ptrdiff_t>((v.size() - 1) / 2);
    std::nth_element(v.begin(), mid, v.end());
    return *mid;
}

}  // namespace

std::string format_number(double value)
{
    if (std::isnan(value))
        return "nan";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

SimulationResult simulate(const GalacticNetwork& network, const ShockParams& shock, const BailoutAllocation& bailout,
                          const LossConfig& config, std::int64_t n_scenarios, std::uint64_t seed,
                          const RunOptions& options)
{
    SimulationResult r;
    r.outcomes = simulate_outcomes(network, shock, bailout, config.bond_recovery, n_scenarios, seed, options);
    LossConfig off = config;
    off.deposit_insurance = false;
    LossConfig on = config;
    on.deposit_insurance = true;
    r.no_insurance.reserve(r.outcomes.size());
    r.insurance.reserve(r.outcomes.size());
    for (const auto& o : r.outcomes) {
        r.no_insurance.push_back(to_loss_sample(o, off));
        r.insurance.push_back(to_loss_sample(o, on));
    }
    return r;
}

LossSummary summarize(const SimulationResult& result, const GalacticNetwork& network, const LossConfig& config)
{
    const auto& plain = result.no_insurance;
    const auto& insured = result.insurance;
    if (plain.empty() || plain.size() != insured.size())
        fail(ErrorKind::Input, "summarize: need paired, non-empty sample sets");

    LossSummary s;
    s.green_line = green_line_loss(network.outstanding_debt(), config.bond_recovery);
    s.threshold = config.threshold();
    s.scenarios = static_cast<std::int64_t>(plain.size());
    s.mean_loss_no_insurance = expected_loss(plain);
    s.mean_loss_insurance = expected_loss(insured);
    s.median_loss_no_insurance = empirical_quantile(plain, 0.5);
    s.quantile_90_no_insurance = empirical_quantile(plain, 0.9);
    s.quantile_99_no_insurance = empirical_quantile(plain, 0.99);
    s.avar_no_insurance = average_var(plain, config.confidence);
    s.exceedance_no_insurance = exceedance_probability(plain, s.threshold);

    const double systemic = static_cast<double>(network.count(Tier::Massive) + network.count(Tier::Big));
    std::vector<double> above_fraction;
    std::int64_t below = 0;
    double defaults = 0;
    Money central = 0;
    Money payout = 0;
    Money payout_below = 0;
    Money payout_above = 0;
    for (std::size_t i = 0; i < plain.size(); ++i) {
        const auto& p = plain[i];
        const Money paid = insured[i].insurance_payout;
        defaults += static_cast<double>(p.n_defaults);
        central += p.central_shortfall;
        payout += paid;
        if (p.real_economy_loss <= s.green_line) {
            ++below;
            payout_below += paid;
        } else {
            payout_above += paid;
            const auto d = p.defaults[index_of(Tier::Massive)] + p.defaults[index_of(Tier::Big)];
            above_fraction.push_back(static_cast<double>(d) / systemic);
        }
    }
    const double n = static_cast<double>(plain.size());
    const auto above = static_cast<std::int64_t>(plain.size()) - below;
    s.fraction_below_green = static_cast<double>(below) / n;
    s.median_systemic_default_fraction_above_green = lower_median(std::move(above_fraction));
    s.mean_defaults = defaults / n;
    s.mean_central_shortfall = central / n;
    s.mean_insurance_payout = payout / n;
    s.mean_payout_below_green = below > 0 ? payout_below / static_cast<double>(below) : std::nan("");
    s.mean_payout_above_green = above > 0 ? payout_above / static_cast<double>(above) : std::nan("");
    return s;
}

Histogram loss_histogram(std::span<const LossSample> no_insurance, std::span<const LossSample> insurance, Money ggp,
                         int bins)
{
    if (bins < 1)
        fail(ErrorKind::Input, "loss_histogram: need at least one bin");
    if (!(ggp > 0))
        fail(ErrorKind::Input, "loss_histogram: ggp must be positive");
    double top = 0;
    for (const auto& s : no_insurance)
        top = std::max(top, s.real_economy_loss);
    for (const auto& s : insurance)
        top = std::max(top, s.real_economy_loss);
    top = top / ggp * 100.0;
    if (!(top > 0))
        top = 1.0;

    Histogram h;
    h.edges.resize(static_cast<std::size_t>(bins) + 1);
    for (int i = 0; i <= bins; ++i)
        h.edges[static_cast<std::size_t>(i)] = top * i / bins;
    auto fill = [&](std::span<const LossSample> samples, std::vector<std::int64_t>& counts) {
        counts.assign(static_cast<std::size_t>(bins), 0);
        for (const auto& s : samples) {
            const double pct = s.real_economy_loss / ggp * 100.0;
            auto b = static_cast<int>(std::floor(pct / top * bins));
            b = std::clamp(b, 0, bins - 1);
            ++counts[static_cast<std::size_t>(b)];
        }
    };
    fill(no_insurance, h.counts_no_insurance);
    fill(insurance, h.counts_insurance);
    return h;
}

MinimaRow minima_row(const FrontierResult& frontier, const GalacticNetwork& network)
{
    MinimaRow row;
    row.criterion = frontier.criterion;
    for (const auto& p : frontier.points)
        row.attainable = row.attainable || p.attainable();
    if (row.attainable)
        row.minimum = minimal_total_bailout(frontier.points, network);
    return row;
}

void write_network_summary(const std::filesystem::path& path, const GalacticNetwork& network,
                           const CalibrationParams& params)
{
    CsvFile f(path, "money columns in quintillions (Q) per bank; counts in banks");
    f.cell("tier").cell("count").cell("total_obligation").cell("owed_to_central").cell("owed_to_massive");
    f.cell("owed_to_big").cell("owed_external").cell("interbank_claims_face").cell("bond_holdings_face");
    f.cell("external_assets").cell("deposits").cell("capital_buffer");
    f.end_row();
    for (Tier t : kTiers) {
        const auto& p = network.profile(t);
        const auto& sheet = network.sheet(t);
        f.cell(std::string(tier_name(t))).cell(network.count(t)).cell(network.obligation(t));
        f.cell(p.to_central).cell(p.to_massive).cell(p.to_big).cell(p.external);
        f.cell(sheet.interbank_claims_face).cell(sheet.bond_holdings_face).cell(sheet.external_assets);
        f.cell(sheet.deposits).cell(params.capital_buffer[index_of(t)]);
        f.end_row();
    }
    f.close();
}

void write_losses(const std::filesystem::path& path, std::span<const LossSample> samples)
{
    CsvFile f(path, "money columns in quintillions (Q); defaults in banks");
    f.cell("scenario_index").cell("real_economy_loss").cell("insurance_payout").cell("n_defaults");
    f.cell("central_shortfall").cell("defaults_central").cell("defaults_massive").cell("defaults_big");
    f.end_row();
    for (const auto& s : samples) {
        f.cell(s.scenario_index).cell(s.real_economy_loss).cell(s.insurance_payout).cell(s.n_defaults);
        f.cell(s.central_shortfall);
        for (Tier t : kTiers)
            f.cell(s.defaults[index_of(t)]);
        f.end_row();
    }
    f.close();
}

void write_histogram(const std::filesystem::path& path, const Histogram& h)
{
    CsvFile f(path, "bin edges in percent of GGP; counts in scenarios");
    f.cell("bin").cell("lower_pct_ggp").cell("upper_pct_ggp").cell("count_no_insurance").cell("count_insurance");
    f.end_row();
    for (std::size_t i = 0; i + 1 < h.edges.size(); ++i) {
        f.cell(static_cast<std::int64_t>(i)).cell(h.edges[i]).cell(h.edges[i + 1]);
        f.cell(h.counts_no_insurance[i]).cell(h.counts_insurance[i]);
        f.end_row();
    }
    f.close();
}

void write_summary(const std::filesystem::path& path, const LossSummary& s, Money ggp)
{
    CsvFile f(path, "value in quintillions (Q) unless the metric is a fraction or count; ggp_fraction = value / GGP");
    f.cell("metric").cell("value").cell("ggp_fraction");
    f.end_row();
    auto money = [&](const char* name, Money v) {
        f.cell(name).cell(v).cell(v / ggp);
        f.end_row();
    };
    auto plain = [&](const char* name, double v) {
        f.cell(name).cell(v).cell("");
        f.end_row();
    };
    money("green_line", s.green_line);
    money("threshold", s.threshold);
    plain("scenarios", static_cast<double>(s.scenarios));
    money("mean_loss_no_insurance", s.mean_loss_no_insurance);
    money("mean_loss_insurance", s.mean_loss_insurance);
    money("median_loss_no_insurance", s.median_loss_no_insurance);
    money("quantile_90_no_insurance", s.quantile_90_no_insurance);
    money("quantile_99_no_insurance", s.quantile_99_no_insurance);
    money("avar_no_insurance", s.avar_no_insurance);
    plain("exceedance_no_insurance", s.exceedance_no_insurance);
    plain("fraction_below_green_line", s.fraction_below_green);
    plain("median_systemic_default_fraction_above_green", s.median_systemic_default_fraction_above_green);
    plain("mean_defaults", s.mean_defaults);
    money("mean_central_shortfall", s.mean_central_shortfall);
    money("mean_insurance_payout", s.mean_insurance_payout);
    money("mean_payout_below_green", s.mean_payout_below_green);
    money("mean_payout_above_green", s.mean_payout_above_green);
    f.close();
}

void write_frontier(const std::filesystem::path& path, std::span<const FrontierResult> frontiers,
                    const GalacticNetwork& network, Money ggp)
{
    CsvFile f(path, "per-bank injections and totals in quintillions (Q); empty per_massive = unattainable");
    f.cell("criterion").cell("per_big").cell("minimal_per_massive").cell("total").cell("ggp_fraction");
    f.end_row();
    for (const auto& fr : frontiers) {
        for (const auto& p : fr.points) {
            f.cell(std::string(criterion_name(fr.criterion))).cell(p.per_big);
            if (p.attainable()) {
                const BailoutAllocation a{*p.minimal_per_massive, p.per_big};
                const Money total = a.total(network);
                f.cell(*p.minimal_per_massive).cell(total).cell(total / ggp);
            } else {
                f.cell("").cell("").cell("");
            }
            f.end_row();
        }
    }
    f.close();
}

void write_minima(const std::filesystem::path& path, std::span<const MinimaRow> rows)
{
    CsvFile f(path, "per-bank injections and totals in quintillions (Q)");
    f.cell("criterion").cell("per_massive").cell("per_big").cell("total").cell("ggp_fraction");
    f.end_row();
    for (const auto& r : rows) {
        f.cell(std::string(criterion_name(r.criterion)));
        if (r.attainable)
            f.cell(r.minimum.per_massive).cell(r.minimum.per_big).cell(r.minimum.total).cell(r.minimum.ggp_fraction);
        else
            f.cell("").cell("").cell("").cell("");
        f.end_row();
    }
    f.close();
}

void write_text(const std::filesystem::path& path, const std::string& text)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        fail(ErrorKind::Io, "cannot open '" + path.string() + "' for writing");
    out << text;
    out.close();
    if (!out)
        fail(ErrorKind::Io, "failed writing '" + path.string() + "'");
}

}  // namespace clearsim
