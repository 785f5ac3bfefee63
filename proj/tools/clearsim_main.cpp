#include "clearsim/calibration.hpp"
#include "clearsim/config.hpp"
#include "clearsim/error.hpp"
#include "clearsim/frontier.hpp"
#include "clearsim/report.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using namespace clearsim;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitGaps = 3;
constexpr int kExitIo = 4;

struct CommonFlags {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<std::int64_t> scenarios;
    std::string out;
    int threads = 0;
    bool overwrite = false;
};

void add_common(CLI::App* cmd, CommonFlags& f)
{
    cmd->add_option("--config", f.config_path, "JSON run configuration");
    cmd->add_option("--seed", f.seed, "Override the configured seed");
    cmd->add_option("--scenarios", f.scenarios, "Override the number of Monte Carlo scenarios")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--out", f.out, "Output directory (default: a new timestamped directory)");
    cmd->add_option("--threads", f.threads, "Worker threads; 0 uses the OpenMP default")->check(CLI::NonNegativeNumber);
    cmd->add_flag("--overwrite", f.overwrite, "Allow writing into a non-empty output directory");
}

RunConfig resolve_config(const CommonFlags& f)
{
    RunConfig c = f.config_path.empty() ? parse_config("{}") : load_config(f.config_path);
    if (f.seed)
        c.seed = *f.seed;
    if (f.scenarios)
        c.n_scenarios = *f.scenarios;
    if (!f.out.empty())
        c.output_dir = f.out;
    validate(c);
    return c;
}

fs::path prepare_output(const RunConfig& c, const CommonFlags& f, const std::string& command)
{
    fs::path dir;
    if (!c.output_dir.empty()) {
        dir = c.output_dir;
    } else {
        const std::time_t now = std::time(nullptr);
        char stamp[32];
        std::strftime(stamp, sizeof stamp, "%Y%m%d-%H%M%S", std::localtime(&now));
        const fs::path base = fs::path("clearsim-runs") / (command + "-" + stamp);
        dir = base;
        for (int k = 1; fs::exists(dir); ++k)
            dir = base.string() + "-" + std::to_string(k);
    }
    std::error_code ec;
    if (fs::exists(dir, ec) && !fs::is_empty(dir, ec) && !f.overwrite)
        fail(ErrorKind::Io, "output directory '" + dir.string() + "' is not empty; pass --overwrite to reuse it");
    fs::create_directories(dir, ec);
    if (ec)
        fail(ErrorKind::Io, "cannot create output directory '" + dir.string() + "': " + ec.message());
    write_text(dir / "config.json", config_to_json(c));
    return dir;
}

RunOptions run_options(const CommonFlags& f)
{
    RunOptions o;
    o.threads = f.threads;
    return o;
}

int cmd_calibrate(const CommonFlags& flags)
{
    const RunConfig c = resolve_config(flags);
    const auto& p = c.calibration;
    const GalacticNetwork network = build_network(p);
    const fs::path dir = prepare_output(c, flags, "calibrate");
    write_network_summary(dir / "network_summary.csv", network, p);

    const double fraction = manhattan_gdp_fraction(p.manhattan_expenditures, p.us_gdp);
    const double rounded = std::round(fraction * 1e4) / 1e4;
    const ProjectGgp project = ggp_from_project(p.ds1_total_cost, rounded, p.construction_years);
    std::printf("outstanding_debt   %s Q\n", format_number(network.outstanding_debt()).c_str());
    std::printf("ggp                %s Q\n", format_number(network.ggp()).c_str());
    std::printf("bank_count         %lld\n", static_cast<long long>(network.bank_count()));
    std::printf("ds2_total_cost     %s Q\n", format_number(p.ds2_total_cost).c_str());
    std::printf("manhattan_fraction %.4f%%\n", 100.0 * fraction);
    std::printf("project_ggp        %.0f Q total, %.0f Q per year (at %.2f%%)\n", project.total,
                project.annual_average, 100.0 * rounded);
    std::printf("wrote %s\n", (dir / "network_summary.csv").string().c_str());
    return 0;
}

int cmd_simulate(const CommonFlags& flags, bool insurance, double per_massive, double per_big)
{
    RunConfig c = resolve_config(flags);
    if (insurance)
        c.loss.deposit_insurance = true;
    if (!(per_massive >= 0) || !(per_big >= 0))
        fail(ErrorKind::Config, "bailout amounts must be non-negative");
    const GalacticNetwork network = build_network(c.calibration);
    const fs::path dir = prepare_output(c, flags, "simulate");

    const BailoutAllocation bailout{per_massive, per_big};
    const auto t0 = std::chrono::steady_clock::now();
    const SimulationResult r = simulate(network, c.shock, bailout, c.loss, c.n_scenarios, c.seed, run_options(flags));
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    const auto& chosen = c.loss.deposit_insurance ? r.insurance : r.no_insurance;
    const LossSummary s = summarize(r, network, c.loss);
    write_losses(dir / "losses.csv", chosen);
    write_histogram(dir / "histogram.csv", loss_histogram(r.no_insurance, r.insurance, c.loss.ggp));
    write_summary(dir / "summary.csv", s, c.loss.ggp);

    const double g = c.loss.ggp / 100.0;
    std::printf("scenarios %lld, seed %llu, %.1f s\n", static_cast<long long>(c.n_scenarios),
                static_cast<unsigned long long>(c.seed), seconds);
    std::printf("mean loss           %.3f%% of GGP (no insurance), %.3f%% (insurance)\n",
                s.mean_loss_no_insurance / g, s.mean_loss_insurance / g);
    std::printf("below green line    %.4f\n", s.fraction_below_green);
    std::printf("median default frac %.5f above the green line\n", s.median_systemic_default_fraction_above_green);
    std::printf("insurance payout    %.3f%% of GGP\n", s.mean_insurance_payout / g);
    std::printf("wrote %s\n", dir.string().c_str());
    return 0;
}

int cmd_frontier(const CommonFlags& flags, const std::string& which)
{
    const RunConfig c = resolve_config(flags);
    std::vector<Criterion> criteria;
    if (which == "all")
        criteria = {Criterion::Expectation, Criterion::ValueAtRisk, Criterion::AverageValueAtRisk};
    else
        criteria = {parse_criterion(which)};

    const GalacticNetwork network = build_network(c.calibration);
    const fs::path dir = prepare_output(c, flags, "frontier");
    BailoutEvaluator evaluator(network, c.shock, c.loss, c.n_scenarios, c.seed, run_options(flags));

    std::vector<FrontierResult> results;
    std::vector<MinimaRow> minima;
    bool gaps = false;
    for (Criterion cr : criteria) {
        results.push_back(bailout_frontier(evaluator, cr, c.grid, c.search));
        const auto& fr = results.back();
        gaps = gaps || fr.has_gaps();
        if (fr.loss_monotonicity_violations || fr.frontier_monotonicity_violations)
            std::fprintf(stderr, "warning: %s: %lld loss and %lld frontier monotonicity violations\n",
                         std::string(criterion_name(cr)).c_str(),
                         static_cast<long long>(fr.loss_monotonicity_violations),
                         static_cast<long long>(fr.frontier_monotonicity_violations));
        minima.push_back(minima_row(fr, network));
    }
    write_frontier(dir / "frontier.csv", results, network, c.loss.ggp);
    write_minima(dir / "minima.csv", minima);

    std::printf("%-12s %12s %10s %10s %8s\n", "criterion", "per_massive", "per_big", "total", "% GGP");
    for (const auto& m : minima) {
        const std::string name(criterion_name(m.criterion));
        if (m.attainable)
            std::printf("%-12s %12.3f %10.3f %10.1f %7.1f%%\n", name.c_str(), m.minimum.per_massive,
                        m.minimum.per_big, m.minimum.total, 100.0 * m.minimum.ggp_fraction);
        else
            std::printf("%-12s %12s\n", name.c_str(), "unattainable");
    }
    std::printf("wrote %s\n", dir.string().c_str());
    if (gaps) {
        std::fprintf(stderr, "frontier has unattainable grid points\n");
        return kExitGaps;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Interbank contagion and bailout simulator"};
    app.require_subcommand(1);

    CommonFlags flags;

    auto* calibrate = app.add_subcommand("calibrate", "Build the network and write network_summary.csv");
    add_common(calibrate, flags);

    bool insurance = false;
    double per_massive = 0;
    double per_big = 0;
    auto* simulate_cmd = app.add_subcommand("simulate", "Monte Carlo loss distribution");
    add_common(simulate_cmd, flags);
    simulate_cmd->add_flag("--insurance", insurance, "Report losses with deposit insurance");
    simulate_cmd->add_option("--bailout-massive", per_massive, "Cash injected into every massive bank (Q)");
    simulate_cmd->add_option("--bailout-big", per_big, "Cash injected into every big bank (Q)");

    std::string criterion = "all";
    auto* frontier = app.add_subcommand("frontier", "Minimal bailout frontier per criterion");
    add_common(frontier, flags);
    frontier->add_option("--criterion", criterion, "expectation, var, avar or all")
        ->check(CLI::IsMember({"expectation", "var", "avar", "all"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitConfig;
    }

    try {
        if (calibrate->parsed())
            return cmd_calibrate(flags);
        if (simulate_cmd->parsed())
            return cmd_simulate(flags, insurance, per_massive, per_big);
        return cmd_frontier(flags, criterion);
    } catch (const Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        switch (e.kind()) {
        case ErrorKind::Config:
            return kExitConfig;
        case ErrorKind::Io:
            return kExitIo;
        default:
            return 1;
        }
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}
