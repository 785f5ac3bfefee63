#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "clearsim/calibration.hpp"
#include "clearsim/error.hpp"
#include "clearsim/risk.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

using namespace clearsim;

namespace {

std::vector<LossSample> from_losses(const std::vector<double>& losses)
{
    std::vector<LossSample> out;
    for (std::size_t i = 0; i < losses.size(); ++i) {
        LossSample s;
        s.scenario_index = static_cast<std::int64_t>(i);
        s.real_economy_loss = losses[i];
        out.push_back(s);
    }
    return out;
}

struct Fixture {
    GalacticNetwork network = build_network(CalibrationParams{});
    ShockParams shock;
    LossConfig config;

    Fixture() { shock.n_banks = network.bank_count(); }
};

}  // namespace

TEST_CASE("risk measures on hand examples")
{
    std::vector<double> ladder;
    for (int k = 1; k <= 10; ++k)
        ladder.push_back(0.2 * k);
    const auto s = from_losses(ladder);
    CHECK(average_var(s, 0.10) == doctest::Approx(2.0));
    CHECK(expected_loss(s) == doctest::Approx(1.1));
    CHECK(empirical_quantile(s, 0.5) == doctest::Approx(1.0));
    CHECK(empirical_quantile(s, 0.9) == doctest::Approx(1.8));

    const auto flat = from_losses(std::vector<double>(17, 3.25));
    CHECK(expected_loss(flat) == doctest::Approx(3.25));
    CHECK(average_var(flat, 0.1) == doctest::Approx(3.25));

    std::vector<double> twenty(20, 1.0);
    twenty[4] = 5.0;
    twenty[11] = 7.0;
    CHECK(exceedance_probability(from_losses(twenty), 2.0) == doctest::Approx(0.10));
    CHECK(exceedance_probability(from_losses(twenty), 5.0) == doctest::Approx(0.05));

    const std::vector<LossSample> none;
    CHECK_THROWS_AS(expected_loss(none), Error);
    CHECK_THROWS_AS(exceedance_probability(none, 1.0), Error);
    CHECK_THROWS_AS(average_var(none, 0.1), Error);
}

TEST_CASE("tail count is ceil(c N) within [1, N]")
{
    CHECK(tail_count(10, 0.10) == 1);
    CHECK(tail_count(10000, 0.10) == 1000);
    CHECK(tail_count(101, 0.10) == 11);
    CHECK(tail_count(5, 0.01) == 1);
    CHECK(tail_count(3, 0.999) == 3);
}

TEST_CASE("average VaR breaks ties by scenario index")
{
    auto s = from_losses({4, 9, 9, 1});
    s[1].scenario_index = 7;
    s[2].scenario_index = 2;
    CHECK(average_var(s, 0.25) == 9.0);
    CHECK(average_var(s, 0.5) == 9.0);
    CHECK(average_var(s, 0.75) == doctest::Approx(22.0 / 3));
}

TEST_CASE("criteria")
{
    LossConfig c;
    const Money thr = c.threshold();
    CHECK(thr == doctest::Approx(60.9));

    const auto zeros = from_losses(std::vector<double>(50, 0.0));
    for (Criterion k : {Criterion::Expectation, Criterion::ValueAtRisk, Criterion::AverageValueAtRisk})
        CHECK(criterion_satisfied(zeros, k, c));

    const auto two_percent = from_losses(std::vector<double>(50, 0.02 * c.ggp));
    for (Criterion k : {Criterion::Expectation, Criterion::ValueAtRisk, Criterion::AverageValueAtRisk})
        CHECK_FALSE(criterion_satisfied(two_percent, k, c));

    // Mean 0.9% of GGP, worst decile at 3%.
    std::vector<double> mixed(100, 0.06 / 9 * c.ggp);
    for (int i = 0; i < 10; ++i)
        mixed[static_cast<std::size_t>(i * 10)] = 0.03 * c.ggp;
    const auto m = from_losses(mixed);
    CHECK(expected_loss(m) == doctest::Approx(0.009 * c.ggp));
    CHECK(criterion_satisfied(m, Criterion::Expectation, c));
    CHECK_FALSE(criterion_satisfied(m, Criterion::AverageValueAtRisk, c));
    CHECK_FALSE(criterion_satisfied(m, Criterion::ValueAtRisk, c));  // exactly 10%, strict

    CHECK(parse_criterion("avar") == Criterion::AverageValueAtRisk);
    CHECK(criterion_name(Criterion::ValueAtRisk) == "var");
    CHECK_THROWS_AS(parse_criterion("cvar"), Error);
}

TEST_CASE("average VaR dominates the matching quantile")
{
    std::mt19937_64 rng(8);
    std::lognormal_distribution<double> d(0.0, 1.5);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<double> v(200 + trial * 7);
        for (auto& x : v)
            x = d(rng);
        const auto s = from_losses(v);
        for (double c : {0.01, 0.05, 0.1, 0.25})
            CHECK(average_var(s, c) >= empirical_quantile(s, 1 - c));
        CHECK(average_var(s, 0.1) >= expected_loss(s));
    }
}

TEST_CASE("loss accounting on a central-only toy network")
{
    NetworkSpec spec;
    spec.counts = {1, 1, 1};
    spec.profiles = {LiabilityProfile{0, 0, 0, 10}, LiabilityProfile{}, LiabilityProfile{}};
    const GalacticNetwork net(spec);
    REQUIRE(net.sheet(Tier::Central).deposits == 0.0);
    const std::vector<Money> assets{4, 0, 0};
    const auto outcome = clearing_compressed(net, assets);
    LossConfig config;
    const auto s = real_economy_loss(outcome, net, config);
    CHECK(s.real_economy_loss == doctest::Approx(6.0));
    CHECK(s.central_shortfall == doctest::Approx(6.0));
    CHECK(s.n_defaults == 1);

    ClearingOutcome wrong;
    CHECK_THROWS_AS(real_economy_loss(wrong, net, config), Error);
}

TEST_CASE("deposits of defaulted banks")
{
    NetworkSpec spec;
    spec.counts = {1, 2, 2};
    spec.profiles = {LiabilityProfile{0, 0, 0, 10}, LiabilityProfile{4, 0, 0, 0}, LiabilityProfile{}};
    spec.external_assets = {8, 4, 1};
    const GalacticNetwork net(spec);
    // Central receives 3 + 4 and holds 4: pays 10. One massive bank short.
    const std::vector<Money> assets{4, 3, 4, 1, 1};
    const auto outcome = clearing_compressed(net, assets);
    LossConfig plain;
    LossConfig insured;
    insured.deposit_insurance = true;
    const auto a = real_economy_loss(outcome, net, plain);
    const auto b = real_economy_loss(outcome, net, insured);
    CHECK(a.real_economy_loss == doctest::Approx(net.sheet(Tier::Massive).deposits));
    CHECK(a.insurance_payout == 0.0);
    CHECK(b.real_economy_loss == doctest::Approx(0.0));
    CHECK(b.insurance_payout == doctest::Approx(net.sheet(Tier::Massive).deposits));
    CHECK(a.defaults[index_of(Tier::Massive)] == 1);
}

TEST_CASE("green line")
{
    CHECK(green_line_loss(515.5, 0.0) == 515.5);
    CHECK(green_line_loss(515.5, 0.0) / 6090.0 == doctest::Approx(0.0846).epsilon(1e-3));
    CHECK(green_line_loss(100, 0.25) == 75.0);
}

TEST_CASE("parallel Monte Carlo matches the serial reference")
{
    const Fixture f;
    const BailoutAllocation bailout{0.5, 0.001};
    const auto serial = run_monte_carlo_serial(f.network, f.shock, bailout, f.config, 24, 5);
    RunOptions opts;
    opts.threads = 4;
    const auto parallel = run_monte_carlo(f.network, f.shock, bailout, f.config, 24, 5, opts);
    REQUIRE(serial.size() == parallel.size());
    for (std::size_t i = 0; i < serial.size(); ++i) {
        CHECK(parallel[i].scenario_index == static_cast<std::int64_t>(i));
        CHECK(parallel[i].real_economy_loss == doctest::Approx(serial[i].real_economy_loss).epsilon(1e-9));
        CHECK(parallel[i].central_shortfall == doctest::Approx(serial[i].central_shortfall).epsilon(1e-6));
        CHECK(parallel[i].n_defaults == serial[i].n_defaults);
    }
}

TEST_CASE("thread count does not change results")
{
    const Fixture f;
    RunOptions one;
    one.threads = 1;
    RunOptions many;
    many.threads = 8;
    const auto a = run_monte_carlo(f.network, f.shock, {}, f.config, 40, 123, one);
    const auto b = run_monte_carlo(f.network, f.shock, {}, f.config, 40, 123, many);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].real_economy_loss == b[i].real_economy_loss);
        CHECK(a[i].n_defaults == b[i].n_defaults);
    }
}

TEST_CASE("a bailout covering every obligation removes systemic defaults")
{
    const Fixture f;
    const BailoutAllocation huge{f.network.obligation(Tier::Massive), f.network.obligation(Tier::Big)};
    for (const auto& s : run_monte_carlo(f.network, f.shock, huge, f.config, 16, 3)) {
        CHECK(s.defaults[index_of(Tier::Massive)] == 0);
        CHECK(s.defaults[index_of(Tier::Big)] == 0);
        const Money central_deposits = s.defaults[0] ? f.network.sheet(Tier::Central).deposits : 0.0;
        CHECK(s.real_economy_loss == doctest::Approx(s.central_shortfall + central_deposits));
    }
}

TEST_CASE("insurance never raises a scenario's loss")
{
    Fixture f;
    LossConfig insured = f.config;
    insured.deposit_insurance = true;
    const auto a = run_monte_carlo(f.network, f.shock, {}, f.config, 30, 17);
    const auto b = run_monte_carlo(f.network, f.shock, {}, insured, 30, 17);
    for (std::size_t i = 0; i < a.size(); ++i)
        CHECK(b[i].real_economy_loss <= a[i].real_economy_loss);
}

TEST_CASE("loss is non-increasing in the bailout")
{
    const Fixture f;
    const auto n = 12;
    std::vector<LossSample> previous;
    for (double m : {0.0, 0.25, 0.5, 1.0, 2.0, 4.0}) {
        const auto cur = run_monte_carlo(f.network, f.shock, {m, 0.002 * m}, f.config, n, 71);
        if (!previous.empty())
            for (std::size_t i = 0; i < cur.size(); ++i)
                CHECK(cur[i].real_economy_loss <= previous[i].real_economy_loss + 1e-9);
        previous = cur;
    }
}

TEST_CASE("loss config validation")
{
    LossConfig c;
    c.threshold_fraction = 0;
    CHECK_THROWS_AS(validate(c), Error);
    c = {};
    c.confidence = 1;
    CHECK_THROWS_AS(validate(c), Error);
    c = {};
    c.bond_recovery = 1.5;
    CHECK_THROWS_AS(validate(c), Error);
}
