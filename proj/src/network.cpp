#include "clearsim/network.hpp"

#include "clearsim/error.hpp"

#include <cmath>
#include <string>

namespace clearsim {

std::string_view tier_name(Tier t) noexcept
{
    switch (t) {
    case Tier::Central: return "central";
    case Tier::Massive: return "massive";
    case Tier::Big: return "big";
    }
    return "unknown";
}

Money LiabilityProfile::to_tier(Tier t) const noexcept
{
    switch (t) {
    case Tier::Central: return to_central;
    case Tier::Massive: return to_massive;
    case Tier::Big: return to_big;
    }
    return 0;
}

Money total_obligation(const LiabilityProfile& profile) noexcept
{
    return profile.to_central + profile.to_massive + profile.to_big + profile.external;
}

Money deposits_from_assets(Money total_assets)
{
    if (!(total_assets >= 0))
        fail(ErrorKind::Domain, "deposits_from_assets: total assets must be non-negative");
    return total_assets / 4.0;
}

Money interbank_claims_face(const PerTier<std::int64_t>& counts,
                            const PerTier<LiabilityProfile>& profiles, Tier tier)
{
    const auto d = index_of(tier);
    if (counts[d] <= 0)
        fail(ErrorKind::Degenerate, std::string("tier '") + std::string(tier_name(tier)) + "' has no banks");
    Money inflow = 0;
    for (Tier c : kTiers)
        inflow += static_cast<double>(counts[index_of(c)]) * profiles[index_of(c)].to_tier(tier);
    return inflow / static_cast<double>(counts[d]);
}

Money interbank_claims_face(const GalacticNetwork& network, Tier tier)
{
    return network.sheet(tier).interbank_claims_face;
}

namespace {

void check_non_negative(Money v, const char* what, Tier t)
{
    if (!(v >= 0) || !std::isfinite(v))
        fail(ErrorKind::Input, std::string(what) + " for tier '" + std::string(tier_name(t)) +
                                   "' must be finite and non-negative");
}

}  // namespace

GalacticNetwork::GalacticNetwork(const NetworkSpec& spec)
    : counts_(spec.counts), profiles_(spec.profiles), ggp_(spec.ggp), outstanding_debt_(spec.outstanding_debt)
{
    for (Tier t : kTiers) {
        const auto i = index_of(t);
        if (counts_[i] <= 0)
            fail(ErrorKind::Degenerate, std::string("tier '") + std::string(tier_name(t)) + "' has no banks");
        const auto& p = profiles_[i];
        check_non_negative(p.to_central, "liability to central", t);
        check_non_negative(p.to_massive, "liability to massive", t);
        check_non_negative(p.to_big, "liability to big", t);
        check_non_negative(p.external, "external obligation", t);
        check_non_negative(spec.external_assets[i], "external assets", t);
        check_non_negative(spec.bond_holdings[i], "bond holdings", t);
        if (t != Tier::Central && p.external > 0)
            fail(ErrorKind::Input, "only the central tier may owe outside the financial system");
        if (counts_[i] == 1 && p.to_tier(t) > 0)
            fail(ErrorKind::Degenerate, std::string("tier '") + std::string(tier_name(t)) +
                                            "' has a single bank but owes to its own tier");
    }
    if (!(spec.ggp >= 0) || !(spec.outstanding_debt >= 0))
        fail(ErrorKind::Input, "ggp and outstanding debt must be non-negative");

    for (Tier t : kTiers) {
        const auto i = index_of(t);
        obligations_[i] = total_obligation(profiles_[i]);
        auto& s = sheets_[i];
        s.external_assets = spec.external_assets[i];
        s.interbank_claims_face = interbank_claims_face(counts_, profiles_, t);
        s.bond_holdings_face = spec.bond_holdings[i];
        s.deposits = deposits_from_assets(s.external_assets + s.interbank_claims_face + s.bond_holdings_face);
    }
}

const BalanceSheet& GalacticNetwork::sheet(Tier t, std::int64_t index_in_tier) const
{
    if (index_in_tier < 0 || index_in_tier >= count(t))
        fail(ErrorKind::Input, "bank index out of range for tier '" + std::string(tier_name(t)) + "'");
    return sheets_[index_of(t)];
}

std::int64_t GalacticNetwork::first_bank(Tier t) const noexcept
{
    std::int64_t first = 0;
    for (Tier u : kTiers) {
        if (u == t)
            break;
        first += counts_[index_of(u)];
    }
    return first;
}

Tier GalacticNetwork::tier_of(std::int64_t bank) const
{
    if (bank < 0 || bank >= bank_count())
        fail(ErrorKind::Input, "bank index out of range");
    for (Tier t : kTiers) {
        if (bank < counts_[index_of(t)])
            return t;
        bank -= counts_[index_of(t)];
    }
    return Tier::Big;
}

Money GalacticNetwork::total_interbank_claims() const noexcept
{
    Money total = 0;
    for (Tier t : kTiers)
        total += static_cast<double>(count(t)) * sheet(t).interbank_claims_face;
    return total;
}

Money GalacticNetwork::total_interbank_liabilities() const noexcept
{
    Money total = 0;
    for (Tier t : kTiers) {
        const auto& p = profile(t);
        total += static_cast<double>(count(t)) * (p.to_central + p.to_massive + p.to_big);
    }
    return total;
}

}  // namespace clearsim
