#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>

namespace clearsim {

/// Amounts are in quintillion galactic dollars (Q) throughout.
using Money = double;

inline constexpr Money kQuadrillion = 1e-3;  // 1 quadrillion expressed in Q
inline constexpr Money kSextillion = 1e3;    // 1 sextillion expressed in Q

enum class Tier : std::uint8_t { Central = 0, Massive = 1, Big = 2 };

inline constexpr std::size_t kTierCount = 3;
inline constexpr std::array<Tier, kTierCount> kTiers{Tier::Central, Tier::Massive, Tier::Big};

constexpr std::size_t index_of(Tier t) noexcept { return static_cast<std::size_t>(t); }
std::string_view tier_name(Tier t) noexcept;

template <typename T>
using PerTier = std::array<T, kTierCount>;

/// What one bank of a tier owes. The interbank fields are totals owed to the
/// whole counterparty tier, split evenly among its members (excluding the
/// debtor itself for same-tier debt).
struct LiabilityProfile {
    Money to_central = 0;
    Money to_massive = 0;
    Money to_big = 0;
    Money external = 0;

    Money to_tier(Tier t) const noexcept;
};

Money total_obligation(const LiabilityProfile& profile) noexcept;

struct BalanceSheet {
    Money external_assets = 0;
    Money interbank_claims_face = 0;
    Money bond_holdings_face = 0;
    Money deposits = 0;
    Money bailout_injection = 0;

    Money total_assets() const noexcept
    {
        return external_assets + interbank_claims_face + bond_holdings_face + bailout_injection;
    }
};

/// Fractional-reserve rule: assets are four times deposits.
Money deposits_from_assets(Money total_assets);

/// Everything needed to assemble a network; per-tier values apply to every
/// bank of that tier.
struct NetworkSpec {
    PerTier<std::int64_t> counts{1, 175, 17325};
    PerTier<LiabilityProfile> profiles{};
    PerTier<Money> external_assets{};
    PerTier<Money> bond_holdings{};
    Money ggp = 0;
    Money outstanding_debt = 0;
};

/// Tier-structured interbank network. Immutable after construction; every
/// bank of a tier shares one balance sheet, so storage is O(tiers).
class GalacticNetwork {
public:
    explicit GalacticNetwork(const NetworkSpec& spec);

    std::int64_t count(Tier t) const noexcept { return counts_[index_of(t)]; }
    const PerTier<std::int64_t>& counts() const noexcept { return counts_; }
    std::int64_t bank_count() const noexcept { return counts_[0] + counts_[1] + counts_[2]; }

    const LiabilityProfile& profile(Tier t) const noexcept { return profiles_[index_of(t)]; }
    Money obligation(Tier t) const noexcept { return obligations_[index_of(t)]; }

    /// Per-bank total owed by a bank of `from` to the whole tier `to`.
    Money liability(Tier from, Tier to) const noexcept { return profiles_[index_of(from)].to_tier(to); }

    const BalanceSheet& sheet(Tier t) const noexcept { return sheets_[index_of(t)]; }
    const BalanceSheet& sheet(Tier t, std::int64_t index_in_tier) const;

    /// Global bank order is Central, then Massive, then Big.
    std::int64_t first_bank(Tier t) const noexcept;
    Tier tier_of(std::int64_t bank) const;

    Money ggp() const noexcept { return ggp_; }
    Money outstanding_debt() const noexcept { return outstanding_debt_; }

    Money total_interbank_claims() const noexcept;
    Money total_interbank_liabilities() const noexcept;

private:
    PerTier<std::int64_t> counts_;
    PerTier<LiabilityProfile> profiles_;
    PerTier<Money> obligations_;
    PerTier<BalanceSheet> sheets_;
    Money ggp_;
    Money outstanding_debt_;
};

/// Face value of the interbank claims held by one bank of `tier`:
/// total inflow owed to the tier divided by its member count.
Money interbank_claims_face(const GalacticNetwork& network, Tier tier);
Money interbank_claims_face(const PerTier<std::int64_t>& counts,
                            const PerTier<LiabilityProfile>& profiles, Tier tier);

}  // namespace clearsim
