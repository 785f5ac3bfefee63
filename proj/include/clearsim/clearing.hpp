#pragma once

#include "clearsim/network.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace clearsim {

struct ClearingOptions {
    /// Stop once the sup-norm change of the payment vector is at most
    /// tolerance x max(total obligation).
    double tolerance = 1e-9;
    /// A bank is in default when its shortfall exceeds this many Q.
    double default_threshold = 1e-6;
    std::int64_t max_iterations = 1'000'000;
};

/// Arbitrary small interbank network; entry (i, j) of `liabilities` is the
/// face amount bank i owes bank j.
struct DenseNetwork {
    std::size_t n = 0;
    std::vector<Money> liabilities;  // row-major n x n
    std::vector<Money> external_obligation;
    std::vector<Money> assets;

    explicit DenseNetwork(std::size_t banks = 0)
        : n(banks), liabilities(banks * banks, 0.0), external_obligation(banks, 0.0), assets(banks, 0.0)
    {
    }

    Money& owed(std::size_t from, std::size_t to) { return liabilities[from * n + to]; }
    Money owed(std::size_t from, std::size_t to) const { return liabilities[from * n + to]; }

    std::vector<Money> total_obligations() const;
    void validate() const;
};

struct ClearingOutcome {
    std::vector<Money> payments;
    std::vector<std::uint8_t> defaulted;
    std::vector<Money> shortfall;
    Money external_paid = 0;
    std::int64_t iterations = 0;

    std::int64_t default_count() const;
};

/// Greatest clearing vector by Picard iteration from the obligation vector.
ClearingOutcome clearing_dense(const DenseNetwork& network, const ClearingOptions& options = {});

/// Least clearing vector by Picard iteration from zero.
ClearingOutcome least_clearing_vector(const DenseNetwork& network, const ClearingOptions& options = {});

/// Bank-level expansion of a tier network with the given per-bank assets.
DenseNetwork expand_to_dense(const GalacticNetwork& network, std::span<const Money> assets);

/// Ascending copy of one tier's asset values with sums over 64-element
/// blocks, so the sum of the k smallest values costs O(64).
class SortedAssets {
public:
    static constexpr std::size_t kBlock = 64;

    void assign(std::span<const Money> values);

    std::size_t size() const noexcept { return values_.size(); }
    std::span<const Money> values() const noexcept { return values_; }
    Money prefix_sum(std::size_t k) const noexcept;

private:
    std::vector<Money> values_;
    std::vector<Money> block_prefix_;
};

/// Tier-level coefficients of the clearing map. With tier payment sums S,
/// a bank of tier d with assets a pays
///     min(pbar_d, (a + W_d) / (1 + k_d)),
///     W_d = shift_d + sum_{c != d} S_c g(c -> d) + k_d S_d,
/// where g(c -> d) = l(c -> d) / (pbar_c |d|) and k_d = l(d -> d) / (pbar_d (|d| - 1)).
/// The same-tier term is solved exactly, leaving a fixed point in three scalars.
struct TierTopology {
    PerTier<std::int64_t> counts{};
    PerTier<Money> obligation{};
    PerTier<Money> external_share{};
    PerTier<double> self_coupling{};
    PerTier<PerTier<double>> cross{};  // cross[c][d] = g(c -> d)
    PerTier<Money> deposits{};
    Money max_obligation = 0;

    explicit TierTopology(const GalacticNetwork& network);

    Money payment(Tier t, Money assets, Money w) const noexcept;
};

enum class ClearingStart { Greatest, Least };

struct TierSolution {
    PerTier<Money> w{};
    PerTier<Money> payment_sum{};
    PerTier<std::int64_t> defaults{};
    Money external_paid = 0;
    std::int64_t iterations = 0;
};

/// Solves the tier-level fixed point over sorted per-tier assets. `shift`
/// is added to every bank of a tier (a cash injection).
TierSolution solve_tiered(const TierTopology& topology, const PerTier<const SortedAssets*>& assets,
                          const PerTier<Money>& shift, const ClearingOptions& options,
                          ClearingStart start = ClearingStart::Greatest);

/// Tier-compressed equivalent of clearing_dense on the expanded network.
/// `scenario_assets` is per bank in global order (central, massive, big).
ClearingOutcome clearing_compressed(const GalacticNetwork& network, std::span<const Money> scenario_assets,
                                    const ClearingOptions& options = {},
                                    ClearingStart start = ClearingStart::Greatest);

}  // namespace clearsim
