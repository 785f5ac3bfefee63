#include "clearsim/clearing.hpp"

#include "clearsim/error.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace clearsim {

std::vector<Money> DenseNetwork::total_obligations() const
{
    std::vector<Money> pbar(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        Money row = 0;
        for (std::size_t j = 0; j < n; ++j)
            row += owed(i, j);
        pbar[i] = row + external_obligation[i];
    }
    return pbar;
}

void DenseNetwork::validate() const
{
    if (liabilities.size() != n * n || external_obligation.size() != n || assets.size() != n)
        fail(ErrorKind::Input, "dense network: inconsistent dimensions");
    for (std::size_t i = 0; i < n; ++i) {
        if (owed(i, i) != 0)
            fail(ErrorKind::Input, "dense network: bank " + std::to_string(i) + " owes itself");
        if (!(external_obligation[i] >= 0) || !(assets[i] >= 0))
            fail(ErrorKind::Input, "dense network: negative obligation or assets at bank " + std::to_string(i));
        for (std::size_t j = 0; j < n; ++j)
            if (!(owed(i, j) >= 0))
                fail(ErrorKind::Input, "dense network: negative liability entry");
    }
}

std::int64_t ClearingOutcome::default_count() const
{
    return std::count(defaulted.begin(), defaulted.end(), std::uint8_t{1});
}

namespace {

ClearingOutcome picard(const DenseNetwork& net, const ClearingOptions& opt, bool from_top)
{
    net.validate();
    if (!(opt.tolerance > 0))
        fail(ErrorKind::Domain, "clearing tolerance must be positive");

    const std::size_t n = net.n;
    const auto pbar = net.total_obligations();
    const Money scale = n ? *std::max_element(pbar.begin(), pbar.end()) : 0.0;

    // relative[j * n + i]: share of bank j's payments that goes to bank i
    std::vector<double> relative(n * n, 0.0);
    for (std::size_t j = 0; j < n; ++j)
        if (pbar[j] > 0)
            for (std::size_t i = 0; i < n; ++i)
                relative[j * n + i] = net.owed(j, i) / pbar[j];

    std::vector<Money> p = from_top ? pbar : std::vector<Money>(n, 0.0);
    std::vector<Money> next(n, 0.0);
    std::vector<Money> inflow(n, 0.0);

    ClearingOutcome out;
    for (;;) {
        if (out.iterations >= opt.max_iterations)
            fail(ErrorKind::Convergence, "dense clearing did not converge within the iteration cap");
        std::fill(inflow.begin(), inflow.end(), 0.0);
        for (std::size_t j = 0; j < n; ++j) {
            if (p[j] == 0)
                continue;
            const double* row = &relative[j * n];
            for (std::size_t i = 0; i < n; ++i)
                inflow[i] += row[i] * p[j];
        }
        Money residual = 0;
        for (std::size_t i = 0; i < n; ++i) {
            next[i] = std::min(pbar[i], net.assets[i] + inflow[i]);
            residual = std::max(residual, std::fabs(next[i] - p[i]));
        }
        p.swap(next);
        ++out.iterations;
        if (residual <= opt.tolerance * scale)
            break;
    }

    out.payments = p;
    out.shortfall.resize(n);
    out.defaulted.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        out.shortfall[i] = pbar[i] - p[i];
        out.defaulted[i] = out.shortfall[i] > opt.default_threshold ? 1 : 0;
        if (pbar[i] > 0)
            out.external_paid += p[i] * (net.external_obligation[i] / pbar[i]);
    }
    return out;
}

}  // namespace

ClearingOutcome clearing_dense(const DenseNetwork& network, const ClearingOptions& options)
{
    return picard(network, options, true);
}

ClearingOutcome least_clearing_vector(const DenseNetwork& network, const ClearingOptions& options)
{
    return picard(network, options, false);
}

DenseNetwork expand_to_dense(const GalacticNetwork& network, std::span<const Money> assets)
{
    const auto n = static_cast<std::size_t>(network.bank_count());
    if (assets.size() != n)
        fail(ErrorKind::Input, "expand_to_dense: asset vector does not match bank count");

    DenseNetwork dense(n);
    for (std::size_t i = 0; i < n; ++i) {
        const Tier from = network.tier_of(static_cast<std::int64_t>(i));
        dense.external_obligation[i] = network.profile(from).external;
        dense.assets[i] = assets[i];
        for (std::size_t j = 0; j < n; ++j) {
            if (i == j)
                continue;
            const Tier to = network.tier_of(static_cast<std::int64_t>(j));
            const auto members = network.count(to);
            const double split = from == to ? static_cast<double>(members - 1) : static_cast<double>(members);
            dense.owed(i, j) = network.liability(from, to) / split;
        }
    }
    return dense;
}

}  // namespace clearsim
