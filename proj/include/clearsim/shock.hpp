#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace clearsim {

enum class ShockTarget {
    ExternalAssetsOnly,
    /// External assets plus the recovery value of bond holdings.
    AllAssets,
};

struct ShockParams {
    double correlation = 0.25;  // equicorrelation of the latent Gaussians
    double beta_a = 1.0;
    double beta_b = 4.0;
    std::int64_t n_banks = 17501;
    ShockTarget applies_to = ShockTarget::ExternalAssetsOnly;
    bool exempt_central = true;  // central external assets are not shocked
};

void validate(const ShockParams& params);

struct ShockScenario {
    std::int64_t scenario_index = 0;
    double common_factor = 0;
    std::vector<double> loss_fraction;
};

double std_normal_cdf(double z);
/// 1 - Phi(z), accurate in the upper tail.
double std_normal_upper_tail(double z);
/// Inverse of Phi on (0, 1).
double std_normal_quantile(double u);

/// 1 - (1 - u)^(1/4), the inverse CDF of beta(1, 4).
double beta_1_4_inverse_cdf(double u);

/// One-factor Gaussian copula with beta marginals:
///   Z_i = sqrt(rho) M + sqrt(1 - rho) e_i,  loss_i = F^{-1}(Phi(Z_i)).
/// Draw 0 of a scenario stream is M, draw i + 1 is e_i.
class LossSampler {
public:
    explicit LossSampler(const ShockParams& params);

    const ShockParams& params() const noexcept { return params_; }

    /// Beta quantile of Phi(z).
    double loss_from_latent(double z) const;

    /// Fills `out` (one entry per bank) and returns the common factor.
    double sample(std::uint64_t seed, std::int64_t scenario_index, std::span<double> out) const;

    ShockScenario sample_scenario(std::uint64_t seed, std::int64_t scenario_index) const;

    /// Test hook: deterministic transform of injected latent draws.
    ShockScenario from_latents(std::int64_t scenario_index, double common_factor,
                               std::span<const double> idiosyncratic) const;

    /// Raw standard normal draw `draw` of a scenario stream.
    static double latent_draw(std::uint64_t seed, std::int64_t scenario_index, std::int64_t draw);

private:
    ShockParams params_;
    double loading_common_;
    double loading_idio_;
    bool closed_form_;
};

ShockScenario sample_scenario(const ShockParams& params, std::uint64_t seed, std::int64_t scenario_index);

}  // namespace clearsim
