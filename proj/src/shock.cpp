#include "clearsim/shock.hpp"

#include "clearsim/error.hpp"
#include "clearsim/philox.hpp"

#include <boost/math/special_functions/beta.hpp>

#include <cmath>
#include <numbers>

namespace clearsim {

void validate(const ShockParams& p)
{
    if (!(p.correlation >= 0 && p.correlation < 1))
        fail(ErrorKind::Config, "shock: correlation must lie in [0, 1)");
    if (!(p.beta_a > 0) || !(p.beta_b > 0) || !std::isfinite(p.beta_a) || !std::isfinite(p.beta_b))
        fail(ErrorKind::Config, "shock: beta parameters must be positive and finite");
    if (p.n_banks < 1)
        fail(ErrorKind::Config, "shock: n_banks must be at least 1");
}

double std_normal_cdf(double z)
{
    return 0.5 * std::erfc(-z / std::numbers::sqrt2);
}

double std_normal_upper_tail(double z)
{
    return 0.5 * std::erfc(z / std::numbers::sqrt2);
}

namespace {

template <std::size_t N>
double poly(const double (&c)[N], double x)
{
    double acc = c[N - 1];
    for (std::size_t i = N - 1; i-- > 0;)
        acc = acc * x + c[i];
    return acc;
}

}  // namespace

// Wichura, Algorithm AS 241 (PPND16), about 1e-16 relative accuracy.
double std_normal_quantile(double u)
{
    if (!(u > 0 && u < 1))
        fail(ErrorKind::Domain, "std_normal_quantile: argument must lie in (0, 1)");

    static constexpr double a[] = {3.3871328727963666080e0, 1.3314166789178437745e+2, 1.9715909503065514427e+3,
                                   1.3731693765509461125e+4, 4.5921953931549871457e+4, 6.7265770927008700853e+4,
                                   3.3430575583588128105e+4, 2.5090809287301226727e+3};
    static constexpr double b[] = {1.0, 4.2313330701600911252e+1, 6.8718700749205790830e+2,
                                   5.3941960214247511077e+3, 2.1213794301586595867e+4, 3.9307895800092710610e+4,
                                   2.8729085735721942674e+4, 5.2264952788528545610e+3};
    static constexpr double c[] = {1.42343711074968357734e0, 4.63033784615654529590e0, 5.76949722146069140550e0,
                                   3.64784832476320460504e0, 1.27045825245236838258e0, 2.41780725177450611770e-1,
                                   2.27238449892691845833e-2, 7.74545014278341407640e-4};
    static constexpr double d[] = {1.0, 2.05319162663775882187e0, 1.67638483018380384940e0,
                                   6.89767334985100004550e-1, 1.48103976427480074590e-1, 1.51986665636164571966e-2,
                                   5.47593808499534494600e-4, 1.05075007164441684324e-9};
    static constexpr double e[] = {6.65790464350110377720e0, 5.46378491116411436990e0, 1.78482653991729133580e0,
                                   2.96560571828504891230e-1, 2.65321895265761230930e-2, 1.24266094738807843860e-3,
                                   2.71155556874348757815e-5, 2.01033439929228813265e-7};
    static constexpr double f[] = {1.0, 5.99832206555887937690e-1, 1.36929880922735805310e-1,
                                   1.48753612908506148525e-2, 7.86869131145613259100e-4, 1.84631831751005468180e-5,
                                   1.42151175831644588870e-7, 2.04426310338993978564e-15};

    const double q = u - 0.5;
    if (std::fabs(q) <= 0.425) {
        const double r = 0.180625 - q * q;
        return q * poly(a, r) / poly(b, r);
    }
    double r = std::sqrt(-std::log(q < 0 ? u : 1.0 - u));
    double x;
    if (r <= 5.0) {
        r -= 1.6;
        x = poly(c, r) / poly(d, r);
    } else {
        r -= 5.0;
        x = poly(e, r) / poly(f, r);
    }
    return q < 0 ? -x : x;
}

double beta_1_4_inverse_cdf(double u)
{
    if (!(u >= 0 && u <= 1))
        fail(ErrorKind::Domain, "beta_1_4_inverse_cdf: argument must lie in [0, 1]");
    return 1.0 - std::sqrt(std::sqrt(1.0 - u));
}

LossSampler::LossSampler(const ShockParams& params)
    : params_(params),
      loading_common_(std::sqrt(params.correlation)),
      loading_idio_(std::sqrt(1.0 - params.correlation)),
      closed_form_(params.beta_a == 1.0)
{
    validate(params_);
}

double LossSampler::loss_from_latent(double z) const
{
    // Work with the upper tail v = 1 - u so small losses keep full precision.
    const double v = std_normal_upper_tail(z);
    if (closed_form_) {
        if (params_.beta_b == 4.0)
            return 1.0 - std::sqrt(std::sqrt(v));
        return -std::expm1(std::log(v) / params_.beta_b);
    }
    if (v <= 0)
        return 1.0;
    if (v >= 1)
        return 0.0;
    return boost::math::ibetac_inv(params_.beta_a, params_.beta_b, v);
}

double LossSampler::latent_draw(std::uint64_t seed, std::int64_t scenario_index, std::int64_t draw)
{
    const auto key = Philox4x32::key_from_seed(seed);
    const auto w = Philox4x32::words(key, static_cast<std::uint64_t>(scenario_index),
                                     static_cast<std::uint64_t>(draw) / 2);
    return std_normal_quantile(open_unit(w[static_cast<std::size_t>(draw % 2)]));
}

double LossSampler::sample(std::uint64_t seed, std::int64_t scenario_index, std::span<double> out) const
{
    const auto key = Philox4x32::key_from_seed(seed);
    const auto stream = static_cast<std::uint64_t>(scenario_index);
    const std::size_t n = out.size();

    // Draw k lives in word k % 2 of block k / 2; draw 0 is the common factor.
    auto w = Philox4x32::words(key, stream, 0);
    const double common = std_normal_quantile(open_unit(w[0]));
    const double shift = loading_common_ * common;
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t draw = i + 1;
        if (draw % 2 == 0)
            w = Philox4x32::words(key, stream, draw / 2);
        const double eps = std_normal_quantile(open_unit(w[draw % 2]));
        out[i] = loss_from_latent(shift + loading_idio_ * eps);
    }
    return common;
}

ShockScenario LossSampler::sample_scenario(std::uint64_t seed, std::int64_t scenario_index) const
{
    ShockScenario s;
    s.scenario_index = scenario_index;
    s.loss_fraction.resize(static_cast<std::size_t>(params_.n_banks));
    s.common_factor = sample(seed, scenario_index, s.loss_fraction);
    return s;
}

ShockScenario LossSampler::from_latents(std::int64_t scenario_index, double common_factor,
                                        std::span<const double> idiosyncratic) const
{
    ShockScenario s;
    s.scenario_index = scenario_index;
    s.common_factor = common_factor;
    s.loss_fraction.reserve(idiosyncratic.size());
    for (double eps : idiosyncratic)
        s.loss_fraction.push_back(loss_from_latent(loading_common_ * common_factor + loading_idio_ * eps));
    return s;
}

ShockScenario sample_scenario(const ShockParams& params, std::uint64_t seed, std::int64_t scenario_index)
{
    return LossSampler(params).sample_scenario(seed, scenario_index);
}

}  // namespace clearsim
