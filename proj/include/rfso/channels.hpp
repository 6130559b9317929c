#ifndef RFSO_CHANNELS_HPP
#define RFSO_CHANNELS_HPP

// The two hop models: Fisher-Snedecor F composite fading for the RF hop and
// Gamma-Gamma atmospheric turbulence for the FSO hop, plus the physical
// geometry that fixes the turbulence parameters. All SNR quantities are
// linear; dB conversion lives at the interface layer.

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "rfso/errors.hpp"
#include "rfso/specfun.hpp"

namespace rfso::channels {

namespace detail {
inline void require(bool cond, const char* msg) {
    if (!cond) throw std::domain_error(msg);
}
inline bool pos_finite(double v) { return std::isfinite(v) && v > 0.0; }
}  // namespace detail

/// RF hop: SNR ~ F-distribution with fading severity m, shadowing m_s and
/// scale mu1 (the mean-SNR scale as it appears in the density).
struct FisherSnedecorParams {
    double m;
    double m_s;
    double mu1;

    FisherSnedecorParams(double m_, double m_s_, double mu1_) : m(m_), m_s(m_s_), mu1(mu1_) {
        detail::require(detail::pos_finite(m), "FisherSnedecorParams: m must be finite and > 0");
        detail::require(detail::pos_finite(m_s), "FisherSnedecorParams: m_s must be finite and > 0");
        detail::require(detail::pos_finite(mu1), "FisherSnedecorParams: mu1 must be finite and > 0");
    }
};

/// FSO hop: SNR = mu2 * I^2 with I the product of two unit-mean Gamma
/// variates shaped by the turbulence parameters alpha (large-scale) and
/// beta (small-scale).
struct GammaGammaParams {
    double alpha;
    double beta;
    double mu2;

    GammaGammaParams(double alpha_, double beta_, double mu2_)
        : alpha(alpha_), beta(beta_), mu2(mu2_) {
        detail::require(detail::pos_finite(alpha), "GammaGammaParams: alpha must be finite and > 0");
        detail::require(detail::pos_finite(beta), "GammaGammaParams: beta must be finite and > 0");
        detail::require(detail::pos_finite(mu2), "GammaGammaParams: mu2 must be finite and > 0");
    }
};

/// Physical FSO link description from which alpha and beta derive.
/// cn2 in m^(-2/3), wavelength and length in meters.
struct FsoGeometry {
    double cn2;
    double wavelength;
    double length;

    FsoGeometry(double cn2_, double wavelength_, double length_)
        : cn2(cn2_), wavelength(wavelength_), length(length_) {
        detail::require(detail::pos_finite(cn2), "FsoGeometry: cn2 must be finite and > 0");
        detail::require(detail::pos_finite(wavelength),
                        "FsoGeometry: wavelength must be finite and > 0");
        detail::require(detail::pos_finite(length), "FsoGeometry: length must be finite and > 0");
    }
};

/// Out-of-band but not invalid inputs produce warnings, not rejections.
inline std::vector<std::string> geometry_warnings(const FsoGeometry& g) {
    std::vector<std::string> w;
    if (g.cn2 < 1e-17 || g.cn2 > 1e-12)
        w.push_back("cn2 outside the typical 1e-17..1e-13 m^(-2/3) range");
    if (g.wavelength <= 1e-7 || g.wavelength >= 1e-5)
        w.push_back("wavelength outside the optical band (0.1..10 um)");
    return w;
}

/// Transmit powers and noise variances of both hops.
struct LinkBudget {
    double pt;        // average transmitted optical power, W
    double eta;       // optical-to-electrical conversion coefficient, A/W
    double sigma_d2;  // FSO AWGN variance, W
    double ps;        // average transmitted electrical power, W
    double sigma_r2;  // RF AWGN variance, W

    LinkBudget(double pt_, double eta_, double sigma_d2_, double ps_, double sigma_r2_)
        : pt(pt_), eta(eta_), sigma_d2(sigma_d2_), ps(ps_), sigma_r2(sigma_r2_) {
        detail::require(detail::pos_finite(pt) && detail::pos_finite(eta) &&
                            detail::pos_finite(sigma_d2) && detail::pos_finite(ps) &&
                            detail::pos_finite(sigma_r2),
                        "LinkBudget: all fields must be finite and > 0");
    }
};

// ---------------------------------------------------------------------------
// RF hop (Fisher-Snedecor F)
// ---------------------------------------------------------------------------

/// Density of the RF-hop SNR,
///   f(g) = m^m (m_s mu1)^(m_s) g^(m-1) / [B(m, m_s) (m g + m_s mu1)^(m+m_s)],
/// assembled in log space. For m < 1 the density has an integrable pole at
/// g = 0; that point reports +inf rather than an error.
inline double fs_pdf(const FisherSnedecorParams& p, double gamma) {
    detail::require(!std::isnan(gamma) && gamma >= 0.0, "fs_pdf: requires gamma >= 0");
    if (gamma == 0.0) {
        if (p.m < 1.0) return std::numeric_limits<double>::infinity();
        if (p.m > 1.0) return 0.0;
        return 1.0 / p.mu1;  // m = 1: m_s (m_s mu1)^m_s / (m_s mu1)^(1+m_s)
    }
    if (std::isinf(gamma)) return 0.0;
    const double smu = p.m_s * p.mu1;
    const double lf = p.m * std::log(p.m) + p.m_s * std::log(smu) +
                      (p.m - 1.0) * std::log(gamma) - specfun::ln_beta(p.m, p.m_s) -
                      (p.m + p.m_s) * std::log(p.m * gamma + smu);
    return std::exp(lf);
}

/// CDF of the RF-hop SNR via the hypergeometric closed form,
///   F(g) = m^(m-1) g^m 2F1(m, m+m_s; m+1; -m g/(m_s mu1)) / [B(m,m_s)(m_s mu1)^m].
inline double fs_cdf(const FisherSnedecorParams& p, double gamma) {
    detail::require(!std::isnan(gamma) && gamma >= 0.0, "fs_cdf: requires gamma >= 0");
    if (gamma == 0.0) return 0.0;
    if (std::isinf(gamma)) return 1.0;
    const double smu = p.m_s * p.mu1;
    const double z = -p.m * gamma / smu;
    const auto h = specfun::gauss_2f1_nonpos(p.m, p.m + p.m_s, p.m + 1.0, z);
    const double lf = (p.m - 1.0) * std::log(p.m) + p.m * std::log(gamma) -
                      specfun::ln_beta(p.m, p.m_s) - p.m * std::log(smu);
    const double v = std::exp(lf) * h.value;
    return std::min(1.0, std::max(0.0, v));
}

/// Mean of the RF-hop SNR, mu1 * m_s/(m_s - 1); diverges for m_s <= 1.
inline double fs_mean(const FisherSnedecorParams& p) {
    detail::require(p.m_s > 1.0, "fs_mean: mean diverges for m_s <= 1");
    return p.mu1 * p.m_s / (p.m_s - 1.0);
}

// ---------------------------------------------------------------------------
// FSO hop (Gamma-Gamma)
// ---------------------------------------------------------------------------

/// Density of the FSO-hop SNR,
///   f(g) = (ab)^((a+b)/2) / (G(a)G(b) mu2) (g/mu2)^((a+b)/4 - 1)
///          * K_(a-b)( 2 sqrt(a b sqrt(g/mu2)) ).
/// The Bessel argument carries the fourth root of g/mu2: that is the form
/// consistent with the SNR = mu2 * I^2 detection law, and the one whose
/// integral over (0, inf) is 1.
inline double gg_pdf(const GammaGammaParams& p, double gamma) {
    detail::require(!std::isnan(gamma) && gamma > 0.0, "gg_pdf: requires gamma > 0");
    if (std::isinf(gamma)) return 0.0;
    const double ab = p.alpha * p.beta;
    const double r = gamma / p.mu2;
    const double arg = 2.0 * std::sqrt(ab * std::sqrt(r));
    const double lk = std::log(specfun::bessel_k_scaled(std::fabs(p.alpha - p.beta), arg)) - arg;
    const double lf = 0.5 * (p.alpha + p.beta) * std::log(ab) - specfun::ln_gamma(p.alpha) -
                      specfun::ln_gamma(p.beta) - std::log(p.mu2) +
                      (0.25 * (p.alpha + p.beta) - 1.0) * std::log(r) + lk;
    return std::exp(lf);
}

/// CDF of the FSO-hop SNR: the kernel evaluated at z = a b sqrt(g/mu2).
inline double gg_cdf(const GammaGammaParams& p, double gamma) {
    detail::require(!std::isnan(gamma) && gamma >= 0.0, "gg_cdf: requires gamma >= 0");
    if (gamma == 0.0) return 0.0;
    if (std::isinf(gamma)) return 1.0;
    const double z = p.alpha * p.beta * std::sqrt(gamma / p.mu2);
    return specfun::gg_cdf_kernel(p.alpha, p.beta, z).value;
}

// ---------------------------------------------------------------------------
// Geometry -> turbulence parameters
// ---------------------------------------------------------------------------

/// Rytov variance sigma_R^2 = 1.23 C_n^2 k^(7/6) L^(11/6), k = 2 pi / lambda.
inline double rytov_variance(const FsoGeometry& g) {
    const double k = 2.0 * specfun::detail::kPi / g.wavelength;
    return 1.23 * g.cn2 * std::pow(k, 7.0 / 6.0) * std::pow(g.length, 11.0 / 6.0);
}

/// Exponent applied to beta's denominator bracket. The primary form uses
/// 7/6 in both parameters; the common alternative uses 5/6 for beta.
enum class BetaExponent { seven_sixths, five_sixths };

struct TurbulenceParams {
    double alpha;
    double beta;
};

/// alpha = [exp(0.49 s / (1 + 1.11 s^(6/5))^(7/6)) - 1]^(-1),
/// beta  = [exp(0.51 s / (1 + 0.69 s^(6/5))^(e_b)) - 1]^(-1),
/// with s the Rytov variance and e_b per the variant flag. Both diverge as
/// s -> 0 (vanishing turbulence) and decrease monotonically in s.
inline TurbulenceParams turbulence_params(double sigma_r2,
                                          BetaExponent variant = BetaExponent::seven_sixths) {
    detail::require(std::isfinite(sigma_r2) && sigma_r2 > 0.0,
                    "turbulence_params: requires sigma_R^2 > 0");
    const double s65 = std::pow(sigma_r2, 6.0 / 5.0);
    const double eb = (variant == BetaExponent::seven_sixths) ? 7.0 / 6.0 : 5.0 / 6.0;
    const double xa = 0.49 * sigma_r2 / std::pow(1.0 + 1.11 * s65, 7.0 / 6.0);
    const double xb = 0.51 * sigma_r2 / std::pow(1.0 + 0.69 * s65, eb);
    return {1.0 / std::expm1(xa), 1.0 / std::expm1(xb)};
}

/// Average electrical SNR of the FSO hop, mu2 = P_t^2 eta^2 / sigma_d^2
/// (unit-mean irradiance).
inline double mu2_from_budget(const LinkBudget& b) {
    return b.pt * b.pt * b.eta * b.eta / b.sigma_d2;
}

}  // namespace rfso::channels

#endif
