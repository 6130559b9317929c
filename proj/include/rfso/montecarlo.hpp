#ifndef RFSO_MONTECARLO_HPP
#define RFSO_MONTECARLO_HPP

// First-principles samplers for both hop distributions and an unbiased
// outage estimator. Everything is a pure function of (seed, stream count),
// bit-identical regardless of how many host threads execute the streams.

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "rfso/parallel.hpp"
#include "rfso/relay.hpp"

namespace rfso::montecarlo {

struct McConfig {
    std::uint64_t samples;
    std::uint64_t seed;
    std::uint32_t streams;

    McConfig(std::uint64_t samples_, std::uint64_t seed_, std::uint32_t streams_ = 1)
        : samples(samples_), seed(seed_), streams(streams_) {
        if (samples < 1) throw std::domain_error("McConfig: samples must be >= 1");
        if (streams < 1) throw std::domain_error("McConfig: streams must be >= 1");
        if (streams > samples) throw std::domain_error("McConfig: streams must be <= samples");
    }
};

struct McEstimate {
    double p_hat;
    double stderr_;
    std::uint64_t samples_used;
    bool stderr_one_sided;  // zero/full-count estimates report the 3/n bound
};

namespace detail {

// splitmix64: counter-based, so substreams are pure functions of
// (seed, stream, lane) with no warm-up or ordering concerns.
inline std::uint64_t mix64(std::uint64_t x) {
    x ^= x >> 30;
    x *= 0xBF58476D1CE4E5B9ull;
    x ^= x >> 27;
    x *= 0x94D049BB133111EBull;
    x ^= x >> 31;
    return x;
}

class Splitmix64 {
public:
    Splitmix64(std::uint64_t seed, std::uint64_t stream, std::uint64_t lane) {
        std::uint64_t h = mix64(seed ^ 0xA0761D6478BD642Full);
        h = mix64(h ^ (stream * 0xE7037ED1A0B428DBull));
        h = mix64(h ^ (lane * 0x8EBC6AF09C88C6E3ull));
        state_ = h;
    }

    std::uint64_t next_u64() {
        state_ += 0x9E3779B97F4A7C15ull;
        std::uint64_t x = state_;
        x ^= x >> 30;
        x *= 0xBF58476D1CE4E5B9ull;
        x ^= x >> 27;
        x *= 0x94D049BB133111EBull;
        x ^= x >> 31;
        return x;
    }

    /// Uniform on the open interval (0, 1).
    double next_uniform() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53 + 0x1.0p-54;
    }

private:
    std::uint64_t state_;
};

// Box-Muller pairs; the spare is cached, so draws stay sequential per stream.
class NormalGen {
public:
    explicit NormalGen(Splitmix64 rng) : rng_(rng) {}

    double next() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        const double u1 = rng_.next_uniform();
        const double u2 = rng_.next_uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double t = 6.28318530717958647692 * u2;
        spare_ = r * std::sin(t);
        have_spare_ = true;
        return r * std::cos(t);
    }

    double next_uniform() { return rng_.next_uniform(); }

private:
    Splitmix64 rng_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

// Marsaglia-Tsang squeeze-rejection Gamma(shape, 1); the shape < 1 case
// boosts through Gamma(shape+1) with the U^(1/shape) power.
inline double gamma_variate(NormalGen& g, double shape) {
    double boost = 1.0;
    if (shape < 1.0) {
        boost = std::pow(g.next_uniform(), 1.0 / shape);
        shape += 1.0;
    }
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
        double x, v;
        do {
            x = g.next();
            v = 1.0 + c * x;
        } while (v <= 0.0);
        v = v * v * v;
        const double u = g.next_uniform();
        const double x2 = x * x;
        if (u < 1.0 - 0.0331 * x2 * x2) return boost * d * v;
        if (std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) return boost * d * v;
    }
}

// Fixed slice assignment: stream s covers [offset(s), offset(s)+count(s)).
inline std::uint64_t stream_count(std::uint64_t samples, std::uint32_t streams,
                                  std::uint32_t s) {
    return samples / streams + (s < samples % streams ? 1 : 0);
}

inline std::uint64_t stream_offset(std::uint64_t samples, std::uint32_t streams,
                                   std::uint32_t s) {
    const std::uint64_t base = samples / streams;
    const std::uint64_t rem = samples % streams;
    return base * s + std::min<std::uint64_t>(s, rem);
}

// Stream lanes: 0/1 feed the RF and FSO draws of paired sampling so the two
// hops stay independent.
inline constexpr std::uint64_t kLaneRf = 1;
inline constexpr std::uint64_t kLaneFso = 2;

inline double draw_fs(NormalGen& g, const channels::FisherSnedecorParams& p) {
    // gamma = (m_s mu1 / m) * X/Y, X ~ Gamma(m, 1), Y ~ Gamma(m_s, 1):
    // the X/Y ratio is beta-prime(m, m_s), and the scale restores the
    // F-distributed SNR density exactly.
    const double x = gamma_variate(g, p.m);
    const double y = gamma_variate(g, p.m_s);
    return (p.m_s * p.mu1 / p.m) * (x / y);
}

inline double draw_gg(NormalGen& g, const channels::GammaGammaParams& p) {
    // irradiance I = Ia * Ib with Ia ~ Gamma(alpha, 1/alpha),
    // Ib ~ Gamma(beta, 1/beta) (unit mean), detected as SNR = mu2 I^2
    const double ia = gamma_variate(g, p.alpha) / p.alpha;
    const double ib = gamma_variate(g, p.beta) / p.beta;
    const double irr = ia * ib;
    return p.mu2 * irr * irr;
}

}  // namespace detail

/// cfg.samples i.i.d. draws of the RF-hop SNR, deterministic in (seed, streams).
inline std::vector<double> sample_fs(const channels::FisherSnedecorParams& p,
                                     const McConfig& cfg) {
    std::vector<double> out(cfg.samples);
    par::for_each_index(cfg.streams, [&](std::size_t s) {
        detail::NormalGen g(detail::Splitmix64(cfg.seed, s, detail::kLaneRf));
        const std::uint64_t off = detail::stream_offset(cfg.samples, cfg.streams,
                                                        static_cast<std::uint32_t>(s));
        const std::uint64_t cnt = detail::stream_count(cfg.samples, cfg.streams,
                                                       static_cast<std::uint32_t>(s));
        for (std::uint64_t i = 0; i < cnt; ++i) out[off + i] = detail::draw_fs(g, p);
    });
    return out;
}

/// cfg.samples i.i.d. draws of the FSO-hop SNR, deterministic in (seed, streams).
inline std::vector<double> sample_gg(const channels::GammaGammaParams& p,
                                     const McConfig& cfg) {
    std::vector<double> out(cfg.samples);
    par::for_each_index(cfg.streams, [&](std::size_t s) {
        detail::NormalGen g(detail::Splitmix64(cfg.seed, s, detail::kLaneFso));
        const std::uint64_t off = detail::stream_offset(cfg.samples, cfg.streams,
                                                        static_cast<std::uint32_t>(s));
        const std::uint64_t cnt = detail::stream_count(cfg.samples, cfg.streams,
                                                       static_cast<std::uint32_t>(s));
        for (std::uint64_t i = 0; i < cnt; ++i) out[off + i] = detail::draw_gg(g, p);
    });
    return out;
}

/// Unbiased outage estimate: fraction of paired draws with
/// min(gamma_rf, gamma_fso) < gamma_th, with the binomial standard error.
/// Zero- and full-count outcomes report the one-sided rule-of-three bound.
inline McEstimate estimate_outage(const relay::RelaySystem& sys, const relay::OutageQuery& q,
                                  const McConfig& cfg) {
    std::vector<std::uint64_t> counts(cfg.streams, 0);
    par::for_each_index(cfg.streams, [&](std::size_t s) {
        detail::NormalGen grf(detail::Splitmix64(cfg.seed, s, detail::kLaneRf));
        detail::NormalGen gfso(detail::Splitmix64(cfg.seed, s, detail::kLaneFso));
        const std::uint64_t cnt = detail::stream_count(cfg.samples, cfg.streams,
                                                       static_cast<std::uint32_t>(s));
        std::uint64_t hits = 0;
        for (std::uint64_t i = 0; i < cnt; ++i) {
            const double g1 = detail::draw_fs(grf, sys.rf);
            const double g2 = detail::draw_gg(gfso, sys.fso);
            if (std::min(g1, g2) < q.gamma_th) ++hits;
        }
        counts[s] = hits;
    });
    std::uint64_t hits = 0;
    for (std::uint64_t c : counts) hits += c;
    const double n = static_cast<double>(cfg.samples);
    const double p_hat = static_cast<double>(hits) / n;
    if (hits == 0 || hits == cfg.samples) {
        return {p_hat, 3.0 / n, cfg.samples, true};
    }
    return {p_hat, std::sqrt(p_hat * (1.0 - p_hat) / n), cfg.samples, false};
}

}  // namespace rfso::montecarlo

#endif
