#ifndef RFSO_RELAY_HPP
#define RFSO_RELAY_HPP

// Decode-and-forward combining of the two hops: the end-to-end SNR is the
// minimum of the hop SNRs, so the end-to-end CDF is
// F1 + F2 - F1 F2 = 1 - (1-F1)(1-F2).

#include <cmath>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <vector>

#include "rfso/channels.hpp"
#include "rfso/parallel.hpp"

namespace rfso::relay {

struct RelaySystem {
    channels::FisherSnedecorParams rf;
    channels::GammaGammaParams fso;
};

struct OutageQuery {
    double gamma_th;  // linear SNR threshold, > 0

    explicit OutageQuery(double gamma_th_) : gamma_th(gamma_th_) {
        if (!(std::isfinite(gamma_th) && gamma_th > 0.0))
            throw std::domain_error("OutageQuery: gamma_th must be finite and > 0");
    }
};

enum class Axis { mu1, mu2, mu1_and_mu2, fso_length };

/// Sweep grid: values are dB for the SNR axes and meters for fso_length.
struct AxisSpec {
    Axis axis;
    std::vector<double> values;
};

struct McPoint {
    double estimate;
    double stderr_;
};

struct OutageCurve {
    Axis axis_name;
    std::vector<double> axis_values;
    std::vector<double> analytic_pout;
    std::optional<std::vector<McPoint>> mc_pout;
};

/// min-SNR combining of two hop CDF values; the complementary product form
/// avoids cancellation when both CDFs approach 1.
inline double combine_hop_cdfs(double f1, double f2) {
    return 1.0 - (1.0 - f1) * (1.0 - f2);
}

inline double end_to_end_cdf(const RelaySystem& sys, double gamma) {
    return combine_hop_cdfs(channels::fs_cdf(sys.rf, gamma), channels::gg_cdf(sys.fso, gamma));
}

/// P_out = F_eq(gamma_th).
inline double outage_probability(const RelaySystem& sys, const OutageQuery& q) {
    return end_to_end_cdf(sys, q.gamma_th);
}

/// Asymptote of P_out as mu2 -> inf: the FSO hop drops out and the RF hop
/// CDF at the threshold remains.
inline double outage_floor_mu2(const RelaySystem& sys, const OutageQuery& q) {
    return channels::fs_cdf(sys.rf, q.gamma_th);
}

/// Asymptote of P_out as mu1 -> inf, set by the FSO hop alone.
inline double outage_floor_mu1(const RelaySystem& sys, const OutageQuery& q) {
    return channels::gg_cdf(sys.fso, q.gamma_th);
}

inline double db_to_linear(double x_db) { return std::pow(10.0, x_db / 10.0); }

/// The system evaluated at one sweep point. SNR axes replace the scale
/// parameters; the length axis rebuilds alpha and beta from the geometry
/// while mu2 stays fixed.
inline RelaySystem point_system(const RelaySystem& base, Axis axis, double value,
                                const std::optional<channels::FsoGeometry>& geometry,
                                channels::BetaExponent variant = channels::BetaExponent::seven_sixths) {
    switch (axis) {
        case Axis::mu1:
            return {channels::FisherSnedecorParams(base.rf.m, base.rf.m_s, db_to_linear(value)),
                    base.fso};
        case Axis::mu2:
            return {base.rf, channels::GammaGammaParams(base.fso.alpha, base.fso.beta,
                                                        db_to_linear(value))};
        case Axis::mu1_and_mu2: {
            const double lin = db_to_linear(value);
            return {channels::FisherSnedecorParams(base.rf.m, base.rf.m_s, lin),
                    channels::GammaGammaParams(base.fso.alpha, base.fso.beta, lin)};
        }
        case Axis::fso_length: {
            if (!geometry)
                throw std::invalid_argument("sweep: fso_length axis requires a geometry");
            channels::FsoGeometry g(geometry->cn2, geometry->wavelength, value);
            const auto tp = channels::turbulence_params(channels::rytov_variance(g), variant);
            return {base.rf, channels::GammaGammaParams(tp.alpha, tp.beta, base.fso.mu2)};
        }
    }
    throw std::logic_error("point_system: unknown axis");
}

/// Analytic outage curve along the given axis. Points are independent and
/// evaluated concurrently; assembly is by index so the result does not
/// depend on scheduling.
inline OutageCurve sweep(const RelaySystem& base, const OutageQuery& q, const AxisSpec& spec,
                         const std::optional<channels::FsoGeometry>& geometry = std::nullopt,
                         channels::BetaExponent variant = channels::BetaExponent::seven_sixths) {
    if (spec.values.empty()) throw std::invalid_argument("sweep: empty grid");
    for (std::size_t i = 1; i < spec.values.size(); ++i) {
        if (!(spec.values[i - 1] < spec.values[i]))
            throw std::invalid_argument("sweep: grid must be strictly increasing");
    }
    if (spec.axis == Axis::fso_length && !geometry)
        throw std::invalid_argument("sweep: fso_length axis requires a geometry");

    OutageCurve curve;
    curve.axis_name = spec.axis;
    curve.axis_values = spec.values;
    curve.analytic_pout.resize(spec.values.size());
    std::exception_ptr first_error;
    std::mutex err_mutex;
    par::for_each_index(spec.values.size(), [&](std::size_t i) {
        try {
            const RelaySystem sys = point_system(base, spec.axis, spec.values[i], geometry, variant);
            curve.analytic_pout[i] = outage_probability(sys, q);
        } catch (...) {
            std::lock_guard<std::mutex> lock(err_mutex);
            if (!first_error) first_error = std::current_exception();
        }
    });
    if (first_error) std::rethrow_exception(first_error);
    return curve;
}

}  // namespace rfso::relay

#endif
