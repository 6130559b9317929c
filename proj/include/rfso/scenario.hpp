#ifndef RFSO_SCENARIO_HPP
#define RFSO_SCENARIO_HPP

// Scenario configuration (JSON), sweep execution and CSV emission. This is
// the only layer that speaks dB; everything below works in linear SNR.

#include <cmath>
#include <cstdio>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "rfso/errors.hpp"
#include "rfso/montecarlo.hpp"
#include "rfso/relay.hpp"

namespace rfso::scenario {

inline double db_to_linear(double x_db) {
    if (!std::isfinite(x_db)) throw std::domain_error("db_to_linear: requires finite input");
    return std::pow(10.0, x_db / 10.0);
}

inline double linear_to_db(double x) {
    if (!(std::isfinite(x) && x > 0.0)) throw std::domain_error("linear_to_db: requires x > 0");
    return 10.0 * std::log10(x);
}

struct GeometricFso {
    double cn2;
    double wavelength_m;
    double length_m;
};

struct SweepSpec {
    relay::Axis axis;
    double start;
    double stop;
    double step;
};

struct ScenarioConfig {
    double m = 0.0;
    double m_s = 0.0;
    double mu1_db = 0.0;
    std::optional<double> alpha;  // explicit FSO parameterization
    std::optional<double> beta;
    std::optional<GeometricFso> geometry;  // geometric FSO parameterization
    double mu2_db = 0.0;
    double gamma_th_db = 0.0;
    SweepSpec sweep{relay::Axis::mu1_and_mu2, 0.0, 0.0, 1.0};
    std::optional<montecarlo::McConfig> mc;
    channels::BetaExponent beta_exponent = channels::BetaExponent::seven_sixths;
};

struct CurveRow {
    double axis_value;
    double pout_analytic;
    std::optional<double> pout_mc;
    std::optional<double> mc_stderr;
    double alpha;
    double beta;
    std::optional<double> sigma_r2;
};

namespace detail {

inline std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

inline std::optional<relay::Axis> axis_from_string(const std::string& s) {
    if (s == "mu1") return relay::Axis::mu1;
    if (s == "mu2") return relay::Axis::mu2;
    if (s == "mu1_and_mu2") return relay::Axis::mu1_and_mu2;
    if (s == "fso_length") return relay::Axis::fso_length;
    return std::nullopt;
}

inline std::string axis_to_string(relay::Axis a) {
    switch (a) {
        case relay::Axis::mu1: return "mu1";
        case relay::Axis::mu2: return "mu2";
        case relay::Axis::mu1_and_mu2: return "mu1_and_mu2";
        case relay::Axis::fso_length: return "fso_length";
    }
    return "?";
}

inline double get_number(const nlohmann::json& j, const std::string& path,
                         const std::string& key, std::vector<std::string>& issues,
                         bool& ok) {
    if (!j.contains(key)) {
        issues.push_back(path + "." + key + ": missing");
        ok = false;
        return 0.0;
    }
    if (!j[key].is_number()) {
        issues.push_back(path + "." + key + ": must be a number");
        ok = false;
        return 0.0;
    }
    return j[key].get<double>();
}

}  // namespace detail

/// Parse and validate a JSON configuration document. Throws config_error
/// carrying one message per problem.
inline ScenarioConfig parse_config(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw config_error({std::string("JSON parse error: ") + e.what()});
    }

    std::vector<std::string> issues;
    bool ok = true;
    ScenarioConfig cfg;

    if (!j.contains("rf") || !j["rf"].is_object()) {
        issues.push_back("rf: missing object");
    } else {
        const auto& rf = j["rf"];
        cfg.m = detail::get_number(rf, "rf", "m", issues, ok);
        cfg.m_s = detail::get_number(rf, "rf", "m_s", issues, ok);
        cfg.mu1_db = detail::get_number(rf, "rf", "mu1_db", issues, ok);
        if (rf.contains("m") && rf["m"].is_number() && !(cfg.m > 0.0))
            issues.push_back("rf.m: must be > 0");
        if (rf.contains("m_s") && rf["m_s"].is_number() && !(cfg.m_s > 0.0))
            issues.push_back("rf.m_s: must be > 0");
    }

    if (!j.contains("fso") || !j["fso"].is_object()) {
        issues.push_back("fso: missing object");
    } else {
        const auto& fso = j["fso"];
        cfg.mu2_db = detail::get_number(fso, "fso", "mu2_db", issues, ok);
        const bool has_explicit = fso.contains("alpha") || fso.contains("beta");
        const bool has_geometric =
            fso.contains("cn2") || fso.contains("wavelength_m") || fso.contains("length_m");
        if (has_explicit && has_geometric) {
            issues.push_back(
                "fso: explicit {alpha,beta} and geometric {cn2,wavelength_m,length_m} blocks "
                "conflict; specify exactly one");
        } else if (has_explicit) {
            const double a = detail::get_number(fso, "fso", "alpha", issues, ok);
            const double b = detail::get_number(fso, "fso", "beta", issues, ok);
            if (fso.contains("alpha") && fso["alpha"].is_number() && !(a > 0.0))
                issues.push_back("fso.alpha: must be > 0");
            if (fso.contains("beta") && fso["beta"].is_number() && !(b > 0.0))
                issues.push_back("fso.beta: must be > 0");
            cfg.alpha = a;
            cfg.beta = b;
        } else if (has_geometric) {
            GeometricFso g{};
            g.cn2 = detail::get_number(fso, "fso", "cn2", issues, ok);
            g.wavelength_m = detail::get_number(fso, "fso", "wavelength_m", issues, ok);
            g.length_m = detail::get_number(fso, "fso", "length_m", issues, ok);
            if (fso.contains("cn2") && fso["cn2"].is_number() && !(g.cn2 > 0.0))
                issues.push_back("fso.cn2: must be > 0");
            if (fso.contains("wavelength_m") && fso["wavelength_m"].is_number() &&
                !(g.wavelength_m > 0.0))
                issues.push_back("fso.wavelength_m: must be > 0");
            if (fso.contains("length_m") && fso["length_m"].is_number() && !(g.length_m > 0.0))
                issues.push_back("fso.length_m: must be > 0");
            cfg.geometry = g;
        } else {
            issues.push_back(
                "fso: specify either explicit {alpha,beta} or geometric "
                "{cn2,wavelength_m,length_m}");
        }
    }

    if (j.contains("gamma_th_db")) {
        if (!j["gamma_th_db"].is_number())
            issues.push_back("gamma_th_db: must be a number");
        else
            cfg.gamma_th_db = j["gamma_th_db"].get<double>();
    } else {
        issues.push_back("gamma_th_db: missing");
    }

    if (!j.contains("sweep") || !j["sweep"].is_object()) {
        issues.push_back("sweep: missing object");
    } else {
        const auto& sw = j["sweep"];
        if (!sw.contains("axis") || !sw["axis"].is_string()) {
            issues.push_back("sweep.axis: missing or not a string");
        } else {
            auto ax = detail::axis_from_string(sw["axis"].get<std::string>());
            if (!ax) {
                issues.push_back("sweep.axis: must be one of mu1, mu2, mu1_and_mu2, fso_length");
            } else {
                cfg.sweep.axis = *ax;
                if (*ax == relay::Axis::fso_length && !cfg.geometry && issues.empty())
                    issues.push_back("sweep.axis=fso_length requires the geometric fso block");
            }
        }
        cfg.sweep.start = detail::get_number(sw, "sweep", "start", issues, ok);
        cfg.sweep.stop = detail::get_number(sw, "sweep", "stop", issues, ok);
        cfg.sweep.step = detail::get_number(sw, "sweep", "step", issues, ok);
        if (cfg.sweep.stop < cfg.sweep.start)
            issues.push_back("sweep: stop must be >= start");
        if (cfg.sweep.stop > cfg.sweep.start && !(cfg.sweep.step > 0.0))
            issues.push_back("sweep.step: must be > 0 for a multi-point grid");
    }

    if (j.contains("mc")) {
        if (!j["mc"].is_object()) {
            issues.push_back("mc: must be an object");
        } else {
            const auto& mc = j["mc"];
            bool mok = true;
            const double samples = detail::get_number(mc, "mc", "samples", issues, mok);
            const double seed = detail::get_number(mc, "mc", "seed", issues, mok);
            double streams = 4.0;
            if (mc.contains("streams")) streams = detail::get_number(mc, "mc", "streams", issues, mok);
            if (mok) {
                if (samples < 1.0) {
                    issues.push_back("mc.samples: must be >= 1");
                } else if (streams < 1.0 || streams > samples) {
                    issues.push_back("mc.streams: must be in [1, samples]");
                } else {
                    cfg.mc = montecarlo::McConfig(static_cast<std::uint64_t>(samples),
                                                  static_cast<std::uint64_t>(seed),
                                                  static_cast<std::uint32_t>(streams));
                }
            }
        }
    }

    if (j.contains("beta_exponent_variant")) {
        const auto& v = j["beta_exponent_variant"];
        if (v.is_string() && v.get<std::string>() == "paper_7_6")
            cfg.beta_exponent = channels::BetaExponent::seven_sixths;
        else if (v.is_string() && v.get<std::string>() == "standard_5_6")
            cfg.beta_exponent = channels::BetaExponent::five_sixths;
        else
            issues.push_back("beta_exponent_variant: must be \"paper_7_6\" or \"standard_5_6\"");
    }

    if (!issues.empty()) throw config_error(std::move(issues));
    return cfg;
}

namespace detail {

inline std::vector<double> build_grid(const SweepSpec& s) {
    if (s.stop == s.start) return {s.start};
    std::vector<double> grid;
    const auto count = static_cast<std::size_t>(
        std::floor((s.stop - s.start) / s.step + 1e-9)) + 1;
    grid.reserve(count);
    for (std::size_t k = 0; k < count; ++k) grid.push_back(s.start + static_cast<double>(k) * s.step);
    return grid;
}

struct ResolvedFso {
    double alpha;
    double beta;
    std::optional<double> sigma_r2;
    std::optional<channels::FsoGeometry> geometry;
};

inline ResolvedFso resolve_fso(const ScenarioConfig& cfg) {
    if (cfg.alpha && cfg.beta) return {*cfg.alpha, *cfg.beta, std::nullopt, std::nullopt};
    channels::FsoGeometry g(cfg.geometry->cn2, cfg.geometry->wavelength_m,
                            cfg.geometry->length_m);
    const double s2 = channels::rytov_variance(g);
    const auto tp = channels::turbulence_params(s2, cfg.beta_exponent);
    return {tp.alpha, tp.beta, s2, g};
}

inline void append_csv_header(std::string& out) {
    out += "axis_value,pout_analytic,pout_mc,mc_stderr,alpha,beta,sigma_r2\n";
}

inline void append_csv_row(std::string& out, const CurveRow& r) {
    out += fmt(r.axis_value);
    out += ',';
    out += fmt(r.pout_analytic);
    out += ',';
    if (r.pout_mc) out += fmt(*r.pout_mc);
    out += ',';
    if (r.mc_stderr) out += fmt(*r.mc_stderr);
    out += ',';
    out += fmt(r.alpha);
    out += ',';
    out += fmt(r.beta);
    out += ',';
    if (r.sigma_r2) out += fmt(*r.sigma_r2);
    out += '\n';
}

}  // namespace detail

/// Execute the configured sweep and emit the CSV document. Deterministic in
/// the configuration, including the Monte Carlo seed. Extra comment lines
/// (without the leading '#') are placed after the standard assumptions block.
inline std::string run_scenario(const ScenarioConfig& cfg,
                                const std::vector<std::string>& extra_comments = {}) {
    const channels::FisherSnedecorParams rf(cfg.m, cfg.m_s, db_to_linear(cfg.mu1_db));
    const detail::ResolvedFso fso = detail::resolve_fso(cfg);
    const channels::GammaGammaParams fso_params(fso.alpha, fso.beta, db_to_linear(cfg.mu2_db));
    const relay::RelaySystem base{rf, fso_params};
    const relay::OutageQuery q(db_to_linear(cfg.gamma_th_db));
    const std::vector<double> grid = detail::build_grid(cfg.sweep);

    const relay::AxisSpec spec{cfg.sweep.axis, grid};
    relay::OutageCurve curve = relay::sweep(base, q, spec, fso.geometry, cfg.beta_exponent);
    if (cfg.mc) {
        std::vector<relay::McPoint> mc_points;
        mc_points.reserve(grid.size());
        for (double v : grid) {
            const auto sys = relay::point_system(base, cfg.sweep.axis, v, fso.geometry,
                                                 cfg.beta_exponent);
            const auto est = montecarlo::estimate_outage(sys, q, *cfg.mc);
            mc_points.push_back({est.p_hat, est.stderr_});
        }
        curve.mc_pout = std::move(mc_points);
    }

    std::string out;
    out += "# rfso outage sweep\n";
    for (const auto& c : extra_comments) out += "# " + c + "\n";
    out += "# gamma_th_db=" + detail::fmt(cfg.gamma_th_db) + "\n";
    out += "# rf: m=" + detail::fmt(cfg.m) + " m_s=" + detail::fmt(cfg.m_s) +
           " mu1_db=" + detail::fmt(cfg.mu1_db) + "\n";
    out += "# fso: alpha=" + detail::fmt(fso.alpha) + " beta=" + detail::fmt(fso.beta) +
           " mu2_db=" + detail::fmt(cfg.mu2_db);
    if (fso.sigma_r2) {
        out += " sigma_r2=" + detail::fmt(*fso.sigma_r2) + " cn2=" +
               detail::fmt(cfg.geometry->cn2) + " wavelength_m=" +
               detail::fmt(cfg.geometry->wavelength_m) + " length_m=" +
               detail::fmt(cfg.geometry->length_m);
    }
    out += "\n";
    out += "# sweep: axis=" + detail::axis_to_string(cfg.sweep.axis) +
           " start=" + detail::fmt(cfg.sweep.start) + " stop=" + detail::fmt(cfg.sweep.stop) +
           " step=" + detail::fmt(cfg.sweep.step) + "\n";
    out += std::string("# beta_exponent_variant=") +
           (cfg.beta_exponent == channels::BetaExponent::seven_sixths ? "paper_7_6"
                                                                      : "standard_5_6") +
           "\n";
    if (cfg.mc) {
        out += "# mc: samples=" + std::to_string(cfg.mc->samples) +
               " seed=" + std::to_string(cfg.mc->seed) +
               " streams=" + std::to_string(cfg.mc->streams) + "\n";
    }
    detail::append_csv_header(out);

    for (std::size_t i = 0; i < grid.size(); ++i) {
        CurveRow row{};
        row.axis_value = grid[i];
        row.pout_analytic = curve.analytic_pout[i];
        const relay::RelaySystem sys =
            relay::point_system(base, cfg.sweep.axis, grid[i], fso.geometry, cfg.beta_exponent);
        row.alpha = sys.fso.alpha;
        row.beta = sys.fso.beta;
        if (cfg.sweep.axis == relay::Axis::fso_length) {
            channels::FsoGeometry g(cfg.geometry->cn2, cfg.geometry->wavelength_m, grid[i]);
            row.sigma_r2 = channels::rytov_variance(g);
        } else {
            row.sigma_r2 = fso.sigma_r2;
        }
        if (curve.mc_pout) {
            row.pout_mc = (*curve.mc_pout)[i].estimate;
            row.mc_stderr = (*curve.mc_pout)[i].stderr_;
        }
        detail::append_csv_row(out, row);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Figure reproduction
// ---------------------------------------------------------------------------

enum class FigureId { fig1, fig2, fig3 };

/// Knobs the source scenarios leave open; every default used is echoed in
/// the emitted CSV comments.
struct FigureOptions {
    double gamma_th_db = 0.0;
    std::vector<double> lengths_m = {1000.0, 2000.0, 3000.0};  // fig3
    double cn2_strong = 6e-14;                                 // fig2 strong turbulence
    double mu1_db = 20.0;                                      // fig2 fixed RF scale
    double mu2_db = 30.0;                                      // fig3 fixed FSO scale
    double start_db = 0.0;
    double stop_db = 40.0;
    double step_db = 1.0;
    std::optional<montecarlo::McConfig> mc;
};

namespace detail {

struct RfState {
    const char* label;
    double m;
    double m_s;
};

// Indoor device-to-device measurement pairs: head-to-head / head-to-pocket,
// line-of-sight and non-line-of-sight.
inline constexpr RfState kRfStates[4] = {
    {"h2h-los", 1.12, 1.42},
    {"h2p-los", 0.98, 2.03},
    {"h2h-nlos", 1.09, 2.25},
    {"h2p-nlos", 0.75, 4.27},
};

inline constexpr double kWavelengthM = 1550e-9;
inline constexpr double kCn2Weak = 6e-15;
inline constexpr double kCn2Moderate = 2e-14;
inline constexpr double kDefaultLengthM = 1000.0;

}  // namespace detail

/// One CSV document per plotted curve, labelled. Parameters the source
/// scenarios never state (threshold, strong-turbulence cn2, link lengths,
/// the fixed hop scale of fig2/fig3) come from FigureOptions defaults and
/// are recorded in the output.
inline std::vector<std::pair<std::string, std::string>> reproduce_figure(
    FigureId id, const FigureOptions& opt = {}) {
    std::vector<std::pair<std::string, std::string>> curves;

    auto base_cfg = [&](double m, double m_s) {
        ScenarioConfig cfg;
        cfg.m = m;
        cfg.m_s = m_s;
        cfg.gamma_th_db = opt.gamma_th_db;
        cfg.sweep.start = opt.start_db;
        cfg.sweep.stop = opt.stop_db;
        cfg.sweep.step = opt.step_db;
        cfg.mc = opt.mc;
        return cfg;
    };

    switch (id) {
        case FigureId::fig1:
            // outage vs mu1 = mu2 for the four RF states, moderate turbulence
            for (const auto& rf : detail::kRfStates) {
                ScenarioConfig cfg = base_cfg(rf.m, rf.m_s);
                cfg.geometry = GeometricFso{detail::kCn2Moderate, detail::kWavelengthM,
                                            detail::kDefaultLengthM};
                cfg.sweep.axis = relay::Axis::mu1_and_mu2;
                curves.emplace_back(rf.label,
                                    run_scenario(cfg, {std::string("figure=fig1 curve=") + rf.label}));
            }
            break;
        case FigureId::fig2: {
            // outage vs mu2 under weak/moderate/strong turbulence, for both
            // head-to-head RF states; mu1 held at opt.mu1_db
            const std::pair<const char*, double> regimes[3] = {
                {"weak", detail::kCn2Weak},
                {"moderate", detail::kCn2Moderate},
                {"strong", opt.cn2_strong},
            };
            for (const auto& [regime, cn2] : regimes) {
                for (int rf_idx : {0, 2}) {  // h2h-los, h2h-nlos
                    const auto& rf = detail::kRfStates[rf_idx];
                    ScenarioConfig cfg = base_cfg(rf.m, rf.m_s);
                    cfg.mu1_db = opt.mu1_db;
                    cfg.geometry =
                        GeometricFso{cn2, detail::kWavelengthM, detail::kDefaultLengthM};
                    cfg.sweep.axis = relay::Axis::mu2;
                    const std::string label = std::string(regime) + "-" + rf.label;
                    curves.emplace_back(
                        label, run_scenario(cfg, {"figure=fig2 curve=" + label,
                                                  "mu1_db=" + detail::fmt(opt.mu1_db)}));
                }
            }
            break;
        }
        case FigureId::fig3:
            // outage vs mu1 for each FSO link length; mu2 held at opt.mu2_db
            for (double L : opt.lengths_m) {
                ScenarioConfig cfg = base_cfg(detail::kRfStates[0].m, detail::kRfStates[0].m_s);
                cfg.mu2_db = opt.mu2_db;
                cfg.geometry = GeometricFso{detail::kCn2Moderate, detail::kWavelengthM, L};
                cfg.sweep.axis = relay::Axis::mu1;
                char lbl[32];
                std::snprintf(lbl, sizeof(lbl), "L%gm", L);
                curves.emplace_back(lbl, run_scenario(cfg, {std::string("figure=fig3 curve=") + lbl,
                                                            "mu2_db=" + detail::fmt(opt.mu2_db)}));
            }
            break;
    }
    return curves;
}

}  // namespace rfso::scenario

#endif
