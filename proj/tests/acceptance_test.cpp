// Acceptance suite: every release criterion in one binary, one pass/fail
// line per criterion. Run directly or through ctest.

#include <catch2/catch_amalgamated.hpp>

#include <sys/wait.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "rfso/montecarlo.hpp"
#include "rfso/scenario.hpp"
#include "support/oracles.hpp"

using namespace rfso;
using channels::FisherSnedecorParams;
using channels::FsoGeometry;
using channels::GammaGammaParams;
using relay::OutageQuery;
using relay::RelaySystem;

namespace {

void report(int criterion, const char* what, bool pass) {
    std::cout << (pass ? "[PASS] " : "[FAIL] ") << "criterion " << criterion << ": " << what
              << std::endl;
}

double fs_pdf_integral(const FisherSnedecorParams& p) {
    auto f = [&](double g) { return channels::fs_pdf(p, g); };
    auto fsub = [&](double u) {
        const double u3 = u * u * u;
        return 4.0 * u3 * channels::fs_pdf(p, u3 * u);
    };
    return oracles::integrate(fsub, 0.0, std::pow(p.mu1, 0.25), 1e-9) +
           oracles::integrate_upper_inf(f, p.mu1, 1e-9);
}

double gg_pdf_integral(const GammaGammaParams& p) {
    auto f = [&](double g) { return channels::gg_pdf(p, g); };
    auto fsub = [&](double s) { return 2.0 * s * channels::gg_pdf(p, s * s); };
    return oracles::integrate(fsub, 0.0, std::sqrt(p.mu2), 1e-9) +
           oracles::integrate_upper_inf(f, p.mu2, 1e-9);
}

double gg_cdf_quadrature_mu2_1(double alpha, double beta, double z) {
    const GammaGammaParams p(alpha, beta, 1.0);
    const double gamma_t = std::pow(z / (alpha * beta), 2.0);
    auto fsub = [&](double s) { return 2.0 * s * channels::gg_pdf(p, s * s); };
    return oracles::integrate(fsub, 0.0, std::sqrt(gamma_t), 1e-11);
}

struct CsvCurve {
    std::vector<double> axis;
    std::vector<double> pout;
};

CsvCurve parse_curve(const std::string& csv) {
    CsvCurve c;
    std::istringstream in(csv);
    std::string line;
    bool seen_header = false;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        if (!seen_header) {
            seen_header = true;
            continue;
        }
        std::istringstream ls(line);
        std::string f;
        std::getline(ls, f, ',');
        c.axis.push_back(std::stod(f));
        std::getline(ls, f, ',');
        c.pout.push_back(std::stod(f));
    }
    return c;
}

const double kRfPairs[4][2] = {{1.12, 1.42}, {0.98, 2.03}, {1.09, 2.25}, {0.75, 4.27}};

}  // namespace

TEST_CASE("criterion 1: density normalization on the measured grid", "[acceptance]") {
    bool ok = true;
    for (const auto& pr : kRfPairs) {
        for (double mu1 : {1.0, 100.0}) {
            const double n = fs_pdf_integral(FisherSnedecorParams(pr[0], pr[1], mu1));
            if (std::fabs(n - 1.0) >= 1e-6) ok = false;
        }
    }
    // the three turbulence regimes via the geometry pipeline (1 km, 1550 nm)
    for (double cn2 : {6e-15, 2e-14, 6e-14}) {
        const auto tp =
            channels::turbulence_params(channels::rytov_variance(FsoGeometry(cn2, 1550e-9, 1000.0)));
        for (double mu2 : {1.0, 100.0}) {
            const double n = gg_pdf_integral(GammaGammaParams(tp.alpha, tp.beta, mu2));
            if (std::fabs(n - 1.0) >= 1e-6) ok = false;
        }
    }
    report(1, "fs_pdf and gg_pdf integrate to 1 within 1e-6", ok);
    REQUIRE(ok);
}

TEST_CASE("criterion 2: m = 1 closed-form reduction", "[acceptance]") {
    oracles::Rng rng(201);
    bool ok = true;
    for (int i = 0; i < 100; ++i) {
        const double ms = rng.uniform(0.5, 8.0);
        const double mu1 = rng.uniform(0.05, 200.0);
        const double g = rng.uniform(0.0, 30.0 * mu1);
        const double got = channels::fs_cdf(FisherSnedecorParams(1.0, ms, mu1), g);
        const double want = 1.0 - std::pow(1.0 + g / (ms * mu1), -ms);
        if (std::fabs(got - want) >= 1e-10) ok = false;
    }
    report(2, "fs_cdf(m=1) matches 1-(1+g/(m_s mu1))^(-m_s) to 1e-10", ok);
    REQUIRE(ok);
}

TEST_CASE("criterion 3: shadowing limit recovers Nakagami-m and Rayleigh", "[acceptance]") {
    oracles::Rng rng(202);
    bool ok = true;
    for (int i = 0; i < 50; ++i) {
        const double m = rng.uniform(0.5, 4.0);
        const double mu1 = rng.uniform(0.2, 50.0);
        const double g = rng.uniform(0.0, 8.0 * mu1);
        const double fs = channels::fs_cdf(FisherSnedecorParams(m, 1e6, mu1), g);
        if (std::fabs(fs - oracles::gamma_p(m, m * g / mu1)) >= 1e-4) ok = false;
        const double fs1 = channels::fs_cdf(FisherSnedecorParams(1.0, 1e6, mu1), g);
        if (std::fabs(fs1 - (1.0 - std::exp(-g / mu1))) >= 1e-4) ok = false;
    }
    report(3, "m_s = 1e6 matches Nakagami-m / Rayleigh CDFs to 1e-4", ok);
    REQUIRE(ok);
}

TEST_CASE("criterion 4: kernel series vs adaptive quadrature of the density",
          "[acceptance]") {
    bool ok = true;
    for (double alpha : {1.2, 2.0, 4.39, 8.0}) {
        for (double beta : {1.1, 1.5, 2.56, 6.0}) {
            for (double z : {0.1, 1.0, 5.0, 20.0}) {
                double series = 0.0;
                try {
                    series = specfun::gg_cdf_kernel_series(alpha, beta, z).value;
                } catch (const convergence_error&) {
                    ok = false;
                    continue;
                }
                const double quad = gg_cdf_quadrature_mu2_1(alpha, beta, z);
                if (std::fabs(series - quad) >= 1e-8) ok = false;
            }
        }
    }
    report(4, "gg_cdf series path matches density quadrature to 1e-8 on the 4x4x4 grid", ok);
    REQUIRE(ok);
}

TEST_CASE("criterion 5: analytic outage vs Monte Carlo on randomized systems",
          "[acceptance]") {
    oracles::Rng rng(203);
    int within = 0, total = 0;
    while (total < 30) {
        const RelaySystem sys{
            FisherSnedecorParams(rng.uniform(0.5, 3.0), rng.uniform(0.7, 6.0),
                                 rng.uniform(0.3, 300.0)),
            GammaGammaParams(rng.uniform(1.1, 9.0), rng.uniform(1.05, 7.0),
                             rng.uniform(0.3, 300.0))};
        const OutageQuery q(rng.uniform(0.08, 8.0));
        const double p = relay::outage_probability(sys, q);
        if (p < 1e-4 || p > 0.9) continue;
        ++total;
        const auto est = montecarlo::estimate_outage(
            sys, q, montecarlo::McConfig(1'000'000, 5000 + total, 8));
        if (std::fabs(est.p_hat - p) <= 4.0 * est.stderr_) ++within;
    }
    const bool ok = within >= 29;
    std::ostringstream msg;
    msg << "analytic P_out within 4 stderr of 1e6-sample MC in " << within << "/30 systems";
    report(5, msg.str().c_str(), ok);
    REQUIRE(ok);
}

TEST_CASE("criterion 6: outage floors at extreme hop scales", "[acceptance]") {
    bool ok = true;
    const double betas2[][2] = {{4.0, 2.0}, {6.9, 5.77}, {8.0, 6.0}, {3.2, 2.5}};
    for (const auto& ab : betas2) {
        for (double gth : {0.5, 1.0, 4.0}) {
            const FisherSnedecorParams rf(1.12, 1.42, 3.0);
            const OutageQuery q(gth);
            // mu2 -> huge: the RF hop sets the floor
            const RelaySystem up2{rf, GammaGammaParams(ab[0], ab[1], 1e14 * gth)};
            if (std::fabs(relay::outage_probability(up2, q) - channels::fs_cdf(rf, gth)) >=
                1e-6)
                ok = false;
            // mu1 -> huge: the FSO hop sets the floor
            const GammaGammaParams fso(ab[0], ab[1], 2.0);
            const RelaySystem up1{FisherSnedecorParams(1.12, 1.42, 1e14 * gth), fso};
            if (std::fabs(relay::outage_probability(up1, q) - channels::gg_cdf(fso, gth)) >=
                1e-6)
                ok = false;
        }
    }
    report(6, "P_out at mu = 1e14*gamma_th sits on the opposite hop's CDF within 1e-6", ok);
    REQUIRE(ok);
}

TEST_CASE("criterion 7: figure trend reproduction", "[acceptance]") {
    bool ok = true;
    scenario::FigureOptions opt;
    opt.step_db = 2.0;

    // fig1: line-of-sight curves sit below their non-line-of-sight
    // counterparts over 10..40 dB (same measurement family)
    const auto fig1 = scenario::reproduce_figure(scenario::FigureId::fig1, opt);
    const auto h2h_los = parse_curve(fig1[0].second);
    const auto h2p_los = parse_curve(fig1[1].second);
    const auto h2h_nlos = parse_curve(fig1[2].second);
    const auto h2p_nlos = parse_curve(fig1[3].second);
    for (std::size_t i = 0; i < h2h_los.axis.size(); ++i) {
        if (h2h_los.axis[i] < 10.0 || h2h_los.axis[i] > 40.0) continue;
        if (!(h2h_los.pout[i] < h2h_nlos.pout[i])) ok = false;
        if (!(h2p_los.pout[i] < h2p_nlos.pout[i])) ok = false;
    }

    // fig2: weak turbulence dominates moderate pointwise (per RF state)
    const auto fig2 = scenario::reproduce_figure(scenario::FigureId::fig2, opt);
    const auto weak_los = parse_curve(fig2[0].second);
    const auto weak_nlos = parse_curve(fig2[1].second);
    const auto mod_los = parse_curve(fig2[2].second);
    const auto mod_nlos = parse_curve(fig2[3].second);
    for (std::size_t i = 0; i < weak_los.axis.size(); ++i) {
        if (!(weak_los.pout[i] <= mod_los.pout[i] + 1e-15)) ok = false;
        if (!(weak_nlos.pout[i] <= mod_nlos.pout[i] + 1e-15)) ok = false;
    }

    // fig3: longer optical path, pointwise higher outage, approaching the
    // per-length FSO floor
    const auto fig3 = scenario::reproduce_figure(scenario::FigureId::fig3, opt);
    std::vector<CsvCurve> by_len;
    by_len.reserve(fig3.size());
    for (const auto& [label, csv] : fig3) by_len.push_back(parse_curve(csv));
    for (std::size_t i = 0; i < by_len[0].axis.size(); ++i) {
        for (std::size_t k = 1; k < by_len.size(); ++k) {
            if (!(by_len[k].pout[i] >= by_len[k - 1].pout[i])) ok = false;
        }
    }
    // each curve approaches its FSO floor from above: the excess over the
    // floor is exactly F1 (1 - F2), bounded by the RF CDF at the last point
    for (std::size_t k = 0; k < by_len.size(); ++k) {
        const auto tp = channels::turbulence_params(channels::rytov_variance(
            FsoGeometry(2e-14, 1550e-9, opt.lengths_m[k])));
        const double floor = channels::gg_cdf(
            GammaGammaParams(tp.alpha, tp.beta, scenario::db_to_linear(opt.mu2_db)), 1.0);
        const double rf_left = channels::fs_cdf(
            FisherSnedecorParams(1.12, 1.42, scenario::db_to_linear(opt.stop_db)), 1.0);
        const double last = by_len[k].pout.back();
        if (!(last + 1e-12 >= floor && last <= floor + rf_left + 1e-12)) ok = false;
    }

    report(7, "fig1 LoS<NLoS on 10..40 dB; fig2 weak<=moderate; fig3 increasing in L", ok);
    REQUIRE(ok);
}

TEST_CASE("criterion 8: geometry pipeline golds", "[acceptance]") {
    const double s2 = channels::rytov_variance(FsoGeometry(2e-14, 1550e-9, 1000.0));
    bool ok = std::fabs(s2 - oracles::golds::kRytovModerate1km) <= 1e-4;
    const auto tp = channels::turbulence_params(s2);
    if (std::fabs(tp.alpha - oracles::golds::kAlphaModerate1km) > 1e-3) ok = false;
    if (std::fabs(tp.beta - oracles::golds::kBetaModerate1km) > 1e-3) ok = false;
    report(8, "rytov_variance = 0.398191 +- 1e-4; (alpha, beta) = (6.8963, 5.7740) +- 1e-3",
           ok);
    REQUIRE(ok);
}

namespace {

int run_cli(const std::string& args) {
    const std::string cmd = std::string(RFSO_CLI_PATH) + " " + args;
    const int rc = std::system(cmd.c_str());
    if (rc == -1) return -1;
    return WEXITSTATUS(rc);
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

}  // namespace

TEST_CASE("criterion 9: CLI byte-determinism and exit codes", "[acceptance]") {
    namespace fs = std::filesystem;
    const fs::path dir = fs::temp_directory_path() / "rfso_acceptance";
    fs::create_directories(dir);
    const fs::path cfg = dir / "scenario.json";
    {
        std::ofstream out(cfg);
        out << R"({
          "rf": {"m": 1.12, "m_s": 1.42, "mu1_db": 15.0},
          "fso": {"cn2": 2e-14, "wavelength_m": 1550e-9, "length_m": 1000.0, "mu2_db": 15.0},
          "gamma_th_db": 0.0,
          "sweep": {"axis": "mu1_and_mu2", "start": 0.0, "stop": 20.0, "step": 2.0},
          "mc": {"samples": 50000, "seed": 99, "streams": 8}
        })";
    }
    const fs::path out1 = dir / "run1.csv";
    const fs::path out2 = dir / "run2.csv";
    bool ok = run_cli("run --config " + cfg.string() + " --out " + out1.string() +
                      " 2>/dev/null") == 0;
    ok = ok && run_cli("run --config " + cfg.string() + " --out " + out2.string() +
                       " 2>/dev/null") == 0;
    const std::string a = slurp(out1);
    const std::string b = slurp(out2);
    ok = ok && !a.empty() && a == b;
    report(9, "two identical 'run --config' invocations emit byte-identical CSV", ok);
    REQUIRE(ok);

    // supplementary: the documented exit-code contract
    const fs::path bad = dir / "bad.json";
    {
        std::ofstream out(bad);
        out << "{\"rf\": {}}";
    }
    bool codes_ok = run_cli("validate --config " + cfg.string() + " >/dev/null 2>&1") == 0;
    codes_ok =
        codes_ok && run_cli("validate --config " + bad.string() + " >/dev/null 2>&1") == 2;
    codes_ok = codes_ok && run_cli("run --config " + dir.string() +
                                   "/does_not_exist.json >/dev/null 2>&1") == 4;
    codes_ok = codes_ok && run_cli("run --config " + cfg.string() + " --out /nonexistent/" +
                                   "dir/out.csv >/dev/null 2>&1") == 4;
    std::cout << (codes_ok ? "[PASS] " : "[FAIL] ")
              << "supplementary: exit codes 0/2/4 behave as documented" << std::endl;
    CHECK(codes_ok);
}
