#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include "rfso/scenario.hpp"
#include "support/oracles.hpp"

using namespace rfso;
using scenario::parse_config;
using scenario::run_scenario;
using scenario::ScenarioConfig;

namespace {

struct ParsedRow {
    double axis_value = 0, pout = 0, alpha = 0, beta = 0;
    bool has_mc = false;
    double pout_mc = 0, mc_stderr = 0;
    bool has_sigma = false;
    double sigma_r2 = 0;
};

std::vector<ParsedRow> parse_csv_rows(const std::string& csv) {
    std::vector<ParsedRow> rows;
    std::istringstream in(csv);
    std::string line;
    bool seen_header = false;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        if (!seen_header) {
            seen_header = true;
            continue;
        }
        ParsedRow r;
        std::istringstream ls(line);
        std::string field;
        int idx = 0;
        while (std::getline(ls, field, ',')) {
            if (!field.empty()) {
                const double v = std::stod(field);
                switch (idx) {
                    case 0: r.axis_value = v; break;
                    case 1: r.pout = v; break;
                    case 2: r.pout_mc = v; r.has_mc = true; break;
                    case 3: r.mc_stderr = v; break;
                    case 4: r.alpha = v; break;
                    case 5: r.beta = v; break;
                    case 6: r.sigma_r2 = v; r.has_sigma = true; break;
                }
            }
            ++idx;
        }
        rows.push_back(r);
    }
    return rows;
}

const char* kExplicitConfig = R"({
  "rf": {"m": 1.12, "m_s": 1.42, "mu1_db": 10.0},
  "fso": {"alpha": 4.0, "beta": 2.0, "mu2_db": 10.0},
  "gamma_th_db": 0.0,
  "sweep": {"axis": "mu1_and_mu2", "start": 0.0, "stop": 40.0, "step": 1.0}
})";

const char* kGeometricConfig = R"({
  "rf": {"m": 0.75, "m_s": 4.27, "mu1_db": 20.0},
  "fso": {"cn2": 2e-14, "wavelength_m": 1550e-9, "length_m": 1000.0, "mu2_db": 20.0},
  "gamma_th_db": 0.0,
  "sweep": {"axis": "mu2", "start": 0.0, "stop": 30.0, "step": 5.0}
})";

}  // namespace

TEST_CASE("db conversions", "[scenario]") {
    CHECK(scenario::db_to_linear(0.0) == 1.0);
    CHECK(std::fabs(scenario::db_to_linear(30.0) - 1000.0) < 1e-9);
    CHECK(std::fabs(scenario::linear_to_db(scenario::db_to_linear(17.3)) - 17.3) <
          1e-12 * 17.3);
    oracles::Rng rng(100);
    for (int i = 0; i < 100; ++i) {
        const double db = rng.uniform(-80.0, 140.0);
        CHECK(std::fabs(scenario::linear_to_db(scenario::db_to_linear(db)) - db) <=
              1e-12 * std::max(1.0, std::fabs(db)));
    }
    CHECK_THROWS_AS(scenario::linear_to_db(0.0), std::domain_error);
    CHECK_THROWS_AS(scenario::linear_to_db(-2.0), std::domain_error);
}

TEST_CASE("parse_config: minimal explicit document", "[scenario]") {
    const ScenarioConfig cfg = parse_config(kExplicitConfig);
    CHECK(cfg.m == 1.12);
    CHECK(cfg.alpha.has_value());
    CHECK_FALSE(cfg.geometry.has_value());
    CHECK(cfg.beta_exponent == channels::BetaExponent::seven_sixths);
    CHECK_FALSE(cfg.mc.has_value());
}

TEST_CASE("parse_config: geometric document with measured shadowing", "[scenario]") {
    const ScenarioConfig cfg = parse_config(kGeometricConfig);
    CHECK(cfg.m == 0.75);
    CHECK(cfg.m_s == 4.27);
    REQUIRE(cfg.geometry.has_value());
    CHECK(cfg.geometry->cn2 == 2e-14);
}

TEST_CASE("parse_config: conflicting FSO blocks are named", "[scenario]") {
    const std::string doc = R"({
      "rf": {"m": 1.0, "m_s": 2.0, "mu1_db": 0.0},
      "fso": {"alpha": 4.0, "beta": 2.0, "cn2": 2e-14, "wavelength_m": 1.55e-6,
              "length_m": 1000.0, "mu2_db": 0.0},
      "gamma_th_db": 0.0,
      "sweep": {"axis": "mu1", "start": 0.0, "stop": 10.0, "step": 1.0}
    })";
    try {
        parse_config(doc);
        FAIL("expected config_error");
    } catch (const config_error& e) {
        REQUIRE(e.issues().size() == 1);
        CHECK(e.issues()[0].find("conflict") != std::string::npos);
    }
}

TEST_CASE("parse_config: error list covers every broken field", "[scenario]") {
    try {
        parse_config(R"({"rf": {"m": -1.0, "m_s": 2.0}, "gamma_th_db": 0.0})");
        FAIL("expected config_error");
    } catch (const config_error& e) {
        // rf.m sign, rf.mu1_db missing, fso missing, sweep missing
        CHECK(e.issues().size() >= 4);
    }
    CHECK_THROWS_AS(parse_config("not json"), config_error);
    CHECK_THROWS_AS(parse_config(R"({
      "rf": {"m": 1.0, "m_s": 2.0, "mu1_db": 0.0},
      "fso": {"alpha": 4.0, "beta": 2.0, "mu2_db": 0.0},
      "gamma_th_db": 0.0,
      "sweep": {"axis": "fso_length", "start": 500.0, "stop": 1000.0, "step": 100.0}
    })"),
                    config_error);  // fso_length without geometry
    CHECK_THROWS_AS(parse_config(R"({
      "rf": {"m": 1.0, "m_s": 2.0, "mu1_db": 0.0},
      "fso": {"alpha": 4.0, "beta": 2.0, "mu2_db": 0.0},
      "gamma_th_db": 0.0,
      "sweep": {"axis": "sideways", "start": 0.0, "stop": 1.0, "step": 1.0}
    })"),
                    config_error);
}

TEST_CASE("run_scenario: 41-point joint sweep, nonincreasing outage", "[scenario]") {
    const auto rows = parse_csv_rows(run_scenario(parse_config(kExplicitConfig)));
    REQUIRE(rows.size() == 41);
    CHECK(rows.front().axis_value == 0.0);
    CHECK(rows.back().axis_value == 40.0);
    for (std::size_t i = 1; i < rows.size(); ++i)
        CHECK(rows[i].pout <= rows[i - 1].pout + 1e-12);
    for (const auto& r : rows) {
        CHECK(r.pout >= 0.0);
        CHECK(r.pout <= 1.0);
        CHECK(r.alpha == 4.0);
        CHECK(r.beta == 2.0);
        CHECK_FALSE(r.has_sigma);
        CHECK_FALSE(r.has_mc);
    }
}

TEST_CASE("run_scenario: single-point sweep emits one row", "[scenario]") {
    ScenarioConfig cfg = parse_config(kExplicitConfig);
    cfg.sweep.start = cfg.sweep.stop = 12.0;
    const auto rows = parse_csv_rows(run_scenario(cfg));
    REQUIRE(rows.size() == 1);
    CHECK(rows[0].axis_value == 12.0);
}

TEST_CASE("run_scenario: geometric config carries sigma_r2 and derived alpha/beta",
          "[scenario]") {
    const auto rows = parse_csv_rows(run_scenario(parse_config(kGeometricConfig)));
    REQUIRE(rows.size() == 7);
    for (const auto& r : rows) {
        REQUIRE(r.has_sigma);
        CHECK(std::fabs(r.sigma_r2 - oracles::golds::kRytovModerate1km) < 1e-12);
        CHECK(std::fabs(r.alpha - oracles::golds::kAlphaModerate1km) < 1e-10);
        CHECK(std::fabs(r.beta - oracles::golds::kBetaModerate1km) < 1e-10);
    }
}

TEST_CASE("run_scenario: emitted pout recomputes from row parameters", "[scenario]") {
    // each row must be reproducible from its own printed parameters alone
    const ScenarioConfig cfg = parse_config(kGeometricConfig);
    const auto rows = parse_csv_rows(run_scenario(cfg));
    const relay::OutageQuery q(scenario::db_to_linear(cfg.gamma_th_db));
    for (const auto& r : rows) {
        const relay::RelaySystem sys{
            channels::FisherSnedecorParams(cfg.m, cfg.m_s, scenario::db_to_linear(cfg.mu1_db)),
            channels::GammaGammaParams(r.alpha, r.beta, scenario::db_to_linear(r.axis_value))};
        CHECK(std::fabs(relay::outage_probability(sys, q) - r.pout) < 1e-12);
    }
}

TEST_CASE("run_scenario: byte-deterministic including Monte Carlo", "[scenario]") {
    ScenarioConfig cfg = parse_config(kGeometricConfig);
    cfg.mc = montecarlo::McConfig(20000, 42, 4);
    const std::string a = run_scenario(cfg);
    const std::string b = run_scenario(cfg);
    CHECK(a == b);
    const auto rows = parse_csv_rows(a);
    for (const auto& r : rows) {
        REQUIRE(r.has_mc);
        CHECK(r.mc_stderr >= 0.0);
    }
}

TEST_CASE("run_scenario: MC column tracks the analytic column", "[scenario]") {
    ScenarioConfig cfg = parse_config(kGeometricConfig);
    cfg.sweep = {relay::Axis::mu2, 0.0, 20.0, 10.0};
    cfg.mc = montecarlo::McConfig(200000, 7, 8);
    const auto rows = parse_csv_rows(run_scenario(cfg));
    REQUIRE(rows.size() == 3);
    for (const auto& r : rows) {
        if (r.pout < 1e-4) continue;
        CHECK(std::fabs(r.pout_mc - r.pout) <= 4.0 * r.mc_stderr);
    }
}

TEST_CASE("run_scenario: fso_length sweep varies sigma_r2 per row", "[scenario]") {
    ScenarioConfig cfg = parse_config(kGeometricConfig);
    cfg.sweep = {relay::Axis::fso_length, 1000.0, 3000.0, 1000.0};
    const auto rows = parse_csv_rows(run_scenario(cfg));
    REQUIRE(rows.size() == 3);
    CHECK(rows[0].sigma_r2 < rows[1].sigma_r2);
    CHECK(rows[1].sigma_r2 < rows[2].sigma_r2);
    CHECK(rows[0].alpha > rows[1].alpha);
    CHECK(rows[0].pout <= rows[1].pout);
    CHECK(rows[1].pout <= rows[2].pout);
}

TEST_CASE("run_scenario: comment block echoes the assumptions", "[scenario]") {
    const std::string csv = run_scenario(parse_config(kGeometricConfig));
    CHECK(csv.find("# gamma_th_db=0\n") != std::string::npos);
    CHECK(csv.find("beta_exponent_variant=paper_7_6") != std::string::npos);
    CHECK(csv.find("sigma_r2=") != std::string::npos);
    CHECK(csv.rfind("# rfso outage sweep\n", 0) == 0);
}

TEST_CASE("reproduce_figure: curve families and overrides", "[scenario]") {
    scenario::FigureOptions opt;
    opt.step_db = 10.0;  // keep the unit test light
    const auto fig1 = scenario::reproduce_figure(scenario::FigureId::fig1, opt);
    REQUIRE(fig1.size() == 4);
    CHECK(fig1[0].first == "h2h-los");
    CHECK(fig1[3].first == "h2p-nlos");
    for (const auto& [label, csv] : fig1) {
        const auto rows = parse_csv_rows(csv);
        CHECK(rows.size() == 5);
        CHECK(csv.find("figure=fig1") != std::string::npos);
    }

    opt.lengths_m = {800.0, 2500.0};
    const auto fig3 = scenario::reproduce_figure(scenario::FigureId::fig3, opt);
    REQUIRE(fig3.size() == 2);
    CHECK(fig3[0].first == "L800m");
    CHECK(fig3[1].first == "L2500m");
    CHECK(fig3[0].second.find("mu2_db=30") != std::string::npos);

    opt.cn2_strong = 5e-14;
    const auto fig2 = scenario::reproduce_figure(scenario::FigureId::fig2, opt);
    REQUIRE(fig2.size() == 6);
    CHECK(fig2[0].first == "weak-h2h-los");
    CHECK(fig2[4].second.find("cn2=5.000000000000000") != std::string::npos);
    CHECK(fig2[1].second.find("mu1_db=20") != std::string::npos);
}
