// rfso: outage probability of a dual-hop RF + free-space-optical relay link.
//
// Subcommands:
//   run      --config <path|->   execute a JSON-configured sweep, emit CSV
//   figure   fig1|fig2|fig3      reproduce a canned scenario family
//   validate --config <path|->   parse and validate a configuration
//
// Exit codes: 0 success, 2 configuration error, 3 numerical convergence
// failure, 4 I/O error.

#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "rfso/scenario.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;
constexpr int kExitIo = 4;

std::string read_config_text(const std::string& path) {
    if (path == "-") {
        return std::string(std::istreambuf_iterator<char>(std::cin),
                           std::istreambuf_iterator<char>());
    }
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::ios_base::failure("cannot open config file: " + path);
    return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

void write_output(const std::string& text, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << text;
        std::cout.flush();
        if (!std::cout) throw std::ios_base::failure("write to stdout failed");
        return;
    }
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw std::ios_base::failure("cannot open output file: " + out_path);
    out << text;
    out.flush();
    if (!out) throw std::ios_base::failure("write failed: " + out_path);
}

// "dir/stem.csv" + label -> "dir/stem.label.csv"
std::string with_curve_suffix(const std::string& out_path, const std::string& label) {
    const auto slash = out_path.find_last_of('/');
    const auto dot = out_path.find_last_of('.');
    if (dot == std::string::npos || (slash != std::string::npos && dot < slash))
        return out_path + "." + label + ".csv";
    return out_path.substr(0, dot) + "." + label + out_path.substr(dot);
}

void warn_geometry(const rfso::scenario::ScenarioConfig& cfg) {
    if (!cfg.geometry) return;
    rfso::channels::FsoGeometry g(cfg.geometry->cn2, cfg.geometry->wavelength_m,
                                  cfg.geometry->length_m);
    for (const auto& w : rfso::channels::geometry_warnings(g))
        std::cerr << "warning: " << w << "\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Outage analysis for a mixed RF / free-space-optical relay link"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_path;

    auto* run = app.add_subcommand("run", "execute a configured sweep, emit CSV");
    run->add_option("--config", config_path, "JSON config file ('-' for stdin)")->required();
    run->add_option("--out", out_path, "output CSV path (default: stdout)");

    auto* validate = app.add_subcommand("validate", "parse and validate a configuration");
    validate->add_option("--config", config_path, "JSON config file ('-' for stdin)")->required();

    std::string figure_id;
    double gamma_th_db = 0.0;
    std::vector<double> lengths;
    double cn2_strong = 6e-14;
    double mu1_db = 20.0;
    double mu2_db = 30.0;
    double step_db = 1.0;
    std::uint64_t mc_samples = 0;
    std::uint64_t mc_seed = 1;
    std::uint32_t mc_streams = 4;

    auto* figure = app.add_subcommand("figure", "reproduce a canned scenario family");
    figure->add_option("id", figure_id, "fig1, fig2 or fig3")->required();
    figure->add_option("--gamma-th-db", gamma_th_db, "outage threshold, dB (default 0)");
    figure->add_option("--lengths", lengths, "fig3 link lengths in meters")->delimiter(',');
    figure->add_option("--cn2-strong", cn2_strong,
                       "fig2 strong-turbulence Cn^2 (default 6e-14, an assumption)");
    figure->add_option("--mu1-db", mu1_db, "fig2 fixed RF scale, dB (default 20)");
    figure->add_option("--mu2-db", mu2_db, "fig3 fixed FSO scale, dB (default 30)");
    figure->add_option("--step-db", step_db, "sweep step, dB (default 1)");
    figure->add_option("--mc-samples", mc_samples, "attach a Monte Carlo column, N samples");
    figure->add_option("--seed", mc_seed, "Monte Carlo seed (default 1)");
    figure->add_option("--mc-streams", mc_streams, "Monte Carlo substreams (default 4)");
    figure->add_option("--out", out_path, "output CSV stem (default: stdout)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) {
            const auto cfg = rfso::scenario::parse_config(read_config_text(config_path));
            warn_geometry(cfg);
            write_output(rfso::scenario::run_scenario(cfg), out_path);
            return kExitOk;
        }
        if (validate->parsed()) {
            const auto cfg = rfso::scenario::parse_config(read_config_text(config_path));
            warn_geometry(cfg);
            std::cout << "configuration OK\n";
            if (cfg.geometry) {
                rfso::channels::FsoGeometry g(cfg.geometry->cn2, cfg.geometry->wavelength_m,
                                              cfg.geometry->length_m);
                const double s2 = rfso::channels::rytov_variance(g);
                const auto tp = rfso::channels::turbulence_params(s2, cfg.beta_exponent);
                std::cout << "derived: sigma_r2=" << s2 << " alpha=" << tp.alpha
                          << " beta=" << tp.beta << "\n";
            }
            return kExitOk;
        }
        // figure
        rfso::scenario::FigureId id;
        if (figure_id == "fig1")
            id = rfso::scenario::FigureId::fig1;
        else if (figure_id == "fig2")
            id = rfso::scenario::FigureId::fig2;
        else if (figure_id == "fig3")
            id = rfso::scenario::FigureId::fig3;
        else
            throw rfso::config_error({"figure id must be fig1, fig2 or fig3"});

        rfso::scenario::FigureOptions opt;
        opt.gamma_th_db = gamma_th_db;
        if (!lengths.empty()) opt.lengths_m = lengths;
        opt.cn2_strong = cn2_strong;
        opt.mu1_db = mu1_db;
        opt.mu2_db = mu2_db;
        opt.step_db = step_db;
        if (mc_samples > 0)
            opt.mc = rfso::montecarlo::McConfig(mc_samples, mc_seed, mc_streams);

        const auto curves = rfso::scenario::reproduce_figure(id, opt);
        if (out_path.empty()) {
            std::string all;
            for (const auto& [label, csv] : curves) all += csv;
            write_output(all, "");
        } else {
            for (const auto& [label, csv] : curves)
                write_output(csv, with_curve_suffix(out_path, label));
        }
        return kExitOk;
    } catch (const rfso::config_error& e) {
        for (const auto& issue : e.issues()) std::cerr << "config error: " << issue << "\n";
        return kExitConfig;
    } catch (const rfso::convergence_error& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return kExitNumerical;
    } catch (const std::ios_base::failure& e) {
        std::cerr << "I/O error: " << e.what() << "\n";
        return kExitIo;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNumerical;
    }
}
