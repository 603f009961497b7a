#include <cmath>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "mmrelay/analytic.hpp"
#include "mmrelay/config.hpp"
#include "mmrelay/csv.hpp"
#include "mmrelay/quadrature.hpp"
#include "mmrelay/radio.hpp"
#include "mmrelay/simulator.hpp"
#include "mmrelay/spectral.hpp"

namespace {

using namespace mmrelay;

std::vector<double> parse_grid(const std::string& spec) {
    double a = 0, b = 0, step = 0;
    if (std::sscanf(spec.c_str(), "%lf:%lf:%lf", &a, &b, &step) != 3 || step <= 0 ||
        b < a)
        throw ConfigError("bad grid spec (want start:stop:step): " + spec);
    std::vector<double> g;
    for (double v = a; v <= b + 1e-9 * step; v += step) g.push_back(v);
    return g;
}

ScenarioConfig resolve_config(const std::string& preset_name,
                              const std::string& config_path) {
    if (!config_path.empty()) {
        std::vector<std::string> warnings;
        ScenarioConfig cfg = load_config(config_path, &warnings);
        for (const auto& w : warnings) std::cerr << "warning: " << w << "\n";
        return cfg;
    }
    return preset(preset_name.empty() ? "uma" : preset_name);
}

double lambda_from_isd(double isd) { return 2.0 / (std::sqrt(3.0) * isd * isd); }

struct CommonOpts {
    std::string preset_name, config_path, out, grid = "0:40:0.5";
    std::string grid_var = "tau-db";
    double tau_db = 10.0;
};

void add_common(CLI::App* cmd, CommonOpts& o) {
    cmd->add_option("--preset", o.preset_name, "built-in scenario (uma|ind)");
    cmd->add_option("--config", o.config_path, "scenario config file");
    cmd->add_option("--out", o.out, "output CSV path (default stdout)");
    cmd->add_option("--grid", o.grid, "sweep grid start:stop:step");
    cmd->add_option("--grid-var", o.grid_var, "sweep variable (tau-db|isd-m)")
        ->check(CLI::IsMember({"tau-db", "isd-m"}));
    cmd->add_option("--tau-db", o.tau_db, "fixed threshold for isd sweeps (dB)");
}

int run_analytic(const CommonOpts& o, const std::string& curve,
                 const std::string& band) {
    const ScenarioConfig cfg = resolve_config(o.preset_name, o.config_path);
    const Scenario scn = derive(cfg);
    const std::string digest = config_digest_hex(cfg);
    const std::vector<double> grid = parse_grid(o.grid);
    CsvWriter csv(o.out);
    csv.row({"x", "value", "method", "config_digest"});

    auto emit = [&](double x, double v, const std::string& method) {
        csv.row({CsvWriter::num(x), CsvWriter::num(v), method, digest});
    };

    if (o.grid_var == "isd-m") {
        const double tau = db_to_linear(o.tau_db);
        for (double isd : grid) {
            ScenarioConfig c2 = cfg;
            c2.bs_intensity_per_m2 = lambda_from_isd(isd);
            const Scenario s2 = derive(c2);
            if (curve == "noise-limited")
                emit(isd, coverage_noise_limited_cellular(s2.an, tau), curve);
            else if (curve == "cell")
                emit(isd, coverage_mmwave_cellular(s2.an, tau), curve);
            else
                throw ConfigError("isd sweeps support curves cell and noise-limited");
        }
        return 0;
    }

    if (curve == "se" || curve == "uplink-resource") {
        auto pcc = [&](double t) { return coverage_mmwave_cellular(scn.an, t); };
        auto pcd = [&](double t) {
            return band == "mm" ? coverage_mmwave_d2d(scn.an, t)
                                : coverage_microwave_d2d(scn.an, t);
        };
        SpectralTable tc(pcc, scn.tau_max);
        SpectralTable td(pcd, scn.tau_max);
        const double w_dl = cfg.mmwave_bandwidth_hz;
        const double w_ul = band == "mm" ? cfg.mmwave_bandwidth_hz
                                         : cfg.microwave_bandwidth_hz;
        if (curve == "se") emit(0.0, tc.gamma(), "se-gamma");
        for (double tdb : grid) {
            const double tau = db_to_linear(tdb);
            const double p_cc = tc.coverage(tau);
            const double p_cd = td.coverage(tau);
            const double p_c = coverage_overall(p_cc, p_cd);
            if (curve == "se") {
                const double g_tau =
                    p_c * tc.gamma_above(tau) + (1 - p_c) * tc.gamma_below(tau);
                emit(tdb, g_tau, "se-gamma-tau");
            }
            const double upsilon = tc.gamma_above(tau) / td.gamma_above(tau) *
                                   (1 - p_cc) * p_cc * p_cd * w_dl;
            emit(tdb, upsilon / w_ul, "se-uplink-fraction");
        }
        return 0;
    }

    for (double tdb : grid) {
        const double tau = db_to_linear(tdb);
        double v = 0;
        if (curve == "cell")
            v = coverage_mmwave_cellular(scn.an, tau);
        else if (curve == "d2d-mm")
            v = coverage_mmwave_d2d(scn.an, tau);
        else if (curve == "d2d-uw")
            v = coverage_microwave_d2d(scn.an, tau);
        else if (curve == "noise-limited")
            v = coverage_noise_limited_cellular(scn.an, tau);
        else if (curve == "overall") {
            const double p_cd = band == "mm" ? coverage_mmwave_d2d(scn.an, tau)
                                             : coverage_microwave_d2d(scn.an, tau);
            v = coverage_overall(coverage_mmwave_cellular(scn.an, tau), p_cd);
        } else {
            throw ConfigError("unknown analytic curve: " + curve);
        }
        emit(tdb, v, curve);
    }
    return 0;
}

int run_sim(const CommonOpts& o, const std::string& curve,
            const std::string& layout_name, std::uint64_t drops,
            std::uint64_t seed, const std::string& blockage) {
    const ScenarioConfig cfg = resolve_config(o.preset_name, o.config_path);
    const Scenario scn = derive(cfg);
    const std::string digest = config_digest_hex(cfg);
    const std::vector<double> grid = parse_grid(o.grid);

    static const std::map<std::string, LinkCurve> curves = {
        {"cell", LinkCurve::Cellular},
        {"d2d-mm", LinkCurve::D2DMm},
        {"d2d-uw", LinkCurve::D2DUw},
        {"overall-mm", LinkCurve::OverallMm},
        {"overall-uw", LinkCurve::OverallUw}};
    const auto it = curves.find(curve);
    if (it == curves.end()) throw ConfigError("unknown sim curve: " + curve);

    Layout layout;
    if (layout_name == "hex")
        layout = Layout::hex(500.0);
    else if (layout_name == "ind-grid")
        layout = Layout::ind_grid();
    else if (layout_name != "ppp")
        throw ConfigError("unknown layout: " + layout_name);

    SimOptions opts;
    opts.n_drops = drops;
    opts.seed = seed;
    opts.blockage =
        blockage == "geometric" ? BlockageMode::Geometric : BlockageMode::Bernoulli;

    std::vector<double> taus;
    for (double tdb : grid) taus.push_back(db_to_linear(tdb));
    const CoverageCurve cc = estimate_coverage(scn, layout, it->second, taus, opts);

    CsvWriter csv(o.out);
    csv.row({"x", "value", "method", "config_digest", "ci_halfwidth", "n_drops",
             "seed"});
    for (std::size_t i = 0; i < grid.size(); ++i)
        csv.row({CsvWriter::num(grid[i]), CsvWriter::num(cc.value[i]),
                 "sim-" + curve, digest, CsvWriter::num(cc.ci[i]),
                 std::to_string(cc.n_drops), std::to_string(cc.seed)});
    return 0;
}

struct CsvRow {
    double x = 0, value = 0, ci = 0;
};

std::vector<CsvRow> read_curve_csv(const std::string& path, bool with_ci) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open CSV: " + path);
    std::vector<CsvRow> rows;
    std::string line;
    bool header = true;
    while (std::getline(in, line)) {
        while (!line.empty() && (line.back() == '\r' || line.back() == '\n'))
            line.pop_back();
        if (line.empty()) continue;
        if (header) {
            header = false;
            continue;
        }
        std::vector<std::string> cells;
        std::istringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) cells.push_back(cell);
        if (cells.size() < 2) throw IoError("bad CSV row in " + path + ": " + line);
        CsvRow r;
        r.x = std::stod(cells[0]);
        r.value = std::stod(cells[1]);
        if (with_ci && cells.size() >= 5) r.ci = std::stod(cells[4]);
        rows.push_back(r);
    }
    return rows;
}

int run_compare(const std::string& analytic_path, const std::string& sim_path,
                const std::string& out) {
    const auto an = read_curve_csv(analytic_path, false);
    const auto sim = read_curve_csv(sim_path, true);
    std::map<double, CsvRow> sim_by_x;
    for (const auto& r : sim) sim_by_x[r.x] = r;

    double max_gap = 0;
    int n_joined = 0, violations = 0;
    std::optional<CsvWriter> csv;
    if (!out.empty()) {
        csv.emplace(out);
        csv->row({"x", "analytic", "sim", "gap", "ci_halfwidth"});
    }
    for (const auto& a : an) {
        const auto it = sim_by_x.find(a.x);
        if (it == sim_by_x.end()) continue;
        ++n_joined;
        const double gap = a.value - it->second.value;
        max_gap = std::max(max_gap, std::abs(gap));
        if (a.value < it->second.value - 3.0 * it->second.ci) ++violations;
        if (csv)
            csv->row({CsvWriter::num(a.x), CsvWriter::num(a.value),
                      CsvWriter::num(it->second.value), CsvWriter::num(gap),
                      CsvWriter::num(it->second.ci)});
    }
    std::cout << "joined_points=" << n_joined << " max_abs_gap="
              << CsvWriter::num(max_gap) << " bound_violations=" << violations
              << "\n";
    return 0;
}

int run_validate_los(const CommonOpts& o, const std::string& footprints,
                     const std::string& shape, const std::string& link,
                     std::uint64_t pairs, std::uint64_t seed) {
    const ScenarioConfig cfg = resolve_config(o.preset_name, o.config_path);
    const Scenario scn = derive(cfg);
    const std::string digest = config_digest_hex(cfg);
    std::vector<double> distances = parse_grid(o.grid);
    for (auto& d : distances) d = std::max(d, 1e-3);

    const double h1 = link == "cell" ? cfg.bs_height_m : cfg.ue_height_m;
    const double h2 = cfg.ue_height_m;

    LosCurve curve;
    if (!footprints.empty()) {
        const ObstacleField field = load_footprints(footprints);
        curve = empirical_los_curve(field, h1, h2, distances, pairs, seed);
    } else {
        ObstacleLaw law = scn.law;
        if (shape == "rectangle") {
            // square footprints with the same mean area as the cylinder law
            const double side = std::sqrt(law.mean_footprint_area());
            law.shape = ObstacleShape::Rectangle;
            law.len_min = law.len_max = side;
            law.wid_min = law.wid_max = side;
        }
        curve = empirical_los_curve(law, h1, h2, distances, pairs, seed);
    }

    const LosModel model = link == "cell" ? scn.los_cell : scn.los_d2d;
    CsvWriter csv(o.out);
    csv.row({"x", "value", "method", "config_digest", "ci_halfwidth", "n_drops",
             "seed"});
    for (std::size_t i = 0; i < distances.size(); ++i) {
        csv.row({CsvWriter::num(distances[i]), CsvWriter::num(curve.p_los[i]),
                 "sim-los", digest, CsvWriter::num(curve.ci[i]),
                 std::to_string(curve.n_pairs), std::to_string(seed)});
        csv.row({CsvWriter::num(distances[i]),
                 CsvWriter::num(los_probability(distances[i], model)), "analytic-los",
                 digest, "0", "0", std::to_string(seed)});
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"coverage and spectral-efficiency engine for relay-assisted "
                 "mmWave cellular networks"};
    app.require_subcommand(1);

    CommonOpts an_o, sim_o, los_o;
    std::string an_curve = "cell", an_band = "uw";
    auto* an_cmd = app.add_subcommand("analytic", "closed-form curves by quadrature");
    add_common(an_cmd, an_o);
    an_cmd->add_option("--curve", an_curve,
                       "cell|d2d-mm|d2d-uw|noise-limited|overall|se|uplink-resource");
    an_cmd->add_option("--d2d-band", an_band, "relay band for overall/se (mm|uw)")
        ->check(CLI::IsMember({"mm", "uw"}));

    std::string sim_curve = "cell", sim_layout = "ppp", sim_blockage = "bernoulli";
    std::uint64_t sim_drops = 10000, sim_seed = 1;
    auto* sim_cmd = app.add_subcommand("sim", "Monte-Carlo estimates");
    add_common(sim_cmd, sim_o);
    sim_cmd->add_option("--curve", sim_curve,
                        "cell|d2d-mm|d2d-uw|overall-mm|overall-uw");
    sim_cmd->add_option("--layout", sim_layout, "ppp|hex|ind-grid")
        ->check(CLI::IsMember({"ppp", "hex", "ind-grid"}));
    sim_cmd->add_option("--drops", sim_drops, "Monte-Carlo drops");
    sim_cmd->add_option("--seed", sim_seed, "RNG seed");
    sim_cmd->add_option("--blockage", sim_blockage, "bernoulli|geometric")
        ->check(CLI::IsMember({"bernoulli", "geometric"}));

    std::string cmp_an, cmp_sim, cmp_out;
    auto* cmp_cmd = app.add_subcommand("compare", "join analytic and sim CSVs");
    cmp_cmd->add_option("--analytic", cmp_an, "analytic CSV")->required();
    cmp_cmd->add_option("--sim", cmp_sim, "sim CSV")->required();
    cmp_cmd->add_option("--out", cmp_out, "joined CSV output");

    std::string los_footprints, los_shape = "cylinder", los_link = "d2d";
    std::uint64_t los_pairs = 100000, los_seed = 1;
    auto* los_cmd =
        app.add_subcommand("validate-los", "empirical vs analytic LOS curves");
    add_common(los_cmd, los_o);
    los_o.grid = "25:500:25";
    los_cmd->add_option("--footprints", los_footprints, "polygon footprint file");
    los_cmd->add_option("--shape", los_shape, "cylinder|rectangle")
        ->check(CLI::IsMember({"cylinder", "rectangle"}));
    los_cmd->add_option("--link", los_link, "heights to use (cell|d2d)")
        ->check(CLI::IsMember({"cell", "d2d"}));
    los_cmd->add_option("--pairs", los_pairs, "node pairs per distance");
    los_cmd->add_option("--seed", los_seed, "RNG seed");

    try {
        app.parse(argc, argv);
        if (an_cmd->parsed()) return run_analytic(an_o, an_curve, an_band);
        if (sim_cmd->parsed())
            return run_sim(sim_o, sim_curve, sim_layout, sim_drops, sim_seed,
                           sim_blockage);
        if (cmp_cmd->parsed()) return run_compare(cmp_an, cmp_sim, cmp_out);
        if (los_cmd->parsed())
            return run_validate_los(los_o, los_footprints, los_shape, los_link,
                                    los_pairs, los_seed);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const NumericalError& e) {
        std::cerr << "numerical failure: " << e.what()
                  << " (achieved " << e.achieved << ")\n";
        return 3;
    } catch (const IoError& e) {
        std::cerr << "I/O error: " << e.what() << "\n";
        return 4;
    }
    return 0;
}
