#include "mmrelay/config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <numbers>
#include <sstream>

#include "mmrelay/radio.hpp"

namespace mmrelay {

namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

struct Schema {
    std::map<std::string, double ScenarioConfig::*> doubles;
    std::map<std::string, int ScenarioConfig::*> ints;
    std::map<std::string, std::string ScenarioConfig::*> strings;
};

const Schema& schema() {
    static const Schema s = [] {
        Schema s;
        s.strings["name"] = &ScenarioConfig::name;
        s.doubles["network.bs_intensity_per_m2"] = &ScenarioConfig::bs_intensity_per_m2;
        s.doubles["network.relays_per_cell"] = &ScenarioConfig::relays_per_cell;
        s.doubles["network.rho"] = &ScenarioConfig::rho;
        s.doubles["network.bs_height_m"] = &ScenarioConfig::bs_height_m;
        s.doubles["network.ue_height_m"] = &ScenarioConfig::ue_height_m;
        s.doubles["obstacles.coverage_ratio"] = &ScenarioConfig::coverage_ratio;
        s.doubles["obstacles.intensity_per_m2"] = &ScenarioConfig::obstacle_intensity_per_m2;
        s.doubles["obstacles.r_min_m"] = &ScenarioConfig::obstacle_r_min_m;
        s.doubles["obstacles.r_max_m"] = &ScenarioConfig::obstacle_r_max_m;
        s.doubles["obstacles.h_min_m"] = &ScenarioConfig::obstacle_h_min_m;
        s.doubles["obstacles.h_max_m"] = &ScenarioConfig::obstacle_h_max_m;
        s.doubles["obstacles.eta_cellular"] = &ScenarioConfig::eta_cellular;
        s.doubles["obstacles.eta_d2d"] = &ScenarioConfig::eta_d2d;
        s.doubles["power.bs_power_dbm"] = &ScenarioConfig::bs_power_dbm;
        s.doubles["power.ue_power_dbm"] = &ScenarioConfig::ue_power_dbm;
        s.doubles["power.noise_density_dbm_hz"] = &ScenarioConfig::noise_density_dbm_hz;
        s.doubles["power.ue_noise_figure_db"] = &ScenarioConfig::ue_noise_figure_db;
        s.ints["antenna.bs_array_n"] = &ScenarioConfig::bs_array_n;
        s.ints["antenna.ue_array_n"] = &ScenarioConfig::ue_array_n;
        s.doubles["mmwave.carrier_ghz"] = &ScenarioConfig::mmwave_carrier_ghz;
        s.doubles["mmwave.bandwidth_hz"] = &ScenarioConfig::mmwave_bandwidth_hz;
        s.doubles["microwave.carrier_ghz"] = &ScenarioConfig::microwave_carrier_ghz;
        s.doubles["microwave.bandwidth_hz"] = &ScenarioConfig::microwave_bandwidth_hz;
        s.strings["pathloss.profile"] = &ScenarioConfig::pathloss_profile;
        s.doubles["sweep.tau_max_db"] = &ScenarioConfig::tau_max_db;
        return s;
    }();
    return s;
}

void validate(const ScenarioConfig& c) {
    auto require = [](bool ok, const std::string& field) {
        if (!ok) throw ConfigError("config field out of range: " + field);
    };
    require(c.bs_intensity_per_m2 > 0, "network.bs_intensity_per_m2");
    require(c.relays_per_cell >= 0, "network.relays_per_cell");
    require(c.rho >= 0 && c.rho <= 1, "network.rho");
    require(c.bs_height_m >= 0, "network.bs_height_m");
    require(c.ue_height_m >= 0, "network.ue_height_m");
    require(c.coverage_ratio >= 0 || c.obstacle_intensity_per_m2 >= 0,
            "obstacles.coverage_ratio or obstacles.intensity_per_m2");
    require(c.obstacle_r_min_m >= 0 && c.obstacle_r_max_m >= c.obstacle_r_min_m,
            "obstacles.r_min_m/r_max_m");
    require(c.obstacle_h_min_m >= 0 && c.obstacle_h_max_m >= c.obstacle_h_min_m,
            "obstacles.h_min_m/h_max_m");
    require(c.eta_cellular <= 1, "obstacles.eta_cellular");
    require(c.eta_d2d <= 1, "obstacles.eta_d2d");
    require(c.bs_array_n >= 2, "antenna.bs_array_n");
    require(c.ue_array_n >= 2, "antenna.ue_array_n");
    require(c.mmwave_carrier_ghz > 0 && c.mmwave_bandwidth_hz > 0, "mmwave");
    require(c.microwave_carrier_ghz > 0 && c.microwave_bandwidth_hz > 0, "microwave");
    require(c.pathloss_profile == "uma" || c.pathloss_profile == "ind",
            "pathloss.profile");
    require(c.tau_max_db > 0, "sweep.tau_max_db");
}

}  // namespace

ScenarioConfig preset(const std::string& name) {
    ScenarioConfig c;  // defaults are the UMa row values
    if (name == "uma") {
        c.name = "uma";
        c.coverage_ratio = 0.2;
        c.eta_cellular = 0.5875;
        c.eta_d2d = 1.0;
        return c;
    }
    if (name == "ind") {
        c.name = "ind";
        c.bs_intensity_per_m2 = 2e-3;
        c.relays_per_cell = 3.0;
        c.bs_height_m = 3.0;
        c.ue_height_m = 1.0;
        c.obstacle_intensity_per_m2 = 0.15;
        c.obstacle_r_min_m = 0.3;
        c.obstacle_r_max_m = 0.6;
        c.obstacle_h_min_m = 1.0;
        c.obstacle_h_max_m = 2.0;
        c.eta_cellular = 0.5;
        c.eta_d2d = 1.0;
        c.bs_power_dbm = 24.0;
        c.pathloss_profile = "ind";
        return c;
    }
    throw ConfigError("unknown preset: " + name);
}

ScenarioConfig load_config(const std::string& path,
                           std::vector<std::string>* warnings) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config file: " + path);
    ScenarioConfig c;
    // a config may start from a preset and override fields
    std::string line, section;
    std::size_t lineno = 0;
    const Schema& sc = schema();
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[' && line.back() == ']') {
            section = trim(line.substr(1, line.size() - 2));
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config line " + std::to_string(lineno) +
                              ": expected key = value");
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (!section.empty()) key = section + "." + key;
        if (!value.empty() && value.front() == '"' && value.back() == '"' &&
            value.size() >= 2)
            value = value.substr(1, value.size() - 2);
        if (key == "preset") {
            c = preset(value);
            continue;
        }
        if (auto it = sc.doubles.find(key); it != sc.doubles.end()) {
            try {
                std::size_t pos = 0;
                c.*(it->second) = std::stod(value, &pos);
                if (pos != value.size()) throw std::invalid_argument(value);
            } catch (const std::exception&) {
                throw ConfigError("config line " + std::to_string(lineno) +
                                  ": bad number for " + key);
            }
        } else if (auto it2 = sc.ints.find(key); it2 != sc.ints.end()) {
            try {
                c.*(it2->second) = std::stoi(value);
            } catch (const std::exception&) {
                throw ConfigError("config line " + std::to_string(lineno) +
                                  ": bad integer for " + key);
            }
        } else if (auto it3 = sc.strings.find(key); it3 != sc.strings.end()) {
            c.*(it3->second) = value;
        } else if (warnings) {
            warnings->push_back("unknown config key: " + key);
        }
    }
    validate(c);
    return c;
}

std::string dump_config(const ScenarioConfig& c) {
    std::ostringstream out;
    out << "name = \"" << c.name << "\"\n";
    out << "\n[network]\n";
    out << "bs_intensity_per_m2 = " << fmt(c.bs_intensity_per_m2) << "\n";
    out << "relays_per_cell = " << fmt(c.relays_per_cell) << "\n";
    out << "rho = " << fmt(c.rho) << "\n";
    out << "bs_height_m = " << fmt(c.bs_height_m) << "\n";
    out << "ue_height_m = " << fmt(c.ue_height_m) << "\n";
    out << "\n[obstacles]\n";
    if (c.coverage_ratio >= 0)
        out << "coverage_ratio = " << fmt(c.coverage_ratio) << "\n";
    if (c.obstacle_intensity_per_m2 >= 0)
        out << "intensity_per_m2 = " << fmt(c.obstacle_intensity_per_m2) << "\n";
    out << "r_min_m = " << fmt(c.obstacle_r_min_m) << "\n";
    out << "r_max_m = " << fmt(c.obstacle_r_max_m) << "\n";
    out << "h_min_m = " << fmt(c.obstacle_h_min_m) << "\n";
    out << "h_max_m = " << fmt(c.obstacle_h_max_m) << "\n";
    if (c.eta_cellular >= 0) out << "eta_cellular = " << fmt(c.eta_cellular) << "\n";
    if (c.eta_d2d >= 0) out << "eta_d2d = " << fmt(c.eta_d2d) << "\n";
    out << "\n[power]\n";
    out << "bs_power_dbm = " << fmt(c.bs_power_dbm) << "\n";
    out << "ue_power_dbm = " << fmt(c.ue_power_dbm) << "\n";
    out << "noise_density_dbm_hz = " << fmt(c.noise_density_dbm_hz) << "\n";
    out << "ue_noise_figure_db = " << fmt(c.ue_noise_figure_db) << "\n";
    out << "\n[antenna]\n";
    out << "bs_array_n = " << c.bs_array_n << "\n";
    out << "ue_array_n = " << c.ue_array_n << "\n";
    out << "\n[mmwave]\n";
    out << "carrier_ghz = " << fmt(c.mmwave_carrier_ghz) << "\n";
    out << "bandwidth_hz = " << fmt(c.mmwave_bandwidth_hz) << "\n";
    out << "\n[microwave]\n";
    out << "carrier_ghz = " << fmt(c.microwave_carrier_ghz) << "\n";
    out << "bandwidth_hz = " << fmt(c.microwave_bandwidth_hz) << "\n";
    out << "\n[pathloss]\n";
    out << "profile = \"" << c.pathloss_profile << "\"\n";
    out << "\n[sweep]\n";
    out << "tau_max_db = " << fmt(c.tau_max_db) << "\n";
    return out.str();
}

std::uint64_t config_digest(const ScenarioConfig& cfg) {
    // FNV-1a over the canonical dump
    const std::string s = dump_config(cfg);
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char ch : s) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string config_digest_hex(const ScenarioConfig& cfg) {
    char buf[20];
    std::snprintf(buf, sizeof buf, "%016llx",
                  static_cast<unsigned long long>(config_digest(cfg)));
    return buf;
}

Scenario derive(const ScenarioConfig& cfg) {
    validate(cfg);
    Scenario s;
    s.cfg = cfg;
    s.law.shape = ObstacleShape::Cylinder;
    s.law.r_min = cfg.obstacle_r_min_m;
    s.law.r_max = cfg.obstacle_r_max_m;
    s.law.h_min = cfg.obstacle_h_min_m;
    s.law.h_max = cfg.obstacle_h_max_m;
    if (cfg.obstacle_intensity_per_m2 >= 0) {
        s.law.intensity = cfg.obstacle_intensity_per_m2;
        s.xi = s.law.intensity * s.law.mean_footprint_area();
    } else {
        s.xi = cfg.coverage_ratio;
        s.law.intensity = s.xi / s.law.mean_footprint_area();
    }
    s.law.validate();

    auto opt_eta = [](double v) {
        return v >= 0 ? std::optional<double>(v) : std::nullopt;
    };
    s.los_cell = make_los_model(s.law, cfg.bs_height_m, cfg.ue_height_m,
                                opt_eta(cfg.eta_cellular));
    s.los_d2d = make_los_model(s.law, cfg.ue_height_m, cfg.ue_height_m,
                               opt_eta(cfg.eta_d2d));

    CoverageInputs& an = s.an;
    an.lambda_b = cfg.bs_intensity_per_m2;
    an.lambda_r = cfg.relays_per_cell * cfg.bs_intensity_per_m2;
    an.rho = cfg.rho;
    an.los_cell = s.los_cell;
    an.los_d2d = s.los_d2d;
    an.bs = derive_pattern(cfg.bs_array_n);
    an.ue = derive_pattern(cfg.ue_array_n);
    an.g0_cell = an.bs.gm * an.ue.gm;
    an.g0_d2d = an.ue.gm * an.ue.gm;
    if (cfg.pathloss_profile == "uma") {
        an.pl_mm = PathLossModel::uma_mmwave_los(cfg.mmwave_carrier_ghz);
        an.pl_uw_los = PathLossModel::uma_microwave_los(cfg.microwave_carrier_ghz);
        an.pl_uw_nlos = PathLossModel::uma_microwave_nlos(cfg.microwave_carrier_ghz,
                                                          cfg.ue_height_m);
    } else {
        an.pl_mm = PathLossModel::ind_mmwave_los(cfg.mmwave_carrier_ghz);
        an.pl_uw_los = PathLossModel::ind_microwave_los();
        an.pl_uw_nlos = PathLossModel::ind_microwave_nlos();
    }
    an.sigma2_cell = normalized_noise(cfg.noise_density_dbm_hz, cfg.mmwave_bandwidth_hz,
                                      cfg.ue_noise_figure_db, cfg.bs_power_dbm);
    an.sigma2_d2d_mm = normalized_noise(cfg.noise_density_dbm_hz,
                                        cfg.mmwave_bandwidth_hz,
                                        cfg.ue_noise_figure_db, cfg.ue_power_dbm);
    an.sigma2_d2d_uw = normalized_noise(cfg.noise_density_dbm_hz,
                                        cfg.microwave_bandwidth_hz,
                                        cfg.ue_noise_figure_db, cfg.ue_power_dbm);
    s.tau_max = db_to_linear(cfg.tau_max_db);
    return s;
}

}  // namespace mmrelay
