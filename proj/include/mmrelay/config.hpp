#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mmrelay/analytic.hpp"
#include "mmrelay/geometry.hpp"

namespace mmrelay {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Raw scenario parameters as configured; derived quantities live in Scenario.
// Negative sentinel means "not set".
struct ScenarioConfig {
    std::string name = "custom";
    // network
    double bs_intensity_per_m2 = 4.62e-6;
    double relays_per_cell = 10.0;
    double rho = 1.0;
    double bs_height_m = 25.0;
    double ue_height_m = 1.5;
    // obstacles
    double coverage_ratio = -1.0;            // xi; alternative to intensity
    double obstacle_intensity_per_m2 = -1.0;
    double obstacle_r_min_m = 20.0, obstacle_r_max_m = 30.0;
    double obstacle_h_min_m = 5.0, obstacle_h_max_m = 25.0;
    double eta_cellular = -1.0;  // < 0: derive from the thinning integral
    double eta_d2d = -1.0;
    // power / noise
    double bs_power_dbm = 35.0;
    double ue_power_dbm = 23.0;
    double noise_density_dbm_hz = -174.0;
    double ue_noise_figure_db = 9.0;
    // antennas
    int bs_array_n = 8;
    int ue_array_n = 2;
    // bands
    double mmwave_carrier_ghz = 28.0;
    double mmwave_bandwidth_hz = 100e6;
    double microwave_carrier_ghz = 2.0;
    double microwave_bandwidth_hz = 20e6;
    // path loss
    std::string pathloss_profile = "uma";  // uma | ind
    // sweep
    double tau_max_db = 40.0;
};

// Config plus everything derived from it once at load time.
struct Scenario {
    ScenarioConfig cfg;
    ObstacleLaw law;
    double xi = 0.0;  // covered-area ratio
    LosModel los_cell, los_d2d;
    CoverageInputs an;
    double tau_max = 1e4;  // linear
};

ScenarioConfig preset(const std::string& name);
ScenarioConfig load_config(const std::string& path,
                           std::vector<std::string>* warnings = nullptr);
std::string dump_config(const ScenarioConfig& cfg);
std::uint64_t config_digest(const ScenarioConfig& cfg);
std::string config_digest_hex(const ScenarioConfig& cfg);

Scenario derive(const ScenarioConfig& cfg);

}  // namespace mmrelay
