#pragma once

#include <array>
#include <cmath>
#include <random>
#include <stdexcept>
#include <string>

namespace mmrelay {

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double x) { return 10.0 * std::log10(x); }
inline double dbm_to_watts(double dbm) { return 1e-3 * std::pow(10.0, dbm / 10.0); }

// Sectored beam: main lobe of width phi and gain gm, side lobe gain gs.
struct AntennaPattern {
    double phi = 2.0 * 3.14159265358979323846;
    double gm = 1.0;
    double gs = 1.0;
    int n = 0;

    static AntennaPattern isotropic() { return AntennaPattern{}; }
};

AntennaPattern derive_pattern(int n);

// Gain of an interfering link: four boresight alignment outcomes.
struct GainMixture {
    std::array<double, 4> gain{};  // GmGm, GmGs, GsGm, GsGs (tx-rx order)
    std::array<double, 4> prob{};
};

GainMixture gain_mixture(const AntennaPattern& tx, const AntennaPattern& rx);
double sample_interferer_gain(const GainMixture& mix, std::mt19937_64& rng);

// PL(dB) = a1*log10(d/scale) + a2 + a3*log10(fc) + x; linear A*d^alpha.
struct PathLossModel {
    enum class Variant { Los, Nlos };
    double a1 = 20.0, a2 = 0.0, a3 = 0.0, x = 0.0;
    double fc_ghz = 1.0;
    double dist_scale = 1.0;
    Variant variant = Variant::Los;
    double intercept = 1.0;  // linear A
    double alpha = 2.0;

    static PathLossModel from_coefficients(double a1, double a2, double a3,
                                           double x, double fc_ghz,
                                           double dist_scale = 1.0,
                                           Variant variant = Variant::Los);

    // 3GPP-style presets (fc in GHz)
    static PathLossModel uma_mmwave_los(double fc_ghz);
    static PathLossModel ind_mmwave_los(double fc_ghz);
    static PathLossModel uma_microwave_los(double fc_ghz);
    static PathLossModel uma_microwave_nlos(double fc_ghz, double ue_height_m);
    static PathLossModel ind_microwave_los();
    static PathLossModel ind_microwave_nlos();

    double path_loss_db(double d) const;
    double path_loss_linear(double d) const;
};

struct LinkBudget {
    double tx_power_w = 1.0;
    double sigma2 = 0.0;  // noise power normalized by tx power
    double bandwidth_hz = 1.0;
    bool mmwave = true;
};

double normalized_noise(double noise_density_dbm_hz, double bandwidth_hz,
                        double noise_figure_db, double tx_power_dbm);

double rx_power_mmwave(const LinkBudget& budget, double gain,
                       const PathLossModel& model, double d, bool blocked);
double rx_power_microwave(const LinkBudget& budget, double fading,
                          const PathLossModel& model, double d);

}  // namespace mmrelay
