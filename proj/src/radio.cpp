#include "mmrelay/radio.hpp"

#include <cmath>
#include <numbers>

namespace mmrelay {

namespace {
constexpr double kPi = std::numbers::pi;
}

AntennaPattern derive_pattern(int n) {
    if (n < 2) throw std::invalid_argument("derive_pattern: N must be >= 2");
    AntennaPattern p;
    p.n = n;
    p.phi = 1.732 / n;
    p.gm = static_cast<double>(n) * n;
    const double s = std::sin(3.0 * kPi / (2.0 * n));
    p.gs = 1.0 / (s * s);
    return p;
}

GainMixture gain_mixture(const AntennaPattern& tx, const AntennaPattern& rx) {
    const double pt = tx.phi / (2.0 * kPi);
    const double pr = rx.phi / (2.0 * kPi);
    GainMixture m;
    m.gain = {tx.gm * rx.gm, tx.gm * rx.gs, tx.gs * rx.gm, tx.gs * rx.gs};
    m.prob = {pt * pr, pt * (1 - pr), (1 - pt) * pr, (1 - pt) * (1 - pr)};
    return m;
}

double sample_interferer_gain(const GainMixture& mix, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double v = u(rng);
    for (int k = 0; k < 3; ++k) {
        if (v < mix.prob[k]) return mix.gain[k];
        v -= mix.prob[k];
    }
    return mix.gain[3];
}

PathLossModel PathLossModel::from_coefficients(double a1, double a2, double a3,
                                               double x, double fc_ghz,
                                               double dist_scale, Variant variant) {
    PathLossModel m;
    m.a1 = a1;
    m.a2 = a2;
    m.a3 = a3;
    m.x = x;
    m.fc_ghz = fc_ghz;
    m.dist_scale = dist_scale;
    m.variant = variant;
    m.alpha = a1 / 10.0;
    m.intercept = std::pow(10.0, (a2 + x) / 10.0) * std::pow(fc_ghz, a3 / 10.0) *
                  std::pow(dist_scale, -m.alpha);
    if (!(m.alpha > 0) || !(m.intercept > 0))
        throw std::invalid_argument("path loss model: nonpositive alpha or intercept");
    return m;
}

PathLossModel PathLossModel::uma_mmwave_los(double fc_ghz) {
    return from_coefficients(20.0, 32.4, 20.0, 0.0, fc_ghz);
}

PathLossModel PathLossModel::ind_mmwave_los(double fc_ghz) {
    return from_coefficients(17.3, 32.4, 20.0, 0.0, fc_ghz);
}

PathLossModel PathLossModel::uma_microwave_los(double fc_ghz) {
    return from_coefficients(22.7, 27.0, 20.0, 0.0, fc_ghz);
}

PathLossModel PathLossModel::uma_microwave_nlos(double fc_ghz, double ue_height_m) {
    const double lh = std::log10(ue_height_m);
    return from_coefficients(44.9 - 6.55 * lh, 14.78 + 5.83 * lh, 34.97, 0.0,
                             fc_ghz, 1.0, Variant::Nlos);
}

PathLossModel PathLossModel::ind_microwave_los() {
    return from_coefficients(16.9, 89.5, 0.0, 0.0, 2.0, 1000.0);
}

PathLossModel PathLossModel::ind_microwave_nlos() {
    return from_coefficients(43.3, 147.4, 0.0, 0.0, 2.0, 1000.0, Variant::Nlos);
}

double PathLossModel::path_loss_db(double d) const {
    if (!(d > 0)) throw std::invalid_argument("path_loss: d must be > 0");
    return a1 * std::log10(d / dist_scale) + a2 + a3 * std::log10(fc_ghz) + x;
}

double PathLossModel::path_loss_linear(double d) const {
    if (!(d > 0)) throw std::invalid_argument("path_loss: d must be > 0");
    return intercept * std::pow(d, alpha);
}

double normalized_noise(double noise_density_dbm_hz, double bandwidth_hz,
                        double noise_figure_db, double tx_power_dbm) {
    if (!(bandwidth_hz > 0)) throw std::invalid_argument("normalized_noise: bandwidth <= 0");
    const double db = noise_density_dbm_hz + 10.0 * std::log10(bandwidth_hz) +
                      noise_figure_db - tx_power_dbm;
    return std::pow(10.0, db / 10.0);
}

double rx_power_mmwave(const LinkBudget& budget, double gain,
                       const PathLossModel& model, double d, bool blocked) {
    if (blocked) return 0.0;
    return budget.tx_power_w * gain / model.path_loss_linear(d);
}

double rx_power_microwave(const LinkBudget& budget, double fading,
                          const PathLossModel& model, double d) {
    return budget.tx_power_w * fading / model.path_loss_linear(d);
}

}  // namespace mmrelay
