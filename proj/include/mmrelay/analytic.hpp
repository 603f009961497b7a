#pragma once

#include "mmrelay/geometry.hpp"
#include "mmrelay/radio.hpp"

namespace mmrelay {

// Everything the closed-form coverage expressions need, in linear units.
struct CoverageInputs {
    double lambda_b = 0.0;
    double lambda_r = 0.0;
    double rho = 1.0;
    LosModel los_cell, los_d2d;
    AntennaPattern bs, ue;
    double g0_cell = 1.0, g0_d2d = 1.0;
    PathLossModel pl_mm;
    PathLossModel pl_uw_los, pl_uw_nlos;
    double sigma2_cell = 0.0, sigma2_d2d_mm = 0.0, sigma2_d2d_uw = 0.0;
    double mu = 1.0;  // Rayleigh fading rate, unit mean power
    double quad_tol = 1e-8;

    void validate() const;
};

// Critical interferer distances for the four alignment gains; d1<=d2 pair the
// rx side-lobe sector (inner/outer), d3<=d4 the rx main-lobe sector.
struct InterferenceRadii {
    double d1 = 0, d2 = 0, d3 = 0, d4 = 0;
    bool outage = false;  // noise alone already defeats the threshold
};

InterferenceRadii interference_radii(double tau, double d0, double g0,
                                     const GainMixture& mix, double A,
                                     double alpha, double sigma2);

// One mmWave link class (cellular or D2D) for the dominant-interferer bound.
struct MmWaveLink {
    double lambda_serving = 0.0;
    double lambda_interf = 0.0;
    LosModel los;
    AntennaPattern tx, rx;  // interferer-side patterns
    double g0 = 1.0;
    double A = 1.0, alpha = 2.0;
    double sigma2 = 0.0;
    bool nir_from_serving = true;  // NIR starts at d0 (cellular) or at 0 (D2D)
    double quad_tol = 1e-8;
};

MmWaveLink cellular_link(const CoverageInputs& in);
MmWaveLink d2d_mm_link(const CoverageInputs& in);

// Mean LOS interferer counts in the near / far interference regions.
double nir_measure(double tau, double d0, const MmWaveLink& link);
double fir_measure(double tau, double d0, const MmWaveLink& link);

double coverage_mmwave(const MmWaveLink& link, double tau);
double coverage_mmwave_cellular(const CoverageInputs& in, double tau);
double coverage_mmwave_d2d(const CoverageInputs& in, double tau);

double coverage_noise_limited(double lambda, const LosModel& los, double g0,
                              double A, double alpha, double sigma2, double tau);
double coverage_noise_limited_cellular(const CoverageInputs& in, double tau);

// Microwave D2D: LOS/NLOS association split and Rayleigh-faded coverage.
std::pair<double, double> association_probs_microwave(const CoverageInputs& in);
double laplace_interference(double s, double rho_lambda_b, double alpha_n);
double coverage_microwave_d2d(const CoverageInputs& in, double tau);

// Relay-assisted combination of direct and two-hop success.
double coverage_overall(double p_cc, double p_cd);

}  // namespace mmrelay
