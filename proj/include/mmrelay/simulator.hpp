#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "mmrelay/config.hpp"
#include "mmrelay/geometry.hpp"

namespace mmrelay {

enum class LayoutKind { Ppp, HexGrid, IndGrid };

struct Layout {
    LayoutKind kind = LayoutKind::Ppp;
    double isd_m = 500.0;        // hex grid
    double ind_w_m = 120.0;      // indoor grid: 6x2 cells of 20 m x 25 m
    double ind_h_m = 50.0;

    static Layout ppp() { return Layout{}; }
    static Layout hex(double isd_m) { return Layout{LayoutKind::HexGrid, isd_m}; }
    static Layout ind_grid() { return Layout{LayoutKind::IndGrid}; }
};

enum class BlockageMode { Bernoulli, Geometric };

enum class LinkCurve { Cellular, D2DMm, D2DUw, OverallMm, OverallUw };

struct SimOptions {
    std::uint64_t n_drops = 10000;
    std::uint64_t seed = 1;
    BlockageMode blockage = BlockageMode::Bernoulli;
    int threads = 0;             // 0: hardware concurrency
    double window_radius_m = 0;  // 0: certified automatic radius
};

struct CoverageCurve {
    std::vector<double> x;      // threshold grid (linear)
    std::vector<double> value;
    std::vector<double> ci;     // Wilson 99% half-width
    std::uint64_t n_drops = 0;
    std::uint64_t seed = 0;
};

struct LosCurve {
    std::vector<double> distance;
    std::vector<double> p_los;
    std::vector<double> ci;
    std::uint64_t n_pairs = 0;
};

double wilson_halfwidth(std::uint64_t successes, std::uint64_t n,
                        double z = 2.5758293035489004);

// Truncation radius guaranteeing negligible contribution from outside the
// window for the given curve's serving and interfering tiers.
double certified_window_radius(const Scenario& scn, LinkCurve curve);

CoverageCurve estimate_coverage(const Scenario& scn, const Layout& layout,
                                LinkCurve curve, const std::vector<double>& taus,
                                const SimOptions& opts);

// Empirical (S_L, S_N) of the smallest-path-loss microwave association.
std::pair<double, double> association_frequency_microwave(const Scenario& scn,
                                                          const SimOptions& opts);

// Per-drop nearest LOS / NLOS distances for a Bernoulli-thinned PPP; NaN when
// the corresponding point does not exist in the window.
void sample_nearest_distances(double lambda, const LosModel& los,
                              std::uint64_t n_drops, std::uint64_t seed,
                              std::vector<double>& nearest_los,
                              std::vector<double>& nearest_nlos);

LosCurve empirical_los_curve(const ObstacleLaw& law, double h_tx, double h_rx,
                             const std::vector<double>& distances,
                             std::size_t n_pairs, std::uint64_t seed);
LosCurve empirical_los_curve(const ObstacleField& field, double h_tx, double h_rx,
                             const std::vector<double>& distances,
                             std::size_t n_pairs, std::uint64_t seed);

}  // namespace mmrelay
