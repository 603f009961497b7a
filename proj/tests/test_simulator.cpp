#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "doctest.h"
#include "mmrelay/analytic.hpp"
#include "mmrelay/config.hpp"
#include "mmrelay/simulator.hpp"

using namespace mmrelay;

namespace {

Scenario uma() { return derive(preset("uma")); }

std::vector<double> db_grid(double lo, double hi, double step) {
    std::vector<double> v;
    for (double db = lo; db <= hi + 1e-9; db += step) v.push_back(db_to_linear(db));
    return v;
}

}  // namespace

TEST_CASE("wilson half-width closed form") {
    CHECK(wilson_halfwidth(0, 0) == doctest::Approx(1.0));
    const double z = 2.5758293035489004;
    const std::uint64_t n = 1000, k = 300;
    const double p = 0.3;
    const double expect = z * std::sqrt(p * (1 - p) / n + z * z / (4.0 * n * n)) /
                          (1.0 + z * z / n);
    CHECK(wilson_halfwidth(k, n) == doctest::Approx(expect).epsilon(1e-12));
    // degenerate outcomes still give a positive width
    CHECK(wilson_halfwidth(0, 100) > 0.0);
    CHECK(wilson_halfwidth(100, 100) > 0.0);
}

TEST_CASE("estimates are deterministic and thread-count invariant") {
    const auto scn = uma();
    const auto taus = db_grid(0, 20, 10);
    SimOptions o1;
    o1.n_drops = 400;
    o1.seed = 42;
    o1.threads = 1;
    SimOptions o4 = o1;
    o4.threads = 4;
    const auto a = estimate_coverage(scn, Layout::ppp(), LinkCurve::Cellular, taus, o1);
    const auto b = estimate_coverage(scn, Layout::ppp(), LinkCurve::Cellular, taus, o4);
    const auto c = estimate_coverage(scn, Layout::ppp(), LinkCurve::Cellular, taus, o1);
    for (std::size_t k = 0; k < taus.size(); ++k) {
        CHECK(a.value[k] == b.value[k]);
        CHECK(a.value[k] == c.value[k]);
    }
    SimOptions o5 = o1;
    o5.seed = 43;
    const auto d = estimate_coverage(scn, Layout::ppp(), LinkCurve::Cellular, taus, o5);
    bool any_diff = false;
    for (std::size_t k = 0; k < taus.size(); ++k)
        if (a.value[k] != d.value[k]) any_diff = true;
    CHECK(any_diff);
}

TEST_CASE("a vanishing threshold recovers the LOS void probability") {
    const auto scn = uma();
    SimOptions opts;
    opts.n_drops = 20000;
    opts.seed = 7;
    const auto curve = estimate_coverage(scn, Layout::ppp(), LinkCurve::Cellular,
                                         {1e-9}, opts);
    const auto& los = scn.los_cell;
    const double expect =
        1.0 - std::exp(-2 * M_PI * scn.an.lambda_b * los.c / (los.beta * los.beta));
    CHECK(std::abs(curve.value[0] - expect) < curve.ci[0] + 0.01);
}

TEST_CASE("per-drop pairing makes the curve exactly nonincreasing") {
    const auto scn = uma();
    SimOptions opts;
    opts.n_drops = 500;
    opts.seed = 3;
    const auto curve = estimate_coverage(scn, Layout::ppp(), LinkCurve::Cellular,
                                         db_grid(-10, 30, 2), opts);
    for (std::size_t k = 1; k < curve.value.size(); ++k)
        CHECK(curve.value[k] <= curve.value[k - 1]);
}

TEST_CASE("relay assistance never hurts within a drop") {
    const auto scn = uma();
    const auto taus = db_grid(0, 20, 5);
    SimOptions opts;
    opts.n_drops = 2000;
    opts.seed = 11;
    const auto direct =
        estimate_coverage(scn, Layout::ppp(), LinkCurve::Cellular, taus, opts);
    const auto overall =
        estimate_coverage(scn, Layout::ppp(), LinkCurve::OverallMm, taus, opts);
    // the overall event contains the direct event drop by drop
    for (std::size_t k = 0; k < taus.size(); ++k)
        CHECK(overall.value[k] >= direct.value[k]);
}

TEST_CASE("window doubling leaves the estimate within its interval") {
    const auto scn = uma();
    const double r = certified_window_radius(scn, LinkCurve::Cellular);
    CHECK(r > 1000.0);  // UMa LOS reach is on the km scale
    const auto taus = db_grid(0, 20, 10);
    SimOptions base;
    base.n_drops = 4000;
    base.seed = 17;
    base.window_radius_m = r;
    SimOptions wide = base;
    wide.window_radius_m = 2 * r;
    const auto a = estimate_coverage(scn, Layout::ppp(), LinkCurve::Cellular, taus, base);
    const auto b = estimate_coverage(scn, Layout::ppp(), LinkCurve::Cellular, taus, wide);
    for (std::size_t k = 0; k < taus.size(); ++k)
        CHECK(std::abs(a.value[k] - b.value[k]) < a.ci[k] + b.ci[k] + 0.01);
}

TEST_CASE("hex and indoor layouts produce sane curves") {
    const auto scn = uma();
    SimOptions opts;
    opts.n_drops = 500;
    opts.seed = 5;
    const auto hex = estimate_coverage(scn, Layout::hex(500), LinkCurve::Cellular,
                                       db_grid(0, 20, 10), opts);
    for (double v : hex.value) {
        CHECK(v >= 0.0);
        CHECK(v <= 1.0);
    }
    auto ind = derive(preset("ind"));
    const auto grid = estimate_coverage(ind, Layout::ind_grid(), LinkCurve::Cellular,
                                        db_grid(0, 20, 10), opts);
    for (double v : grid.value) CHECK(v <= 1.0);
    CHECK(grid.value[0] > 0.2);  // a 12-BS room is rarely in outage at 0 dB
    CHECK_THROWS_AS(
        estimate_coverage(scn, Layout::hex(500), LinkCurve::Cellular, {1.0},
                          [] {
                              SimOptions o;
                              o.blockage = BlockageMode::Geometric;
                              return o;
                          }()),
        std::invalid_argument);
}

TEST_CASE("microwave association frequency tracks the analytic split") {
    const auto scn = uma();
    SimOptions opts;
    opts.n_drops = 20000;
    opts.seed = 23;
    const auto [s_l, s_n] = association_frequency_microwave(scn, opts);
    const auto [a_l, a_n] = association_probs_microwave(scn.an);
    CHECK(s_l + s_n <= 1.0 + 1e-12);
    CHECK(std::abs(s_l - a_l) < 0.01);
}

TEST_CASE("nearest-distance samples follow the analytic distance laws") {
    const auto scn = uma();
    std::vector<double> d_los, d_nlos;
    const std::uint64_t n = 20000;
    sample_nearest_distances(scn.an.lambda_b, scn.los_cell, n, 29, d_los, d_nlos);
    REQUIRE(d_los.size() == n);

    std::uint64_t have = 0, below = 0;
    const double d_probe = 300.0;
    for (double d : d_los) {
        if (std::isnan(d)) continue;
        ++have;
        if (d < d_probe) ++below;
    }
    const double frac = static_cast<double>(have) / n;
    const double mass =
        1.0 - std::exp(-2 * M_PI * scn.an.lambda_b * scn.los_cell.c /
                       (scn.los_cell.beta * scn.los_cell.beta));
    CHECK(std::abs(frac - mass) < 0.01);
    const double cdf = cdf_nearest_los(d_probe, scn.an.lambda_b, scn.los_cell);
    CHECK(std::abs(static_cast<double>(below) / n - cdf) < 0.012);

    // repeated run is identical
    std::vector<double> d2_los, d2_nlos;
    sample_nearest_distances(scn.an.lambda_b, scn.los_cell, 100, 29, d2_los, d2_nlos);
    for (std::size_t i = 0; i < 100; ++i) {
        const bool same = (std::isnan(d_los[i]) && std::isnan(d2_los[i])) ||
                          d_los[i] == d2_los[i];
        CHECK(same);
    }
}

TEST_CASE("empirical LOS frequency matches the exponential law") {
    const auto scn = uma();
    const std::vector<double> dists{50, 150, 300, 500};
    const auto curve =
        empirical_los_curve(scn.law, scn.cfg.ue_height_m, scn.cfg.ue_height_m,
                            dists, 4000, 31);
    REQUIRE(curve.p_los.size() == dists.size());
    for (std::size_t i = 0; i < dists.size(); ++i) {
        const double expect = los_probability(dists[i], scn.los_d2d);
        CHECK(std::abs(curve.p_los[i] - expect) < curve.ci[i] + 0.02);
    }
}
