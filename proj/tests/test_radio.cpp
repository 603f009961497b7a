#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "doctest.h"
#include "mmrelay/radio.hpp"
#include "mmrelay/rng.hpp"

using namespace mmrelay;

TEST_CASE("db and dbm conversions round-trip") {
    CHECK(db_to_linear(0) == doctest::Approx(1.0));
    CHECK(db_to_linear(10) == doctest::Approx(10.0));
    CHECK(linear_to_db(db_to_linear(7.3)) == doctest::Approx(7.3));
    CHECK(dbm_to_watts(30) == doctest::Approx(1.0));
    CHECK(dbm_to_watts(0) == doctest::Approx(1e-3));
}

TEST_CASE("sectored pattern from array size") {
    const auto p2 = derive_pattern(2);
    CHECK(p2.phi == doctest::Approx(0.866));
    CHECK(p2.gm == doctest::Approx(4.0));
    CHECK(p2.gs == doctest::Approx(2.0));  // 1/sin^2(3*pi/4)

    const auto p4 = derive_pattern(4);
    CHECK(linear_to_db(p4.gm) == doctest::Approx(12.041).epsilon(1e-3));
    CHECK(linear_to_db(p4.gs) == doctest::Approx(0.688).epsilon(1e-2));
    CHECK(p4.phi * 180 / M_PI == doctest::Approx(24.81).epsilon(1e-3));

    CHECK(derive_pattern(8).gm == doctest::Approx(64.0));
    CHECK_THROWS_AS(derive_pattern(1), std::invalid_argument);
}

TEST_CASE("gain mixture: probabilities sum to one, gains ordered") {
    const auto tx = derive_pattern(8), rx = derive_pattern(2);
    const auto mix = gain_mixture(tx, rx);
    double sum = 0;
    for (double p : mix.prob) sum += p;
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(mix.gain[0] == doctest::Approx(tx.gm * rx.gm));
    CHECK(mix.gain[1] == doctest::Approx(tx.gm * rx.gs));
    CHECK(mix.gain[2] == doctest::Approx(tx.gs * rx.gm));
    CHECK(mix.gain[3] == doctest::Approx(tx.gs * rx.gs));
    const double pt = tx.phi / (2 * M_PI), pr = rx.phi / (2 * M_PI);
    CHECK(mix.prob[0] == doctest::Approx(pt * pr).epsilon(1e-12));
    CHECK(mix.prob[0] == doctest::Approx(4.75e-3).epsilon(1e-2));
    CHECK(mix.prob[3] == doctest::Approx((1 - pt) * (1 - pr)).epsilon(1e-12));
}

TEST_CASE("interferer gain sampling matches the mixture frequencies") {
    const auto mix = gain_mixture(derive_pattern(8), derive_pattern(2));
    auto rng = make_stream(21, 0, StreamClass::Gains);
    std::array<int, 4> count{};
    const int n = 400000;
    for (int i = 0; i < n; ++i) {
        const double g = sample_interferer_gain(mix, rng);
        for (int k = 0; k < 4; ++k)
            if (g == mix.gain[k]) {
                ++count[k];
                break;
            }
    }
    for (int k = 0; k < 4; ++k) {
        const double p = mix.prob[k];
        const double se = std::sqrt(p * (1 - p) / n);
        CHECK(std::abs(count[k] / double(n) - p) < 4 * se + 1e-9);
    }
}

TEST_CASE("path loss closed forms at reference distances") {
    const auto mm = PathLossModel::uma_mmwave_los(28.0);
    // 20 log10(d) + 32.4 + 20 log10(fc)
    CHECK(mm.path_loss_db(1.0) ==
          doctest::Approx(32.4 + 20 * std::log10(28.0)).epsilon(1e-12));
    CHECK(mm.path_loss_db(100.0) ==
          doctest::Approx(40.0 + 32.4 + 20 * std::log10(28.0)).epsilon(1e-12));
    CHECK(mm.alpha == doctest::Approx(2.0));
    // linear form A d^alpha consistent with the dB form
    for (double d : {3.0, 57.0, 412.0})
        CHECK(linear_to_db(mm.path_loss_linear(d)) ==
              doctest::Approx(mm.path_loss_db(d)).epsilon(1e-10));

    const auto uw_n = PathLossModel::uma_microwave_nlos(2.0, 1.5);
    const double a1 = 44.9 - 6.55 * std::log10(1.5);
    const double a2 = 14.78 + 5.83 * std::log10(1.5);
    CHECK(uw_n.path_loss_db(200.0) ==
          doctest::Approx(a1 * std::log10(200.0) + a2 + 34.97 * std::log10(2.0))
              .epsilon(1e-10));
    CHECK(uw_n.alpha == doctest::Approx(a1 / 10.0));

    // indoor microwave distances are in km
    const auto ind_l = PathLossModel::ind_microwave_los();
    CHECK(ind_l.path_loss_db(1000.0) == doctest::Approx(89.5).epsilon(1e-10));
    const auto ind_n = PathLossModel::ind_microwave_nlos();
    CHECK(ind_n.path_loss_db(1000.0) == doctest::Approx(147.4).epsilon(1e-10));

    const auto ind_mm = PathLossModel::ind_mmwave_los(28.0);
    CHECK(ind_mm.alpha == doctest::Approx(1.73));
    CHECK(ind_mm.path_loss_db(1.0) ==
          doctest::Approx(32.4 + 20 * std::log10(28.0)).epsilon(1e-12));
}

TEST_CASE("normalized noise anchors") {
    // -174 + 10 log10(1e8) + 9 = -85 dBm over 35 dBm tx: 10^{-12}
    CHECK(normalized_noise(-174, 100e6, 9, 35) == doctest::Approx(1e-12).epsilon(1e-10));
    CHECK(normalized_noise(-174, 20e6, 9, 23) ==
          doctest::Approx(3.1696e-12).epsilon(1e-3));
}

TEST_CASE("received power helpers") {
    LinkBudget b;
    b.tx_power_w = 2.0;
    const auto mm = PathLossModel::uma_mmwave_los(28.0);
    const double d = 120.0;
    const double pr = rx_power_mmwave(b, 64.0, mm, d, false);
    CHECK(pr == doctest::Approx(2.0 * 64.0 / mm.path_loss_linear(d)).epsilon(1e-12));
    CHECK(rx_power_mmwave(b, 64.0, mm, d, true) == 0.0);

    const auto uw = PathLossModel::uma_microwave_los(2.0);
    CHECK(rx_power_microwave(b, 0.7, uw, d) ==
          doctest::Approx(2.0 * 0.7 / uw.path_loss_linear(d)).epsilon(1e-12));
}
