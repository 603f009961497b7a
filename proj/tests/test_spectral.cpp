#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "doctest.h"
#include "mmrelay/quadrature.hpp"
#include "mmrelay/spectral.hpp"

using namespace mmrelay;

namespace {

const double kTauMax = 1e4;  // 40 dB

// smooth synthetic coverage curve, strictly inside (0,1)
double smooth_cov(double t) { return 0.97 / (1.0 + std::pow(t / 50.0, 0.8)); }

}  // namespace

TEST_CASE("perfect coverage gives log2(1 + tau_max)") {
    auto one = [](double) { return 1.0; };
    CHECK(se_cellular(one, kTauMax) ==
          doctest::Approx(std::log2(1.0 + kTauMax)).epsilon(1e-9));
    auto zero = [](double) { return 0.0; };
    CHECK(se_cellular(zero, kTauMax) == doctest::Approx(0.0));
}

TEST_CASE("conditional SEs bracket the unconditioned SE") {
    const double tau = 10.0;
    const double g = se_cellular(smooth_cov, kTauMax);
    const double ga = se_conditional_above(smooth_cov, tau, kTauMax);
    const double gb = se_conditional_below(smooth_cov, tau, kTauMax);
    CHECK(ga >= g);
    CHECK(g >= gb);
    CHECK(ga >= std::log2(1.0 + tau));  // conditioned on exceeding tau
}

TEST_CASE("law of total expectation ties the pieces together") {
    for (double tau : {0.5, 10.0, 300.0}) {
        const double p = smooth_cov(tau);
        const double ga = se_conditional_above(smooth_cov, tau, kTauMax);
        const double gb = se_conditional_below(smooth_cov, tau, kTauMax);
        const double g = se_cellular(smooth_cov, kTauMax);
        CHECK(p * ga + (1 - p) * gb == doctest::Approx(g).epsilon(1e-6));
    }
}

TEST_CASE("no relays: overall SE collapses to the cellular SE") {
    auto no_d2d = [](double) { return 0.0; };
    const double g = se_cellular(smooth_cov, kTauMax);
    for (double tau : {1.0, 31.6, 1000.0})
        CHECK(se_overall(smooth_cov, no_d2d, tau, kTauMax) ==
              doctest::Approx(g).epsilon(1e-6));
}

TEST_CASE("relay gain is nonnegative and bounded by the conditional SE") {
    auto d2d = [](double t) { return 0.9 / (1.0 + t / 200.0); };
    for (double tau : {1.0, 10.0, 100.0}) {
        const double with = se_overall(smooth_cov, d2d, tau, kTauMax);
        const double without = se_cellular(smooth_cov, kTauMax);
        const double ga = se_conditional_above(smooth_cov, tau, kTauMax);
        CHECK(with >= without - 1e-9);
        CHECK(with <= ga + 1e-9);
    }
}

TEST_CASE("uplink resource algebra with constant coverages") {
    auto pc = [](double) { return 0.6; };
    auto pd = [](double) { return 0.8; };
    const double tau = 10.0, w = 100e6;
    const double gc = se_conditional_above(pc, tau, kTauMax);
    const double gd = se_conditional_above(pd, tau, kTauMax);
    // constant p: gamma_above = log2(1+tau) + log2((1+taumax)/(1+tau))
    const double expect_g = std::log2(1 + tau) +
                            std::log2((1.0 + kTauMax) / (1.0 + tau));
    CHECK(gc == doctest::Approx(expect_g).epsilon(1e-9));
    CHECK(gd == doctest::Approx(expect_g).epsilon(1e-9));
    CHECK(uplink_resource(pc, pd, tau, kTauMax, w) ==
          doctest::Approx(gc / gd * 0.4 * 0.6 * 0.8 * w).epsilon(1e-9));
}

TEST_CASE("degenerate conditionals throw") {
    auto step = [](double t) { return t < 1.0 ? 1.0 : 0.0; };
    CHECK_THROWS_AS(se_conditional_above(step, 2.0, kTauMax), UndefinedConditional);
    CHECK_THROWS_AS(se_conditional_below(step, 0.5, kTauMax), UndefinedConditional);
}

TEST_CASE("spectral table reproduces the direct quadrature") {
    SpectralTable tab(smooth_cov, kTauMax);
    CHECK(tab.gamma() == doctest::Approx(se_cellular(smooth_cov, kTauMax)).epsilon(1e-5));
    for (double tau : {0.1, 5.0, 100.0, 5000.0}) {
        CHECK(tab.coverage(tau) == doctest::Approx(smooth_cov(tau)).epsilon(1e-5));
        CHECK(tab.gamma_above(tau) ==
              doctest::Approx(se_conditional_above(smooth_cov, tau, kTauMax))
                  .epsilon(1e-4));
        CHECK(tab.gamma_below(tau) ==
              doctest::Approx(se_conditional_below(smooth_cov, tau, kTauMax))
                  .epsilon(1e-4));
    }
}

TEST_CASE("spectral table satisfies total expectation exactly") {
    SpectralTable tab(smooth_cov, kTauMax);
    for (double tau : {0.3, 7.0, 900.0}) {
        const double p = tab.coverage(tau);
        CHECK(p * tab.gamma_above(tau) + (1 - p) * tab.gamma_below(tau) ==
              doctest::Approx(tab.gamma()).epsilon(1e-12));
    }
}

TEST_CASE("spectral table degenerate conditionals throw") {
    SpectralTable ones([](double) { return 1.0; }, kTauMax);
    CHECK_THROWS_AS(ones.gamma_below(1.0), UndefinedConditional);
    SpectralTable zeros([](double) { return 0.0; }, kTauMax);
    CHECK_THROWS_AS(zeros.gamma_above(1.0), UndefinedConditional);
}
