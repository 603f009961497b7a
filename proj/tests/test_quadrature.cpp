#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "doctest.h"
#include "mmrelay/quadrature.hpp"
#include "mmrelay/rng.hpp"

using namespace mmrelay;

TEST_CASE("adaptive quadrature on smooth closed forms") {
    auto r = integrate_adaptive([](double x) { return std::sin(x); }, 0.0, M_PI);
    CHECK(r.value == doctest::Approx(2.0).epsilon(1e-10));

    auto poly = integrate_adaptive([](double x) { return x * x * x; }, -1.0, 3.0);
    CHECK(poly.value == doctest::Approx(20.0).epsilon(1e-10));
}

TEST_CASE("improper integral of exp(-x) is 1") {
    auto r = integrate_improper([](double x) { return std::exp(-x); }, 1e-10);
    CHECK(r.value == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("improper integral with closed form 2*pi*lam*c/beta^2") {
    const double lam = 4.62e-6, c = 0.889, beta = 2.95e-3;
    auto f = [&](double x) { return 2 * M_PI * lam * x * c * std::exp(-beta * x); };
    auto r = integrate_improper(f, 1e-10, 1.0 / beta);
    CHECK(r.value ==
          doctest::Approx(2 * M_PI * lam * c / (beta * beta)).epsilon(1e-8));
}

TEST_CASE("improper integral stable under initial panel halving") {
    auto f = [](double x) { return x * std::exp(-0.01 * x - 1e-6 * x * x); };
    const double a = integrate_improper(f, 1e-9, 100.0).value;
    const double b = integrate_improper(f, 1e-9, 50.0).value;
    CHECK(a == doctest::Approx(b).epsilon(1e-6));
}

TEST_CASE("gaussian tail converges") {
    auto r = integrate_improper([](double x) { return std::exp(-x * x); }, 1e-10);
    CHECK(r.value == doctest::Approx(std::sqrt(M_PI) / 2).epsilon(1e-9));
}

TEST_CASE("rng streams are deterministic and class-separated") {
    auto a1 = make_stream(7, 3, StreamClass::BaseStations);
    auto a2 = make_stream(7, 3, StreamClass::BaseStations);
    auto b = make_stream(7, 3, StreamClass::Relays);
    auto c = make_stream(7, 4, StreamClass::BaseStations);
    CHECK(a1() == a2());
    CHECK(a1() == a2());
    auto fresh = make_stream(7, 3, StreamClass::BaseStations);
    CHECK(fresh() != b());
    CHECK(fresh() != c());
}

TEST_CASE("context offset gives distinct stream families") {
    auto direct = make_stream(1, 0, offset_class(StreamClass::Gains, 0));
    auto hop = make_stream(1, 0, offset_class(StreamClass::Gains, 1));
    CHECK(direct() != hop());
}
