#include "mmrelay/analytic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "mmrelay/quadrature.hpp"

namespace mmrelay {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kInf = std::numeric_limits<double>::infinity();

// K2(a,b) = [(1+ba)e^{-ba} - (1+bb)e^{-bb}]/beta^2, the annulus weight
// int_a^b x e^{-beta x} dx; series form keeps the beta -> 0 limit (b^2-a^2)/2.
double annulus_weight(double a, double b, double beta) {
    if (b <= a) return 0.0;
    if (std::isinf(b)) {
        if (beta <= 0) return kInf;
        return (1.0 + beta * a) * std::exp(-beta * a) / (beta * beta);
    }
    const double xb = beta * b;
    if (xb < 1e-3) {
        auto pw = [](double v, int k) { return std::pow(v, k); };
        return (pw(b, 2) - pw(a, 2)) / 2.0 - beta * (pw(b, 3) - pw(a, 3)) / 3.0 +
               beta * beta * (pw(b, 4) - pw(a, 4)) / 8.0 -
               beta * beta * beta * (pw(b, 5) - pw(a, 5)) / 30.0;
    }
    const double v = (1.0 + beta * a) * std::exp(-beta * a) -
                     (1.0 + beta * b) * std::exp(-beta * b);
    return std::max(v, 0.0) / (beta * beta);
}

double decay_scale(double lambda, const LosModel& los) {
    if (los.beta > 0) return 1.0 / los.beta;
    return lambda > 0 ? 1.0 / std::sqrt(kPi * lambda * std::max(los.c, 1e-12)) : 1.0;
}

}  // namespace

void CoverageInputs::validate() const {
    if (lambda_b < 0 || lambda_r < 0) throw std::invalid_argument("negative intensity");
    if (rho < 0 || rho > 1) throw std::invalid_argument("rho outside [0,1]");
    if (sigma2_cell < 0 || sigma2_d2d_mm < 0 || sigma2_d2d_uw < 0)
        throw std::invalid_argument("negative noise");
}

InterferenceRadii interference_radii(double tau, double d0, double g0,
                                     const GainMixture& mix, double A,
                                     double alpha, double sigma2) {
    if (!(d0 > 0)) throw std::invalid_argument("interference_radii: d0 <= 0");
    InterferenceRadii r;
    const double den = g0 * std::pow(d0, -alpha) - tau * A * sigma2;
    if (den <= 0) {
        r.outage = true;
        r.d1 = r.d2 = r.d3 = r.d4 = kInf;
        return r;
    }
    auto radius = [&](double g) { return std::pow(g * tau / den, 1.0 / alpha); };
    r.d1 = radius(mix.gain[3]);  // GsGs: side sector inner
    r.d2 = radius(mix.gain[1]);  // GmGs: side sector outer
    r.d3 = radius(mix.gain[2]);  // GsGm: main sector inner
    r.d4 = radius(mix.gain[0]);  // GmGm: main sector outer
    return r;
}

MmWaveLink cellular_link(const CoverageInputs& in) {
    MmWaveLink l;
    l.lambda_serving = in.lambda_b;
    l.lambda_interf = in.lambda_b;
    l.los = in.los_cell;
    l.tx = in.bs;
    l.rx = in.ue;
    l.g0 = in.g0_cell;
    l.A = in.pl_mm.intercept;
    l.alpha = in.pl_mm.alpha;
    l.sigma2 = in.sigma2_cell;
    l.nir_from_serving = true;
    l.quad_tol = in.quad_tol;
    return l;
}

MmWaveLink d2d_mm_link(const CoverageInputs& in) {
    MmWaveLink l;
    l.lambda_serving = in.lambda_r;
    l.lambda_interf = in.rho * in.lambda_b;
    l.los = in.los_d2d;
    l.tx = in.ue;  // interferers are UEs on both ends of a D2D link
    l.rx = in.ue;
    l.g0 = in.g0_d2d;
    l.A = in.pl_mm.intercept;
    l.alpha = in.pl_mm.alpha;
    l.sigma2 = in.sigma2_d2d_mm;
    l.nir_from_serving = false;
    l.quad_tol = in.quad_tol;
    return l;
}

double nir_measure(double tau, double d0, const MmWaveLink& link) {
    if (link.lambda_interf <= 0) return 0.0;
    const auto mix = gain_mixture(link.tx, link.rx);
    const auto r = interference_radii(tau, d0, link.g0, mix, link.A, link.alpha,
                                      link.sigma2);
    if (r.outage) return kInf;
    const double lo = link.nir_from_serving ? d0 : 0.0;
    const double beta = link.los.beta;
    return link.lambda_interf * link.los.c *
           (link.rx.phi * annulus_weight(lo, std::max(lo, r.d3), beta) +
            (2 * kPi - link.rx.phi) * annulus_weight(lo, std::max(lo, r.d1), beta));
}

double fir_measure(double tau, double d0, const MmWaveLink& link) {
    if (link.lambda_interf <= 0) return 0.0;
    const auto mix = gain_mixture(link.tx, link.rx);
    const auto r = interference_radii(tau, d0, link.g0, mix, link.A, link.alpha,
                                      link.sigma2);
    if (r.outage) return kInf;
    const double lo = link.nir_from_serving ? d0 : 0.0;
    const double beta = link.los.beta;
    const double m_lo = std::max(lo, r.d3), s_lo = std::max(lo, r.d1);
    return link.tx.phi / (2 * kPi) * link.lambda_interf * link.los.c *
           (link.rx.phi * annulus_weight(m_lo, std::max(m_lo, r.d4), beta) +
            (2 * kPi - link.rx.phi) * annulus_weight(s_lo, std::max(s_lo, r.d2), beta));
}

double coverage_mmwave(const MmWaveLink& link, double tau) {
    if (!(tau >= 0)) throw std::invalid_argument("coverage: tau < 0");
    if (link.lambda_serving <= 0) return 0.0;
    const double beta = link.los.beta;
    auto integrand = [&](double x) {
        if (x <= 0) return 0.0;
        const double den = link.g0 * std::pow(x, -link.alpha) -
                           tau * link.A * link.sigma2;
        if (den <= 0) return 0.0;
        const double ln = nir_measure(tau, x, link);
        const double lf = fir_measure(tau, x, link);
        const double expo = -ln - lf -
                            expected_los_count(x, link.lambda_serving, link.los) -
                            beta * x;
        return x * std::exp(expo);
    };
    const double scale = decay_scale(link.lambda_serving, link.los);
    const double v = integrate_improper(integrand, link.quad_tol, scale).value;
    const double p = 2 * kPi * link.lambda_serving * link.los.c * v;
    return std::clamp(p, 0.0, 1.0);
}

double coverage_mmwave_cellular(const CoverageInputs& in, double tau) {
    in.validate();
    return coverage_mmwave(cellular_link(in), tau);
}

double coverage_mmwave_d2d(const CoverageInputs& in, double tau) {
    in.validate();
    return coverage_mmwave(d2d_mm_link(in), tau);
}

double coverage_noise_limited(double lambda, const LosModel& los, double g0,
                              double A, double alpha, double sigma2, double tau) {
    if (!(tau > 0) || !(sigma2 > 0))
        throw std::invalid_argument("coverage_noise_limited: tau and sigma2 must be > 0");
    const double r_star = std::pow(g0 / (tau * A * sigma2), 1.0 / alpha);
    return -std::expm1(-expected_los_count(r_star, lambda, los));
}

double coverage_noise_limited_cellular(const CoverageInputs& in, double tau) {
    in.validate();
    return coverage_noise_limited(in.lambda_b, in.los_cell, in.g0_cell,
                                  in.pl_mm.intercept, in.pl_mm.alpha,
                                  in.sigma2_cell, tau);
}

std::pair<double, double> association_probs_microwave(const CoverageInputs& in) {
    in.validate();
    if (!(in.lambda_r > 0)) throw std::invalid_argument("association_probs: lambda_r <= 0");
    const double lam = in.lambda_r;
    const LosModel& los = in.los_d2d;
    const double a_l = in.pl_uw_los.intercept, al_l = in.pl_uw_los.alpha;
    const double a_n = in.pl_uw_nlos.intercept, al_n = in.pl_uw_nlos.alpha;
    const double atilde = std::pow(a_l / a_n, 1.0 / al_n);
    // serving is LOS at distance x iff the nearest NLOS point is farther than
    // the equal-path-loss distance atilde * x^{al_l/al_n}
    auto integrand = [&](double x) {
        if (x <= 0) return 0.0;
        const double y = atilde * std::pow(x, al_l / al_n);
        const double expo = -expected_los_count(x, lam, los) - los.beta * x -
                            kPi * lam * y * y + expected_los_count(y, lam, los);
        return x * std::exp(expo);
    };
    const double scale = decay_scale(lam, los);
    const double s_l = std::clamp(
        2 * kPi * lam * los.c * integrate_improper(integrand, in.quad_tol, scale).value,
        0.0, 1.0);
    return {s_l, 1.0 - s_l};
}

double laplace_interference(double s, double rho_lambda_b, double alpha_n) {
    if (s < 0) throw std::invalid_argument("laplace_interference: s < 0");
    if (!(alpha_n > 2)) throw std::invalid_argument("laplace_interference: alpha_n <= 2");
    const double c_a = (2 * kPi / alpha_n) / std::sin(2 * kPi / alpha_n);
    return std::exp(-kPi * rho_lambda_b * std::pow(s, 2.0 / alpha_n) * c_a);
}

double coverage_microwave_d2d(const CoverageInputs& in, double tau) {
    in.validate();
    if (!(tau >= 0)) throw std::invalid_argument("coverage: tau < 0");
    if (in.lambda_r <= 0) return 0.0;
    const double lam = in.lambda_r;
    const LosModel& los = in.los_d2d;
    const double a_l = in.pl_uw_los.intercept, al_l = in.pl_uw_los.alpha;
    const double a_n = in.pl_uw_nlos.intercept, al_n = in.pl_uw_nlos.alpha;
    const double rho_lb = in.rho * in.lambda_b;
    const double s2 = in.sigma2_d2d_uw;
    const auto [s_los, s_nlos] = association_probs_microwave(in);

    // NLOS-served: nearest-NLOS distance law, Rayleigh noise term, interference
    // Laplace transform at the NLOS path-loss exponent. The intercept cancels
    // between signal and interference, so the transform argument is tau*x^al_n.
    auto f_nlos = [&](double x) {
        if (x <= 0) return 0.0;
        const double expo = expected_los_count(x, lam, los) - kPi * lam * x * x -
                            in.mu * tau * s2 * a_n * std::pow(x, al_n);
        return x * (1.0 - los.c * std::exp(-los.beta * x)) * std::exp(expo) *
               laplace_interference(tau * std::pow(x, al_n), rho_lb, al_n);
    };
    auto f_los = [&](double x) {
        if (x <= 0) return 0.0;
        const double expo = -expected_los_count(x, lam, los) - los.beta * x -
                            in.mu * tau * s2 * a_l * std::pow(x, al_l);
        return x * std::exp(expo) *
               laplace_interference(tau * (a_l / a_n) * std::pow(x, al_l), rho_lb, al_n);
    };
    const double up_n = 1.0 / std::sqrt(kPi * lam);
    const double p_n = std::clamp(
        2 * kPi * lam * integrate_improper(f_nlos, in.quad_tol, up_n).value, 0.0, 1.0);
    const double p_l = std::clamp(
        2 * kPi * lam * los.c *
            integrate_improper(f_los, in.quad_tol, decay_scale(lam, los)).value,
        0.0, 1.0);
    return s_nlos * p_n + s_los * p_l;
}

double coverage_overall(double p_cc, double p_cd) {
    if (p_cc < 0 || p_cc > 1 || p_cd < 0 || p_cd > 1)
        throw std::invalid_argument("coverage_overall: probabilities outside [0,1]");
    return p_cc * (1.0 + p_cd) - p_cc * p_cc * p_cd;
}

}  // namespace mmrelay
