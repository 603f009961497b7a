#include "mmrelay/spectral.hpp"

#include <algorithm>
#include <cmath>

#include "mmrelay/analytic.hpp"
#include "mmrelay/quadrature.hpp"

namespace mmrelay {

namespace {

const double kLn2 = std::log(2.0);

// int_a^b p(t)/(1+t) dt via the substitution u = ln(1+t).
double coverage_integral(const CoverageFn& p, double a, double b) {
    if (b <= a) return 0.0;
    auto g = [&](double u) { return p(std::expm1(u)); };
    return integrate_adaptive(g, std::log1p(a), std::log1p(b), 1e-9, 1e-12).value;
}

}  // namespace

double se_cellular(const CoverageFn& coverage, double tau_max) {
    return coverage_integral(coverage, 0.0, tau_max) / kLn2;
}

double se_conditional_above(const CoverageFn& coverage, double tau, double tau_max) {
    const double p = coverage(tau);
    if (!(p > 0)) throw UndefinedConditional("se_conditional_above: p(tau) = 0");
    return (std::log1p(tau) + coverage_integral(coverage, tau, tau_max) / p) / kLn2;
}

double se_conditional_below(const CoverageFn& coverage, double tau, double tau_max) {
    (void)tau_max;  // kept for signature symmetry; the integral stops at tau
    const double p = coverage(tau);
    if (!(p < 1)) throw UndefinedConditional("se_conditional_below: p(tau) = 1");
    return (-p * std::log1p(tau) + coverage_integral(coverage, 0.0, tau)) /
           (kLn2 * (1.0 - p));
}

double se_overall(const CoverageFn& pc_cell, const CoverageFn& pc_d2d, double tau,
                  double tau_max) {
    const double p_cc = pc_cell(tau);
    const double p_c = coverage_overall(p_cc, pc_d2d(tau));
    const double above = p_cc > 0 ? se_conditional_above(pc_cell, tau, tau_max)
                                  : std::log1p(tau) / kLn2;
    const double below = p_cc < 1 ? se_conditional_below(pc_cell, tau, tau_max)
                                  : std::log1p(tau) / kLn2;
    return p_c * above + (1.0 - p_c) * below;
}

double uplink_resource(const CoverageFn& pc_cell, const CoverageFn& pc_d2d,
                       double tau, double tau_max, double w_dl) {
    const double p_cc = pc_cell(tau);
    const double p_cd = pc_d2d(tau);
    const double gamma_c = se_conditional_above(pc_cell, tau, tau_max);
    const double gamma_d = se_conditional_above(pc_d2d, tau, tau_max);
    if (!(gamma_d > 0)) throw UndefinedConditional("uplink_resource: gamma_D = 0");
    return gamma_c / gamma_d * (1.0 - p_cc) * p_cc * p_cd * w_dl;
}

SpectralTable::SpectralTable(const CoverageFn& coverage, double tau_max, int n)
    : tau_max_(tau_max) {
    const double umax = std::log1p(tau_max);
    du_ = umax / n;
    p_.resize(n + 1);
    cum_.resize(n + 1);
    for (int i = 0; i <= n; ++i) p_[i] = coverage(std::expm1(i * du_));
    cum_[0] = 0.0;
    for (int i = 1; i <= n; ++i)
        cum_[i] = cum_[i - 1] + 0.5 * (p_[i - 1] + p_[i]) * du_;
}

double SpectralTable::gamma() const { return cum_.back() / kLn2; }

double SpectralTable::coverage(double tau) const {
    const double u = std::log1p(std::clamp(tau, 0.0, tau_max_));
    const int i = std::min(static_cast<int>(u / du_), static_cast<int>(p_.size()) - 2);
    const double f = u / du_ - i;
    return p_[i] + f * (p_[i + 1] - p_[i]);
}

double SpectralTable::cumulative(double tau) const {
    const double u = std::log1p(std::clamp(tau, 0.0, tau_max_));
    const int i = std::min(static_cast<int>(u / du_), static_cast<int>(p_.size()) - 2);
    const double f = u / du_ - i;
    const double pa = p_[i], pb = p_[i] + f * (p_[i + 1] - p_[i]);
    return cum_[i] + 0.5 * (pa + pb) * f * du_;
}

double SpectralTable::gamma_above(double tau) const {
    const double p = coverage(tau);
    if (!(p > 0)) throw UndefinedConditional("gamma_above: p(tau) = 0");
    return (std::log1p(tau) + (cum_.back() - cumulative(tau)) / p) / kLn2;
}

double SpectralTable::gamma_below(double tau) const {
    const double p = coverage(tau);
    if (!(p < 1)) throw UndefinedConditional("gamma_below: p(tau) = 1");
    return (-p * std::log1p(tau) + cumulative(tau)) / (kLn2 * (1.0 - p));
}

}  // namespace mmrelay
