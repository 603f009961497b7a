#pragma once

#include <functional>
#include <stdexcept>
#include <vector>

namespace mmrelay {

using CoverageFn = std::function<double(double)>;

struct UndefinedConditional : std::domain_error {
    using std::domain_error::domain_error;
};

// Average SE (1/ln2) int_0^taumax p(t)/(1+t) dt.
double se_cellular(const CoverageFn& coverage, double tau_max);

// Conditional SE given SINR > tau / SINR <= tau.
double se_conditional_above(const CoverageFn& coverage, double tau, double tau_max);
double se_conditional_below(const CoverageFn& coverage, double tau, double tau_max);

// Relay-assisted SE at threshold tau.
double se_overall(const CoverageFn& pc_cell, const CoverageFn& pc_d2d, double tau,
                  double tau_max);

// Uplink resource share needed to feed the relays (same units as w_dl).
double uplink_resource(const CoverageFn& pc_cell, const CoverageFn& pc_d2d,
                       double tau, double tau_max, double w_dl);

// Tabulated cumulative int_0^tau p(t)/(1+t) dt on a log(1+t) grid; one pass
// over the coverage function, then O(1) per query. The conditional split
// satisfies the total-expectation identity exactly by construction.
class SpectralTable {
  public:
    SpectralTable(const CoverageFn& coverage, double tau_max, int n = 3000);

    double gamma() const;                  // unconditioned SE
    double coverage(double tau) const;     // interpolated p(tau)
    double cumulative(double tau) const;   // int_0^tau p/(1+t) dt
    double gamma_above(double tau) const;
    double gamma_below(double tau) const;

  private:
    double tau_max_;
    double du_;
    std::vector<double> p_, cum_;  // on u_i = i*du, t = e^u - 1
};

}  // namespace mmrelay
