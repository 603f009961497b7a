#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace mmrelay {

// Thrown when an integral cannot be resolved to the requested tolerance.
struct NumericalError : std::runtime_error {
    double achieved;
    NumericalError(const std::string& what, double achieved_)
        : std::runtime_error(what), achieved(achieved_) {}
};

struct QuadResult {
    double value = 0.0;
    double error = 0.0;       // error estimate (absolute)
    std::size_t evals = 0;
};

namespace detail {

// 15-point Kronrod nodes/weights with embedded 7-point Gauss rule.
inline constexpr double gk_x[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144838258730, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.0};
inline constexpr double gk_wk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr double gk_wg[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

template <class F>
inline QuadResult gk15(const F& f, double a, double b) {
    const double h = 0.5 * (b - a);
    const double mid = 0.5 * (a + b);
    const double fc = f(mid);
    double resg = gk_wg[3] * fc;
    double resk = gk_wk[7] * fc;
    for (int j = 0; j < 7; ++j) {
        const double dx = h * gk_x[j];
        const double fsum = f(mid - dx) + f(mid + dx);
        resk += gk_wk[j] * fsum;
        if (j % 2 == 1) resg += gk_wg[j / 2] * fsum;
    }
    QuadResult r;
    r.value = resk * h;
    r.error = std::abs((resk - resg) * h);
    r.evals = 15;
    return r;
}

}  // namespace detail

// Adaptive Gauss-Kronrod on [a,b]. Stops when the summed error estimate
// drops below max(abs_tol, rel_tol*|integral|).
template <class F>
QuadResult integrate_adaptive(const F& f, double a, double b,
                              double rel_tol = 1e-9, double abs_tol = 1e-300,
                              std::size_t max_intervals = 4000) {
    struct Seg { double a, b, value, error; };
    QuadResult whole = detail::gk15(f, a, b);
    std::vector<Seg> segs{{a, b, whole.value, whole.error}};
    std::size_t evals = whole.evals;
    double total = whole.value, err = whole.error;
    while (err > std::max(abs_tol, rel_tol * std::abs(total)) &&
           segs.size() < max_intervals) {
        std::size_t worst = 0;
        for (std::size_t i = 1; i < segs.size(); ++i)
            if (segs[i].error > segs[worst].error) worst = i;
        Seg s = segs[worst];
        const double m = 0.5 * (s.a + s.b);
        if (m <= s.a || m >= s.b) break;  // interval exhausted in double precision
        QuadResult l = detail::gk15(f, s.a, m);
        QuadResult r = detail::gk15(f, m, s.b);
        evals += l.evals + r.evals;
        segs[worst] = {s.a, m, l.value, l.error};
        segs.push_back({m, s.b, r.value, r.error});
        total += l.value + r.value - s.value;
        err += l.error + r.error - s.error;
    }
    // recompute sums to shed cancellation from the incremental updates
    total = 0.0;
    err = 0.0;
    for (const auto& s : segs) {
        total += s.value;
        err += s.error;
    }
    if (err > std::max(abs_tol, rel_tol * std::abs(total)) * 10.0 + 1e-300)
        throw NumericalError("integrate_adaptive: tolerance not reached",
                             std::abs(total) > 0 ? err / std::abs(total) : err);
    return {total, err, evals};
}

// Integral over [0, inf) of a decaying integrand. Panels [0,s], [s,2s],
// [2s,4s], ... are resolved adaptively and accumulation stops once two
// consecutive panels contribute below rel_tol of the running total.
template <class F>
QuadResult integrate_improper(const F& f, double rel_tol = 1e-9,
                              double scale = 1.0, std::size_t max_panels = 64) {
    double lo = 0.0, hi = scale, total = 0.0, err = 0.0;
    std::size_t evals = 0, quiet = 0;
    for (std::size_t p = 0; p < max_panels; ++p) {
        QuadResult r = integrate_adaptive(f, lo, hi, rel_tol * 0.1,
                                          rel_tol * 1e-3 * std::abs(total) + 1e-300);
        total += r.value;
        err += r.error;
        evals += r.evals;
        if (std::abs(r.value) <= rel_tol * std::abs(total) + 1e-300)
            ++quiet;
        else
            quiet = 0;
        if (quiet >= 2 && p >= 3) return {total, err, evals};
        lo = hi;
        hi *= 2.0;
    }
    throw NumericalError("integrate_improper: tail did not converge",
                         std::abs(total) > 0 ? err / std::abs(total) : err);
}

}  // namespace mmrelay
