#pragma once
// compactly supported test functions and the windows built from them: the
// additive bump phi_delta, the multiplicative bump psi_delta, the smooth
// indicator of ]y,2y], the dyadic window omega_X, the smoothed error term
// computed two provably-equal ways, and the erf-based gaussian window.

#include <vector>

#include "zageo/arith.hpp"

namespace zageo {

class lvalue_cache;

// base bump C exp(-1/(1-t^2)) on (-1,1), normalized to integral 1; C is
// fixed once by quadrature at first use
double bump_phi(double t);
// its antiderivative from -1, tabulated once (0 at -1, 1 at +1)
double bump_phi_cdf(double x);
// delta^{-1} phi(t/delta): support [-delta, delta], integral 1
double phi_delta(double t, double delta);

// base multiplicative bump C' exp(-1/((2v-1)(2-v))) on (1/2,2), normalized
// so that int psi dv/v = 1
double psi_base(double v);
// delta^{-1} psi(v^{1/delta}): support [2^{-delta}, 2^{delta}], and the
// dv/v normalization survives the rescaling
double psi_delta(double v, double delta);

// phi_{delta} * indicator of ]y,2y]: equals the cdf difference
// Phi((t-y)/delta) - Phi((t-2y)/delta); 0 outside ]y-delta, 2y+delta],
// 1 on ]y+delta, 2y-delta]
double smooth_indicator(double t, double y, double delta2);

struct window_params {
    double X = 0.0;
    double delta1 = 0.0;
    double delta2 = 0.0;
};
// X > 2, deltas in (0,1], and the window support 2^{-delta1}X - delta2 must
// stay above the first trace n = 3 so no term below D = 5 is touched
void validate_window(const window_params& p);

struct smooth_eval {
    double value = 0.0;
    double quad_error = 0.0;
    bool converged = true;
};

// omega_X(t) = int psi_{delta1}(y/X) 1sm_{delta2,]y,2y]}(t) dy/y: rises from
// 0 to a plateau at 1 over [2^{-d1}X - d2, 2^{d1}X + d2] and falls back over
// [2^{1-d1}X - d2, 2^{1+d1}X + d2]; always computed by quadrature, the
// plateau value 1 is not special-cased
smooth_eval omega_window(double t, const window_params& p);

// E_{d1,d2}(X) as the double integral of psi phi (E_0(2y+v) - E_0(y+v)):
// partial sums enter through a prefix table (served from the cache when one
// is passed), the density part by direct quadrature.  X <= 1e5.
smooth_eval smoothed_error_direct(const window_params& p,
                                  lvalue_cache* cache = nullptr);

// the same quantity through the window: sum_n L_n omega_X(n) minus
// int m_0(u) omega_X(u) du; equality with the direct route is the main
// cross-check of the window machinery
smooth_eval smoothed_error_via_window(const window_params& p,
                                      lvalue_cache* cache = nullptr);

// (1/(T sqrt(pi))) int_X^2X exp(-(x-K)^2/T^2) dK via the erf difference;
// 1 < T < X
double gaussian_window(double x, double X, double T);

}  // namespace zageo
