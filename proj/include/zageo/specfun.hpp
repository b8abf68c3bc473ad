#pragma once
// complex special functions: Gamma (Lanczos + reflection), Riemann/Hurwitz zeta
// and zeta' (Euler-Maclaurin, adaptive shift), Dirichlet L for real characters
// (Hurwitz-sum route for small conductors, incomplete-gamma series route for
// large), Gauss 2F1 power series with tail control, and the stationary-phase
// style bound checker for oscillatory integrals.

#include <functional>

#include "zageo/arith.hpp"

namespace zageo {

// ---- gamma ----------------------------------------------------------------
cplx gamma_c(cplx s);   // relative error <= 1e-12 for |s| <= 100 off poles
cplx lgamma_c(cplx s);  // principal branch, Re s > 0 only

// ---- zeta family ----------------------------------------------------------
// Euler-Maclaurin for Re s > 0 (s != 1); Re s <= 0 routed through the
// functional equation zeta(s) = 2^s pi^(s-1) sin(pi s/2) Gamma(1-s) zeta(1-s)
cplx riemann_zeta(cplx s);
cplx zeta_derivative(cplx s);              // differentiated Euler-Maclaurin
cplx hurwitz_zeta(cplx s, double a);       // a in (0,1], Re s > 0, s != 1

// ---- incomplete gamma -----------------------------------------------------
// upper Gamma(a,x) for x > 0; a = 0 gives E1(x).  series below x = a+1,
// Lentz continued fraction above.
double igamma_upper(double a, double x);
cplx igamma_upper_c(cplx a, double x);  // same switch, complex order

// ---- Dirichlet L ----------------------------------------------------------
// L(s, chi_D0) for fundamental D0 (chi = kronecker(D0, .)).
// route A (definition): |D0|^-s * sum_a chi(a) hurwitz_zeta(s, a/|D0|)
// route B (large |D0| or s = 1): incomplete-gamma approximate functional
// equation, root number +1 for real primitive characters of either parity.
cplx dirichlet_L(cplx s, i64 D0);
cplx dirichlet_L_hurwitz(cplx s, i64 D0);      // route A, cost O(|D0|)
// route B, cost O(sqrt|D0|); x_cut <= 0 selects 30 + 0.8|Im s|, countering the
// e^{pi|t|/4} error amplification from the 1/Gamma(s/2) normalization
cplx dirichlet_L_afe(cplx s, i64 D0, double x_cut = 0.0);

// fast real central value L(1/2, chi_D0), D0 > 0, via the a = 1/4 kernel;
// chi may be supplied pre-sieved (chi[m] for 1 <= m <= M) to amortize scans
double dirichlet_L_half(i64 D0, double x_cut = 16.0);
double dirichlet_L_half_sieved(i64 D0, const signed char* chi, u64 M,
                               const double* logm = nullptr);

// tabulated Gamma(1/4, x); log_x variant skips the interpolation log() when
// the caller already has log(x) (hot scan loops)
double central_kernel(double x);
double central_kernel_log(double x, double log_x);

// truncation length M = sqrt(x_cut*|D0|/pi) used by the AFE routes
u64 afe_terms(i64 D0, double x_cut);

// ---- Gauss hypergeometric -------------------------------------------------
struct hyp_result {
    cplx value;
    double err_estimate = 0.0;
    bool converged = true;
};
// power series with ratio-based tail bound; |z| < 0.9 enforced
hyp_result gauss_2f1(cplx a, cplx b, cplx c, double z, double tol = 1e-12,
                     int itermax = 20000);

// ---- oscillatory integral bound -------------------------------------------
struct osc_result {
    cplx integral;
    double bound = 0.0;  // 2*(m+1)*max|p/q'|
    bool holds = false;
};
// |int_a^b p(x) e^{i q(x)} dx| <= 2(m+1) max|p/q'| when p/q' splits into m
// monotone pieces and q is monotone; q' sampled by central differences
osc_result oscillatory_bound_check(const std::function<double(double)>& p,
                                   const std::function<double(double)>& q,
                                   double a, double b, int m);

}  // namespace zageo
