#pragma once
// Kloosterman sums S(m,n;c) = sum_{x mod c, (x,c)=1} e((mx + n xbar)/c),
// the e(D/c)/c-weighted sum over moduli c <= C, and the phi-weighted double
// sum (1/N) sum_n h(n) sum_q S(n,n;q)/q phi(4 pi n / q) with phi the
// spectral test function — evaluated directly and through its
// summation-by-parts form as mutual cross-checks.

#include <vector>

#include "zageo/arith.hpp"
#include "zageo/spectral.hpp"

namespace zageo {

struct kloosterman_value {
    long long m = 0, n = 0;
    u64 c = 1;
    double value = 0.0;        // S(m,n;c) is real: x <-> -x pairs conjugates
    double imag_residue = 0.0; // |imaginary part| the float sum accumulated
};

// production evaluator: coprimality marks, one batched-inversion sweep
// (prefix products of the units, a single extended gcd, backward unwind),
// then one phase pass.  O(c) multiplies, O(phi(c)) sincos.  c <= 1e7.
kloosterman_value kloosterman(long long m, long long n, u64 c);

// reference evaluator with no shared state: per-x extended gcd.  O(c log c);
// meant for cross-checks at moderate c, not scans.
kloosterman_value kloosterman_direct(long long m, long long n, u64 c);

// Weil/Estermann bound d(c) gcd(m,n,c)^{1/2} c^{1/2}
double weil_bound(long long m, long long n, u64 c);

// S(n,n;c) for every n in [n_lo, n_hi] from one build of the modulus:
// counts w[s] = #{x : x + xbar = s (mod c)}, then one phase pass per n over
// the nonzero s.  c <= 1e6 (tables are O(c)).
std::vector<double> kloosterman_diag_range(u64 c, long long n_lo,
                                           long long n_hi);

// sum_{c <= C} e(D/c)/c S(n,n;c); C <= 1e5 (work grows like C^2/2)
cplx linnik_sum(long long n, double C, u64 D);

// smooth bump on (N, 2N): h(x) = 2 phi((2x-3N)/N), so integral h = N and
// |h^(j)| scales like N^{-j}
double h_weight(double x, double N);

struct weighted_sum_result {
    cplx value{};
    double N = 0;
    u64 Q = 0;                 // moduli summed: q = 1..Q
    test_function_params params;
    double q_peak = 0;         // |phi(4 pi n/q)| peaks near q = 2 pi n a
    u64 q_damped_below = 0;    // q below this: exp(-4 pi n a/q) < 1e-12
                               // for every n in the support
    double tail_estimate = 0;  // Weil-bound majorant of the dropped q > Q
                               // mass; real tails are far smaller (the S
                               // oscillate), so this is an upper bound only
    bool truncation_warning = false;  // Q under 4x the top-of-support peak
};

// direct route: (1/N) sum_n h(n) sum_{q<=Q} S(n,n;q)/q phi_test(4 pi n/q).
// N in [4, 1e3], Q <= 1e6.
weighted_sum_result weighted_kloosterman_sum(double N, double X, double T,
                                             u64 Q);

// same quantity through summation by parts: with
//   A_n(y) = sum_{q<=y} S(n,n;q)/q e^{i b 4 pi n/q},
//   F_n(y) = y^{-2} e^{-4 pi n a / y},
// value = (8 pi/N) sinh^2(beta) sum_n h(n) n^2
//         [ A_n(Q) F_n(Q) - integral_1^Q A_n(y) F_n'(y) dy ],
// the integral done piecewise on [k, k+1] where A_n is constant.  Shares
// only the raw S values with the direct route; the test-function split into
// phase and damping, the 8 pi sinh^2 prefactor, and the boundary/integral
// assembly are independent algebra.
weighted_sum_result weighted_kloosterman_sum_parts(double N, double X,
                                                   double T, u64 Q);

}  // namespace zageo
