#pragma once
// Zagier L-series L_D(s) for positive nonsquare discriminants D = n^2-4:
// root-counting coefficients c_q(D), Dirichlet coefficients lambda_q(D),
// evaluation at s = 1 and on the critical line via the factorization
//   L_D(s) = L(s, chi_D0) * sum_{d|f} mu(d) (D0|d) d^-s sigma_{1-2s}(f/d),
// the exponentially smoothed partial sum S_V, and its residual against L_D(1).

#include <memory>
#include <mutex>
#include <shared_mutex>
#include <list>
#include <unordered_map>
#include <vector>

#include "zageo/arith.hpp"

namespace zageo {

// #{ r in [1, 2q] : r^2 = D (mod 4q) }, requires D = 0 or 1 (mod 4).
// closed form at each prime power of 4q, combined multiplicatively; O(d(4q) log q).
u64 root_count(i64 D, u64 q);

// Liouville function (-1)^Omega(m): Dirichlet coefficients of zeta(2s)/zeta(s)
int liouville(u64 m);

// lambda_q(D) = sum_{m|q} liouville(m) * root_count(D, q/m); multiplicative in q.
// equals kronecker(D, q) whenever D is fundamental.
i64 series_coefficient(i64 D, u64 q);

// c_q and lambda_q for q = 1..Q in one pass (linear sieve over prime powers)
struct coefficient_table {
    i64 disc = 0;
    std::vector<u32> c;     // c[q], q in [1, Q]; c[0] unused
    std::vector<i64> lam;   // lambda[q]
    u64 limit() const { return c.empty() ? 0 : c.size() - 1; }
    size_t bytes() const { return c.size() * sizeof(u32) + lam.size() * sizeof(i64); }
};
coefficient_table build_coefficient_table(i64 D, u64 Q);

// shared LRU cache of coefficient tables keyed by (D, Q-covering); readers
// concurrent, insertion single-writer.  budget in bytes, default 256 MB.
class coefficient_cache {
public:
    explicit coefficient_cache(size_t budget = size_t(256) << 20) : budget_(budget) {}
    std::shared_ptr<const coefficient_table> get(i64 D, u64 Q);
    size_t bytes_used() const;
private:
    size_t budget_;
    size_t used_ = 0;
    mutable std::shared_mutex mtx_;
    std::list<i64> order_;  // most recent first
    struct entry {
        std::shared_ptr<const coefficient_table> table;
        std::list<i64>::iterator pos;
    };
    std::unordered_map<i64, entry> map_;
};

// process-wide table cache used by the series routines below
coefficient_cache& shared_coefficient_cache();

struct lseries_value {
    u64 n = 0;              // trace, D = n^2-4
    cplx s{};
    cplx value{};
    bool via_factorization = true;
    double error_estimate = 0.0;
};

// L_{n^2-4}(s) through the finite factor over d | conductor; stable at s = 1
// and on the critical line.  n >= 3.
lseries_value zagier_L(u64 n, cplx s);

// truncated Dirichlet series sum_{q<=Q} lambda_q / q^s; requires Re s > 3/2
// for a meaningful tail estimate (|lambda_q| <= d(q) sqrt(q))
lseries_value zagier_L_series(u64 n, cplx s, u64 Q);

// real specializations used by the scans
double zagier_L1(u64 n);        // L_{n^2-4}(1)
double zagier_L_half(u64 n);    // L_{n^2-4}(1/2)
// finite divisor factor T_f(1/2) tying the series to the primitive L-value
double conductor_factor_half(i64 D0, u64 f);

// S_V = sum_{q<=Q} lambda_q(n^2-4)/q * exp(-q/V).  pass Q = 0 for the
// default truncation Q = 20V (tail < 1e-8); a smaller explicit Q warns.
double smoothed_series(u64 n, double V, u64 Q = 0);

// L_{n^2-4}(1) - S_V: the contour-shift remainder of the smoothed series
double afe_residual(u64 n, double V);

// central values |L_{n^2-4}(1/2)| for n = 3..n_max with the n^{1/3}
// normalization; max_normalized reports the largest third column.
struct central_value_record {
    u64 n;
    double central;      // |L_{n^2-4}(1/2)|
    double normalized;   // central / n^{1/3}
};
struct central_scan {
    std::vector<central_value_record> rows;
    double max_normalized = 0.0;
    u64 argmax = 0;
};
central_scan subconvexity_scan(u64 n_max);

}  // namespace zageo
