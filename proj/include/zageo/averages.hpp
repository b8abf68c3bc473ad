#pragma once
// partial sums of the central values over n, the limiting density m_t, its
// integral (the main term), the error term E_t(X) = sum - integral, omega
// scans of |E|/sqrt(X), and log-log exponent fits.
//
// the t = 0 density is (log(x^2-4) - pi/2 + 3*gamma - 2 zeta'(3/2)/zeta(3/2)
// - log 8pi) / (2 zeta(3/2)); for t != 0 it is a constant plus an oscillating
// multiple of (x^2-4)^{-it} with zeta/Gamma prefactors (zeta(it) is reached
// through the functional equation).

#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "zageo/arith.hpp"

namespace zageo {

struct density_params {
    double t = 0.0;
    double zeta_32 = 0.0;        // zeta(3/2)
    double zeta_prime_32 = 0.0;  // zeta'(3/2)
    double euler_gamma = 0.0;
    double c0 = 0.0;       // -pi/2 + 3 gamma - 2 zeta'/zeta(3/2) - log 8pi
    cplx pref_const;       // zeta(1+2it)/zeta(3/2+it)               (t != 0)
    cplx pref_osc;         // 2^{1/2+it} sin(pi s/2) pi^{-it} zeta(it)
                           //   / zeta(3/2-it) * Gamma(it)           (t != 0)
};
// constants bundle; the zeta values are frozen doubles cross-checked against
// the series evaluators in the tests
density_params make_density_params(double t);

cplx density_m(double x, const density_params& dp);
cplx density_m(double x, double t);

struct main_term {
    cplx value;
    double quad_error = 0.0;
    bool converged = true;
};
// int_2^X m_t(u) du; u = 2 cosh v kills the endpoint log singularity and the
// oscillatory piece integrates in w = log(2 sinh v) where the phase is linear
main_term main_term_integral(double X, double t);

// sum_{3 <= n <= X} of the n-th central value at 1/2 + it; X <= 1e7
cplx partial_sum(double X, double t);

struct scan_record {
    double X = 0.0;
    cplx sum;        // running partial sum at X
    cplx main;       // main term integral at X
    cplx err;        // sum - main
    double normalized = 0.0;  // |err| / sqrt(X)
};

// disk-backed per-n central values for one fixed twist t, so repeated scans
// reuse the expensive half-line evaluations.  append-only CSV; the header
// records t and a reload with a different twist throws.
class lvalue_cache {
  public:
    lvalue_cache() = default;  // in-memory only
    lvalue_cache(const std::string& path, double t);
    ~lvalue_cache();
    lvalue_cache(const lvalue_cache&) = delete;
    lvalue_cache& operator=(const lvalue_cache&) = delete;

    std::optional<cplx> get(u64 n) const;
    void put(u64 n, cplx v);  // first write wins; later puts for same n ignored
    size_t size() const { return values_.size(); }
    double twist() const { return t_; }

  private:
    std::unordered_map<u64, cplx> values_;
    double t_ = 0.0;
    void* file_ = nullptr;  // FILE*, append mode
    u64 unflushed_ = 0;
};

// flat evaluator for the t = 0 scans: the prime table, float sqrt tables, and
// the smoothing kernel (tabulated uniformly in s = (pi/D0)^{1/4} sqrt(m),
// where it has bounded curvature) are built once and shared across every n up
// to n_max.  value(n) is then a single chi-sieved dot product of ~2.3n terms.
class half_line_engine {
  public:
    explicit half_line_engine(u64 n_max);
    // full series value at 1/2 with D = n^2 - 4; 3 <= n <= limit()
    double value(u64 n);
    u64 limit() const { return n_cap_; }

  private:
    static constexpr int table_n = 1 << 16;
    u64 n_cap_ = 0, m_cap_ = 0;
    std::vector<u32> spf_;
    std::vector<float> sqrtm_, rsqrtm_;
    std::vector<signed char> chi_;  // per-call character scratch
    std::vector<double> gk_;
    double inv_hs_ = 0.0;
};

// one record per grid point (ascending grid required); a single incremental
// pass over n shared by all grid points.  t = 0 runs the sieved engine above
// past a few thousand terms; t != 0 falls back to the per-n complex evaluator.
std::vector<scan_record> error_scan(const std::vector<double>& grid, double t,
                                    lvalue_cache* cache = nullptr);

struct fit_result {
    double slope = 0.0;
    double intercept = 0.0;
    double r2 = 0.0;
};
// least squares of log|err| against log X over records with err != 0
fit_result exponent_fit(const std::vector<scan_record>& records);

}  // namespace zageo
