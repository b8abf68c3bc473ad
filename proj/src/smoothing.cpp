#include "zageo/smoothing.hpp"

#include <cmath>
#include <memory>
#include <optional>
#include <stdexcept>

#include "zageo/averages.hpp"
#include "zageo/quadrature.hpp"
#include "zageo/summation.hpp"
#include "zageo/zagier.hpp"

namespace zageo {

namespace {

double bump_raw(double t) {
    double w = 1.0 - t * t;
    return w > 0.0 ? std::exp(-1.0 / w) : 0.0;
}

double psi_raw(double v) {
    if (!(v > 0.5 && v < 2.0)) return 0.0;
    double w = (2.0 * v - 1.0) * (2.0 - v);
    return std::exp(-1.0 / w);
}

// normalizations and the bump antiderivative, fixed once by quadrature:
// cumulative cells on a uniform grid, cubic 4-point read-back
struct bump_table {
    static constexpr int n = 4096;
    double h, inv_h;
    double phi_norm;  // 1 / int_{-1}^{1} bump_raw
    double psi_norm;  // 1 / int_{1/2}^{2} psi_raw dv/v
    std::vector<double> cdf;
    bump_table() : cdf(n + 1) {
        h = 2.0 / n;
        inv_h = 1.0 / h;
        quad_opts cell;
        cell.abs_tol = 1e-16;
        cell.rel_tol = 1e-14;
        cell.max_depth = 12;
        cdf[0] = 0.0;
        for (int i = 0; i < n; ++i) {
            double a = -1.0 + i * h, b = a + h;
            cdf[i + 1] = cdf[i] + integrate(bump_raw, a, b, cell).value;
        }
        phi_norm = 1.0 / cdf[n];
        psi_norm =
            1.0 / integrate([](double v) { return psi_raw(v) / v; }, 0.5, 2.0,
                            {1e-14, 1e-13, 40})
                      .value;
    }
    double cdf_at(double x) const {
        if (x <= -1.0) return 0.0;
        if (x >= 1.0) return 1.0;
        double u = (x + 1.0) * inv_h;
        int i = (int)u;
        if (i < 1) i = 1;
        if (i > n - 2) i = n - 2;
        double s = u - i;
        double vm = cdf[i - 1], v0 = cdf[i], v1 = cdf[i + 1], v2 = cdf[i + 2];
        double a = -s * (s - 1.0) * (s - 2.0) / 6.0;
        double b = (s + 1.0) * (s - 1.0) * (s - 2.0) / 2.0;
        double c = -(s + 1.0) * s * (s - 2.0) / 2.0;
        double d = (s + 1.0) * s * (s - 1.0) / 6.0;
        double y = (a * vm + b * v0 + c * v1 + d * v2) * phi_norm;
        return y < 0.0 ? 0.0 : (y > 1.0 ? 1.0 : y);
    }
};

const bump_table& bumps() {
    static bump_table tbl;
    return tbl;
}

// prefix sums P[k] = sum_{3 <= j <= k} of the central values; served from
// the cache when present, the sieved engine past the crossover otherwise
std::vector<double> central_prefix(u64 n_hi, lvalue_cache* cache) {
    std::vector<double> P(n_hi + 1, 0.0);
    std::unique_ptr<half_line_engine> eng;
    if (n_hi > 2000 && !(cache && cache->size() + 2 >= n_hi))
        eng = std::make_unique<half_line_engine>(n_hi);
    kahan_real acc;
    for (u64 k = 3; k <= n_hi; ++k) {
        std::optional<cplx> hit;
        if (cache) hit = cache->get(k);
        double v;
        if (hit) {
            v = hit->real();
        } else {
            v = eng ? eng->value(k) : zagier_L_half(k);
            if (cache) cache->put(k, cplx(v, 0.0));
        }
        acc.add(v);
        P[k] = acc.value();
    }
    return P;
}

}  // namespace

double bump_phi(double t) { return bumps().phi_norm * bump_raw(t); }

double bump_phi_cdf(double x) { return bumps().cdf_at(x); }

double phi_delta(double t, double delta) {
    if (!(delta > 0.0)) throw std::invalid_argument("phi_delta: delta > 0");
    return bump_phi(t / delta) / delta;
}

double psi_base(double v) { return bumps().psi_norm * psi_raw(v); }

double psi_delta(double v, double delta) {
    if (!(delta > 0.0)) throw std::invalid_argument("psi_delta: delta > 0");
    if (!(v > 0.0)) return 0.0;
    // compression lives in the exponent: support [2^{-delta}, 2^{delta}]
    return psi_base(std::pow(v, 1.0 / delta)) / delta;
}

double smooth_indicator(double t, double y, double delta2) {
    if (!(delta2 > 0.0 && y > delta2))
        throw std::invalid_argument("smooth_indicator: need y > delta2 > 0");
    // exact convolution phi_{delta2} * 1_{]y,2y]} as a cdf difference
    return bump_phi_cdf((t - y) / delta2) - bump_phi_cdf((t - 2.0 * y) / delta2);
}

void validate_window(const window_params& p) {
    if (!(p.X > 2.0))
        throw std::invalid_argument("window: X > 2 required");
    if (!(p.delta1 > 0.0 && p.delta1 <= 1.0) ||
        !(p.delta2 > 0.0 && p.delta2 <= 1.0))
        throw std::invalid_argument("window: deltas must lie in (0,1]");
    if (!(std::pow(2.0, -p.delta1) * p.X - p.delta2 > 2.0))
        throw std::invalid_argument(
            "window: support must stay above the first trace");
}

smooth_eval omega_window(double t, const window_params& p) {
    validate_window(p);
    double ylo = std::pow(2.0, -p.delta1) * p.X;
    double yhi = std::pow(2.0, p.delta1) * p.X;
    quad_opts opt;
    opt.abs_tol = 1e-12;
    opt.rel_tol = 1e-13;
    // the indicator's cdf pieces kink where (t-y)/d2 or (t-2y)/d2 hits +-1
    std::vector<double> bp{t - p.delta2, t + p.delta2, 0.5 * (t - p.delta2),
                           0.5 * (t + p.delta2)};
    auto f = [&](double y) {
        return psi_delta(y / p.X, p.delta1) * smooth_indicator(t, y, p.delta2) /
               y;
    };
    auto q = integrate(f, ylo, yhi, opt, bp);
    return {q.value, q.error, q.converged};
}

smooth_eval smoothed_error_direct(const window_params& p, lvalue_cache* cache) {
    validate_window(p);
    if (p.X > 1e5)
        throw std::invalid_argument("smoothed_error_direct: X above 1e5");
    double ylo = std::pow(2.0, -p.delta1) * p.X;
    double yhi = std::pow(2.0, p.delta1) * p.X;
    u64 n_hi = u64(2.0 * yhi + p.delta2) + 1;
    auto P = central_prefix(n_hi, cache);
    auto S = [&](double u) {
        u64 i = u < 3.0 ? 2 : u64(u);
        return P[i > n_hi ? n_hi : i];
    };
    auto dp = make_density_params(0.0);
    quad_opts mopt;
    mopt.abs_tol = 1e-12 * p.X;
    mopt.rel_tol = 1e-13;
    double rtX = std::sqrt(p.X);
    quad_opts opt;
    opt.abs_tol = 1e-9 * rtX;
    opt.rel_tol = 1e-11;
    opt.max_depth = 36;
    double inner_err = 0.0;
    bool inner_conv = true;
    // the sum part is a step function of (y,v): its jumps sit where
    // floor(y+v) or floor(2y+v) moves, handed to the quadrature as
    // breakpoints so each cell sees a constant times the smooth weight.
    // the density part has no jumps and integrates in a few nodes.
    auto inner = [&](double v) {
        std::vector<double> bp;
        for (i64 k = i64(std::ceil(ylo + v)); k <= i64(yhi + v) + 1; ++k)
            bp.push_back(double(k) - v);
        for (i64 k = i64(std::ceil(2.0 * ylo + v)); k <= i64(2.0 * yhi + v) + 1;
             ++k)
            bp.push_back(0.5 * (double(k) - v));
        auto fs = [&](double y) {
            return psi_delta(y / p.X, p.delta1) / y *
                   (S(2.0 * y + v) - S(y + v));
        };
        auto qs = integrate(fs, ylo, yhi, opt, bp);
        auto fm = [&](double y) {
            double md = integrate([&](double u) { return density_m(u, dp).real(); },
                                  y + v, 2.0 * y + v, mopt)
                            .value;
            return psi_delta(y / p.X, p.delta1) / y * md;
        };
        auto qm = integrate(fm, ylo, yhi, opt);
        inner_err += qs.error + qm.error;
        inner_conv = inner_conv && qs.converged && qm.converged;
        return qs.value - qm.value;
    };
    auto f = [&](double v) { return phi_delta(v, p.delta2) * inner(v); };
    auto q = integrate(f, -p.delta2, p.delta2, opt);
    return {q.value, q.error + inner_err, q.converged && inner_conv};
}

smooth_eval smoothed_error_via_window(const window_params& p,
                                      lvalue_cache* cache) {
    validate_window(p);
    if (p.X > 1e5)
        throw std::invalid_argument("smoothed_error_via_window: X above 1e5");
    double lo = std::pow(2.0, -p.delta1) * p.X - p.delta2;
    double hi = std::pow(2.0, 1.0 + p.delta1) * p.X + p.delta2;
    u64 n_lo = u64(std::ceil(lo));
    if (n_lo < 3) n_lo = 3;
    u64 n_hi = u64(std::floor(hi));
    auto P = central_prefix(n_hi, cache);
    kahan_real sum;
    double err = 0.0;
    bool conv = true;
    for (u64 k = n_lo; k <= n_hi; ++k) {
        double L = P[k] - P[k - 1];
        auto w = omega_window(double(k), p);
        sum.add(L * w.value);
        err += std::abs(L) * w.quad_error;
        conv = conv && w.converged;
    }
    auto dp = make_density_params(0.0);
    quad_opts opt;
    opt.abs_tol = 1e-9 * std::sqrt(p.X);
    opt.rel_tol = 1e-11;
    opt.max_depth = 36;
    double plat_lo = std::pow(2.0, p.delta1) * p.X + p.delta2;
    double plat_hi = std::pow(2.0, 1.0 - p.delta1) * p.X - p.delta2;
    auto f = [&](double u) {
        return density_m(u, dp).real() * omega_window(u, p).value;
    };
    auto q = integrate(f, lo, hi, opt, {plat_lo, plat_hi});
    // the outer estimate cannot see the per-node window quadrature error
    double win_err = 1e-12 * (hi - lo) * 2.0;
    return {sum.value() - q.value, err + q.error + win_err,
            conv && q.converged};
}

double gaussian_window(double x, double X, double T) {
    if (!(X > 1.0) || !(T > 1.0) || !(T < X))
        throw std::invalid_argument("gaussian_window: need 1 < T < X");
    return 0.5 * (std::erf((2.0 * X - x) / T) - std::erf((X - x) / T));
}

}  // namespace zageo
