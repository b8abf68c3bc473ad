#pragma once
// adaptive Gauss-Kronrod 15(7) quadrature for real and complex integrands.
// local bisection with per-interval error budget tol*width/total, so the
// accepted intervals' error estimates sum to at most the requested tolerance.

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <vector>

namespace zageo {

struct quad_opts {
    double abs_tol = 1e-10;
    double rel_tol = 1e-12;
    int max_depth = 32;
};

template <typename T>
struct quad_result {
    T value{};
    double error = 0.0;      // accumulated |GK15 - G7| estimate
    bool converged = true;   // false if max_depth hit with budget exceeded
    long evals = 0;
};

namespace gkdetail {

// QUADPACK dqk15 nodes/weights (positive half; node 7 is the midpoint)
inline constexpr double xgk[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144838258730, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr double wgk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr double wg[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

template <typename T, typename F>
void gk15(F&& f, double a, double b, T& kronrod, double& err) {
    const double h = 0.5 * (b - a), c = 0.5 * (a + b);
    T fv[15];
    for (int i = 0; i < 7; ++i) {
        fv[i] = f(c - h * xgk[i]);
        fv[14 - i] = f(c + h * xgk[i]);
    }
    fv[7] = f(c);
    T resk{}, resg{};
    for (int i = 0; i < 7; ++i) resk += wgk[i] * (fv[i] + fv[14 - i]);
    resk += wgk[7] * fv[7];
    for (int i = 0; i < 3; ++i) resg += wg[i] * (fv[2 * i + 1] + fv[13 - 2 * i]);
    resg += wg[3] * fv[7];
    kronrod = resk * h;
    err = std::abs(resk - resg) * std::abs(h);
}

template <typename T, typename F>
void refine(F&& f, double a, double b, double budget, int depth,
            quad_result<T>& out, const quad_opts& opt) {
    T val;
    double err;
    gk15(f, a, b, val, err);
    out.evals += 15;
    if (err <= budget || depth >= opt.max_depth) {
        out.value += val;
        out.error += err;
        if (err > budget && depth >= opt.max_depth) out.converged = false;
        return;
    }
    double m = 0.5 * (a + b);
    refine(f, a, m, 0.5 * budget, depth + 1, out, opt);
    refine(f, m, b, 0.5 * budget, depth + 1, out, opt);
}

}  // namespace gkdetail

// integrate f over [a,b]; breakpoints (if any) force initial subdivision at
// known kinks/jumps so the local error estimate stays meaningful
template <typename T, typename F>
quad_result<T> integrate_gk(F&& f, double a, double b, const quad_opts& opt = {},
                            const std::vector<double>& breakpoints = {}) {
    quad_result<T> out;
    if (!(b > a)) return out;
    std::vector<double> pts{a};
    for (double p : breakpoints)
        if (p > a && p < b) pts.push_back(p);
    pts.push_back(b);
    std::sort(pts.begin(), pts.end());
    // first pass to scale the relative tolerance
    double rough = 0.0;
    for (size_t i = 0; i + 1 < pts.size(); ++i) {
        T v;
        double e;
        gkdetail::gk15(f, pts[i], pts[i + 1], v, e);
        rough += std::abs(v);
    }
    double tol = std::max(opt.abs_tol, opt.rel_tol * rough);
    for (size_t i = 0; i + 1 < pts.size(); ++i) {
        double budget = tol * (pts[i + 1] - pts[i]) / (b - a);
        gkdetail::refine(f, pts[i], pts[i + 1], budget, 0, out, opt);
    }
    return out;
}

inline quad_result<double> integrate(const std::function<double(double)>& f, double a,
                                     double b, const quad_opts& opt = {},
                                     const std::vector<double>& breakpoints = {}) {
    return integrate_gk<double>(f, a, b, opt, breakpoints);
}

inline quad_result<std::complex<double>> integrate_c(
    const std::function<std::complex<double>(double)>& f, double a, double b,
    const quad_opts& opt = {}, const std::vector<double>& breakpoints = {}) {
    return integrate_gk<std::complex<double>>(f, a, b, opt, breakpoints);
}

}  // namespace zageo
