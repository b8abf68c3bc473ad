#include "zageo/kloosterman.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numeric>
#include <stdexcept>

#include "zageo/quadrature.hpp"
#include "zageo/smoothing.hpp"
#include "zageo/summation.hpp"

namespace zageo {

namespace {

constexpr double PI = 3.141592653589793238462643383279502884;
constexpr double TWO_PI = 2.0 * PI;

// exp(-60) times any desk-scale prefactor is < 1e-18: terms and quadrature
// panels damped harder than this are dropped
constexpr double SKIP_AX = 60.0;

// units of Z/c with their inverses, built once per modulus: strike the
// prime factors off a coprimality map, take prefix products of the units,
// invert the full product with one extended gcd, unwind backward.  the
// prefix array is overwritten in place by the inverses on the way down.
struct modulus_units {
    std::vector<u32> x;    // ascending units in [1, c)
    std::vector<u32> inv;  // inv[i] * x[i] = 1 (mod c)
};

modulus_units build_units(u64 c) {
    std::vector<unsigned char> coprime(c, 1);
    for (auto& [p, e] : factorize(c).factors)
        for (u64 k = 0; k < c; k += p) coprime[k] = 0;
    modulus_units u;
    u.x.reserve(c / 2);
    for (u64 k = 1; k < c; ++k)
        if (coprime[k]) u.x.push_back((u32)k);
    u.inv.resize(u.x.size());
    u64 run = 1;
    for (std::size_t i = 0; i < u.x.size(); ++i) {
        run = run * u.x[i] % c;
        u.inv[i] = (u32)run;
    }
    u64 t = inv_mod(run, c);
    for (std::size_t i = u.x.size(); i-- > 0;) {
        u64 pref = i ? u.inv[i - 1] : 1;
        u64 xi = u.x[i];
        u.inv[i] = (u32)(t * pref % c);
        t = t * xi % c;
    }
    return u;
}

u64 reduce_arg(long long v, u64 c) {
    long long r = v % (long long)c;
    return (u64)(r < 0 ? r + (long long)c : r);
}

// support of the n-weight: integers strictly inside (N, 2N)
struct support_point {
    long long n;
    double h;
};

std::vector<support_point> support_weights(double N) {
    std::vector<support_point> v;
    for (long long n = (long long)std::floor(N) + 1; (double)n < 2.0 * N; ++n) {
        double h = h_weight((double)n, N);
        if (h > 0.0) v.push_back({n, h});
    }
    return v;
}

void check_weighted_args(double N, u64 Q) {
    if (!(N >= 4.0) || !(N <= 1e3))
        throw std::invalid_argument("weighted sum: N in [4, 1e3] required");
    if (Q < 1 || Q > 1'000'000)
        throw std::invalid_argument("weighted sum: Q in [1, 1e6] required");
}

// shared metadata: peak location, damped range, Weil-bound tail majorant
void fill_metadata(weighted_sum_result& r,
                   const std::vector<support_point>& sup) {
    double a = r.params.a;
    long long n_lo = sup.front().n, n_hi = sup.back().n;
    r.q_peak = TWO_PI * (double)n_hi * a;
    r.truncation_warning = (double)r.Q < 4.0 * r.q_peak;
    r.q_damped_below = (u64)std::floor(4.0 * PI * (double)n_lo * a / 27.631);
    double s52 = 0.0;
    for (const auto& p : sup) s52 += p.h * std::pow((double)p.n, 2.5);
    double sb2 = std::norm(std::sinh(r.params.beta));
    double Qd = (double)r.Q;
    double zeta_tail =
        (2.0 / 3.0) * std::pow(Qd, -1.5) * (std::log(Qd) + 1.822);
    r.tail_estimate = 8.0 * PI * sb2 / r.N * s52 * zeta_tail;
}

}  // namespace

kloosterman_value kloosterman(long long m, long long n, u64 c) {
    if (c == 0 || c > 10'000'000)
        throw std::invalid_argument("kloosterman: c in [1, 1e7] required");
    kloosterman_value kv;
    kv.m = m;
    kv.n = n;
    kv.c = c;
    if (c == 1) {
        kv.value = 1.0;
        return kv;
    }
    u64 mr = reduce_arg(m, c), nr = reduce_arg(n, c);
    auto u = build_units(c);
    double sr = 0.0, si = 0.0, step = TWO_PI / (double)c;
    for (std::size_t i = 0; i < u.x.size(); ++i) {
        u64 k = (mr * u.x[i] + nr * u.inv[i]) % c;
        double ang = step * (double)k;
        sr += std::cos(ang);
        si += std::sin(ang);
    }
    kv.value = sr;
    kv.imag_residue = std::abs(si);
    return kv;
}

kloosterman_value kloosterman_direct(long long m, long long n, u64 c) {
    if (c == 0 || c > 10'000'000)
        throw std::invalid_argument("kloosterman: c in [1, 1e7] required");
    kloosterman_value kv;
    kv.m = m;
    kv.n = n;
    kv.c = c;
    if (c == 1) {
        kv.value = 1.0;
        return kv;
    }
    u64 mr = reduce_arg(m, c), nr = reduce_arg(n, c);
    double sr = 0.0, si = 0.0, step = TWO_PI / (double)c;
    for (u64 x = 1; x < c; ++x) {
        if (std::gcd(x, c) != 1) continue;
        u64 k = (mr * x + nr * inv_mod(x, c)) % c;
        double ang = step * (double)k;
        sr += std::cos(ang);
        si += std::sin(ang);
    }
    kv.value = sr;
    kv.imag_residue = std::abs(si);
    return kv;
}

double weil_bound(long long m, long long n, u64 c) {
    u64 am = (u64)std::llabs(m), an = (u64)std::llabs(n);
    u64 g = std::gcd(std::gcd(am, an), c);
    return (double)divisors(c).size() * std::sqrt((double)g * (double)c);
}

std::vector<double> kloosterman_diag_range(u64 c, long long n_lo,
                                           long long n_hi) {
    if (c == 0 || c > 1'000'000)
        throw std::invalid_argument("diag_range: c in [1, 1e6] required");
    if (n_hi < n_lo)
        throw std::invalid_argument("diag_range: empty n range");
    std::size_t cnt = (std::size_t)(n_hi - n_lo + 1);
    if (c == 1) return std::vector<double>(cnt, 1.0);

    auto u = build_units(c);
    // w[s] = #{x unit : x + xbar = s}; S(n,n;c) = sum_s w[s] e(ns/c)
    std::vector<u32> w(c, 0);
    for (std::size_t i = 0; i < u.x.size(); ++i)
        ++w[((u64)u.x[i] + u.inv[i]) % c];
    std::vector<u32> ss, ws;
    for (u64 s = 0; s < c; ++s)
        if (w[s]) {
            ss.push_back((u32)s);
            ws.push_back(w[s]);
        }

    // e(j/c) tables by rotation, resynced every 256 steps
    std::vector<double> cs(c), sn(c);
    double step = TWO_PI / (double)c;
    double cr = 1.0, ci = 0.0;
    double c1 = std::cos(step), s1 = std::sin(step);
    for (u64 j = 0; j < c; ++j) {
        if ((j & 255u) == 0) {
            cr = std::cos(step * (double)j);
            ci = std::sin(step * (double)j);
        }
        cs[j] = cr;
        sn[j] = ci;
        double nr = cr * c1 - ci * s1;
        ci = cr * s1 + ci * c1;
        cr = nr;
    }

    std::vector<double> out(cnt);
    double cd = (double)c, invc = 1.0 / cd;
    for (std::size_t k = 0; k < cnt; ++k) {
        u64 nres = reduce_arg(n_lo + (long long)k, c);
        double nd = (double)nres, sr = 0.0;
        for (std::size_t i = 0; i < ss.size(); ++i) {
            double v = nd * (double)ss[i];  // < 2^53: exact
            long long j = (long long)(v - std::floor(v * invc) * cd);
            if (j >= (long long)c) j -= (long long)c;
            if (j < 0) j += (long long)c;
            sr += (double)ws[i] * cs[j];
        }
        out[k] = sr;
    }
    return out;
}

cplx linnik_sum(long long n, double C, u64 D) {
    if (n <= 0) throw std::invalid_argument("linnik_sum: n > 0 required");
    if (D == 0) throw std::invalid_argument("linnik_sum: D > 0 required");
    if (C > 1e5 + 0.5)
        throw std::invalid_argument("linnik_sum: C <= 1e5 (work ~ C^2/2)");
    kahan_cplx acc;
    for (u64 c = 1; (double)c <= C; ++c) {
        double S = kloosterman((long long)n, (long long)n, c).value;
        double ang = TWO_PI * (double)(D % c) / (double)c;
        acc.add(std::polar(1.0, ang) * (S / (double)c));
    }
    return acc.value();
}

double h_weight(double x, double N) {
    return 2.0 * bump_phi((2.0 * x - 3.0 * N) / N);
}

weighted_sum_result weighted_kloosterman_sum(double N, double X, double T,
                                             u64 Q) {
    check_weighted_args(N, Q);
    weighted_sum_result r;
    r.N = N;
    r.Q = Q;
    r.params = make_test_function(X, T);
    auto sup = support_weights(N);
    fill_metadata(r, sup);
    double a = r.params.a;
    long long n_lo = sup.front().n, n_hi = sup.back().n;
    kahan_cplx acc;
    for (u64 q = 1; q <= Q; ++q) {
        // weakest damping in the support is at the smallest n
        if (4.0 * PI * (double)n_lo * a / (double)q > SKIP_AX) continue;
        auto vals = kloosterman_diag_range(q, n_lo, n_hi);
        for (const auto& p : sup) {
            double x = 4.0 * PI * (double)p.n / (double)q;
            if (a * x > SKIP_AX) continue;
            acc.add(p.h / N * vals[p.n - n_lo] / (double)q *
                    phi_test(x, r.params));
        }
    }
    r.value = acc.value();
    return r;
}

weighted_sum_result weighted_kloosterman_sum_parts(double N, double X,
                                                   double T, u64 Q) {
    check_weighted_args(N, Q);
    weighted_sum_result r;
    r.N = N;
    r.Q = Q;
    r.params = make_test_function(X, T);
    auto sup = support_weights(N);
    fill_metadata(r, sup);
    double a = r.params.a, b = r.params.b;
    long long n_lo = sup.front().n, n_hi = sup.back().n;

    // A[i] = sum_{q' <= q} S(n,n;q')/q' e^{i b 4 pi n/q'};  I[i] accumulates
    // the piecewise integral of A_n(y) F_n'(y) with A_n frozen per panel
    std::vector<cplx> A(sup.size(), cplx{}), I(sup.size(), cplx{});
    quad_opts panel;
    panel.abs_tol = 1e-18;
    panel.rel_tol = 1e-10;
    panel.max_depth = 8;
    for (u64 q = 1; q <= Q; ++q) {
        auto vals = kloosterman_diag_range(q, n_lo, n_hi);
        for (std::size_t i = 0; i < sup.size(); ++i) {
            double n4pi = 4.0 * PI * (double)sup[i].n;
            A[i] += vals[sup[i].n - n_lo] / (double)q *
                    std::polar(1.0, b * n4pi / (double)q);
            if (q == Q) continue;
            double na = n4pi * a;
            if (na / (double)(q + 1) > SKIP_AX) continue;  // F' dead here
            auto dF = integrate(
                [na](double y) {
                    return (-2.0 / (y * y * y) + na / (y * y * y * y)) *
                           std::exp(-na / y);
                },
                (double)q, (double)(q + 1), panel);
            I[i] += A[i] * dF.value;
        }
    }
    cplx sb = std::sinh(r.params.beta);
    cplx pref = 8.0 * PI / N * sb * sb;
    kahan_cplx acc;
    for (std::size_t i = 0; i < sup.size(); ++i) {
        double n = (double)sup[i].n, Qd = (double)Q;
        double FQ = std::exp(-4.0 * PI * n * a / Qd) / (Qd * Qd);
        acc.add(pref * sup[i].h * n * n * (A[i] * FQ - I[i]));
    }
    r.value = acc.value();
    return r;
}

}  // namespace zageo
