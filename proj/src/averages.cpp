#include "zageo/averages.hpp"

#include <cmath>
#include <cstdio>
#include <cstring>
#include <memory>
#include <numbers>
#include <stdexcept>
#include <unistd.h>

#include "zageo/quadrature.hpp"
#include "zageo/specfun.hpp"
#include "zageo/summation.hpp"
#include "zageo/zagier.hpp"

namespace zageo {

namespace {

constexpr double PI = 3.14159265358979323846;
// zeta(3/2) and zeta'(3/2), frozen to double precision; the tests reproduce
// both from the Euler-Maclaurin evaluators to 1e-10
constexpr double ZETA_32 = 2.6123753486854883;
constexpr double ZETA_PRIME_32 = -3.9322397374311015;

void require_twist(double t) {
    if (!(std::abs(t) <= 100.0))
        throw std::invalid_argument("spectral twist |t| <= 100 required");
}

}  // namespace

density_params make_density_params(double t) {
    require_twist(t);
    density_params dp;
    dp.t = t;
    dp.zeta_32 = ZETA_32;
    dp.zeta_prime_32 = ZETA_PRIME_32;
    dp.euler_gamma = std::numbers::egamma;
    dp.c0 = -PI / 2 + 3 * dp.euler_gamma - 2 * ZETA_PRIME_32 / ZETA_32
          - std::log(8 * PI);
    if (t != 0.0) {
        cplx s(0.5, t), it(0.0, t);
        dp.pref_const = riemann_zeta(cplx(1.0, 2 * t)) / riemann_zeta(cplx(1.5, t));
        dp.pref_osc = std::exp(s * std::log(2.0)) * std::sin(PI * s / 2.0)
                    * std::exp(-it * std::log(PI)) * riemann_zeta(it)
                    / riemann_zeta(cplx(1.5, -t)) * gamma_c(it);
    }
    return dp;
}

cplx density_m(double x, const density_params& dp) {
    if (!(x > 2.0)) throw std::invalid_argument("density_m: x > 2 required");
    double lx = std::log(x * x - 4.0);
    if (dp.t == 0.0) return cplx((lx + dp.c0) / (2.0 * dp.zeta_32), 0.0);
    return dp.pref_const + dp.pref_osc * std::exp(cplx(0.0, -dp.t * lx));
}

cplx density_m(double x, double t) { return density_m(x, make_density_params(t)); }

main_term main_term_integral(double X, double t) {
    if (!(X >= 2.0))
        throw std::invalid_argument("main_term_integral: X >= 2 required");
    require_twist(t);
    main_term out;
    if (X == 2.0) return out;
    density_params dp = make_density_params(t);
    quad_opts opt;
    opt.abs_tol = 1e-10 * std::max(X, 10.0);
    opt.rel_tol = 1e-13;
    if (t == 0.0) {
        // u = 2 cosh v turns the u = 2 log singularity into 2 sinh(v) log(..)
        double V = std::acosh(X / 2.0);
        auto f = [&dp](double v) {
            double sh = std::sinh(v);
            return (std::log(4.0 * sh * sh) + dp.c0) * sh / dp.zeta_32;
        };
        auto q = integrate(f, 0.0, V, opt);
        out.value = cplx(q.value, 0.0);
        out.quad_error = q.error;
        out.converged = q.converged;
        return out;
    }
    // constant part is exact; for the oscillation substitute w = log(2 sinh v)
    // so (u^2-4)^{-it} = e^{-2itw} with amplitude (e^{2w}/2)/sqrt(1+e^{2w}/4),
    // which dies like e^{2w} toward the cusp of the substitution
    double W1 = 0.5 * std::log(X * X - 4.0);
    double W0 = std::min(-19.0, W1 - 20.0);
    auto f = [t](double w) -> cplx {
        double e2 = std::exp(2.0 * w);
        double amp = 0.5 * e2 / std::sqrt(1.0 + 0.25 * e2);
        return amp * std::exp(cplx(0.0, -2.0 * t * w));
    };
    auto q = integrate_c(f, W0, W1, opt);
    out.value = dp.pref_const * (X - 2.0) + dp.pref_osc * q.value;
    out.quad_error = q.error * std::abs(dp.pref_osc);
    out.converged = q.converged;
    return out;
}

cplx partial_sum(double X, double t) {
    require_twist(t);
    if (X > 1e7) throw std::invalid_argument("partial_sum: X above 1e7");
    kahan_cplx acc;
    if (X >= 3.0) {
        u64 top = u64(X);
        for (u64 n = 3; n <= top; ++n) {
            if (t == 0.0)
                acc.add(cplx(zagier_L_half(n), 0.0));
            else
                acc.add(zagier_L(n, cplx(0.5, t)).value);
        }
    }
    return acc.value();
}

// ---- disk cache ------------------------------------------------------------

namespace {
constexpr char cache_magic[] = "# central lseries values, twist t=";
}

lvalue_cache::lvalue_cache(const std::string& path, double t) : t_(t) {
    std::FILE* f = std::fopen(path.c_str(), "r");
    if (!f) {
        std::FILE* w = std::fopen(path.c_str(), "w");
        if (!w) throw std::runtime_error("lvalue_cache: cannot create " + path);
        std::fprintf(w, "%s%.17g\nn,re,im\n", cache_magic, t);
        std::fclose(w);
    } else {
        char line[256];
        double t_file = 0.0;
        if (!std::fgets(line, sizeof line, f) ||
            std::strncmp(line, cache_magic, sizeof cache_magic - 1) != 0 ||
            std::sscanf(line + sizeof cache_magic - 1, "%lf", &t_file) != 1) {
            std::fclose(f);
            throw std::runtime_error("lvalue_cache: bad header in " + path);
        }
        if (std::abs(t_file - t) > 1e-12 * std::max(1.0, std::abs(t))) {
            std::fclose(f);
            throw std::runtime_error("lvalue_cache: twist mismatch in " + path);
        }
        if (!std::fgets(line, sizeof line, f) ||
            std::strncmp(line, "n,re,im", 7) != 0) {
            std::fclose(f);
            throw std::runtime_error("lvalue_cache: bad column header in " + path);
        }
        u64 row = 2;
        long good_end = std::ftell(f);
        bool clipped = false;
        while (std::fgets(line, sizeof line, f)) {
            ++row;
            size_t len = std::strlen(line);
            if (len == 0 || line[len - 1] != '\n') {
                // every write ends in a newline, so a bare tail can only be
                // a crash-truncated final row: drop it (the value gets
                // recomputed and re-appended).  anything after it is real
                // corruption.
                if (std::fgetc(f) != EOF) {
                    std::fclose(f);
                    throw std::runtime_error("lvalue_cache: bad row "
                                             + std::to_string(row) + " in "
                                             + path);
                }
                std::fprintf(stderr,
                             "lvalue_cache: dropping truncated tail in %s\n",
                             path.c_str());
                clipped = true;
                break;
            }
            if (line[0] == '\n') {
                good_end = std::ftell(f);
                continue;
            }
            unsigned long n;
            double re, im;
            if (std::sscanf(line, "%lu,%lf,%lf", &n, &re, &im) != 3 || n < 3) {
                std::fclose(f);
                throw std::runtime_error("lvalue_cache: bad row "
                                         + std::to_string(row) + " in " + path);
            }
            values_.emplace(n, cplx(re, im));
            good_end = std::ftell(f);
        }
        std::fclose(f);
        if (clipped && good_end >= 0)
            (void)::truncate(path.c_str(), good_end);
    }
    file_ = std::fopen(path.c_str(), "a");
    if (!file_) throw std::runtime_error("lvalue_cache: cannot append " + path);
}

lvalue_cache::~lvalue_cache() {
    if (file_) std::fclose(static_cast<std::FILE*>(file_));
}

std::optional<cplx> lvalue_cache::get(u64 n) const {
    auto it = values_.find(n);
    if (it == values_.end()) return std::nullopt;
    return it->second;
}

void lvalue_cache::put(u64 n, cplx v) {
    if (!values_.emplace(n, v).second) return;
    if (!file_) return;
    std::fprintf(static_cast<std::FILE*>(file_), "%lu,%.17g,%.17g\n",
                 (unsigned long)n, v.real(), v.imag());
    if (++unflushed_ >= 8192) {
        std::fflush(static_cast<std::FILE*>(file_));
        unflushed_ = 0;
    }
}

// ---- sieved flat loop for the t = 0 scans ----------------------------------

namespace {
// kernel tail (D0/pi)^{1/4}/2 x^{-3/2} e^{-x} < 1e-6 at D0 = 4e12 for x = 16
constexpr double ENGINE_X_CUT = 16.0;
}  // namespace

// chi is re-sieved per n, but sqrt tables, the prime table, and the kernel
// are shared across the whole scan.  the kernel is tabulated uniformly in
// s = (pi/D0)^{1/4} sqrt(m), where G(s) = Gamma(1/4, s^4) has |G''| <= 7 (no
// x^{1/4} cusp), so linear interpolation on 2^16 nodes holds 3e-10; s comes
// from the float sqrt table with one multiply.
half_line_engine::half_line_engine(u64 n_max) : n_cap_(n_max) {
    double dmax = double(n_max) * double(n_max) - 4.0;
    m_cap_ = u64(std::sqrt(ENGINE_X_CUT * dmax / PI)) + 2;
    if (m_cap_ < n_max + 3) m_cap_ = n_max + 3;  // factoring n-2, n+2
    spf_ = spf_sieve(u32(m_cap_ + 1));
    sqrtm_.resize(m_cap_ + 1);
    rsqrtm_.resize(m_cap_ + 1);
    sqrtm_[0] = rsqrtm_[0] = 0.0f;
    for (u64 m = 1; m <= m_cap_; ++m) {
        double r = std::sqrt(double(m));
        sqrtm_[m] = float(r);
        rsqrtm_[m] = float(1.0 / r);
    }
    chi_.assign(m_cap_ + 1, 0);
    double s_hi = std::pow(40.0, 0.25);  // kernel below 4e-19 past x = 40
    double hs = s_hi / table_n;
    inv_hs_ = 1.0 / hs;
    gk_.resize(table_n + 2);
    for (int i = 0; i <= table_n + 1; ++i) {
        double s = i * hs, x = s * s * s * s;
        gk_[i] = i == 0 ? 1.0 : igamma_upper(0.25, x) / 3.62560990822190831193;
    }
}

// full series value at 1/2: L(1/2, chi_{D0}) * T_f(1/2), with D = n^2 - 4
// factored through the two small halves n -+ 2
double half_line_engine::value(u64 n) {
    if (n < 3 || n > n_cap_)
        throw std::invalid_argument("half_line_engine: n out of range");
    // squarefree part of D = (n-2)(n+2) off the small-prime table; only
    // p = 2 can divide both halves (gcd | 4), and the re-divide of sqfree
    // folds the two exponents' parities together
    i64 D = i64(n) * i64(n) - 4;
    i64 sqfree = 1;
    for (u64 half : {n - 2, n + 2}) {
        while (half > 1) {
            u64 p = spf_[half];
            int e = 0;
            while (half % p == 0) {
                half /= p;
                ++e;
            }
            if (sqfree % i64(p) == 0) {
                sqfree /= i64(p);
                e += 1;
            }
            if (e & 1) sqfree *= i64(p);
        }
    }
    i64 D0 = (sqfree % 4 == 1) ? sqfree : 4 * sqfree;
    u64 f = isqrt64(u64(D / D0));
    u64 M = u64(std::sqrt(ENGINE_X_CUT * double(D0) / PI)) + 1;
    signed char* ch = chi_.data();
    const u32* sp = spf_.data();
    ch[1] = 1;
    if (M >= 2) ch[2] = (signed char)kronecker(D0, 2);  // depends on D0 mod 8
    for (u64 m = 3; m <= M; ++m) {
        u64 p = sp[m];
        // odd prime: top argument reduces mod p before the symbol
        ch[m] = (p == m) ? (signed char)kronecker(D0 % i64(p), i64(p))
                         : (signed char)(ch[p] * ch[m / p]);
    }
    const float* sq = sqrtm_.data();
    const float* rq = rsqrtm_.data();
    const double* T = gk_.data();
    const double beta = std::pow(PI / double(D0), 0.25);
    double a0 = 0, a1 = 0, a2 = 0, a3 = 0;
    auto lane = [&](u64 m, double& acc) {
        double s = beta * double(sq[m]);
        double u = s * inv_hs_;
        int i = int(u);
        double fr = u - i;
        double g = T[i] + fr * (T[i + 1] - T[i]);
        acc += double(ch[m]) * double(rq[m]) * g;
    };
    u64 m = 1;
    for (; m + 3 <= M; m += 4) {
        lane(m, a0);
        lane(m + 1, a1);
        lane(m + 2, a2);
        lane(m + 3, a3);
    }
    for (; m <= M; ++m) lane(m, a0);
    double L = 2.0 * ((a0 + a1) + (a2 + a3));
    return L * conductor_factor_half(D0, f);
}

std::vector<scan_record> error_scan(const std::vector<double>& grid, double t,
                                    lvalue_cache* cache) {
    require_twist(t);
    std::vector<scan_record> out;
    if (grid.empty()) return out;
    for (size_t i = 0; i + 1 < grid.size(); ++i)
        if (!(grid[i] < grid[i + 1]))
            throw std::invalid_argument("error_scan: grid must ascend");
    double top = grid.back();
    if (top > (t == 0.0 ? 1e7 : 1e5))
        throw std::invalid_argument("error_scan: grid top too large");
    if (cache && std::abs(cache->twist() - t) > 1e-12 * std::max(1.0, std::abs(t)))
        throw std::invalid_argument("error_scan: cache twist mismatch");
    u64 n_top = top >= 3.0 ? u64(top) : 2;
    std::unique_ptr<half_line_engine> engine;
    if (t == 0.0 && n_top >= 3) {
        // engine only pays off once the sieve amortizes; small scans go
        // through the generic evaluator
        bool all_cached = cache && cache->size() >= n_top;
        if (n_top > 2000 && !all_cached)
            engine = std::make_unique<half_line_engine>(n_top);
    }
    kahan_cplx acc;
    u64 n = 3;
    for (double X : grid) {
        u64 upto = X >= 3.0 ? u64(X) : 2;
        for (; n <= upto; ++n) {
            cplx v;
            std::optional<cplx> hit = cache ? cache->get(n) : std::nullopt;
            if (hit) {
                v = *hit;
            } else {
                if (engine)
                    v = cplx(engine->value(n), 0.0);
                else if (t == 0.0)
                    v = cplx(zagier_L_half(n), 0.0);
                else
                    v = zagier_L(n, cplx(0.5, t)).value;
                if (cache) cache->put(n, v);
            }
            acc.add(v);
            if (engine && n % 100000 == 0)
                std::fprintf(stderr, "error_scan: n=%lu/%lu\n",
                             (unsigned long)n, (unsigned long)n_top);
        }
        scan_record rec;
        rec.X = X;
        rec.sum = acc.value();
        rec.main = main_term_integral(X, t).value;
        rec.err = rec.sum - rec.main;
        rec.normalized = std::abs(rec.err) / std::sqrt(X);
        out.push_back(rec);
    }
    return out;
}

fit_result exponent_fit(const std::vector<scan_record>& records) {
    std::vector<double> lx, ly;
    for (const auto& r : records) {
        double e = std::abs(r.err);
        if (e > 0.0 && r.X > 0.0) {
            lx.push_back(std::log(r.X));
            ly.push_back(std::log(e));
        }
    }
    if (lx.size() < 10)
        throw std::invalid_argument("exponent_fit: need >= 10 usable records");
    size_t k = lx.size();
    double mx = 0, my = 0;
    for (size_t i = 0; i < k; ++i) {
        mx += lx[i];
        my += ly[i];
    }
    mx /= double(k);
    my /= double(k);
    double sxx = 0, sxy = 0, syy = 0;
    for (size_t i = 0; i < k; ++i) {
        sxx += (lx[i] - mx) * (lx[i] - mx);
        sxy += (lx[i] - mx) * (ly[i] - my);
        syy += (ly[i] - my) * (ly[i] - my);
    }
    if (sxx == 0.0) throw std::invalid_argument("exponent_fit: degenerate grid");
    fit_result fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    fit.r2 = syy > 0.0 ? (sxy * sxy) / (sxx * syy) : 1.0;
    return fit;
}

}  // namespace zageo
