#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>
#include <unistd.h>

#include "zageo/arith.hpp"
#include "zageo/averages.hpp"
#include "zageo/quadrature.hpp"
#include "zageo/specfun.hpp"
#include "zageo/zagier.hpp"

using namespace zageo;

namespace {

const double PI = 3.14159265358979323846;

// libstdc++ special math as an independent constants source
double zeta_ref(double s) { return std::riemann_zeta(s); }
double zeta_prime_ref(double s) {
    double h = 1e-5;  // central difference, error ~ h^2 |zeta'''| ~ 1e-9
    return (zeta_ref(s + h) - zeta_ref(s - h)) / (2 * h);
}

double c0_ref() {
    return -PI / 2 + 3 * 0.57721566490153286061
         - 2 * zeta_prime_ref(1.5) / zeta_ref(1.5) - std::log(8 * PI);
}

// closed-form antiderivative of log(u^2-4): d/du [u log(u^2-4) - 2u
// - 2 log(u-2) + 2 log(u+2)] = log(u^2-4); value 4 log 4 - 4 at u = 2
double log_integral(double X) {
    double A = X * std::log(X * X - 4) - 2 * X - 2 * std::log(X - 2)
             + 2 * std::log(X + 2);
    return A - (4 * std::log(4.0) - 4.0);
}

double main_term_closed(double X, const density_params& dp) {
    return (log_integral(X) + dp.c0 * (X - 2)) / (2 * dp.zeta_32);
}

// per-term reference: Hurwitz-sum Dirichlet L times the conductor factor,
// independent of the incomplete-gamma route used by the library
cplx lseries_hurwitz(u64 n, cplx s) {
    auto [D0, f] = decompose_discriminant(i64(n) * i64(n) - 4);
    cplx finite = 0.0;
    for (u64 d : divisors(u64(f))) {
        int mu = mobius(d);
        if (mu == 0) continue;
        cplx sigma = 0.0;  // sigma_{1-2s}(f/d)
        for (u64 e : divisors(u64(f) / d))
            sigma += std::exp((1.0 - 2.0 * s) * std::log(double(e)));
        finite += double(mu * kronecker(D0, i64(d)))
                * std::exp(-s * std::log(double(d))) * sigma;
    }
    return dirichlet_L_hurwitz(s, D0) * finite;
}

std::string temp_path(const char* tag) {
    return std::string("/tmp/zageo_") + tag + "_" + std::to_string(::getpid()) + ".csv";
}

}  // namespace

TEST_CASE("density constants: frozen values match independent sources") {
    auto dp = make_density_params(0.0);
    CHECK(dp.zeta_32 == doctest::Approx(zeta_ref(1.5)).epsilon(1e-14));
    CHECK(dp.zeta_32 == doctest::Approx(riemann_zeta(1.5).real()).epsilon(1e-13));
    CHECK(dp.zeta_prime_32 == doctest::Approx(zeta_prime_ref(1.5)).epsilon(1e-8));
    CHECK(dp.zeta_prime_32
          == doctest::Approx(zeta_derivative(1.5).real()).epsilon(1e-11));
    CHECK(dp.c0 == doctest::Approx(c0_ref()).epsilon(1e-8));
    CHECK(dp.c0 == doctest::Approx(-0.052850048042997866).epsilon(1e-12));
    // bundle is real at t = 0
    CHECK(dp.pref_const == cplx(0.0, 0.0));
    CHECK(dp.pref_osc == cplx(0.0, 0.0));
}

TEST_CASE("density_m: log cancellation point and reference values") {
    auto dp = make_density_params(0.0);
    // at x^2-4 = 8 pi the log term equals log 8 pi and cancels against c0's
    double x = std::sqrt(4.0 + 8.0 * PI);
    double expect = (-PI / 2 + 3 * dp.euler_gamma
                     - 2 * dp.zeta_prime_32 / dp.zeta_32) / (2 * dp.zeta_32);
    CHECK(density_m(x, 0.0).real() == doctest::Approx(expect).epsilon(1e-13));
    CHECK(density_m(x, 0.0).imag() == 0.0);
    // x = 10 against the independently assembled constant bundle
    double ref10 = (std::log(96.0) + c0_ref()) / (2 * zeta_ref(1.5));
    CHECK(density_m(10.0, 0.0).real() == doctest::Approx(ref10).epsilon(1e-9));
    CHECK_THROWS_AS(density_m(2.0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(density_m(10.0, 101.0), std::invalid_argument);
}

TEST_CASE("density_m: twisted branch wiring") {
    double t = 0.5;
    auto dp = make_density_params(t);
    // direct reassembly from the special-function layer
    cplx s(0.5, t), it(0.0, t);
    cplx c1 = riemann_zeta(cplx(1.0, 2 * t)) / riemann_zeta(cplx(1.5, t));
    cplx c2 = std::exp(s * std::log(2.0)) * std::sin(PI * s / 2.0)
            * std::exp(-it * std::log(PI)) * riemann_zeta(it)
            / riemann_zeta(cplx(1.5, -t)) * gamma_c(it);
    for (double x : {3.0, 10.0, 50.0}) {
        cplx want = c1 + c2 * std::exp(cplx(0.0, -t * std::log(x * x - 4)));
        cplx got = density_m(x, dp);
        CHECK(std::abs(got - want) < 1e-12 * (1.0 + std::abs(want)));
        // the oscillating part has constant modulus |pref_osc|
        CHECK(std::abs(got - dp.pref_const)
              == doctest::Approx(std::abs(dp.pref_osc)).epsilon(1e-12));
    }
}

TEST_CASE("main_term_integral: closed form at t = 0") {
    auto dp = make_density_params(0.0);
    CHECK(main_term_integral(2.0, 0.0).value == cplx(0.0, 0.0));
    for (double X : {2.5, 10.0, 100.0, 1e4}) {
        auto got = main_term_integral(X, 0.0);
        CAPTURE(X);
        CHECK(got.converged);
        CHECK(got.value.imag() == 0.0);
        CHECK(got.value.real()
              == doctest::Approx(main_term_closed(X, dp)).epsilon(1e-10));
        CHECK(got.quad_error <= 1e-8 * X);
    }
    CHECK_THROWS_AS(main_term_integral(1.5, 0.0), std::invalid_argument);
}

TEST_CASE("main_term_integral: twisted branch against direct quadrature") {
    double t = 0.5;
    // independent constant assembly (the library caches these in
    // density_params) and a different substitution: with x = 2 cosh v the
    // oscillatory piece becomes int (2 sinh v)^(1-2it) dv, winding damped
    // linearly at the endpoint
    cplx s(0.5, t), it(0.0, t);
    cplx c1 = riemann_zeta(cplx(1.0, 2 * t)) / riemann_zeta(cplx(1.5, t));
    cplx c2 = std::exp(s * std::log(2.0)) * std::sin(PI * s / 2.0)
            * std::exp(-it * std::log(PI)) * riemann_zeta(it)
            / riemann_zeta(cplx(1.5, -t)) * gamma_c(it);
    auto oracle = [&](double X) {
        double V = std::acosh(X / 2.0);
        quad_opts opt;
        opt.abs_tol = 1e-12 * std::max(X, 10.0);
        opt.rel_tol = 1e-13;
        opt.max_depth = 48;
        auto f = [&](double v) -> cplx {
            return std::exp(cplx(1.0, -2.0 * t)
                            * std::log(2.0 * std::sinh(v)));
        };
        auto osc = integrate_c(f, 0.0, V, opt);
        return c1 * (X - 2.0) + c2 * osc.value;
    };
    for (double X : {5.0, 10.0, 40.0}) {
        auto got = main_term_integral(X, t);
        CAPTURE(X);
        CHECK(got.converged);
        CHECK(std::abs(got.value - oracle(X)) <= 2e-8 * std::max(X, 10.0));
    }
    // additivity through differences
    auto m10 = main_term_integral(10.0, 0.7).value;
    auto m100 = main_term_integral(100.0, 0.7).value;
    auto dpz = make_density_params(0.7);
    quad_opts opt;
    opt.abs_tol = 1e-11;
    auto mid = integrate_c([&](double u) { return density_m(u, dpz); }, 10.0,
                           100.0, opt);
    CHECK(mid.converged);
    CHECK(std::abs((m100 - m10) - mid.value) < 1e-8);
}

TEST_CASE("partial_sum: edge cases and Hurwitz oracle") {
    CHECK(partial_sum(2.5, 0.0) == cplx(0.0, 0.0));
    CHECK(partial_sum(3.0, 0.0).real()
          == doctest::Approx(zagier_L_half(3)).epsilon(1e-14));
    CHECK_THROWS_AS(partial_sum(2e7, 0.0), std::invalid_argument);

    cplx ref0 = 0.0;
    for (u64 n = 3; n <= 100; ++n) ref0 += lseries_hurwitz(n, cplx(0.5, 0.0));
    cplx got0 = partial_sum(100.0, 0.0);
    CHECK(std::abs(got0.imag()) < 1e-12);
    CHECK(std::abs(got0 - ref0) < 1e-6);

    double t = 0.7;
    cplx reft = 0.0;
    for (u64 n = 3; n <= 100; ++n) reft += lseries_hurwitz(n, cplx(0.5, t));
    cplx gott = partial_sum(100.0, t);
    CHECK(std::abs(gott - reft) < 1e-6);
}

TEST_CASE("lvalue_cache: roundtrip and validation") {
    std::string path = temp_path("lcache");
    std::remove(path.c_str());
    {
        lvalue_cache c(path, 0.25);
        c.put(3, cplx(1.5, -0.25));
        c.put(4, cplx(0.75, 0.0));
        c.put(3, cplx(9.0, 9.0));  // ignored: first write wins
        CHECK(c.size() == 2);
    }
    {
        lvalue_cache c(path, 0.25);
        CHECK(c.size() == 2);
        REQUIRE(c.get(3).has_value());
        CHECK(c.get(3)->real() == 1.5);
        CHECK(c.get(3)->imag() == -0.25);
        CHECK(!c.get(5).has_value());
    }
    CHECK_THROWS_AS((lvalue_cache{path, 0.5}), std::runtime_error);
    {
        // a row with no trailing newline is treated as a crash artifact:
        // dropped on load, file clipped so later appends start clean
        std::ofstream f(path, std::ios::app);
        f << "7,0.125";
    }
    {
        lvalue_cache c(path, 0.25);
        CHECK(c.size() == 2);
        CHECK(!c.get(7).has_value());
        c.put(7, cplx(2.0, 0.0));
    }
    {
        lvalue_cache c(path, 0.25);
        CHECK(c.size() == 3);
        CHECK(c.get(7)->real() == 2.0);
    }
    {
        std::ofstream f(path);
        f << "# central lseries values, twist t=0.25\nn,re,im\nbogus,row\n";
    }
    CHECK_THROWS_AS((lvalue_cache{path, 0.25}), std::runtime_error);
    std::remove(path.c_str());
}

TEST_CASE("error_scan: shape, incrementality, and step structure") {
    std::vector<double> grid{10.0, 100.0, 1000.0};
    auto rows = error_scan(grid, 0.0);
    REQUIRE(rows.size() == 3);
    for (const auto& r : rows) {
        CHECK(r.err == r.sum - r.main);  // exact by construction
        CHECK(r.sum.imag() == 0.0);
        CHECK(std::isfinite(r.normalized));
    }
    CHECK(std::abs(rows[1].sum - partial_sum(100.0, 0.0)) < 1e-12);
    CHECK(std::abs(rows[2].sum - partial_sum(1000.0, 0.0)) < 1e-11);

    // between consecutive integers the error moves by minus the main term
    std::mt19937_64 rng(77);
    std::uniform_real_distribution<double> pick(10.0, 400.0);
    for (int k = 0; k < 20; ++k) {
        double base = std::floor(pick(rng));
        double x1 = base + 0.2, x2 = base + 0.8;
        auto two = error_scan({x1, x2}, 0.0);
        CHECK(two[0].sum == two[1].sum);
        cplx lhs = two[1].err - two[0].err;
        cplx rhs = -(two[1].main - two[0].main);
        CHECK(std::abs(lhs - rhs) < 1e-10);
    }
}

TEST_CASE("error_scan: sieved engine agrees with the generic evaluator") {
    // below the engine threshold the scan uses zagier_L_half directly; above
    // it the flat sieved loop takes over -- compare the two on the same sum
    auto rows = error_scan({2500.0}, 0.0);
    cplx direct = partial_sum(2500.0, 0.0);
    CHECK(std::abs(rows[0].sum - direct) < 1e-5 * std::abs(direct));

    // per-term agreement on a spread of traces, including conductor drops
    std::mt19937_64 rng(101);
    std::uniform_int_distribution<u64> pick(3, 2500);
    std::vector<double> grid;
    for (int k = 0; k < 40; ++k) {
        u64 n = pick(rng);
        grid.push_back(double(n) + 0.5);
    }
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
    auto recs = error_scan(grid, 0.0);
    for (size_t i = 1; i < recs.size(); ++i) {
        // difference of consecutive sums = sum of per-term engine values;
        // recompute generically
        u64 lo = u64(recs[i - 1].X), hi = u64(recs[i].X);
        double want = 0.0;
        for (u64 n = lo + 1; n <= hi; ++n) want += zagier_L_half(n);
        CHECK(std::abs((recs[i].sum - recs[i - 1].sum).real() - want) < 5e-7 * (1 + std::abs(want)));
    }
}

TEST_CASE("half_line_engine: float tables hold up at scan-scale heights") {
    // the engine runs the long scans; check its single-precision sqrt tables
    // and interpolated kernel against the double-precision evaluator at the
    // top of the 5e5 range, where the term count per n is largest
    half_line_engine eng(500000);
    CHECK(eng.limit() == 500000);
    CHECK_THROWS_AS(eng.value(500001), std::invalid_argument);
    CHECK_THROWS_AS(eng.value(2), std::invalid_argument);
    for (u64 n : {3ull, 4ull, 5ull, 7ull, 12ull, 102ull}) {
        CAPTURE(n);
        CHECK(eng.value(n)
              == doctest::Approx(zagier_L_half(n)).epsilon(2e-7));
    }
    double worst = 0.0;
    for (u64 n : {123456ull, 250001ull, 499997ull, 499998ull, 499999ull,
                  500000ull}) {
        double got = eng.value(n);
        double want = zagier_L_half(n);
        CAPTURE(n);
        CHECK(std::abs(got - want) < 3e-6 * std::max(1.0, std::abs(want)));
        worst = std::max(worst, std::abs(got - want));
    }
    std::printf("engine vs direct near n = 5e5: worst abs gap = %.3g\n", worst);
}

TEST_CASE("error_scan: disk cache reuse is exact") {
    std::string path = temp_path("scan_cache");
    std::remove(path.c_str());
    std::vector<double> grid{50.0, 500.0};
    std::vector<scan_record> first, second;
    {
        lvalue_cache cache(path, 0.0);
        first = error_scan(grid, 0.0, &cache);
        CHECK(cache.size() == 498);
    }
    {
        lvalue_cache cache(path, 0.0);
        CHECK(cache.size() == 498);
        second = error_scan(grid, 0.0, &cache);
    }
    for (size_t i = 0; i < grid.size(); ++i) {
        CHECK(first[i].sum == second[i].sum);  // bit-identical via cache
        CHECK(first[i].err == second[i].err);
    }
    std::remove(path.c_str());
}

TEST_CASE("error_scan: twisted scan matches its components") {
    auto rows = error_scan({20.0}, 0.3);
    cplx sum = partial_sum(20.0, 0.3);
    cplx main = main_term_integral(20.0, 0.3).value;
    CHECK(std::abs(rows[0].sum - sum) < 1e-12);
    CHECK(std::abs(rows[0].err - (sum - main)) < 1e-12);
    CHECK_THROWS_AS(error_scan({10.0, 5.0}, 0.0), std::invalid_argument);
}

TEST_CASE("exponent_fit: synthetic power laws") {
    auto synth = [](double A, double p) {
        std::vector<scan_record> v;
        for (int i = 0; i < 25; ++i) {
            scan_record r;
            r.X = 100.0 * std::pow(1.4, i);
            r.err = cplx(A * std::pow(r.X, p), 0.0);
            v.push_back(r);
        }
        return v;
    };
    auto f1 = exponent_fit(synth(1.0, 0.5));
    CHECK(f1.slope == doctest::Approx(0.5).epsilon(1e-9));
    CHECK(f1.r2 == doctest::Approx(1.0).epsilon(1e-12));
    auto f2 = exponent_fit(synth(3.0, 0.7));
    CHECK(f2.slope == doctest::Approx(0.7).epsilon(1e-9));
    CHECK(f2.intercept == doctest::Approx(std::log(3.0)).epsilon(1e-8));
    std::vector<scan_record> few(5);
    CHECK_THROWS_AS(exponent_fit(few), std::invalid_argument);
}

TEST_CASE("error term: desk-scale window up to 1e4") {
    // 30 log-spaced points over [1e3, 1e4]; the acceptance suite extends the
    // same scan to 1e6 with pinned thresholds
    std::vector<double> grid;
    for (int i = 0; i <= 30; ++i)
        grid.push_back(1e3 * std::pow(10.0, i / 30.0));
    auto rows = error_scan(grid, 0.0);
    double max_norm = 0.0;
    for (const auto& r : rows) {
        CAPTURE(r.X);
        CHECK(std::abs(r.err) <= std::pow(r.X, 0.9));
        max_norm = std::max(max_norm, r.normalized);
    }
    CHECK(max_norm > 0.0);
    auto fit = exponent_fit(rows);
    CHECK(std::isfinite(fit.slope));
    std::printf("error scan [1e3,1e4]: max|E|/sqrt(X) = %.4f, slope = %.3f\n",
                max_norm, fit.slope);
}
