#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <complex>
#include <cstdlib>
#include <numeric>
#include <random>
#include <vector>

#include "zageo/kloosterman.hpp"
#include "zageo/quadrature.hpp"
#include "zageo/summation.hpp"

using namespace zageo;

namespace {

const double PI = 3.14159265358979323846;

u64 euler_phi(u64 n) {
    u64 phi = n;
    for (auto& [p, e] : factorize(n).factors) phi = phi / p * (p - 1);
    return phi;
}

// c_c(m) = sum_{d | gcd(m,c)} d mu(c/d), the classical closed form for the
// n = 0 degenerate case
double ramanujan(long long m, u64 c) {
    u64 g = std::gcd((u64)std::llabs(m), c);
    double s = 0.0;
    for (u64 d : divisors(g)) s += (double)d * mobius(c / d);
    return s;
}

}  // namespace

TEST_CASE("tiny moduli and degenerate arguments have closed forms") {
    CHECK(kloosterman(1, 1, 1).value == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(kloosterman(1, 1, 2).value == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(kloosterman(1, 1, 3).value == doctest::Approx(-1.0).epsilon(1e-14));
    CHECK(kloosterman_direct(1, 1, 2).value ==
          doctest::Approx(1.0).epsilon(1e-14));
    CHECK(kloosterman_direct(1, 1, 3).value ==
          doctest::Approx(-1.0).epsilon(1e-14));

    // one argument zero: Ramanujan sums; both zero: Euler phi
    for (u64 c : {2, 6, 12, 30, 49, 60}) {
        CAPTURE(c);
        CHECK(kloosterman(0, 0, c).value ==
              doctest::Approx((double)euler_phi(c)).epsilon(1e-12));
        for (long long m = 0; m <= 12; ++m) {
            CAPTURE(m);
            CHECK(kloosterman(m, 0, c).value ==
                  doctest::Approx(ramanujan(m, c)).scale(1.0).epsilon(1e-11));
            CHECK(kloosterman(0, m, c).value ==
                  doctest::Approx(ramanujan(m, c)).scale(1.0).epsilon(1e-11));
        }
    }
    CHECK_THROWS_AS(kloosterman(1, 1, 0), std::invalid_argument);
}

TEST_CASE("batched-inverse, per-x gcd, and diagonal-range routes coincide") {
    for (u64 c = 1; c <= 400; ++c) {
        CAPTURE(c);
        for (auto [m, n] : std::vector<std::pair<long long, long long>>{
                 {1, 1}, {1, 2}, {3, 7}, {-2, 5}, {0, 4}}) {
            auto a = kloosterman(m, n, c);
            auto b = kloosterman_direct(m, n, c);
            CAPTURE(m);
            CAPTURE(n);
            CHECK(std::abs(a.value - b.value) <= 1e-10 * (1.0 + std::abs(a.value)));
            CHECK(a.imag_residue <= 1e-9 * (double)c);
            CHECK(b.imag_residue <= 1e-9 * (double)c);
        }
        auto row = kloosterman_diag_range(c, 1, 12);
        for (long long n = 1; n <= 12; ++n)
            CHECK(std::abs(row[n - 1] - kloosterman(n, n, c).value) <= 1e-9);
    }
}

TEST_CASE("Weil bound: exhaustive small moduli plus random spot checks") {
    for (u64 c = 1; c <= 600; ++c) {
        auto row = kloosterman_diag_range(c, 1, 20);
        for (long long n = 1; n <= 20; ++n) {
            CAPTURE(c);
            CAPTURE(n);
            CHECK(std::abs(row[n - 1]) <= weil_bound(n, n, c) + 1e-9);
        }
    }
    std::mt19937_64 rng(5);
    std::uniform_int_distribution<u64> uc(601, 5000);
    std::uniform_int_distribution<long long> un(1, 50);
    for (int k = 0; k < 40; ++k) {
        u64 c = uc(rng);
        long long n = un(rng);
        CAPTURE(c);
        CAPTURE(n);
        CHECK(std::abs(kloosterman(n, n, c).value) <=
              weil_bound(n, n, c) + 1e-9);
    }
}

TEST_CASE("symmetry in (m,n) and prime-modulus dependence on mn only") {
    std::mt19937_64 rng(9);
    std::uniform_int_distribution<u64> uc(2, 800);
    std::uniform_int_distribution<long long> um(-20, 20);
    for (int k = 0; k < 60; ++k) {
        u64 c = uc(rng);
        long long m = um(rng), n = um(rng);
        CAPTURE(c);
        CAPTURE(m);
        CAPTURE(n);
        CHECK(std::abs(kloosterman(m, n, c).value -
                       kloosterman(n, m, c).value) <= 1e-10 * (double)c);
    }
    // over a prime p, S(a,b;p) depends only on ab mod p
    for (u64 p : {11, 101, 997}) {
        std::uniform_int_distribution<long long> ua(1, (long long)p - 1);
        for (int k = 0; k < 20; ++k) {
            long long a = ua(rng), b = ua(rng);
            CAPTURE(p);
            CAPTURE(a);
            CAPTURE(b);
            CHECK(std::abs(kloosterman(a, b, p).value -
                           kloosterman(1, (a * b) % (long long)p, p).value) <=
                  1e-10 * (double)p);
        }
    }
}

TEST_CASE("twisted multiplicativity over coprime factorizations") {
    for (u64 c1 = 2; c1 * 2 <= 1000; ++c1) {
        for (u64 c2 = c1 + 1; c1 * c2 <= 1000; ++c2) {
            if (std::gcd(c1, c2) != 1) continue;
            for (long long n : {1, 2, 5}) {
                u64 i2 = inv_mod(c2 % c1, c1);  // inverse of c2 mod c1
                u64 i1 = inv_mod(c1 % c2, c2);
                long long t1 = (long long)(((u64)n % c1) * i2 % c1 * i2 % c1);
                long long t2 = (long long)(((u64)n % c2) * i1 % c2 * i1 % c2);
                double lhs = kloosterman(n, n, c1 * c2).value;
                double rhs = kloosterman(t1, n, c1).value *
                             kloosterman(t2, n, c2).value;
                CAPTURE(c1);
                CAPTURE(c2);
                CAPTURE(n);
                CHECK(std::abs(lhs - rhs) <=
                      1e-9 * (1.0 + weil_bound(n, n, c1 * c2)));
            }
        }
    }
}

TEST_CASE("linnik sum: closed forms, reverse-order oracle, growth message") {
    CHECK(std::abs(linnik_sum(1, 0.5, 1)) == 0.0);
    CHECK(std::abs(linnik_sum(3, 1.0, 7) - 1.0) < 1e-15);
    CHECK_THROWS_AS(linnik_sum(0, 10.0, 1), std::invalid_argument);
    CHECK_THROWS_AS(linnik_sum(1, 10.0, 0), std::invalid_argument);
    CHECK_THROWS_AS(linnik_sum(1, 2e5, 1), std::invalid_argument);

    auto v = linnik_sum(1, 1000.0, 1);
    kahan_cplx rev;
    for (u64 c = 1000; c >= 1; --c) {
        double S = kloosterman(1, 1, c).value;
        rev.add(std::polar(1.0, 2.0 * PI * (double)(1 % c) / (double)c) *
                (S / (double)c));
    }
    CHECK(std::abs(v - rev.value()) <= 1e-12 * (1.0 + std::abs(v)));
    MESSAGE("linnik_sum(1, 1e3, 1) = ", v.real(), " + ", v.imag(),
            "i, |.| = ", std::abs(v));
    CHECK(std::abs(v) < 20.0);
}

TEST_CASE("linnik growth probe over n, D <= 10") {
    // batched: one diagonal-range build per modulus feeds all hundred sums
    std::vector<kahan_cplx> acc(100);
    double sup = 0.0, supC = 0.0;
    int supn = 0, supD = 0;
    std::vector<double> snapshots{100.0, 1000.0, 10000.0};
    std::size_t next = 0;
    for (u64 c = 1; c <= 10000; ++c) {
        auto row = kloosterman_diag_range(c, 1, 10);
        for (u64 D = 1; D <= 10; ++D) {
            cplx e = std::polar(1.0, 2.0 * PI * (double)(D % c) / (double)c);
            for (int n = 1; n <= 10; ++n)
                acc[(D - 1) * 10 + (n - 1)].add(e * (row[n - 1] / (double)c));
        }
        while (next < snapshots.size() && (double)c == snapshots[next]) {
            for (int n = 1; n <= 10; ++n)
                for (u64 D = 1; D <= 10; ++D) {
                    double r = std::abs(acc[(D - 1) * 10 + (n - 1)].value()) /
                               std::pow((double)n * snapshots[next] * (double)D,
                                        0.2);
                    if (r > sup) {
                        sup = r;
                        supC = snapshots[next];
                        supn = n;
                        supD = (int)D;
                    }
                }
            ++next;
        }
    }
    MESSAGE("sup |linnik|/(nCD)^0.2 = ", sup, " at C=", supC, " n=", supn,
            " D=", supD);
    CHECK(sup > 0.0);
    CHECK(sup < 10.0);
    // consistency with the public single-sum entry at one snapshot
    auto direct = linnik_sum(1, 1000.0, 1);
    kahan_cplx probe;
    for (u64 c = 1; c <= 1000; ++c) {
        auto row = kloosterman_diag_range(c, 1, 1);
        probe.add(std::polar(1.0, 2.0 * PI * (double)(1 % c) / (double)c) *
                  (row[0] / (double)c));
    }
    CHECK(std::abs(direct - probe.value()) <= 1e-11);
}

TEST_CASE("n-weight: normalization, support, derivative scaling") {
    for (double N : {50.0, 100.0, 400.0}) {
        CAPTURE(N);
        quad_opts o;
        o.abs_tol = 1e-11;
        o.rel_tol = 1e-12;
        auto q = integrate([N](double x) { return h_weight(x, N); }, N, 2.0 * N,
                           o);
        CHECK(q.value == doctest::Approx(N).epsilon(1e-8));
        CHECK(h_weight(N, N) == 0.0);
        CHECK(h_weight(2.0 * N, N) == 0.0);
        CHECK(h_weight(0.99 * N, N) == 0.0);
        // center value through the frozen raw-bump integral
        CHECK(h_weight(1.5 * N, N) ==
              doctest::Approx(2.0 * std::exp(-1.0) / 0.44399381616807944)
                  .epsilon(1e-10));
        // |h'| ~ 1/N, |h''| ~ 1/N^2 with modest desk constants
        double hd = 0.0, hdd = 0.0, step = N / 400.0;
        for (int k = 1; k < 400; ++k) {
            double x = N + step * k;
            double d1 = (h_weight(x + step, N) - h_weight(x - step, N)) /
                        (2.0 * step);
            double d2 = (h_weight(x + step, N) - 2.0 * h_weight(x, N) +
                         h_weight(x - step, N)) /
                        (step * step);
            hd = std::max(hd, std::abs(d1));
            hdd = std::max(hdd, std::abs(d2));
        }
        CHECK(hd * N <= 10.0);
        CHECK(hdd * N * N <= 160.0);  // measured 139.5, N-independent
    }
}

TEST_CASE("weighted sum: naive triple-loop oracle at small parameters") {
    double N = 6.0, X = 50.0, T = 3.0;
    u64 Q = 120;
    // everything reassembled from scratch: per-x gcd Kloosterman terms and
    // the test function grown from its own beta
    cplx beta(0.5 * std::log(X), 0.5 / T);
    kahan_cplx naive;
    for (long long n = 7; n <= 11; ++n) {
        double h = h_weight((double)n, N);
        for (u64 q = 1; q <= Q; ++q) {
            double S = kloosterman_direct(n, n, q).value;
            double x = 4.0 * PI * (double)n / (double)q;
            cplx phi = std::sinh(beta) * std::sinh(beta) / (2.0 * PI) *
                       (x * x) * std::exp(cplx(0.0, x) * std::cosh(beta));
            naive.add(h / N * S / (double)q * phi);
        }
    }
    auto w = weighted_kloosterman_sum(N, X, T, Q);
    CHECK(std::abs(w.value - naive.value()) <=
          1e-9 * (1.0 + std::abs(w.value)));
    CHECK(w.Q == Q);
}

TEST_CASE("weighted sum: direct and summation-by-parts routes agree") {
    double N = 20.0, X = 400.0, T = 5.0;
    u64 Q = 1500;
    auto d = weighted_kloosterman_sum(N, X, T, Q);
    auto p = weighted_kloosterman_sum_parts(N, X, T, Q);
    double gap = std::abs(d.value - p.value) / (1.0 + std::abs(d.value));
    MESSAGE("routes: direct=", std::abs(d.value), " parts=", std::abs(p.value),
            " rel gap=", gap);
    CHECK(gap <= 1e-6);

    // metadata: damped threshold and warning wiring
    double a = d.params.a;
    CHECK(d.q_damped_below ==
          (u64)std::floor(4.0 * PI * 21.0 * a / 27.631));
    CHECK(d.q_peak == doctest::Approx(2.0 * PI * 39.0 * a).epsilon(1e-12));
    CHECK(d.truncation_warning == ((double)Q < 4.0 * d.q_peak));
    CHECK(!d.truncation_warning);  // 4 * q_peak ~ 976 < 1500
    auto small = weighted_kloosterman_sum(N, X, T, 300);
    CHECK(small.truncation_warning);
    CHECK(small.tail_estimate > d.tail_estimate);  // tail shrinks with Q
}

TEST_CASE("weighted sum: huge damping regime is numerically zero") {
    // X large and T at its floor push a ~ sinh(log sqrt X)/4T far above the
    // whole q <= Q range: every term carries e^{-(>100)}
    auto w = weighted_kloosterman_sum(20.0, 1e8, 2.0, 2000);
    CHECK(w.q_damped_below > 2000);
    CHECK(std::abs(w.value) < 1e-30);
    CHECK_THROWS_AS(weighted_kloosterman_sum(2.0, 1e4, 10.0, 100),
                    std::invalid_argument);
    CHECK_THROWS_AS(weighted_kloosterman_sum(100.0, 1e4, 10.0, 0),
                    std::invalid_argument);
    CHECK_THROWS_AS(weighted_kloosterman_sum(100.0, 1e4, 10.0, 2'000'000),
                    std::invalid_argument);
}
