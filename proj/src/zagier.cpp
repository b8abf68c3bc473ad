#include "zageo/zagier.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "zageo/specfun.hpp"
#include "zageo/summation.hpp"

namespace zageo {

namespace {

// #{ x mod p^k : x^2 = D (mod p^k) }.  with a = v_p(D) (capped at k):
//   a >= k          -> p^floor(k/2)      (x^2 = 0 needs v_p(x) >= ceil(k/2))
//   a odd           -> 0
//   a even, u=D/p^a -> p^(a/2) * #{ y mod p^(k-a) : y^2 = u }, u a unit
u64 roots_mod_prime_power(i64 D, u64 p, int k) {
    u64 pk = 1;
    for (int i = 0; i < k; ++i) pk *= p;
    u64 Dr = u64(((D % i64(pk)) + i64(pk)) % i64(pk));
    auto ppow = [&](int e) { u64 r = 1; while (e--) r *= p; return r; };
    if (Dr == 0) return ppow(k / 2);
    int a = 0;
    while (Dr % p == 0) { Dr /= p; ++a; }
    if (a & 1) return 0;
    int m = k - a;  // y^2 = Dr (mod p^m), Dr a unit
    u64 unit_roots;
    if (p == 2) {
        if (m == 1) unit_roots = 1;
        else if (m == 2) unit_roots = (Dr % 4 == 1) ? 2 : 0;
        else unit_roots = (Dr % 8 == 1) ? 4 : 0;
    } else {
        unit_roots = (kronecker(i64(Dr), i64(p)) == 1) ? 2 : 0;
    }
    return ppow(a / 2) * unit_roots;
}

// c at a prime power: c_{p^j} = R(4 p^j)/2; the factor R(4)=2 cancels for odd p
u64 c_prime_power(i64 D, u64 p, int j) {
    if (j == 0) return 1;
    if (p == 2) return roots_mod_prime_power(D, 2, j + 2) / 2;
    return roots_mod_prime_power(D, p, j);
}

void require_discriminant(i64 D) {
    i64 r = ((D % 4) + 4) % 4;
    if (r == 2 || r == 3)
        throw std::invalid_argument("root_count: D must be 0 or 1 mod 4");
}

// lambda at a prime power via the alternating recursion
// lambda_{p^k} = c_{p^k} - lambda_{p^(k-1)}, lambda_{p^0} = 1
i64 lambda_prime_power(i64 D, u64 p, int k) {
    i64 lam = 1;
    for (int j = 1; j <= k; ++j) lam = i64(c_prime_power(D, p, j)) - lam;
    return lam;
}

}  // namespace

u64 root_count(i64 D, u64 q) {
    require_discriminant(D);
    u64 total = 2;  // R(4) = 2 for D = 0,1 mod 4; odd part contributes via CRT
    int two_extra = 0;
    u64 odd = q;
    while (odd % 2 == 0) { odd /= 2; ++two_extra; }
    if (two_extra > 0) total = roots_mod_prime_power(D, 2, two_extra + 2);
    for (const auto& [p, e] : factorize(odd).factors)
        total *= roots_mod_prime_power(D, p, e);
    return total / 2;
}

int liouville(u64 m) {
    int omega = 0;
    for (const auto& [p, e] : factorize(m).factors) omega += e;
    return (omega & 1) ? -1 : 1;
}

i64 series_coefficient(i64 D, u64 q) {
    require_discriminant(D);
    i64 lam = 1;
    for (const auto& [p, e] : factorize(q).factors)
        lam *= lambda_prime_power(D, p, e);
    return lam;
}

coefficient_table build_coefficient_table(i64 D, u64 Q) {
    require_discriminant(D);
    coefficient_table t;
    t.disc = D;
    t.c.assign(Q + 1, 0);
    t.lam.assign(Q + 1, 0);
    if (Q == 0) return t;
    t.c[1] = 1;
    t.lam[1] = 1;
    auto spf = spf_sieve(u32(Q));
    for (u64 q = 2; q <= Q; ++q) {
        u64 p = spf[q], pk = p, m = q / p;
        while (m % p == 0) { pk *= p; m /= p; }
        if (m > 1) {  // split off the p-part, both factors already filled
            t.c[q] = t.c[pk] * t.c[m];
            t.lam[q] = t.lam[pk] * t.lam[m];
        } else {      // q = p^k: closed form, lambda by alternating recursion
            int k = 0;
            for (u64 v = q; v > 1; v /= p) ++k;
            t.c[q] = u32(c_prime_power(D, p, k));
            t.lam[q] = i64(t.c[q]) - (k == 1 ? 1 : t.lam[q / p]);
        }
    }
    return t;
}

std::shared_ptr<const coefficient_table> coefficient_cache::get(i64 D, u64 Q) {
    {
        std::shared_lock lk(mtx_);
        auto it = map_.find(D);
        if (it != map_.end() && it->second.table->limit() >= Q) {
            auto tbl = it->second.table;
            lk.unlock();
            std::unique_lock wl(mtx_);
            auto it2 = map_.find(D);
            if (it2 != map_.end())
                order_.splice(order_.begin(), order_, it2->second.pos);
            return tbl;
        }
    }
    auto fresh = std::make_shared<coefficient_table>(build_coefficient_table(D, Q));
    std::unique_lock lk(mtx_);
    auto it = map_.find(D);
    if (it != map_.end()) {
        if (it->second.table->limit() >= Q) {  // another writer got there first
            order_.splice(order_.begin(), order_, it->second.pos);
            return it->second.table;
        }
        used_ -= it->second.table->bytes();
        order_.erase(it->second.pos);
        map_.erase(it);
    }
    order_.push_front(D);
    map_[D] = {fresh, order_.begin()};
    used_ += fresh->bytes();
    while (used_ > budget_ && order_.size() > 1) {
        i64 victim = order_.back();
        order_.pop_back();
        auto vit = map_.find(victim);
        used_ -= vit->second.table->bytes();
        map_.erase(vit);
    }
    return fresh;
}

size_t coefficient_cache::bytes_used() const {
    std::shared_lock lk(mtx_);
    return used_;
}

coefficient_cache& shared_coefficient_cache() {
    static coefficient_cache cache;
    return cache;
}

lseries_value zagier_L(u64 n, cplx s) {
    if (n < 3) throw std::invalid_argument("zagier_L: trace must be >= 3");
    i64 D = i64(n) * i64(n) - 4;
    auto [D0, f] = decompose_discriminant(D);
    cplx finite = 0.0;
    for (u64 d : divisors(u64(f))) {
        int mu = mobius(d);
        if (mu == 0) continue;
        cplx term = double(mu * kronecker(D0, i64(d)))
                  * std::exp(-s * std::log(double(d)))
                  * sigma_z(u64(f) / d, 1.0 - 2.0 * s);
        finite += term;
    }
    lseries_value out;
    out.n = n;
    out.s = s;
    out.value = dirichlet_L(s, D0) * finite;
    out.via_factorization = true;
    out.error_estimate = 2e-12 * (1.0 + std::abs(out.value));
    return out;
}

lseries_value zagier_L_series(u64 n, cplx s, u64 Q) {
    if (n < 3) throw std::invalid_argument("zagier_L_series: trace must be >= 3");
    i64 D = i64(n) * i64(n) - 4;
    auto table = shared_coefficient_cache().get(D, Q);
    kahan_cplx acc;
    for (u64 q = 1; q <= Q; ++q) {
        if (table->lam[q] == 0) continue;
        acc.add(double(table->lam[q]) * std::exp(-s * std::log(double(q))));
    }
    // tail <= c_D sum_{q>Q} d(q) q^-sigma with c_D read off the table's top decade
    double sigma = s.real();
    double cap = 1.0;
    for (u64 q = Q - std::min<u64>(Q / 10, Q - 1) + 1; q <= Q; ++q)
        cap = std::max(cap, std::abs(double(table->lam[q])));
    lseries_value out;
    out.n = n;
    out.s = s;
    out.value = acc.value();
    out.via_factorization = false;
    if (sigma > 1.0) {
        double a = sigma - 1.0;
        out.error_estimate = cap * (std::log(double(Q)) + 1.0 / a)
                           * std::pow(double(Q), -a) / a;
    } else {
        out.error_estimate = HUGE_VAL;  // series not absolutely summable here
    }
    return out;
}

double zagier_L1(u64 n) { return zagier_L(n, 1.0).value.real(); }

double conductor_factor_half(i64 D0, u64 f) {
    double finite = 0.0;
    for (u64 d : divisors(f)) {
        int mu = mobius(d);
        if (mu == 0) continue;
        finite += double(mu * kronecker(D0, i64(d))) / std::sqrt(double(d))
                * double(divisors(f / d).size());
    }
    return finite;
}

double zagier_L_half(u64 n) {
    if (n < 3) throw std::invalid_argument("zagier_L_half: trace must be >= 3");
    i64 D = i64(n) * i64(n) - 4;
    auto [D0, f] = decompose_discriminant(D);
    return dirichlet_L_half(D0) * conductor_factor_half(D0, u64(f));
}

double smoothed_series(u64 n, double V, u64 Q) {
    if (n < 3) throw std::invalid_argument("smoothed_series: trace must be >= 3");
    if (V <= 0.0) return 0.0;
    u64 wanted = u64(std::ceil(20.0 * V));
    if (Q == 0) Q = wanted;
    if (Q < wanted)
        std::fprintf(stderr,
                     "smoothed_series: Q=%llu below 20V=%.0f, tail above 1e-8\n",
                     (unsigned long long)Q, 20.0 * V);
    i64 D = i64(n) * i64(n) - 4;
    auto table = shared_coefficient_cache().get(D, Q);
    kahan_real acc;
    for (u64 q = 1; q <= Q; ++q) {
        if (table->lam[q] == 0) continue;
        double w = double(q) / V;
        if (w > 700.0) break;
        acc.add(double(table->lam[q]) / double(q) * std::exp(-w));
    }
    return acc.value();
}

double afe_residual(u64 n, double V) {
    return zagier_L1(n) - smoothed_series(n, V);
}

central_scan subconvexity_scan(u64 n_max) {
    if (n_max > 100000)
        throw std::invalid_argument("subconvexity_scan: n_max above 1e5");
    central_scan out;
    if (n_max < 3) return out;
    out.rows.reserve(n_max - 2);

    // AFE length for the largest modulus; looser cutoff at big D keeps the
    // scan near-linear while the kernel tail stays below 5e-5
    auto cutoff = [](double d0) {
        return d0 < 1e6 ? 16.0 : (d0 < 1e9 ? 12.0 : 10.0);
    };
    double dmax = double(n_max) * double(n_max) - 4.0;
    u64 m_max = u64(std::sqrt(cutoff(dmax) * dmax / 3.141592653589793)) + 2;
    auto spf = spf_sieve(u32(std::max<u64>(m_max, n_max + 2)));
    std::vector<double> logm(m_max + 1, 0.0);
    for (u64 m = 1; m <= m_max; ++m) logm[m] = std::log(double(m));
    std::vector<signed char> chi(m_max + 1, 0);

    for (u64 n = 3; n <= n_max; ++n) {
        i64 D = i64(n) * i64(n) - 4;
        auto [D0, f] = decompose_discriminant(D);
        u64 M = u64(std::sqrt(cutoff(double(D0)) * double(D0) / 3.141592653589793)) + 1;
        // chi_{D0} over m <= M by complete multiplicativity off the spf table
        chi[1] = 1;
        for (u64 m = 2; m <= M; ++m) {
            u64 p = spf[m];
            chi[m] = (m == p) ? (signed char)kronecker(D0, i64(p))
                              : (signed char)(chi[p] * chi[m / p]);
        }
        double L = dirichlet_L_half_sieved(D0, chi.data(), M, logm.data());
        double finite = conductor_factor_half(D0, u64(f));
        central_value_record row;
        row.n = n;
        row.central = std::abs(L * finite);
        row.normalized = row.central / std::cbrt(double(n));
        if (row.normalized > out.max_normalized) {
            out.max_normalized = row.normalized;
            out.argmax = n;
        }
        out.rows.push_back(row);
        if (n_max >= 20000 && n % 5000 == 0)
            std::fprintf(stderr, "subconvexity_scan: n=%llu/%llu\n",
                         (unsigned long long)n, (unsigned long long)n_max);
    }
    return out;
}

}  // namespace zageo
