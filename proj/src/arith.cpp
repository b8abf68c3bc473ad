#include "zageo/arith.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace zageo {

u64 powmod(u64 a, u64 e, u64 m) {
    u64 r = m > 1 ? 1 % m : 0;
    a %= m;
    while (e) {
        if (e & 1) r = mulmod(r, a, m);
        a = mulmod(a, a, m);
        e >>= 1;
    }
    return r;
}

u64 inv_mod(u64 a, u64 m) {
    if (m == 0) throw std::invalid_argument("inv_mod: zero modulus");
    if (m == 1) return 0;
    i64 r0 = (i64)m, r1 = (i64)(a % m), s0 = 0, s1 = 1;
    while (r1) {
        i64 q = r0 / r1;
        r0 -= q * r1;
        std::swap(r0, r1);
        s0 -= q * s1;
        std::swap(s0, s1);
    }
    if (r0 != 1) throw std::invalid_argument("inv_mod: argument not a unit");
    return (u64)(s0 < 0 ? s0 + (i64)m : s0);
}

bool is_prime(u64 n) {
    if (n < 2) return false;
    for (u64 p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        if (n % p == 0) return n == p;
    }
    u64 d = n - 1;
    int s = 0;
    while (!(d & 1)) { d >>= 1; ++s; }
    // this base set is a proven deterministic witness schedule for n < 2^64
    for (u64 a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        u64 x = powmod(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool composite = true;
        for (int i = 1; i < s; ++i) {
            x = mulmod(x, x, n);
            if (x == n - 1) { composite = false; break; }
        }
        if (composite) return false;
    }
    return true;
}

namespace {

u64 pollard_brent(u64 n) {
    // Brent cycle-finding variant; n odd composite, not a prime power obstacle
    if (!(n & 1)) return 2;
    u64 c = 1;
    while (true) {
        u64 x = 2, y = 2, d = 1, q = 1, ys = 0;
        const u64 m = 128;
        u64 r = 1;
        auto f = [&](u64 v) { return (mulmod(v, v, n) + c) % n; };
        do {
            x = y;
            for (u64 i = 0; i < r; ++i) y = f(y);
            for (u64 k = 0; k < r && d == 1; k += m) {
                ys = y;
                u64 lim = std::min(m, r - k);
                for (u64 i = 0; i < lim; ++i) {
                    y = f(y);
                    q = mulmod(q, x > y ? x - y : y - x, n);
                }
                d = std::gcd(q, n);
            }
            r <<= 1;
        } while (d == 1);
        if (d == n) {
            // backtrack one step at a time
            d = 1;
            while (d == 1) {
                ys = f(ys);
                d = std::gcd(x > ys ? x - ys : ys - x, n);
            }
        }
        if (d != n) return d;
        ++c;  // unlucky polynomial, retry with different offset
    }
}

void factor_rec(u64 n, std::vector<u64>& out) {
    if (n == 1) return;
    if (is_prime(n)) { out.push_back(n); return; }
    u64 d = pollard_brent(n);
    factor_rec(d, out);
    factor_rec(n / d, out);
}

}  // namespace

factored factorize(u64 n) {
    factored f;
    f.value = n;
    if (n <= 1) return f;
    std::vector<u64> ps;
    for (u64 p = 2; p * p <= n && p < 1000000; p += (p == 2 ? 1 : 2)) {
        while (n % p == 0) { ps.push_back(p); n /= p; }
    }
    if (n > 1) factor_rec(n, ps);
    std::sort(ps.begin(), ps.end());
    for (size_t i = 0; i < ps.size();) {
        size_t j = i;
        while (j < ps.size() && ps[j] == ps[i]) ++j;
        f.factors.emplace_back(ps[i], (int)(j - i));
        i = j;
    }
    return f;
}

std::vector<u64> divisors(const factored& f) {
    std::vector<u64> ds{1};
    for (auto [p, a] : f.factors) {
        size_t sz = ds.size();
        u64 pk = 1;
        for (int j = 1; j <= a; ++j) {
            pk *= p;
            for (size_t i = 0; i < sz; ++i) ds.push_back(ds[i] * pk);
        }
    }
    std::sort(ds.begin(), ds.end());
    return ds;
}

std::vector<u64> divisors(u64 n) { return divisors(factorize(n)); }

int mobius(u64 n) {
    if (n == 0) return 0;
    factored f = factorize(n);
    for (auto [p, a] : f.factors)
        if (a > 1) return 0;
    return (f.factors.size() & 1) ? -1 : 1;
}

cplx sigma_z(u64 n, cplx z) {
    cplx s = 0.0;
    for (u64 d : divisors(n)) s += std::exp(z * std::log((double)d));
    return s;
}

int kronecker(i64 a, i64 n) {
    if (n == 0) return (a == 1 || a == -1) ? 1 : 0;
    int result = 1;
    if (n < 0) {
        n = -n;
        if (a < 0) result = -result;
    }
    if (n % 2 == 0) {
        if (a % 2 == 0) return 0;
        int v = 0;
        while (n % 2 == 0) { n /= 2; ++v; }
        // (a|2) = (-1)^((a^2-1)/8) for odd a
        i64 am = ((a % 8) + 8) % 8;
        if ((v & 1) && (am == 3 || am == 5)) result = -result;
    }
    // now n odd positive; standard Jacobi with reciprocity
    a %= n;
    if (a < 0) a += n;
    while (a != 0) {
        while (a % 2 == 0) {
            a /= 2;
            i64 nm = n % 8;
            if (nm == 3 || nm == 5) result = -result;
        }
        std::swap(a, n);
        if (a % 4 == 3 && n % 4 == 3) result = -result;
        a %= n;
    }
    return n == 1 ? result : 0;
}

u64 isqrt64(u64 n) {
    if (n == 0) return 0;
    u64 r = (u64)std::sqrt((double)n);
    while (r > 0 && r > n / r) --r;
    while ((r + 1) <= n / (r + 1)) ++r;
    return r;
}

bool is_square(u64 n, u64* root) {
    u64 r = isqrt64(n);
    if (r * r == n) {
        if (root) *root = r;
        return true;
    }
    return false;
}

disc_split decompose_discriminant(i64 D) {
    if (D <= 0) throw std::invalid_argument("discriminant must be positive");
    i64 m4 = D % 4;
    if (m4 == 2 || m4 == 3) throw std::invalid_argument("discriminant must be 0 or 1 mod 4");
    if (is_square((u64)D)) throw std::invalid_argument("discriminant must not be a perfect square");
    factored fc = factorize((u64)D);
    i64 s = 1, g = 1;  // squarefree kernel s, D = s*g^2
    for (auto [p, a] : fc.factors) {
        for (int j = 0; j + 1 < a; j += 2) g *= (i64)p;
        if (a & 1) s *= (i64)p;
    }
    disc_split d;
    if (s % 4 == 1) {
        d.D0 = s;
        d.f = g;
    } else {
        // s = 2,3 mod 4 forces g even (else D = 2,3 mod 4)
        d.D0 = 4 * s;
        d.f = g / 2;
    }
    return d;
}

std::vector<u32> spf_sieve(u32 n) {
    std::vector<u32> spf(n + 1, 0);
    for (u32 i = 2; i <= n; ++i) {
        if (spf[i] == 0) {
            for (u64 j = i; j <= n; j += i)
                if (spf[j] == 0) spf[j] = i;
        }
    }
    return spf;
}

std::vector<u32> primes_upto(u32 n) {
    std::vector<bool> comp(n + 1, false);
    std::vector<u32> ps;
    for (u32 i = 2; i <= n; ++i) {
        if (!comp[i]) {
            ps.push_back(i);
            for (u64 j = (u64)i * i; j <= n; j += i) comp[j] = true;
        }
    }
    return ps;
}

std::vector<u64> sqrt_mod_prime(u64 a, u64 p) {
    a %= p;
    if (p == 2) return {a};
    if (a == 0) return {0};
    if (powmod(a, (p - 1) / 2, p) != 1) return {};
    u64 r;
    if (p % 4 == 3) {
        r = powmod(a, (p + 1) / 4, p);
    } else {
        // Tonelli-Shanks: p-1 = q 2^s with q odd
        u64 q = p - 1;
        int s = 0;
        while (q % 2 == 0) { q /= 2; ++s; }
        u64 z = 2;
        while (powmod(z, (p - 1) / 2, p) != p - 1) ++z;
        u64 m = s, c = powmod(z, q, p), t = powmod(a, q, p);
        r = powmod(a, (q + 1) / 2, p);
        while (t != 1) {
            u64 t2 = t;
            u64 i = 0;
            while (t2 != 1) { t2 = mulmod(t2, t2, p); ++i; }
            u64 b = c;
            for (u64 j = 0; j + i + 1 < m; ++j) b = mulmod(b, b, p);
            m = i;
            c = mulmod(b, b, p);
            t = mulmod(t, c, p);
            r = mulmod(r, b, p);
        }
    }
    u64 r2 = p - r;
    if (r > r2) std::swap(r, r2);
    if (r == r2) return {r};
    return {r, r2};
}

namespace {

// roots of y^2 = u (mod p^k) for a unit u, via Hensel doubling from mod p
std::vector<u64> unit_sqrt_prime_power(u64 u, u64 p, int k, u64 pk) {
    if (p == 2) {
        if (k == 1) return {1};
        if (k == 2) return (u % 4 == 1) ? std::vector<u64>{1, 3} : std::vector<u64>{};
        if (u % 8 != 1) return {};
        u64 y = 1, mod = 8;  // y^2 = u (mod 8)
        for (int j = 3; j < k; ++j) {
            // adjust bit j: (y + mod/2)^2 = y^2 + mod*y (mod 2*mod)
            u64 next = mod * 2;
            if ((mulmod(y, y, next)) != u % next) y += mod / 2;
            mod = next;
        }
        u64 y2 = pk - y;
        std::vector<u64> out = {y, y2, (y + pk / 2) % pk, (y2 + pk / 2) % pk};
        std::sort(out.begin(), out.end());
        out.erase(std::unique(out.begin(), out.end()), out.end());
        return out;
    }
    auto base = sqrt_mod_prime(u % p, p);
    if (base.empty()) return {};
    u64 y = base[0], mod = p;
    while (mod < pk) {
        // one Newton step doubles the precision: y' = y - (y^2-u)/(2y)
        u64 next = (pk / mod >= mod) ? mod * mod : pk;
        u64 fy = (mulmod(y, y, next) + next - u % next) % next;
        u64 phi = next / p * (p - 1);  // inverse by Euler: 2y is a unit mod p^j
        u64 inv2y = powmod(2 * y % next, phi - 1, next);
        y = (y + next - mulmod(fy, inv2y, next)) % next;
        mod = next;
    }
    u64 y2 = pk - y;
    if (y > y2) std::swap(y, y2);
    return {y, y2};
}

}  // namespace

std::vector<u64> sqrt_mod_prime_power(i64 D, u64 p, int k) {
    u64 pk = 1;
    for (int i = 0; i < k; ++i) pk *= p;
    u64 Dr = u64(((D % i64(pk)) + i64(pk)) % i64(pk));
    if (Dr == 0) {
        // x must have valuation >= ceil(k/2): multiples of p^ceil(k/2)
        u64 step = 1;
        for (int i = 0; i < (k + 1) / 2; ++i) step *= p;
        std::vector<u64> out;
        for (u64 x = 0; x < pk; x += step) out.push_back(x);
        return out;
    }
    int a = 0;
    u64 u = Dr;
    while (u % p == 0) { u /= p; ++a; }
    if (a & 1) return {};
    u64 pa2 = 1;
    for (int i = 0; i < a / 2; ++i) pa2 *= p;
    u64 sub = pk / (pa2 * pa2);  // p^(k-a)
    auto ys = unit_sqrt_prime_power(u % sub, p, k - a, sub);
    // x = p^(a/2) (y + p^(k-a) z), z in [0, p^(a/2)): each y lifts p^(a/2) ways
    std::vector<u64> out;
    out.reserve(ys.size() * pa2);
    for (u64 y : ys)
        for (u64 z = 0; z < pa2; ++z) out.push_back(pa2 * (y + sub * z) % pk);
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<u64> sqrt_mod(i64 D, const factored& fm) {
    std::vector<u64> roots = {0};
    u64 mod = 1;
    for (const auto& [p, e] : fm.factors) {
        u64 pe = 1;
        for (int i = 0; i < e; ++i) pe *= p;
        auto part = sqrt_mod_prime_power(D, p, e);
        if (part.empty()) return {};
        // CRT merge: x = r (mod m), x = s (mod pe)
        std::vector<u64> next;
        next.reserve(roots.size() * part.size());
        u64 phi = pe / p * (p - 1);
        u64 minv = powmod(mod % pe, phi - 1, pe);
        for (u64 r : roots)
            for (u64 s : part) {
                u64 diff = (s + pe - r % pe) % pe;
                next.push_back(r + mod * mulmod(diff, minv, pe));
            }
        roots.swap(next);
        mod *= pe;
    }
    std::sort(roots.begin(), roots.end());
    return roots;
}

std::vector<u64> sqrt_mod(i64 D, u64 m) {
    if (m == 1) return {0};
    return sqrt_mod(D, factorize(m));
}

}  // namespace zageo
