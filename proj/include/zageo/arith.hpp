#pragma once
// exact 64-bit integer arithmetic: factorization, multiplicative functions,
// Kronecker symbol, discriminant decomposition.  all functions pure/reentrant.

#include <cstdint>
#include <complex>
#include <stdexcept>
#include <utility>
#include <vector>

namespace zageo {

using i64 = std::int64_t;
using u64 = std::uint64_t;
using u32 = std::uint32_t;
using i128 = __int128;
using u128 = unsigned __int128;
using cplx = std::complex<double>;

inline u64 mulmod(u64 a, u64 b, u64 m) { return (u128)a * b % m; }
u64 powmod(u64 a, u64 e, u64 m);
u64 inv_mod(u64 a, u64 m);  // extended gcd; throws if gcd(a,m) != 1

// deterministic Miller-Rabin, valid for all 64-bit inputs
bool is_prime(u64 n);

struct factored {
    u64 value = 1;
    std::vector<std::pair<u64, int>> factors;  // primes ascending
};

// trial division below 10^6 backed by Brent-Pollard rho; n <= 2^63
factored factorize(u64 n);

std::vector<u64> divisors(const factored& f);
std::vector<u64> divisors(u64 n);
int mobius(u64 n);

// sigma_z(n) = sum_{d|n} d^z for complex exponent z
cplx sigma_z(u64 n, cplx z);

// extended Kronecker symbol (a|n); completely multiplicative in n,
// (a|2) per a mod 8, (a|-1) = sign(a), (a|0) = [|a|=1]
int kronecker(i64 a, i64 n);

struct disc_split {
    i64 D0;  // fundamental discriminant
    i64 f;   // conductor, D = D0*f^2
};

// split a positive nonsquare discriminant D = D0*f^2 with D0 fundamental
// (D0 = 1 mod 4 squarefree, or 4m with m = 2,3 mod 4 squarefree).
// throws std::invalid_argument for D = 2,3 mod 4 or perfect squares.
disc_split decompose_discriminant(i64 D);

u64 isqrt64(u64 n);
bool is_square(u64 n, u64* root = nullptr);

// square roots of a modulo odd prime p (Tonelli-Shanks); empty if nonresidue
std::vector<u64> sqrt_mod_prime(u64 a, u64 p);
// all x in [0, p^k) with x^2 = D (mod p^k), valuation cases included
std::vector<u64> sqrt_mod_prime_power(i64 D, u64 p, int k);
// all x in [0, m) with x^2 = D (mod m), CRT over the factorization; sorted
std::vector<u64> sqrt_mod(i64 D, u64 m);
std::vector<u64> sqrt_mod(i64 D, const factored& fm);

// smallest-prime-factor table for 0..n (spf[0]=spf[1]=0)
std::vector<u32> spf_sieve(u32 n);
std::vector<u32> primes_upto(u32 n);

}  // namespace zageo
