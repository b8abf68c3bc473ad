#pragma once
// hyperbolic class counting for PSL(2,Z): reduced indefinite binary quadratic
// forms and their reduction cycles, Pell automorphs t^2 - D u^2 = 4, the
// geodesic counting function Psi(X), and the per-trace identity
//   2 sqrt(n^2-4) L_{n^2-4}(1) = sum over levels g^2 | n^2-4 of
//   (cycle count of (n^2-4)/g^2) * 2 log eps.

#include <mutex>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "zageo/arith.hpp"

namespace zageo {

struct qform {
    i64 a, b, c;  // a x^2 + b x y + c y^2, b^2 - 4ac = D
    bool operator==(const qform& o) const { return a == o.a && b == o.b && c == o.c; }
};

// all primitive reduced forms of discriminant D
// (reduced: 0 < b < sqrt(D), sqrt(D) - b < 2|a| < sqrt(D) + b)
std::vector<qform> reduced_forms(i64 D);

// one reduction step rho(a,b,c) = (c, r, (r^2-D)/4c), r = -b (mod 2|c|),
// sqrt(D) - 2|c| < r < sqrt(D); permutes the reduced forms of disc D
qform reduce_step(const qform& f, i64 D);

// number of rho-cycles of primitive reduced forms = narrow form class number
u32 reduced_form_cycles(i64 D);

struct pell_solution {
    u64 t = 0, u = 0;      // minimal t, u > 0 with t^2 - D u^2 = 4
    double regulator = 0;  // log((t + u sqrt(D))/2)
};

// fundamental automorph via the continued-fraction cycle of the principal
// reduced form (the partial quotients are the CF expansion of the associated
// surd); throws std::overflow_error when (t, u) exceeds 64-bit range
pell_solution fundamental_solution(i64 D);

// same, but gives up early once the automorph provably exceeds eps_cap
std::optional<pell_solution> fundamental_solution_capped(i64 D, double eps_cap);

struct form_class_data {
    i64 D = 0;
    u32 class_count = 0;
    u64 pell_t = 0, pell_u = 0;
    double regulator = 0;
};

// CSV-backed store "D,class_count,pell_t,pell_u,regulator"; rows validated
// against the Pell equation on load, appended as they are computed
class class_data_cache {
public:
    class_data_cache() = default;                    // in-memory only
    explicit class_data_cache(std::string path);     // load + append to file
    const form_class_data* find(i64 D) const;
    void put(const form_class_data& row);
    size_t size() const { return rows_.size(); }
private:
    std::string path_;
    std::unordered_map<i64, form_class_data> rows_;
    mutable std::mutex mtx_;
};

struct psi_result {
    double X = 0;
    double value = 0;
    bool direct = true;
    u64 terms = 0;  // contributing conjugacy classes
};

// Psi(X) = sum over classes of norm <= X of log(norm of the primitive
// geodesic), by trace/level inversion over t^2 - Delta u^2 = 4
psi_result psi_direct(double X, class_data_cache* cache = nullptr);

// the same quantity through 2 sum sqrt(n^2-4) L_{n^2-4}(1)
psi_result psi_via_zagier(double X);

struct identity_check {
    double lhs = 0, rhs = 0, relative_gap = 0;
};

// lhs = 2 sqrt(n^2-4) L_{n^2-4}(1); rhs = class-by-class Lambda sum over all
// levels g^2 | n^2-4 with (n^2-4)/g^2 a discriminant
identity_check trace_identity_check(u64 n, class_data_cache* cache = nullptr);

}  // namespace zageo
