#include "zageo/geodesics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <unordered_set>

#include "zageo/zagier.hpp"

namespace zageo {

namespace {

void require_disc(i64 D, const char* who) {
    i64 r = ((D % 4) + 4) % 4;
    if (D <= 0 || r == 2 || r == 3 || is_square(u64(D)))
        throw std::invalid_argument(std::string(who) + ": not a positive nonsquare discriminant");
}

struct qform_hash {
    size_t operator()(const qform& f) const {
        size_t h = std::hash<i64>{}(f.a);
        h = h * 1000003u ^ std::hash<i64>{}(f.b);
        return h * 1000003u ^ std::hash<i64>{}(f.c);
    }
};

}  // namespace

std::vector<qform> reduced_forms(i64 D) {
    require_disc(D, "reduced_forms");
    i64 s = i64(isqrt64(u64(D)));
    std::vector<qform> out;
    for (i64 a = 1; a <= s; ++a) {
        // b^2 = D (mod 4a), b in the window (|sqrt(D)-2a|, sqrt(D))
        for (u64 r : sqrt_mod(D, u64(4 * a))) {
            i64 lo = std::max<i64>(1, std::max(s - 2 * a, 2 * a - s) - 1);
            i64 b = i64(r);
            if (b < lo) b += (lo - b + 4 * a - 1) / (4 * a) * (4 * a);
            for (; b <= s; b += 4 * a) {
                // exact window: sqrt(D)-b < 2a and 2a-b < sqrt(D), b < sqrt(D)
                if ((b + 2 * a) * (b + 2 * a) <= D) continue;
                if (b < 2 * a && (2 * a - b) * (2 * a - b) >= D) continue;
                i64 c = (b * b - D) / (4 * a);
                if (std::gcd(std::gcd(a, b), c) != 1) continue;
                out.push_back({a, b, c});
                out.push_back({-a, b, -c});
            }
        }
    }
    return out;
}

qform reduce_step(const qform& f, i64 D) {
    i64 s = i64(isqrt64(u64(D)));
    i64 c2 = 2 * std::abs(f.c);
    // r = -b (mod 2|c|) shifted into (sqrt(D) - 2|c|, sqrt(D)): width one period
    i64 r = ((-f.b) % c2 + c2) % c2;
    i64 lo = s - c2 + 1;  // smallest integer above sqrt(D) - 2|c|
    if (r < lo)
        r += (lo - r + c2 - 1) / c2 * c2;
    else
        r -= (r - lo) / c2 * c2;
    i64 cp = (r * r - D) / (4 * f.c);
    return {f.c, r, cp};
}

u32 reduced_form_cycles(i64 D) {
    auto forms = reduced_forms(D);
    std::unordered_set<qform, qform_hash> pending(forms.begin(), forms.end());
    u32 cycles = 0;
    for (const auto& f : forms) {
        if (pending.find(f) == pending.end()) continue;
        qform g = f;
        size_t guard = 0;
        do {
            if (pending.erase(g) == 0 || ++guard > forms.size() + 1)
                throw std::logic_error("reduced_form_cycles: rho left the reduced set");
            g = reduce_step(g, D);
        } while (!(g == f));
        ++cycles;
    }
    return cycles;
}

namespace {

// walk the principal cycle composing the step transforms [[0,-1],[1,m]];
// one period of the continued fraction gives the fundamental automorph
std::optional<pell_solution> automorph(i64 D, i128 entry_cap) {
    require_disc(D, "fundamental_solution");
    i64 s = i64(isqrt64(u64(D)));
    i64 b0 = (s % 2 == (D % 2 + 2) % 2) ? s : s - 1;
    qform start{1, b0, (b0 * b0 - D) / 4};
    i128 m11 = 1, m12 = 0, m21 = 0, m22 = 1;
    qform f = start;
    size_t guard = 0;
    do {
        if (++guard > 10000000)
            throw std::logic_error("fundamental_solution: reduction cycle did not close");
        qform g = reduce_step(f, D);
        i64 m = (f.b + g.b) / (2 * f.c);
        i128 am = m < 0 ? -(i128)m : (i128)m;
        auto mag = [](i128 v) { return v < 0 ? -v : v; };
        if (mag(m11) > entry_cap / (am + 2) || mag(m12) > entry_cap / (am + 2)
            || mag(m21) > entry_cap / (am + 2) || mag(m22) > entry_cap / (am + 2))
            return std::nullopt;
        i128 n11 = m12, n12 = -m11 + m12 * m;
        i128 n21 = m22, n22 = -m21 + m22 * m;
        m11 = n11; m12 = n12; m21 = n21; m22 = n22;
        f = g;
    } while (!(f == start));
    i128 tr = m11 + m22;
    if (tr < 0) tr = -tr;
    i128 uu = m21 < 0 ? -m21 : m21;
    if (tr > i128(UINT64_MAX) || uu > i128(UINT64_MAX)) return std::nullopt;
    pell_solution out;
    out.t = u64(tr);
    out.u = u64(uu);
    if (i128(out.t) * out.t - i128(D) * out.u * out.u != 4)
        throw std::logic_error("fundamental_solution: cycle automorph check failed");
    out.regulator = std::log((double(out.t) + double(out.u) * std::sqrt(double(D))) / 2.0);
    return out;
}

}  // namespace

pell_solution fundamental_solution(i64 D) {
    auto r = automorph(D, i128(1) << 96);
    if (!r) throw std::overflow_error("fundamental_solution: automorph exceeds 64-bit range");
    return *r;
}

std::optional<pell_solution> fundamental_solution_capped(i64 D, double eps_cap) {
    // automorph entries stay below ~4 eps; x16 slack, floor for tiny caps
    double th = 16.0 * std::max(eps_cap, 4.0) * (2.0 + std::sqrt(double(D)));
    i128 cap = th > 7e28 ? (i128(1) << 96) : i128(th);
    auto r = automorph(D, cap);
    if (r && r->regulator > std::log(eps_cap) + 1e-12) return std::nullopt;
    return r;
}

class_data_cache::class_data_cache(std::string path) : path_(std::move(path)) {
    std::ifstream in(path_);
    if (!in.good()) {
        std::ofstream out(path_);
        out << "D,class_count,pell_t,pell_u,regulator\n";
        return;
    }
    std::string line;
    if (!std::getline(in, line) || line != "D,class_count,pell_t,pell_u,regulator")
        throw std::runtime_error("class data cache: bad header in " + path_);
    size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        form_class_data row;
        if (std::sscanf(line.c_str(), "%ld,%u,%lu,%lu,%lf", &row.D, &row.class_count,
                        &row.pell_t, &row.pell_u, &row.regulator) != 5)
            throw std::runtime_error("class data cache: unparsable row " + std::to_string(lineno));
        bool ok = row.D > 0 && (row.D % 4 == 0 || row.D % 4 == 1) && !is_square(u64(row.D))
               && row.class_count >= 1 && row.pell_t > 0 && row.pell_u > 0
               && i128(row.pell_t) * row.pell_t - i128(row.D) * row.pell_u * row.pell_u == 4;
        double reg = std::log((double(row.pell_t)
                               + double(row.pell_u) * std::sqrt(double(row.D))) / 2.0);
        ok = ok && std::abs(row.regulator - reg) <= 1e-9 * (1.0 + std::abs(reg));
        if (!ok)
            throw std::runtime_error("class data cache: invalid row " + std::to_string(lineno));
        rows_.emplace(row.D, row);
    }
}

const form_class_data* class_data_cache::find(i64 D) const {
    std::lock_guard lk(mtx_);
    auto it = rows_.find(D);
    return it == rows_.end() ? nullptr : &it->second;
}

void class_data_cache::put(const form_class_data& row) {
    std::lock_guard lk(mtx_);
    if (!rows_.emplace(row.D, row).second) return;  // append-only, first wins
    if (path_.empty()) return;
    std::ofstream out(path_, std::ios::app);
    char buf[160];
    std::snprintf(buf, sizeof buf, "%ld,%u,%lu,%lu,%.17g\n", row.D, row.class_count,
                  row.pell_t, row.pell_u, row.regulator);
    out << buf;
}

namespace {

// norm of the trace-t class, ((t + sqrt(t^2-4))/2)^2, with a hair of slack
bool norm_within(u64 t, double X) {
    long double root = sqrtl((long double)t * t - 4.0L);
    long double eps = ((long double)t + root) / 2.0L;
    return (double)(eps * eps) <= X * (1.0 + 1e-13);
}

form_class_data class_row(i64 Delta, u64 t1, class_data_cache* cache) {
    if (cache)
        if (const form_class_data* hit = cache->find(Delta)) {
            if (t1 && hit->pell_t != t1)
                throw std::runtime_error("class data cache: fundamental trace mismatch");
            return *hit;
        }
    form_class_data row;
    row.D = Delta;
    row.class_count = reduced_form_cycles(Delta);
    if (t1) {
        row.pell_t = t1;
        row.pell_u = isqrt64((u64(t1) * t1 - 4) / u64(Delta));
        row.regulator = std::log((double(t1) + std::sqrt(double(t1) * t1 - 4.0)) / 2.0);
    } else {
        auto p = fundamental_solution(Delta);
        row.pell_t = p.t;
        row.pell_u = p.u;
        row.regulator = p.regulator;
    }
    if (cache) cache->put(row);
    return row;
}

}  // namespace

psi_result psi_direct(double X, class_data_cache* cache) {
    if (X <= 4.0 || X > 1e8)
        throw std::invalid_argument("psi_direct: need 4 < X <= 1e8");
    // every solution of t^2 - Delta u^2 = 4 with norm <= X is a power of the
    // fundamental automorph of Delta, so grouping traces by level recovers
    // (class count) x (primitive regulator) x (number of powers)
    struct bucket { u64 min_t = 0; u64 hits = 0; };
    std::unordered_map<i64, bucket> by_disc;
    for (u64 t = 3; norm_within(t, X); ++t) {
        u64 disc = t * t - 4;
        for (u64 u = 1; u * u <= disc; ++u) {
            if (disc % (u * u) != 0) continue;
            i64 Delta = i64(disc / (u * u));
            if (Delta % 4 != 0 && Delta % 4 != 1) continue;
            auto& b = by_disc[Delta];
            if (b.min_t == 0 || t < b.min_t) b.min_t = t;
            ++b.hits;
        }
    }
    psi_result out;
    out.X = X;
    out.direct = true;
    for (const auto& [Delta, b] : by_disc) {
        form_class_data row = class_row(Delta, b.min_t, cache);
        out.value += double(row.class_count) * 2.0 * row.regulator * double(b.hits);
        out.terms += u64(row.class_count) * b.hits;
    }
    return out;
}

psi_result psi_via_zagier(double X) {
    if (X <= 4.0 || X > 1e8)
        throw std::invalid_argument("psi_via_zagier: need 4 < X <= 1e8");
    psi_result out;
    out.X = X;
    out.direct = false;
    for (u64 n = 3; norm_within(n, X); ++n) {
        out.value += 2.0 * std::sqrt(double(n) * n - 4.0) * zagier_L1(n);
        ++out.terms;
    }
    return out;
}

identity_check trace_identity_check(u64 n, class_data_cache* cache) {
    if (n < 3 || n > 10000)
        throw std::invalid_argument("trace_identity_check: need 3 <= n <= 1e4");
    i64 D = i64(n) * i64(n) - 4;
    identity_check out;
    out.lhs = 2.0 * std::sqrt(double(D)) * zagier_L1(n);
    for (i64 g = 1; g * g <= D; ++g) {
        if (D % (g * g) != 0) continue;
        i64 Delta = D / (g * g);
        if (Delta % 4 != 0 && Delta % 4 != 1) continue;
        form_class_data row = class_row(Delta, 0, cache);  // CF route; eps <= n keeps it small
        out.rhs += double(row.class_count) * 2.0 * row.regulator;
    }
    out.relative_gap = std::abs(out.lhs - out.rhs)
                     / std::max(1e-300, std::max(std::abs(out.lhs), std::abs(out.rhs)));
    return out;
}

}  // namespace zageo
