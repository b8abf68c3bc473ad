#include "zageo/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <stdexcept>
#include <string>

#include "zageo/geodesics.hpp"

namespace zageo {

namespace {

constexpr double PI = 3.141592653589793238462643383279502884;

// pairwise reduction keeps the rounding error of a length-n sum at
// O(log n) ulp, enough that two orderings of a 100-term sum agree to ~1e-15
cplx pairwise(const cplx* v, std::size_t n) {
    if (n <= 16) {
        cplx s{};
        for (std::size_t i = 0; i < n; ++i) s += v[i];
        return s;
    }
    std::size_t h = n / 2;
    return pairwise(v, h) + pairwise(v + h, n - h);
}

}  // namespace

eigenvalue_table load_eigenvalues(const std::string& path) {
    std::FILE* fp = std::fopen(path.c_str(), "r");
    if (!fp) throw std::runtime_error("load_eigenvalues: cannot open " + path);
    eigenvalue_table tab;
    char line[512];
    long lineno = 0;
    while (std::fgets(line, sizeof line, fp)) {
        ++lineno;
        char* s = line;
        while (*s == ' ' || *s == '\t') ++s;
        if (*s == '#') {  // provenance header
            char* e = s + std::strlen(s);
            while (e > s && (e[-1] == '\n' || e[-1] == '\r')) --e;
            if (!tab.source.empty()) tab.source += ' ';
            tab.source.append(s + 1, e);
            continue;
        }
        if (*s == '\n' || *s == '\r' || *s == '\0') continue;  // blank
        char* end = nullptr;
        double t = std::strtod(s, &end);
        while (end && (*end == ' ' || *end == '\t' || *end == '\n' ||
                       *end == '\r'))
            ++end;
        if (end == s || *end != '\0') {
            std::fclose(fp);
            throw std::runtime_error("load_eigenvalues: parse error at " +
                                     path + ":" + std::to_string(lineno));
        }
        if (!(t > 0.0)) {
            std::fclose(fp);
            throw std::invalid_argument(
                "load_eigenvalues: nonpositive entry at line " +
                std::to_string(lineno));
        }
        if (!tab.t_values.empty() && t <= tab.t_values.back()) {
            std::fclose(fp);
            throw std::invalid_argument(
                "load_eigenvalues: entries not strictly ascending at line " +
                std::to_string(lineno));
        }
        tab.t_values.push_back(t);
    }
    std::fclose(fp);
    if (tab.t_values.empty())
        throw std::invalid_argument("load_eigenvalues: no entries in " + path);

    if (tab.t_values.front() <= 9.0 || tab.t_values.front() >= 10.0)
        tab.warnings.push_back(
            "first entry " + std::to_string(tab.t_values.front()) +
            " outside (9,10): not the modular-surface ground state");
    double tmax = tab.max_t();
    if (tmax >= 25.0) {
        double r = weyl_ratio(tab, tmax);
        if (r < 0.75 || r > 1.25)
            tab.warnings.push_back(
                "eigenvalue count at T=" + std::to_string(tmax) + " is " +
                std::to_string(r) +
                " of T^2/12; secondary terms this size are normal in desk "
                "range but check the table if it was meant to be complete");
    }
    return tab;
}

double weyl_ratio(const eigenvalue_table& tab, double T) {
    if (!(T > 0.0)) throw std::invalid_argument("weyl_ratio: T > 0 required");
    auto it = std::upper_bound(tab.t_values.begin(), tab.t_values.end(), T);
    double n = double(it - tab.t_values.begin());
    return n / (T * T / 12.0);
}

cplx exp_sum(const eigenvalue_table& tab, double X, double T, bool* truncated) {
    if (!(X > 0.0) || !(T >= 0.0))
        throw std::invalid_argument("exp_sum: X > 0, T >= 0 required");
    if (truncated) *truncated = T > tab.max_t();
    auto it = std::upper_bound(tab.t_values.begin(), tab.t_values.end(), T);
    double lx = std::log(X);
    std::vector<cplx> terms;
    terms.reserve(it - tab.t_values.begin());
    for (auto p = tab.t_values.begin(); p != it; ++p)
        terms.push_back(std::polar(1.0, *p * lx));
    return pairwise(terms.data(), terms.size());
}

cplx weighted_exp_sum(const eigenvalue_table& tab, double X, double T) {
    if (!(X > 0.0) || !(T > 0.0))
        throw std::invalid_argument("weighted_exp_sum: X, T > 0 required");
    double lx = std::log(X);
    std::vector<cplx> terms;
    terms.reserve(tab.t_values.size());
    for (double t : tab.t_values)
        terms.push_back(t * std::exp(-t / T) * std::polar(1.0, t * lx));
    return pairwise(terms.data(), terms.size());
}

explicit_formula_result explicit_formula_residual(const eigenvalue_table& tab,
                                                  double X, double T) {
    if (!(X > 2.0))
        throw std::invalid_argument("explicit_formula: X > 2 required");
    if (!(T >= 1.0))
        throw std::invalid_argument("explicit_formula: T >= 1 required");
    if (T > tab.max_t())
        throw std::invalid_argument(
            "explicit_formula: T exceeds the table; the spectral sum would "
            "silently miss eigenvalues");
    explicit_formula_result r;
    r.X = X;
    r.T = T;
    double lx = std::log(X);
    r.outside_proved_range = T > std::sqrt(X) / (lx * lx);
    auto it = std::upper_bound(tab.t_values.begin(), tab.t_values.end(), T);
    std::vector<cplx> terms;
    terms.reserve(it - tab.t_values.begin());
    for (auto p = tab.t_values.begin(); p != it; ++p)
        terms.push_back(std::polar(1.0, *p * lx) / cplx(0.5, *p));
    r.spectral = 2.0 * std::sqrt(X) * pairwise(terms.data(), terms.size()).real();
    r.psi = psi_direct(X).value;
    r.residual = r.psi - X - r.spectral;
    r.bound = (X / T) * lx * lx;
    return r;
}

test_function_params make_test_function(double X, double T) {
    if (!(X >= 2.0) || !(T >= 2.0))
        throw std::invalid_argument("make_test_function: X, T >= 2 required");
    test_function_params p;
    p.X = X;
    p.T = T;
    double L = 0.5 * std::log(X), th = 0.5 / T;
    p.beta = cplx(L, th);
    p.a = std::sinh(L) * std::sin(th);
    p.b = std::cosh(L) * std::cos(th);
    p.c = cplx(p.a, -p.b);
    p.gamma_arg = std::arg(p.c) + 0.5 * PI;
    return p;
}

cplx phi_test(double x, const test_function_params& p) {
    cplx sh = std::sinh(p.beta);
    return sh * sh / (2.0 * PI) * (x * x) *
           std::exp(cplx(0.0, x) * std::cosh(p.beta));
}

}  // namespace zageo
