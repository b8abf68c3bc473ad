#pragma once
// deterministic compensated/pairwise accumulation so parallel reductions and
// reruns produce bit-identical sums regardless of chunking.

#include <complex>
#include <cstddef>
#include <vector>

namespace zageo {

// Neumaier variant of Kahan summation; final value = sum + carry
struct kahan_real {
    double sum = 0.0, carry = 0.0;
    void add(double x) {
        double t = sum + x;
        if (std::abs(sum) >= std::abs(x))
            carry += (sum - t) + x;
        else
            carry += (x - t) + sum;
        sum = t;
    }
    double value() const { return sum + carry; }
};

struct kahan_cplx {
    kahan_real re, im;
    void add(std::complex<double> z) { re.add(z.real()); im.add(z.imag()); }
    std::complex<double> value() const { return {re.value(), im.value()}; }
};

// fixed fan-in pairwise tree sum over a materialized buffer; the reduction
// order depends only on the buffer length, never on thread scheduling
template <typename T>
T pairwise_sum(const std::vector<T>& v, std::size_t lo, std::size_t hi) {
    if (hi - lo <= 8) {
        T s{};
        for (std::size_t i = lo; i < hi; ++i) s += v[i];
        return s;
    }
    std::size_t mid = lo + (hi - lo) / 2;
    return pairwise_sum(v, lo, mid) + pairwise_sum(v, mid, hi);
}

template <typename T>
T pairwise_sum(const std::vector<T>& v) {
    return v.empty() ? T{} : pairwise_sum(v, 0, v.size());
}

}  // namespace zageo
