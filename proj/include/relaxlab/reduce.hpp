#ifndef RELAXLAB_REDUCE_HPP
#define RELAXLAB_REDUCE_HPP

#include <cmath>
#include <cstddef>

namespace relax {

// Fixed-order pairwise reduction. All grid sums in the library go through
// this so results are bit-stable for a given input ordering.
template <class F>
double pairwise_sum(std::size_t lo, std::size_t hi, const F& term) {
    const std::size_t n = hi - lo;
    if (n == 0) return 0.0;
    if (n <= 16) {
        double s = 0.0;
        for (std::size_t i = lo; i < hi; ++i) s += term(i);
        return s;
    }
    const std::size_t mid = lo + n / 2;
    return pairwise_sum(lo, mid, term) + pairwise_sum(mid, hi, term);
}

template <class F>
double pairwise_sum(std::size_t n, const F& term) {
    return pairwise_sum<F>(0, n, term);
}

} // namespace relax

#endif
