#ifndef RELAXLAB_TEST_SUPPORT_HPP
#define RELAXLAB_TEST_SUPPORT_HPP

#include <cmath>
#include <random>

#include "relaxlab/mhd.hpp"
#include "relaxlab/ops.hpp"

namespace relax::test {

constexpr double TWO_PI = 6.283185307179586476925286766559;

inline ScalarField2 random_scalar(const Grid2& g, std::uint64_t seed, int kmax = 4) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    SpectralCoeffs2 c(g);
    visit_modes<2>(g, [&](std::size_t i, const std::array<int, 2>& j, const std::array<int, 2>&) {
        const int k1 = g.wavenumber(0, j[0]);
        const int k2 = g.wavenumber(1, j[1]);
        if (k1 == 0 && k2 == 0) return;
        if (std::abs(k1) > kmax || std::abs(k2) > kmax) return;
        c.c[i] = std::complex<double>(unif(rng), unif(rng)) / (1.0 + k1 * k1 + k2 * k2);
    });
    return inverse_transform(c);
}

// Random band-limited divergence-free field (grad_perp of a stream
// function), normalized to unit L2 norm.
inline VecField2 random_divfree(const Grid2& g, std::uint64_t seed, int kmax = 4) {
    VecField2 B = grad_perp(random_scalar(g, seed, kmax));
    const double nrm = l2_norm(B);
    if (nrm > 0.0) B *= 1.0 / nrm;
    return B;
}

inline VecField2 shear_field(const Grid2& g, double amp = 1.0) {
    return sample_vector<2>(g, [&](const std::array<double, 2>& x) {
        return std::array<double, 2>{amp * std::sin(TWO_PI * x[1]), 0.0};
    });
}

inline VecField2 ot_field(const Grid2& g, double amp = 1.0) {
    return sample_vector<2>(g, [&](const std::array<double, 2>& x) {
        return std::array<double, 2>{-amp * std::sin(2.0 * TWO_PI * x[1]),
                                     amp * std::sin(TWO_PI * x[0])};
    });
}

} // namespace relax::test

#endif
