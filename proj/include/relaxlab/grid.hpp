#ifndef RELAXLAB_GRID_HPP
#define RELAXLAB_GRID_HPP

#include <array>
#include <cstddef>
#include <string>

#include "relaxlab/errors.hpp"

namespace relax {

// Uniform periodic grid on the unit torus (R/Z)^D. Node i along axis a sits
// at x_a = i / n[a]; spacing h_a = 1 / n[a]. Wavenumbers run over
// {-n/2, ..., n/2-1} per axis and are scaled by 2*pi in derivatives.
template <int D>
struct Grid {
    std::array<int, D> n{};

    Grid() = default;
    explicit Grid(const std::array<int, D>& sizes) : n(sizes) { validate(); }

    void validate() const {
        for (int a = 0; a < D; ++a) {
            if (n[a] < 8 || n[a] % 2 != 0)
                throw ConfigError("grid size along axis " + std::to_string(a) +
                                  " must be even and >= 8, got " + std::to_string(n[a]));
        }
    }

    std::size_t size() const {
        std::size_t s = 1;
        for (int a = 0; a < D; ++a) s *= static_cast<std::size_t>(n[a]);
        return s;
    }

    // Half-spectrum size used by real-to-complex storage (last axis folded).
    std::size_t spectral_size() const {
        std::size_t s = 1;
        for (int a = 0; a < D - 1; ++a) s *= static_cast<std::size_t>(n[a]);
        return s * static_cast<std::size_t>(n[D - 1] / 2 + 1);
    }

    double h(int axis) const { return 1.0 / n[axis]; }
    double cell_volume() const {
        double v = 1.0;
        for (int a = 0; a < D; ++a) v *= 1.0 / n[a];
        return v;
    }

    // Signed integer wavenumber for grid index j along a full-range axis.
    int wavenumber(int axis, int j) const { return j <= n[axis] / 2 - 1 ? j : j - n[axis]; }

    // Wavenumber used in derivative factors: the Nyquist mode is dropped so
    // spectral derivatives of real fields stay real.
    int deriv_wavenumber(int axis, int j) const {
        if (2 * j == n[axis]) return 0;
        return wavenumber(axis, j);
    }

    bool operator==(const Grid& o) const { return n == o.n; }
    bool operator!=(const Grid& o) const { return !(*this == o); }
};

using Grid2 = Grid<2>;
using Grid3 = Grid<3>;

inline Grid2 make_grid2(int n1, int n2) { return Grid2(std::array<int, 2>{n1, n2}); }
inline Grid2 make_grid2(int n) { return make_grid2(n, n); }
inline Grid3 make_grid3(int n1, int n2, int n3) { return Grid3(std::array<int, 3>{n1, n2, n3}); }
inline Grid3 make_grid3(int n) { return make_grid3(n, n, n); }

} // namespace relax

#endif
