#ifndef RELAXLAB_FIELD_HPP
#define RELAXLAB_FIELD_HPP

#include <array>
#include <cmath>
#include <complex>
#include <functional>
#include <vector>

#include "relaxlab/grid.hpp"
#include "relaxlab/reduce.hpp"

namespace relax {

// Real samples on a periodic grid, row-major (last axis fastest).
template <int D>
struct ScalarField {
    Grid<D> grid;
    std::vector<double> v;

    ScalarField() = default;
    explicit ScalarField(const Grid<D>& g) : grid(g), v(g.size(), 0.0) {}

    double& operator[](std::size_t i) { return v[i]; }
    double operator[](std::size_t i) const { return v[i]; }
    std::size_t size() const { return v.size(); }

    bool finite() const {
        for (double x : v)
            if (!std::isfinite(x)) return false;
        return true;
    }

    void require_finite(const char* what) const {
        if (!finite()) throw NumericFailure(std::string(what) + ": non-finite field values");
    }

    ScalarField& operator+=(const ScalarField& o) {
        for (std::size_t i = 0; i < v.size(); ++i) v[i] += o.v[i];
        return *this;
    }
    ScalarField& operator-=(const ScalarField& o) {
        for (std::size_t i = 0; i < v.size(); ++i) v[i] -= o.v[i];
        return *this;
    }
    ScalarField& operator*=(double c) {
        for (double& x : v) x *= c;
        return *this;
    }
};

// Complex half-spectrum coefficients of a real field (conjugate-symmetric
// full spectrum; only the non-redundant half along the last axis is stored).
template <int D>
struct SpectralCoeffs {
    Grid<D> grid;
    std::vector<std::complex<double>> c;

    SpectralCoeffs() = default;
    explicit SpectralCoeffs(const Grid<D>& g) : grid(g), c(g.spectral_size(), 0.0) {}

    std::size_t size() const { return c.size(); }

    SpectralCoeffs& operator+=(const SpectralCoeffs& o) {
        for (std::size_t i = 0; i < c.size(); ++i) c[i] += o.c[i];
        return *this;
    }
    SpectralCoeffs& operator*=(double s) {
        for (auto& z : c) z *= s;
        return *this;
    }
};

template <int D>
struct VecField {
    Grid<D> grid;
    std::array<ScalarField<D>, D> comp;

    VecField() = default;
    explicit VecField(const Grid<D>& g) : grid(g) {
        for (int a = 0; a < D; ++a) comp[a] = ScalarField<D>(g);
    }

    ScalarField<D>& operator[](int a) { return comp[a]; }
    const ScalarField<D>& operator[](int a) const { return comp[a]; }

    bool finite() const {
        for (int a = 0; a < D; ++a)
            if (!comp[a].finite()) return false;
        return true;
    }
    void require_finite(const char* what) const {
        if (!finite()) throw NumericFailure(std::string(what) + ": non-finite field values");
    }

    VecField& operator+=(const VecField& o) {
        for (int a = 0; a < D; ++a) comp[a] += o.comp[a];
        return *this;
    }
    VecField& operator-=(const VecField& o) {
        for (int a = 0; a < D; ++a) comp[a] -= o.comp[a];
        return *this;
    }
    VecField& operator*=(double c) {
        for (int a = 0; a < D; ++a) comp[a] *= c;
        return *this;
    }
};

using ScalarField2 = ScalarField<2>;
using ScalarField3 = ScalarField<3>;
using VecField2 = VecField<2>;
using VecField3 = VecField<3>;
using SpectralCoeffs2 = SpectralCoeffs<2>;
using SpectralCoeffs3 = SpectralCoeffs<3>;

// ---- quadrature-exact reductions (cell sum times cell volume) ----

template <int D>
double integral(const ScalarField<D>& f) {
    return f.grid.cell_volume() * pairwise_sum(f.size(), [&](std::size_t i) { return f.v[i]; });
}

template <int D>
double l2_inner(const ScalarField<D>& f, const ScalarField<D>& g) {
    return f.grid.cell_volume() *
           pairwise_sum(f.size(), [&](std::size_t i) { return f.v[i] * g.v[i]; });
}

template <int D>
double l2_norm_sq(const ScalarField<D>& f) { return l2_inner(f, f); }

template <int D>
double l2_inner(const VecField<D>& f, const VecField<D>& g) {
    double s = 0.0;
    for (int a = 0; a < D; ++a) s += l2_inner(f[a], g[a]);
    return s;
}

template <int D>
double l2_norm_sq(const VecField<D>& f) { return l2_inner(f, f); }

template <int D>
double l2_norm(const VecField<D>& f) { return std::sqrt(l2_norm_sq(f)); }

template <int D>
double max_abs(const ScalarField<D>& f) {
    double m = 0.0;
    for (double x : f.v) m = std::max(m, std::abs(x));
    return m;
}

template <int D>
double max_abs(const VecField<D>& f) {
    double m = 0.0;
    for (int a = 0; a < D; ++a) m = std::max(m, max_abs(f[a]));
    return m;
}

// Largest pointwise |vector| over the grid.
template <int D>
double max_magnitude(const VecField<D>& f) {
    double m2 = 0.0;
    for (std::size_t i = 0; i < f[0].size(); ++i) {
        double s = 0.0;
        for (int a = 0; a < D; ++a) s += f[a][i] * f[a][i];
        m2 = std::max(m2, s);
    }
    return std::sqrt(m2);
}

// Evaluate f(x) at every node from a coordinate callback.
template <int D, class F>
ScalarField<D> sample_scalar(const Grid<D>& g, const F& f) {
    ScalarField<D> out(g);
    std::array<double, D> x{};
    std::array<int, D> idx{};
    for (std::size_t i = 0; i < out.size(); ++i) {
        std::size_t rem = i;
        for (int a = D - 1; a >= 0; --a) {
            idx[a] = static_cast<int>(rem % g.n[a]);
            rem /= g.n[a];
        }
        for (int a = 0; a < D; ++a) x[a] = idx[a] * g.h(a);
        out.v[i] = f(x);
    }
    return out;
}

template <int D, class F>
VecField<D> sample_vector(const Grid<D>& g, const F& f) {
    VecField<D> out(g);
    for (int a = 0; a < D; ++a)
        out[a] = sample_scalar<D>(g, [&](const std::array<double, D>& x) { return f(x)[a]; });
    return out;
}

} // namespace relax

#endif
