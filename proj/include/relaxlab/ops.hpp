#ifndef RELAXLAB_OPS_HPP
#define RELAXLAB_OPS_HPP

#include <array>

#include "relaxlab/fft.hpp"

namespace relax {

template <int D>
using VecCoeffs = std::array<SpectralCoeffs<D>, D>;

using VecCoeffs2 = VecCoeffs<2>;
using VecCoeffs3 = VecCoeffs<3>;

// Visit every stored half-spectrum mode: flat index, per-axis storage index,
// and derivative wavenumbers (Nyquist mapped to zero).
template <int D, class F>
void visit_modes(const Grid<D>& g, const F& fn) {
    std::array<int, D> j{};
    std::array<int, D> dk{};
    std::array<int, D> extent{};
    for (int a = 0; a < D - 1; ++a) extent[a] = g.n[a];
    extent[D - 1] = g.n[D - 1] / 2 + 1;
    std::size_t flat = 0;
    while (true) {
        for (int a = 0; a < D; ++a) dk[a] = g.deriv_wavenumber(a, j[a]);
        fn(flat, j, dk);
        ++flat;
        int a = D - 1;
        while (a >= 0) {
            if (++j[a] < extent[a]) break;
            j[a] = 0;
            --a;
        }
        if (a < 0) break;
    }
}

// Multiplicity of a stored mode in the conjugate-extended full spectrum.
template <int D>
inline double mode_multiplicity(const Grid<D>& g, const std::array<int, D>& j) {
    const int jlast = j[D - 1];
    return (jlast == 0 || 2 * jlast == g.n[D - 1]) ? 1.0 : 2.0;
}

// ---- coefficient-level operators (exact on the represented modes) ----

// Two-thirds rule: zero every mode with |k_a| > n_a/3 on any axis. Idempotent.
template <int D> SpectralCoeffs<D> dealias(SpectralCoeffs<D> c);
template <int D> VecCoeffs<D> dealias(VecCoeffs<D> c);

template <int D> VecCoeffs<D> grad_coeffs(const SpectralCoeffs<D>& f);
template <int D> SpectralCoeffs<D> div_coeffs(const VecCoeffs<D>& v);
template <int D> SpectralCoeffs<D> laplacian_coeffs(const SpectralCoeffs<D>& f);

SpectralCoeffs2 curl2d_coeffs(const VecCoeffs2& v);
VecCoeffs2 grad_perp_coeffs(const SpectralCoeffs2& a);
VecCoeffs3 curl3d_coeffs(const VecCoeffs3& v);

// Mode-wise Helmholtz-Leray projection v - k (k.v)/|k|^2; the mean mode
// (and pure-Nyquist modes, which carry no derivative) pass through.
template <int D> VecCoeffs<D> leray_coeffs(VecCoeffs<D> v);

// Solve -lap(psi) = f with zero-mean psi (mean mode of f discarded).
SpectralCoeffs2 solve_neg_laplacian(const SpectralCoeffs2& f);

template <int D> VecCoeffs<D> to_coeffs(const VecField<D>& v);
template <int D> VecField<D> to_field(const VecCoeffs<D>& c);

// ---- field-level wrappers ----

template <int D> VecField<D> grad(const ScalarField<D>& f);
template <int D> ScalarField<D> div(const VecField<D>& v);
template <int D> ScalarField<D> laplacian(const ScalarField<D>& f);
ScalarField2 curl2d(const VecField2& v);
VecField2 grad_perp(const ScalarField2& a);
VecField3 curl3d(const VecField3& v);
template <int D> VecField<D> leray_project(const VecField<D>& v);
template <int D> ScalarField<D> dealias_field(const ScalarField<D>& f);
template <int D> VecField<D> dealias_field(const VecField<D>& v);

// Stream function of a divergence-free 2D field: grad_perp(psi) = v up to
// the mean mode (returned psi has zero mean).
ScalarField2 stream_function(const VecField2& v);

// Max modulus of the spectral divergence; the discrete div-free check.
template <int D> double max_spectral_divergence(const VecField<D>& v);

// int |grad f|^2 evaluated spectrally (Nyquist-free derivative convention).
template <int D> double grad_norm_sq(const ScalarField<D>& f);
template <int D> double grad_norm_sq(const VecField<D>& v);

} // namespace relax

#endif
