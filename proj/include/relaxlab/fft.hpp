#ifndef RELAXLAB_FFT_HPP
#define RELAXLAB_FFT_HPP

#include "relaxlab/field.hpp"

namespace relax {

// Forward transform, normalized so coefficients are Fourier-series
// coefficients: f(x) = sum_k c_k exp(2*pi*i k.x). Round trip is exact to
// rounding; Parseval holds against the grid quadrature.
SpectralCoeffs2 spectral_transform(const ScalarField2& f);
SpectralCoeffs3 spectral_transform(const ScalarField3& f);

ScalarField2 inverse_transform(const SpectralCoeffs2& c);
ScalarField3 inverse_transform(const SpectralCoeffs3& c);

// Sum over the full (conjugate-extended) spectrum of |c_k|^2; equals the
// grid L2 norm of the field by Parseval.
double spectral_norm_sq(const SpectralCoeffs2& c);
double spectral_norm_sq(const SpectralCoeffs3& c);

} // namespace relax

#endif
