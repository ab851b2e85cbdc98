#include "relaxlab/ops.hpp"

#include <cmath>

namespace relax {

namespace {

constexpr double TWO_PI = 6.283185307179586476925286766559;

template <int D, class F>
void for_each_mode(const Grid<D>& g, const F& fn) {
    visit_modes<D>(g, fn);
}

template <int D, std::size_t N>
bool keep_mode(const Grid<D>& g, const std::array<int, N>& j) {
    for (int a = 0; a < D; ++a) {
        const int k = g.wavenumber(a, j[a]);
        if (3 * std::abs(k) > g.n[a]) return false;
    }
    return true;
}

} // namespace

template <int D>
SpectralCoeffs<D> dealias(SpectralCoeffs<D> c) {
    for_each_mode<D>(c.grid, [&](std::size_t i, const std::array<int, D>& j, const std::array<int, D>&) {
        if (!keep_mode(c.grid, j)) c.c[i] = 0.0;
    });
    return c;
}

template <int D>
VecCoeffs<D> dealias(VecCoeffs<D> v) {
    for (int a = 0; a < D; ++a) v[a] = dealias<D>(std::move(v[a]));
    return v;
}

template <int D>
VecCoeffs<D> grad_coeffs(const SpectralCoeffs<D>& f) {
    VecCoeffs<D> out;
    for (int a = 0; a < D; ++a) out[a] = SpectralCoeffs<D>(f.grid);
    for_each_mode<D>(f.grid, [&](std::size_t i, const std::array<int, D>&, const std::array<int, D>& dk) {
        const std::complex<double> z = f.c[i];
        for (int a = 0; a < D; ++a)
            out[a].c[i] = std::complex<double>(0.0, TWO_PI * dk[a]) * z;
    });
    return out;
}

template <int D>
SpectralCoeffs<D> div_coeffs(const VecCoeffs<D>& v) {
    SpectralCoeffs<D> out(v[0].grid);
    for_each_mode<D>(out.grid, [&](std::size_t i, const std::array<int, D>&, const std::array<int, D>& dk) {
        std::complex<double> s = 0.0;
        for (int a = 0; a < D; ++a)
            s += std::complex<double>(0.0, TWO_PI * dk[a]) * v[a].c[i];
        out.c[i] = s;
    });
    return out;
}

template <int D>
SpectralCoeffs<D> laplacian_coeffs(const SpectralCoeffs<D>& f) {
    SpectralCoeffs<D> out(f.grid);
    for_each_mode<D>(f.grid, [&](std::size_t i, const std::array<int, D>&, const std::array<int, D>& dk) {
        double k2 = 0.0;
        for (int a = 0; a < D; ++a) k2 += static_cast<double>(dk[a]) * dk[a];
        out.c[i] = -TWO_PI * TWO_PI * k2 * f.c[i];
    });
    return out;
}

SpectralCoeffs2 curl2d_coeffs(const VecCoeffs2& v) {
    SpectralCoeffs2 out(v[0].grid);
    for_each_mode<2>(out.grid, [&](std::size_t i, const std::array<int, 2>&, const std::array<int, 2>& dk) {
        out.c[i] = std::complex<double>(0.0, TWO_PI) *
                   (static_cast<double>(dk[0]) * v[1].c[i] - static_cast<double>(dk[1]) * v[0].c[i]);
    });
    return out;
}

VecCoeffs2 grad_perp_coeffs(const SpectralCoeffs2& a) {
    VecCoeffs2 out{SpectralCoeffs2(a.grid), SpectralCoeffs2(a.grid)};
    for_each_mode<2>(a.grid, [&](std::size_t i, const std::array<int, 2>&, const std::array<int, 2>& dk) {
        const std::complex<double> z = a.c[i];
        out[0].c[i] = std::complex<double>(0.0, TWO_PI * dk[1]) * z;   //  d2 A
        out[1].c[i] = std::complex<double>(0.0, -TWO_PI * dk[0]) * z;  // -d1 A
    });
    return out;
}

VecCoeffs3 curl3d_coeffs(const VecCoeffs3& v) {
    VecCoeffs3 out{SpectralCoeffs3(v[0].grid), SpectralCoeffs3(v[0].grid), SpectralCoeffs3(v[0].grid)};
    for_each_mode<3>(out[0].grid, [&](std::size_t i, const std::array<int, 3>&, const std::array<int, 3>& dk) {
        const std::complex<double> ik1(0.0, TWO_PI * dk[0]);
        const std::complex<double> ik2(0.0, TWO_PI * dk[1]);
        const std::complex<double> ik3(0.0, TWO_PI * dk[2]);
        out[0].c[i] = ik2 * v[2].c[i] - ik3 * v[1].c[i];
        out[1].c[i] = ik3 * v[0].c[i] - ik1 * v[2].c[i];
        out[2].c[i] = ik1 * v[1].c[i] - ik2 * v[0].c[i];
    });
    return out;
}

template <int D>
VecCoeffs<D> leray_coeffs(VecCoeffs<D> v) {
    for_each_mode<D>(v[0].grid, [&](std::size_t i, const std::array<int, D>&, const std::array<int, D>& dk) {
        double k2 = 0.0;
        for (int a = 0; a < D; ++a) k2 += static_cast<double>(dk[a]) * dk[a];
        if (k2 == 0.0) return;  // mean and pure-Nyquist modes untouched
        std::complex<double> kdotv = 0.0;
        for (int a = 0; a < D; ++a) kdotv += static_cast<double>(dk[a]) * v[a].c[i];
        kdotv /= k2;
        for (int a = 0; a < D; ++a) v[a].c[i] -= static_cast<double>(dk[a]) * kdotv;
    });
    return v;
}

SpectralCoeffs2 solve_neg_laplacian(const SpectralCoeffs2& f) {
    SpectralCoeffs2 out(f.grid);
    for_each_mode<2>(f.grid, [&](std::size_t i, const std::array<int, 2>&, const std::array<int, 2>& dk) {
        const double k2 = TWO_PI * TWO_PI * (static_cast<double>(dk[0]) * dk[0] + static_cast<double>(dk[1]) * dk[1]);
        out.c[i] = k2 == 0.0 ? 0.0 : f.c[i] / k2;
    });
    return out;
}

template <int D>
VecCoeffs<D> to_coeffs(const VecField<D>& v) {
    VecCoeffs<D> out;
    for (int a = 0; a < D; ++a) out[a] = spectral_transform(v[a]);
    return out;
}

template <int D>
VecField<D> to_field(const VecCoeffs<D>& c) {
    VecField<D> out(c[0].grid);
    for (int a = 0; a < D; ++a) out[a] = inverse_transform(c[a]);
    return out;
}

// ---- field-level wrappers ----

template <int D>
VecField<D> grad(const ScalarField<D>& f) {
    f.require_finite("grad");
    return to_field<D>(grad_coeffs<D>(spectral_transform(f)));
}

template <int D>
ScalarField<D> div(const VecField<D>& v) {
    v.require_finite("div");
    return inverse_transform(div_coeffs<D>(to_coeffs<D>(v)));
}

template <int D>
ScalarField<D> laplacian(const ScalarField<D>& f) {
    f.require_finite("laplacian");
    return inverse_transform(laplacian_coeffs<D>(spectral_transform(f)));
}

ScalarField2 curl2d(const VecField2& v) {
    v.require_finite("curl2d");
    return inverse_transform(curl2d_coeffs(to_coeffs<2>(v)));
}

VecField2 grad_perp(const ScalarField2& a) {
    a.require_finite("grad_perp");
    return to_field<2>(grad_perp_coeffs(spectral_transform(a)));
}

VecField3 curl3d(const VecField3& v) {
    v.require_finite("curl3d");
    return to_field<3>(curl3d_coeffs(to_coeffs<3>(v)));
}

template <int D>
VecField<D> leray_project(const VecField<D>& v) {
    v.require_finite("leray_project");
    return to_field<D>(leray_coeffs<D>(to_coeffs<D>(v)));
}

template <int D>
ScalarField<D> dealias_field(const ScalarField<D>& f) {
    return inverse_transform(dealias<D>(spectral_transform(f)));
}

template <int D>
VecField<D> dealias_field(const VecField<D>& v) {
    return to_field<D>(dealias<D>(to_coeffs<D>(v)));
}

ScalarField2 stream_function(const VecField2& v) {
    return inverse_transform(solve_neg_laplacian(curl2d_coeffs(to_coeffs<2>(v))));
}

template <int D>
double max_spectral_divergence(const VecField<D>& v) {
    const SpectralCoeffs<D> d = div_coeffs<D>(to_coeffs<D>(v));
    double m = 0.0;
    for (const auto& z : d.c) m = std::max(m, std::abs(z));
    return m;
}

template <int D>
double grad_norm_sq(const ScalarField<D>& f) {
    const SpectralCoeffs<D> c = spectral_transform(f);
    double s = 0.0;
    for_each_mode<D>(c.grid, [&](std::size_t i, const std::array<int, D>& j, const std::array<int, D>& dk) {
        double k2 = 0.0;
        for (int a = 0; a < D; ++a) k2 += static_cast<double>(dk[a]) * dk[a];
        s += mode_multiplicity<D>(c.grid, j) * TWO_PI * TWO_PI * k2 * std::norm(c.c[i]);
    });
    return s;
}

template <int D>
double grad_norm_sq(const VecField<D>& v) {
    double s = 0.0;
    for (int a = 0; a < D; ++a) s += grad_norm_sq<D>(v[a]);
    return s;
}

// explicit instantiations
template SpectralCoeffs2 dealias<2>(SpectralCoeffs2);
template SpectralCoeffs3 dealias<3>(SpectralCoeffs3);
template VecCoeffs2 dealias<2>(VecCoeffs2);
template VecCoeffs3 dealias<3>(VecCoeffs3);
template VecCoeffs2 grad_coeffs<2>(const SpectralCoeffs2&);
template VecCoeffs3 grad_coeffs<3>(const SpectralCoeffs3&);
template SpectralCoeffs2 div_coeffs<2>(const VecCoeffs2&);
template SpectralCoeffs3 div_coeffs<3>(const VecCoeffs3&);
template SpectralCoeffs2 laplacian_coeffs<2>(const SpectralCoeffs2&);
template SpectralCoeffs3 laplacian_coeffs<3>(const SpectralCoeffs3&);
template VecCoeffs2 leray_coeffs<2>(VecCoeffs2);
template VecCoeffs3 leray_coeffs<3>(VecCoeffs3);
template VecCoeffs2 to_coeffs<2>(const VecField2&);
template VecCoeffs3 to_coeffs<3>(const VecField3&);
template VecField2 to_field<2>(const VecCoeffs2&);
template VecField3 to_field<3>(const VecCoeffs3&);
template VecField2 grad<2>(const ScalarField2&);
template VecField3 grad<3>(const ScalarField3&);
template ScalarField2 div<2>(const VecField2&);
template ScalarField3 div<3>(const VecField3&);
template ScalarField2 laplacian<2>(const ScalarField2&);
template ScalarField3 laplacian<3>(const ScalarField3&);
template VecField2 leray_project<2>(const VecField2&);
template VecField3 leray_project<3>(const VecField3&);
template ScalarField2 dealias_field<2>(const ScalarField2&);
template ScalarField3 dealias_field<3>(const ScalarField3&);
template VecField2 dealias_field<2>(const VecField2&);
template VecField3 dealias_field<3>(const VecField3&);
template double max_spectral_divergence<2>(const VecField2&);
template double max_spectral_divergence<3>(const VecField3&);
template double grad_norm_sq<2>(const ScalarField2&);
template double grad_norm_sq<3>(const ScalarField3&);
template double grad_norm_sq<2>(const VecField2&);
template double grad_norm_sq<3>(const VecField3&);

} // namespace relax
