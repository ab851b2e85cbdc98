#include "relaxlab/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>

namespace relax {

namespace {

// The FFTW planner is not thread-safe; plan creation is serialized. Each
// thread keeps its own plans and aligned scratch buffers, so executing
// transforms never needs a lock.
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

struct PlanSet {
    fftw_plan fwd = nullptr;
    fftw_plan bwd = nullptr;
    double* real = nullptr;
    fftw_complex* cplx = nullptr;
    std::size_t nreal = 0, ncplx = 0;

    ~PlanSet() {
        std::lock_guard<std::mutex> lock(planner_mutex());
        if (fwd) fftw_destroy_plan(fwd);
        if (bwd) fftw_destroy_plan(bwd);
        if (real) fftw_free(real);
        if (cplx) fftw_free(cplx);
    }
};

template <int D>
PlanSet& plans_for(const Grid<D>& g) {
    thread_local std::map<std::array<int, D>, PlanSet> cache;
    auto it = cache.find(g.n);
    if (it != cache.end()) return it->second;

    PlanSet& p = cache[g.n];
    p.nreal = g.size();
    p.ncplx = g.spectral_size();
    p.real = fftw_alloc_real(p.nreal);
    p.cplx = fftw_alloc_complex(p.ncplx);
    int dims[D];
    for (int a = 0; a < D; ++a) dims[a] = g.n[a];
    {
        std::lock_guard<std::mutex> lock(planner_mutex());
        p.fwd = fftw_plan_dft_r2c(D, dims, p.real, p.cplx, FFTW_ESTIMATE);
        p.bwd = fftw_plan_dft_c2r(D, dims, p.cplx, p.real, FFTW_ESTIMATE);
    }
    if (!p.fwd || !p.bwd) throw NumericFailure("fftw plan creation failed");
    return p;
}

template <int D>
SpectralCoeffs<D> forward_impl(const ScalarField<D>& f) {
    f.require_finite("spectral_transform");
    PlanSet& p = plans_for(f.grid);
    for (std::size_t i = 0; i < p.nreal; ++i) p.real[i] = f.v[i];
    fftw_execute(p.fwd);
    SpectralCoeffs<D> out(f.grid);
    const double norm = 1.0 / static_cast<double>(f.grid.size());
    for (std::size_t i = 0; i < p.ncplx; ++i)
        out.c[i] = std::complex<double>(p.cplx[i][0], p.cplx[i][1]) * norm;
    return out;
}

template <int D>
ScalarField<D> inverse_impl(const SpectralCoeffs<D>& c) {
    PlanSet& p = plans_for(c.grid);
    for (std::size_t i = 0; i < p.ncplx; ++i) {
        p.cplx[i][0] = c.c[i].real();
        p.cplx[i][1] = c.c[i].imag();
    }
    fftw_execute(p.bwd);
    ScalarField<D> out(c.grid);
    for (std::size_t i = 0; i < p.nreal; ++i) out.v[i] = p.real[i];
    out.require_finite("inverse_transform");
    return out;
}

// Multiplicity of a half-spectrum entry in the full spectrum: columns with
// 0 < k_last < n/2 stand in for their conjugates as well.
template <int D>
double parseval_impl(const SpectralCoeffs<D>& c) {
    const int nlast = c.grid.n[D - 1];
    const std::size_t ncols = static_cast<std::size_t>(nlast / 2 + 1);
    return pairwise_sum(c.size(), [&](std::size_t i) {
        const std::size_t jlast = i % ncols;
        const double mult = (jlast == 0 || 2 * static_cast<int>(jlast) == nlast) ? 1.0 : 2.0;
        return mult * std::norm(c.c[i]);
    });
}

} // namespace

SpectralCoeffs2 spectral_transform(const ScalarField2& f) { return forward_impl<2>(f); }
SpectralCoeffs3 spectral_transform(const ScalarField3& f) { return forward_impl<3>(f); }
ScalarField2 inverse_transform(const SpectralCoeffs2& c) { return inverse_impl<2>(c); }
ScalarField3 inverse_transform(const SpectralCoeffs3& c) { return inverse_impl<3>(c); }
double spectral_norm_sq(const SpectralCoeffs2& c) { return parseval_impl<2>(c); }
double spectral_norm_sq(const SpectralCoeffs3& c) { return parseval_impl<3>(c); }

} // namespace relax
