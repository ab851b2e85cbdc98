#include "relaxlab/functionals.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace relax {

namespace {

// B (x) B as the three independent entries of the symmetric matrix.
struct OuterB {
    ScalarField2 m11, m12, m22;
};

OuterB outer_bb(const VecField2& B) {
    OuterB m{ScalarField2(B.grid), ScalarField2(B.grid), ScalarField2(B.grid)};
    for (std::size_t i = 0; i < B[0].size(); ++i) {
        m.m11.v[i] = B[0][i] * B[0][i];
        m.m12.v[i] = B[0][i] * B[1][i];
        m.m22.v[i] = B[1][i] * B[1][i];
    }
    return m;
}

VecField2 div_of_outer(const OuterB& m) {
    const VecCoeffs2 row1{spectral_transform(m.m11), spectral_transform(m.m12)};
    const VecCoeffs2 row2{spectral_transform(m.m12), spectral_transform(m.m22)};
    VecCoeffs2 d{div_coeffs<2>(row1), div_coeffs<2>(row2)};
    return to_field<2>(dealias<2>(std::move(d)));
}

} // namespace

double magnetic_energy(const VecField2& B) {
    B.require_finite("magnetic_energy");
    return l2_norm_sq(B);
}

VecField2 lorentz_force(const VecField2& B) {
    B.require_finite("lorentz_force");
    VecField2 f = leray_project(div_of_outer(outer_bb(B)));
    f.require_finite("lorentz_force");
    return f;
}

double euler_residual(const VecField2& B) {
    return l2_norm_sq(lorentz_force(B));
}

SymGrad2 sym_grad(const VecField2& z) {
    const VecCoeffs2 zc = to_coeffs<2>(z);
    const VecCoeffs2 g1 = grad_coeffs<2>(zc[0]);
    const VecCoeffs2 g2 = grad_coeffs<2>(zc[1]);
    SymGrad2 s;
    ScalarField2 d1z1 = inverse_transform(g1[0]);
    ScalarField2 d2z1 = inverse_transform(g1[1]);
    ScalarField2 d1z2 = inverse_transform(g2[0]);
    ScalarField2 d2z2 = inverse_transform(g2[1]);
    s.s11 = ScalarField2(z.grid);
    s.s12 = ScalarField2(z.grid);
    s.s22 = ScalarField2(z.grid);
    for (std::size_t i = 0; i < z[0].size(); ++i) {
        s.s11.v[i] = 2.0 * d1z1.v[i];
        s.s12.v[i] = d2z1.v[i] + d1z2.v[i];
        s.s22.v[i] = 2.0 * d2z2.v[i];
    }
    return s;
}

double min_sym_grad_eigenvalue(const VecField2& z) {
    const SymGrad2 s = sym_grad(z);
    double m = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < s.s11.size(); ++i) {
        const double mean = 0.5 * (s.s11.v[i] + s.s22.v[i]);
        const double half_diff = 0.5 * (s.s11.v[i] - s.s22.v[i]);
        const double disc = std::sqrt(half_diff * half_diff + s.s12.v[i] * s.s12.v[i]);
        m = std::min(m, mean - disc);
    }
    return m;
}

DualWitness make_witness(double r, VecField2 z) {
    if (r < 0.0) throw InfeasibleWitness("witness parameter r must be nonnegative");
    DualWitness w;
    w.r = r;
    w.feasibility_margin = min_sym_grad_eigenvalue(z) + r;
    w.z = std::move(z);
    return w;
}

double kr_value_for_witness(const VecField2& B, const DualWitness& w) {
    B.require_finite("kr_value_for_witness");
    if (!w.feasible()) {
        char buf[96];
        std::snprintf(buf, sizeof(buf), "witness infeasible: margin %.3e < -1e-10",
                      w.feasibility_margin);
        throw InfeasibleWitness(buf);
    }
    // Dealiased B(x)B paired with the band-limited S(z); the pairing is a
    // quadrature-exact integral for band-limited inputs.
    const OuterB m = outer_bb(B);
    ScalarField2 m11 = dealias_field(m.m11);
    ScalarField2 m12 = dealias_field(m.m12);
    ScalarField2 m22 = dealias_field(m.m22);
    const SymGrad2 s = sym_grad(w.z);
    const double vol = B.grid.cell_volume();
    const double quad = vol * pairwise_sum(m11.size(), [&](std::size_t i) {
        return m11.v[i] * (s.s11.v[i] + w.r) + 2.0 * m12.v[i] * s.s12.v[i] +
               m22.v[i] * (s.s22.v[i] + w.r);
    });
    const double val = quad - l2_norm_sq(w.z);
    if (!std::isfinite(val)) throw NumericFailure("kr_value_for_witness: non-finite value");
    return val;
}

std::string KrEstimate::to_json() const {
    char buf[256];
    std::snprintf(buf, sizeof(buf),
                  "{\"r\": %.17g, \"value\": %.17g, \"iterations\": %d, "
                  "\"feasibility_margin\": %.17g}",
                  r, value, iterations, witness.feasibility_margin);
    return buf;
}

KrEstimate kr_maximize(const VecField2& B, double r, int budget, const KrOptions& opt) {
    B.require_finite("kr_maximize");
    if (r < 0.0) throw InfeasibleWitness("kr_maximize: r must be nonnegative");

    // The ascent direction lives in the divergence-free band-limited
    // subspace: z = grad_perp(psi) for a stream function psi, realized here
    // by projecting and dealiasing the L2 gradient (the inverse-Laplacian
    // preconditioner in psi coordinates).
    const VecField2 neg_grad_term = lorentz_force(B);  // P div(B(x)B), band-limited

    VecField2 z(B.grid);  // start at z = 0, always feasible
    KrEstimate best;
    best.r = r;
    best.witness = make_witness(r, z);
    best.value = kr_value_for_witness(B, best.witness);
    best.iterations = 0;

    auto feasibility_scale = [&](const VecField2& cand) -> double {
        const double lam = min_sym_grad_eigenvalue(cand);
        if (lam >= -r) return 1.0;
        if (r == 0.0) return 0.0;
        return r / (-lam);
    };

    const double t0 = 0.1 / (1.0 + r);
    double step = t0;
    VecField2 z_best = z;
    int used = 0;
    while (used < budget) {
        // L2 gradient of the objective: -2 (div(B(x)B) + z), kept in the
        // feasible parametrization by projection + dealiasing.
        VecField2 dir = neg_grad_term;
        dir *= -2.0;
        VecField2 zterm = z_best;
        zterm *= -2.0;
        dir += zterm;
        dir = dealias_field(leray_project(dir));

        bool improved = false;
        for (int bt = 0; bt < opt.max_backtracks && used < budget; ++bt) {
            VecField2 cand = dir;
            cand *= step;
            cand += z_best;
            const double tau = feasibility_scale(cand);
            if (tau != 1.0) cand *= tau;
            DualWitness w = make_witness(r, std::move(cand));
            // scaling is exact up to rounding; clamp tiny negatives
            if (w.feasibility_margin < 0.0 && w.feasibility_margin > -1e-12)
                w.feasibility_margin = 0.0;
            const double val = kr_value_for_witness(B, w);
            ++used;
            if (val > best.value) {
                const double rel = (val - best.value) / std::max(1.0, std::abs(best.value));
                best.value = val;
                best.witness = std::move(w);
                z_best = best.witness.z;
                improved = true;
                step = t0;
                if (rel < opt.improve_tol) {
                    best.iterations = used;
                    return best;
                }
                break;
            }
            step *= 0.5;
        }
        if (!improved) break;  // stagnated at this step-size floor
    }
    best.iterations = used;
    return best;
}

double recover_L(const VecField2& B, const std::vector<double>& r_grid, int budget,
                 const KrOptions& opt) {
    if (r_grid.empty()) throw ConfigError("recover_L: empty r grid");
    const double energy = magnetic_energy(B);
    double sup = -std::numeric_limits<double>::infinity();
    for (double r : r_grid) {
        if (r < 0.0) throw ConfigError("recover_L: negative r in grid");
        const KrEstimate est = kr_maximize(B, r, budget, opt);
        sup = std::max(sup, est.value - r * energy);
    }
    return sup;
}

} // namespace relax
