#include "relaxlab/born_infeld.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace relax {

namespace {

Vec3 cross(const Vec3& a, const Vec3& b) {
    return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

constexpr double INF = std::numeric_limits<double>::infinity();

Vec3 node(const VecField3& f, std::size_t i) { return {f[0][i], f[1][i], f[2][i]}; }

// 4th-order uniform-grid time derivative (shared stencil shape with the
// scalar module, duplicated here to keep the module self-contained).
std::vector<double> ddt_series(const std::vector<double>& t, const std::vector<double>& f) {
    const std::size_t M = f.size();
    if (M < 2) throw IncompleteTrajectory("bi residual: time series too short");
    const double h = t[1] - t[0];
    for (std::size_t i = 1; i < M; ++i)
        if (std::abs((t[i] - t[i - 1]) - h) > 1e-9 * std::max(1.0, h))
            throw IncompleteTrajectory("bi residual: nonuniform time series");
    std::vector<double> d(M, 0.0);
    if (M < 5) {
        for (std::size_t i = 0; i < M; ++i) {
            if (i == 0)
                d[i] = (f[1] - f[0]) / h;
            else if (i == M - 1)
                d[i] = (f[M - 1] - f[M - 2]) / h;
            else
                d[i] = (f[i + 1] - f[i - 1]) / (2.0 * h);
        }
        return d;
    }
    for (std::size_t i = 0; i < M; ++i) {
        if (i == 0)
            d[i] = (-25.0 * f[0] + 48.0 * f[1] - 36.0 * f[2] + 16.0 * f[3] - 3.0 * f[4]) /
                   (12.0 * h);
        else if (i == 1)
            d[i] = (-3.0 * f[0] - 10.0 * f[1] + 18.0 * f[2] - 6.0 * f[3] + f[4]) / (12.0 * h);
        else if (i == M - 2)
            d[i] = (3.0 * f[M - 1] + 10.0 * f[M - 2] - 18.0 * f[M - 3] + 6.0 * f[M - 4] -
                    f[M - 5]) /
                   (12.0 * h);
        else if (i == M - 1)
            d[i] = (25.0 * f[M - 1] - 48.0 * f[M - 2] + 36.0 * f[M - 3] - 16.0 * f[M - 4] +
                    3.0 * f[M - 5]) /
                   (12.0 * h);
        else
            d[i] = (-f[i + 2] + 8.0 * f[i + 1] - 8.0 * f[i - 1] + f[i - 2]) / (12.0 * h);
    }
    return d;
}

} // namespace

void BiParams::validate() const {
    std::vector<std::string> bad;
    if (!(lambda >= 0.0) || !std::isfinite(lambda)) bad.push_back("lambda must be finite and >= 0");
    if (theta != "quadratic" && theta != "abs") bad.push_back("theta must be quadratic|abs");
    if (theta == "abs" && !(delta > 0.0)) bad.push_back("theta=abs requires delta > 0");
    if (n < 8 || n % 2 != 0) bad.push_back("n must be even and >= 8");
    if (dt < 0.0) bad.push_back("dt must be >= 0 (0 selects the CFL default)");
    if (!(t_final > 0.0)) bad.push_back("t_final must be > 0");
    if (snap_every < 1) bad.push_back("snap_every must be >= 1");
    if (!bad.empty()) {
        std::string msg = "invalid Born-Infeld parameters:";
        for (const auto& b : bad) msg += "\n  - " + b;
        throw ConfigError(msg);
    }
}

VecField3 bi_theta_prime(const VecField3& B, const BiParams& p) {
    VecField3 out(B.grid);
    if (p.theta == "quadratic") {
        out = B;
        return out;
    }
    const double d2 = p.delta * p.delta;
    for (std::size_t i = 0; i < B[0].size(); ++i) {
        const Vec3 b = node(B, i);
        const double s = 1.0 / std::sqrt(d2 + norm_sq3(b));
        out[0][i] = b[0] * s;
        out[1][i] = b[1] * s;
        out[2][i] = b[2] * s;
    }
    return out;
}

double bi_theta_integral(const VecField3& B, const BiParams& p) {
    const double vol = B.grid.cell_volume();
    if (p.theta == "quadratic")
        return 0.5 * vol * pairwise_sum(B[0].size(), [&](std::size_t i) {
            return norm_sq3(node(B, i));
        });
    const double d2 = p.delta * p.delta;
    return vol * pairwise_sum(B[0].size(), [&](std::size_t i) {
        return std::sqrt(d2 + norm_sq3(node(B, i)));
    });
}

double bi_lagrangian(const Vec3& E, const Vec3& B, double lambda) {
    if (lambda > 0.0) {
        const double eb = dot3(E, B);
        const double rad = lambda * lambda + norm_sq3(B) - norm_sq3(E) - eb * eb / (lambda * lambda);
        if (rad < 0.0) return INF;
        return -std::sqrt(rad);
    }
    // lambda = 0 branch: domain E.B = 0 and |E| <= |B|
    const double scale = std::max(1.0, std::sqrt(norm_sq3(E) * norm_sq3(B)));
    if (std::abs(dot3(E, B)) > 1e-12 * scale) return INF;
    const double rad = norm_sq3(B) - norm_sq3(E);
    if (rad < 0.0) return INF;
    return -std::sqrt(rad);
}

double bi_hamiltonian_form2(const Vec3& D, const Vec3& B, double lambda) {
    const double db = dot3(D, B);
    return std::sqrt((lambda * lambda + norm_sq3(B)) * (1.0 + norm_sq3(D)) - db * db);
}

double bi_hamiltonian(const Vec3& D, const Vec3& B, double lambda) {
    const Vec3 dxb = cross(D, B);
    const double h1 = std::sqrt(lambda * lambda + norm_sq3(B) + lambda * lambda * norm_sq3(D) +
                                norm_sq3(dxb));
    const double h2 = bi_hamiltonian_form2(D, B, lambda);
    if (std::abs(h1 - h2) > 1e-12 * std::max(1.0, h1)) {
        char buf[128];
        std::snprintf(buf, sizeof(buf), "bi_hamiltonian: the two forms disagree (%.17g vs %.17g)",
                      h1, h2);
        throw NumericFailure(buf);
    }
    return h1;
}

Vec3 bi_hamiltonian_grad(const Vec3& D, const Vec3& B, double lambda) {
    const double h = bi_hamiltonian(D, B, lambda);
    const double b2 = norm_sq3(B);
    const double db = dot3(D, B);
    Vec3 g;
    for (int a = 0; a < 3; ++a) g[a] = (lambda * lambda * D[a] + D[a] * b2 - db * B[a]) / h;
    return g;
}

Vec3 bi_velocity_zero_lambda(const Vec3& D, const Vec3& B) {
    const Vec3 dxb = cross(D, B);
    const double denom2 = norm_sq3(B) + norm_sq3(dxb);
    if (denom2 == 0.0) return {0.0, 0.0, 0.0};  // B = 0 convention
    const double inv = 1.0 / std::sqrt(denom2);
    return {dxb[0] * inv, dxb[1] * inv, dxb[2] * inv};
}

VecField3 bi_velocity_zero_lambda(const VecField3& D, const VecField3& B) {
    VecField3 out(B.grid);
    for (std::size_t i = 0; i < B[0].size(); ++i) {
        const Vec3 v = bi_velocity_zero_lambda(node(D, i), node(B, i));
        out[0][i] = v[0];
        out[1][i] = v[1];
        out[2][i] = v[2];
    }
    return out;
}

LagrangianSpec bi_lagrangian_spec(double lambda) {
    LagrangianSpec spec;
    spec.dim = 3;
    spec.L = [lambda](const Vec3& E, const Vec3& B) { return bi_lagrangian(E, B, lambda); };
    spec.conjugate = [lambda](const Vec3& D, const Vec3& B) {
        return bi_hamiltonian(D, B, lambda);
    };
    return spec;
}

BiState make_bi_state(VecField3 B, const BiParams& p, double time) {
    B.require_finite("make_bi_state");
    BiState s;
    s.time = time;
    s.B = std::move(B);
    s.D = curl3d(bi_theta_prime(s.B, p));
    s.v = bi_velocity_zero_lambda(s.D, s.B);
    s.E = VecField3(s.B.grid);
    for (std::size_t i = 0; i < s.B[0].size(); ++i) {
        const Vec3 e = cross(node(s.B, i), node(s.v, i));
        s.E[0][i] = e[0];
        s.E[1][i] = e[1];
        s.E[2][i] = e[2];
    }
    return s;
}

namespace {

// dB/dt = -curl(B x v), dealiased; |v| < 1 bounds the propagation speed.
VecField3 bi_rhs(const VecField3& B, const BiParams& p) {
    const VecField3 D = curl3d(bi_theta_prime(B, p));
    VecField3 E(B.grid);
    for (std::size_t i = 0; i < B[0].size(); ++i) {
        const Vec3 v = bi_velocity_zero_lambda(node(D, i), node(B, i));
        const Vec3 e = cross(node(B, i), v);
        E[0][i] = e[0];
        E[1][i] = e[1];
        E[2][i] = e[2];
    }
    VecCoeffs3 rhs = dealias<3>(curl3d_coeffs(to_coeffs<3>(E)));
    for (auto& comp : rhs) comp *= -1.0;
    return to_field<3>(rhs);
}

} // namespace

BiState bi_step(const BiState& s, const BiParams& p) {
    p.validate();
    s.B.require_finite("bi_step");
    const double h = 1.0 / std::max({p.n, s.B.grid.n[0], s.B.grid.n[1], s.B.grid.n[2]});
    const double dt = p.dt > 0.0 ? p.dt : 0.25 * h;
    if (dt > 0.5 * h) {
        char buf[128];
        std::snprintf(buf, sizeof(buf), "bi_step: dt=%.3e exceeds 0.5*h=%.3e (|v|<1)", dt,
                      0.5 * h);
        throw CflViolation(buf);
    }
    // midpoint RK2 in curl form
    const VecField3 k1 = bi_rhs(s.B, p);
    VecField3 Bhalf = s.B;
    for (int c = 0; c < 3; ++c)
        for (std::size_t i = 0; i < Bhalf[0].size(); ++i)
            Bhalf[c][i] += 0.5 * dt * k1[c][i];
    const VecField3 k2 = bi_rhs(Bhalf, p);
    VecField3 Bnext = s.B;
    for (int c = 0; c < 3; ++c)
        for (std::size_t i = 0; i < Bnext[0].size(); ++i) Bnext[c][i] += dt * k2[c][i];
    BiState out = make_bi_state(std::move(Bnext), p, s.time + dt);
    out.B.require_finite("bi_step");
    return out;
}

std::vector<double> maxwell_limit_check(const Vec3& E, const Vec3& B,
                                        const std::vector<double>& lambdas) {
    std::vector<double> out;
    out.reserve(lambdas.size());
    for (double lambda : lambdas) {
        if (!(lambda > 0.0)) throw DomainViolation("maxwell_limit_check: lambda must be > 0");
        const double eb = dot3(E, B);
        // c = |B|^2 - |E|^2 - (E.B)^2/lambda^2; g = lambda(lambda - sqrt(lambda^2+c))
        // evaluated cancellation-free as -lambda c / (lambda + sqrt(lambda^2+c)).
        const double c = norm_sq3(B) - norm_sq3(E) - eb * eb / (lambda * lambda);
        if (lambda * lambda + c < 0.0)
            throw DomainViolation("maxwell_limit_check: (E,B) outside the domain");
        out.push_back(-lambda * c / (lambda + std::sqrt(lambda * lambda + c)));
    }
    return out;
}

VecField3 theta_abs_velocity(const VecField3& B, double delta) {
    if (!(delta > 0.0)) throw ConfigError("theta_abs_velocity: delta must be > 0");
    B.require_finite("theta_abs_velocity");
    BiParams p;
    p.theta = "abs";
    p.delta = delta;
    const VecField3 D = curl3d(bi_theta_prime(B, p));

    // H0 = sqrt(|B|^2 + |DxB|^2) pointwise, then spectral divergence of
    // B (x) B / H0 row by row.
    ScalarField3 h0(B.grid);
    for (std::size_t i = 0; i < B[0].size(); ++i) {
        const Vec3 b = node(B, i);
        const Vec3 dxb = cross(node(D, i), b);
        h0.v[i] = std::sqrt(norm_sq3(b) + norm_sq3(dxb));
        if (h0.v[i] == 0.0) h0.v[i] = delta;  // only at B = 0 nodes
    }
    VecField3 out(B.grid);
    for (int row = 0; row < 3; ++row) {
        VecCoeffs3 rowc;
        for (int col = 0; col < 3; ++col) {
            ScalarField3 m(B.grid);
            for (std::size_t i = 0; i < m.size(); ++i)
                m.v[i] = B[row][i] * B[col][i] / h0.v[i];
            rowc[col] = spectral_transform(m);
        }
        out[row] = inverse_transform(dealias<3>(div_coeffs<3>(rowc)));
    }
    return out;
}

std::vector<double> bi_dissipation_residual(int k, int d, const std::vector<BiSample>& traj,
                                            const BiParams& p) {
    if (!(k == 2 && d == 3))
        throw UnsupportedDegree("bi_dissipation_residual: only the k=2, d=3 case is supported");
    if (traj.size() < 2) throw IncompleteTrajectory("bi_dissipation_residual: too few samples");

    std::vector<double> times, theta_int;
    for (const auto& s : traj) {
        times.push_back(s.time);
        theta_int.push_back(bi_theta_integral(s.B, p));
    }
    const std::vector<double> dtheta = ddt_series(times, theta_int);

    std::vector<double> out(traj.size(), 0.0);
    for (std::size_t m = 0; m < traj.size(); ++m) {
        const VecField3& B = traj[m].B;
        const VecField3 D = curl3d(bi_theta_prime(B, p));
        const double vol = B.grid.cell_volume();
        const double lh = vol * pairwise_sum(B[0].size(), [&](std::size_t i) {
            const Vec3 b = node(B, i);
            const Vec3 dd = node(D, i);
            Vec3 e;
            if (p.lambda > 0.0) {
                e = bi_hamiltonian_grad(dd, b, p.lambda);
            } else {
                const Vec3 v = bi_velocity_zero_lambda(dd, b);
                e = cross(b, v);
            }
            const double lag = bi_lagrangian(e, b, p.lambda);
            const double ham = p.lambda > 0.0 ? bi_hamiltonian(dd, b, p.lambda)
                                              : std::sqrt(norm_sq3(b) * (1.0 + norm_sq3(dd)) -
                                                          dot3(dd, b) * dot3(dd, b));
            return lag + ham;
        });
        out[m] = dtheta[m] + lh;
    }
    return out;
}

} // namespace relax
