#include "relaxlab/mhd.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include <json.hpp>

namespace relax {

namespace {

constexpr double TWO_PI = 6.283185307179586476925286766559;

double sq(double x) { return x * x; }

// -div(B (x) v - v (x) B), dealiased. The matrix is antisymmetric, so the
// result is divergence-free in exact mode arithmetic.
VecField2 antisym_advection(const VecField2& B, const VecField2& v) {
    ScalarField2 m12(B.grid);
    for (std::size_t i = 0; i < m12.size(); ++i)
        m12.v[i] = B[0][i] * v[1][i] - v[0][i] * B[1][i];
    const SpectralCoeffs2 m12c = spectral_transform(m12);
    SpectralCoeffs2 m21c = m12c;
    m21c *= -1.0;
    VecCoeffs2 g;
    // row i of div: d_j M_ij with M_11 = M_22 = 0
    {
        VecCoeffs2 row1{SpectralCoeffs2(B.grid), m12c};
        VecCoeffs2 row2{m21c, SpectralCoeffs2(B.grid)};
        g[0] = div_coeffs<2>(row1);
        g[1] = div_coeffs<2>(row2);
    }
    g = dealias<2>(std::move(g));
    for (auto& comp : g) comp *= -1.0;
    return to_field<2>(g);
}

// Trapezoidal (Crank-Nicolson) diagonal solve:
//   c (u+ - u)/dt + a_k (u+ + u)/2 = rhs,  a_k = base + diff |2 pi k|^2.
VecField2 cn_diagonal_solve(const VecField2& u, const VecField2& rhs, double c, double base,
                            double diff, double dt) {
    VecCoeffs2 uc = to_coeffs<2>(u);
    const VecCoeffs2 rc = to_coeffs<2>(rhs);
    visit_modes<2>(u.grid, [&](std::size_t i, const std::array<int, 2>&, const std::array<int, 2>& dk) {
        const double k2 = TWO_PI * TWO_PI * (sq(dk[0]) + sq(dk[1]));
        const double a = base + diff * k2;
        const double denom = c / dt + 0.5 * a;
        const double numer = c / dt - 0.5 * a;
        for (int comp = 0; comp < 2; ++comp)
            uc[comp].c[i] = (numer * uc[comp].c[i] + rc[comp].c[i]) / denom;
    });
    return to_field<2>(uc);
}

double transfer_integral(const VecField2& B, const VecField2& v) {
    // int (B (x) B) : grad v
    const VecCoeffs2 vc = to_coeffs<2>(v);
    const ScalarField2 d1v1 = inverse_transform(grad_coeffs<2>(vc[0])[0]);
    const ScalarField2 d2v1 = inverse_transform(grad_coeffs<2>(vc[0])[1]);
    const ScalarField2 d1v2 = inverse_transform(grad_coeffs<2>(vc[1])[0]);
    const ScalarField2 d2v2 = inverse_transform(grad_coeffs<2>(vc[1])[1]);
    return B.grid.cell_volume() * pairwise_sum(B[0].size(), [&](std::size_t i) {
        return B[0][i] * B[0][i] * d1v1.v[i] + B[0][i] * B[1][i] * (d2v1.v[i] + d1v2.v[i]) +
               B[1][i] * B[1][i] * d2v2.v[i];
    });
}

double rel_change(const VecField2& a, const VecField2& b) {
    double num = 0.0, den = 1.0;
    for (int c = 0; c < 2; ++c)
        for (std::size_t i = 0; i < a[0].size(); ++i) {
            num = std::max(num, std::abs(a[c][i] - b[c][i]));
            den = std::max(den, std::abs(b[c][i]));
        }
    return num / den;
}

void check_cfl(const VecField2& v, double dt) {
    const double h = 1.0 / std::max(v.grid.n[0], v.grid.n[1]);
    const double vmax = max_magnitude(v);
    if (vmax > 0.0 && dt > 0.5 * h / vmax) {
        char buf[128];
        std::snprintf(buf, sizeof(buf), "CFL violation: dt=%.3e exceeds 0.5*h/max|v|=%.3e", dt,
                      0.5 * h / vmax);
        throw CflViolation(buf);
    }
}

struct StepStats {
    double v2 = 0.0, mu_gradv2 = 0.0, nu_gradB2 = 0.0;
    double res_total = 0.0, res_mom = 0.0, res_ind = 0.0;
    int iterations = 0;
};

MhdState step_impl(const MhdState& s, const MreParams& p, StepStats* stats) {
    s.B.require_finite("mhd_step");
    s.v.require_finite("mhd_step");
    check_cfl(s.v, p.dt);

    const VecField2& Bn = s.B;
    const VecField2& vn = s.v;
    const bool inertial = p.epsilon > 0.0;

    VecField2 Bmid = Bn;
    VecField2 vmid = inertial ? vn : quasi_static_velocity(Bn, p.mu);
    VecField2 Bplus = Bn, vplus = vn;

    const int max_iter = 60;
    bool converged = false;
    int used = 0;
    for (int it = 0; it < max_iter; ++it) {
        const VecField2 F = lorentz_force(Bmid);
        VecField2 vmid_new;
        if (inertial) {
            // eps (v+ - v)/dt + (v+ + v)/2 - mu lap (v+ + v)/2 = P[F - eps div(v(x)v)]
            ScalarField2 n11(vmid.grid), n12(vmid.grid), n22(vmid.grid);
            for (std::size_t i = 0; i < n11.size(); ++i) {
                n11.v[i] = vmid[0][i] * vmid[0][i];
                n12.v[i] = vmid[0][i] * vmid[1][i];
                n22.v[i] = vmid[1][i] * vmid[1][i];
            }
            VecCoeffs2 nadv{
                div_coeffs<2>(VecCoeffs2{spectral_transform(n11), spectral_transform(n12)}),
                div_coeffs<2>(VecCoeffs2{spectral_transform(n12), spectral_transform(n22)})};
            nadv = leray_coeffs<2>(dealias<2>(std::move(nadv)));
            VecField2 rhs = F;
            const VecField2 nfield = to_field<2>(nadv);
            for (int c = 0; c < 2; ++c)
                for (std::size_t i = 0; i < rhs[0].size(); ++i)
                    rhs[c][i] -= p.epsilon * nfield[c][i];
            vplus = cn_diagonal_solve(vn, rhs, p.epsilon, 1.0, p.mu, p.dt);
            vmid_new = vplus;
            vmid_new += vn;
            vmid_new *= 0.5;
        } else {
            vmid_new = quasi_static_velocity(Bmid, p.mu);
        }

        const VecField2 G = antisym_advection(Bmid, vmid_new);
        Bplus = cn_diagonal_solve(Bn, G, 1.0, 0.0, p.nu, p.dt);
        VecField2 Bmid_new = Bplus;
        Bmid_new += Bn;
        Bmid_new *= 0.5;

        const double delta = std::max(rel_change(vmid_new, vmid), rel_change(Bmid_new, Bmid));
        vmid = std::move(vmid_new);
        Bmid = std::move(Bmid_new);
        used = it + 1;
        if (delta < 1e-13) {
            converged = true;
            break;
        }
    }
    if (!converged)
        throw NumericFailure("mhd_step: midpoint fixed point did not converge (dt too large?)");

    check_cfl(vmid, p.dt);

    MhdState out;
    out.time = s.time + p.dt;
    out.B = Bplus;
    out.v = inertial ? vplus : quasi_static_velocity(Bplus, p.mu);
    out.B.require_finite("mhd_step");
    out.v.require_finite("mhd_step");

    if (stats) {
        stats->iterations = used;
        stats->v2 = l2_norm_sq(vmid);
        stats->mu_gradv2 = p.mu * grad_norm_sq(vmid);
        stats->nu_gradB2 = p.nu * grad_norm_sq(Bmid);
        const double transfer = transfer_integral(Bmid, vmid);
        const double dv2 = l2_norm_sq(out.v) - l2_norm_sq(vn);
        const double dB2 = l2_norm_sq(out.B) - l2_norm_sq(Bn);
        stats->res_mom = 0.5 * p.epsilon * dv2 + p.dt * (stats->v2 + stats->mu_gradv2) +
                         p.dt * transfer;
        stats->res_ind = 0.5 * dB2 + p.dt * stats->nu_gradB2 - p.dt * transfer;
        stats->res_total = stats->res_mom + stats->res_ind;
    }
    return out;
}

std::pair<ScalarField2, VecField2> build_initial(const MreParams& p) {
    const Grid2 g = make_grid2(p.n);
    const double amp = p.amplitude;
    ScalarField2 A(g);
    if (p.initial == "shear") {
        A = sample_scalar<2>(g, [&](const std::array<double, 2>& x) {
            return -amp * std::cos(TWO_PI * x[1]) / TWO_PI;
        });
    } else if (p.initial == "eigen") {
        A = sample_scalar<2>(g, [&](const std::array<double, 2>& x) {
            return amp * (std::sin(TWO_PI * x[0]) + std::cos(TWO_PI * x[1])) / TWO_PI;
        });
    } else if (p.initial == "ot") {
        A = sample_scalar<2>(g, [&](const std::array<double, 2>& x) {
            return amp * (std::cos(TWO_PI * x[0]) / TWO_PI +
                          std::cos(2.0 * TWO_PI * x[1]) / (2.0 * TWO_PI));
        });
    } else if (p.initial == "random") {
        // band-limited stream function, modes |k| <= 4, seeded
        std::mt19937_64 rng(p.seed);
        std::uniform_real_distribution<double> unif(-1.0, 1.0);
        SpectralCoeffs2 psi(g);
        visit_modes<2>(g, [&](std::size_t i, const std::array<int, 2>& j, const std::array<int, 2>&) {
            const int k1 = g.wavenumber(0, j[0]);
            const int k2 = g.wavenumber(1, j[1]);
            if (k1 == 0 && k2 == 0) return;
            if (std::abs(k1) > 4 || std::abs(k2) > 4) return;
            const double k2sum = static_cast<double>(k1) * k1 + static_cast<double>(k2) * k2;
            psi.c[i] = std::complex<double>(unif(rng), unif(rng)) / (1.0 + k2sum);
        });
        A = inverse_transform(psi);
        VecField2 B0 = grad_perp(A);
        const double norm = l2_norm(B0);
        if (norm > 0.0) A *= amp / norm;
    } else {
        throw ConfigError("unknown initial condition '" + p.initial + "'");
    }
    A = dealias_field(A);
    VecField2 B = grad_perp(A);
    return {std::move(A), std::move(B)};
}

} // namespace

void MreParams::validate() const {
    std::vector<std::string> bad;
    if (!(epsilon >= 0.0) || !std::isfinite(epsilon)) bad.push_back("epsilon must be >= 0");
    if (!(mu >= 0.0) || !std::isfinite(mu)) bad.push_back("mu must be >= 0");
    if (!(nu >= 0.0) || !std::isfinite(nu)) bad.push_back("nu must be >= 0");
    if (!(dt > 0.0) || !std::isfinite(dt)) bad.push_back("dt must be > 0");
    if (!(t_final > 0.0) || !std::isfinite(t_final)) bad.push_back("t_final must be > 0");
    if (n < 8 || n % 2 != 0) bad.push_back("n must be even and >= 8");
    if (initial != "shear" && initial != "eigen" && initial != "ot" && initial != "random")
        bad.push_back("initial must be one of shear|eigen|ot|random");
    if (form != "primitive" && form != "potential")
        bad.push_back("form must be primitive|potential");
    if (form == "potential" && epsilon != 0.0)
        bad.push_back("potential form requires epsilon = 0");
    if (snap_every < 1) bad.push_back("snap_every must be >= 1");
    if (lb_every < 1) bad.push_back("lb_every must be >= 1");
    if (!bad.empty()) {
        std::string msg = "invalid MRE parameters:";
        for (const auto& b : bad) msg += "\n  - " + b;
        throw ConfigError(msg);
    }
}

VecField2 initial_field(const MreParams& p) { return build_initial(p).second; }
ScalarField2 initial_potential(const MreParams& p) { return build_initial(p).first; }

VecField2 quasi_static_velocity(const VecField2& B, double mu) {
    B.require_finite("quasi_static_velocity");
    // (1 + mu |2 pi k|^2) v = P div(B (x) B), mode-wise
    const VecField2 F = lorentz_force(B);
    VecCoeffs2 fc = to_coeffs<2>(F);
    visit_modes<2>(B.grid, [&](std::size_t i, const std::array<int, 2>&, const std::array<int, 2>& dk) {
        const double k2 = TWO_PI * TWO_PI * (sq(dk[0]) + sq(dk[1]));
        const double denom = 1.0 + mu * k2;
        fc[0].c[i] /= denom;
        fc[1].c[i] /= denom;
    });
    return to_field<2>(fc);
}

MhdState mhd_step(const MhdState& s, const MreParams& p) { return step_impl(s, p, nullptr); }

ScalarField2 potential_advect_step(const ScalarField2& A, const VecField2& v, double nu,
                                   double dt) {
    A.require_finite("potential_advect_step");
    v.require_finite("potential_advect_step");
    check_cfl(v, dt);

    auto rhs = [&](const ScalarField2& a) {
        const VecField2 ga = to_field<2>(grad_coeffs<2>(spectral_transform(a)));
        ScalarField2 adv(a.grid);
        for (std::size_t i = 0; i < adv.size(); ++i)
            adv.v[i] = -(v[0][i] * ga[0][i] + v[1][i] * ga[1][i]);
        return inverse_transform(dealias<2>(spectral_transform(adv)));
    };

    // classical RK4 on the advection, then the exact diffusion factor
    ScalarField2 k1 = rhs(A);
    ScalarField2 a2 = A;
    for (std::size_t i = 0; i < a2.size(); ++i) a2.v[i] += 0.5 * dt * k1.v[i];
    ScalarField2 k2 = rhs(a2);
    ScalarField2 a3 = A;
    for (std::size_t i = 0; i < a3.size(); ++i) a3.v[i] += 0.5 * dt * k2.v[i];
    ScalarField2 k3 = rhs(a3);
    ScalarField2 a4 = A;
    for (std::size_t i = 0; i < a4.size(); ++i) a4.v[i] += dt * k3.v[i];
    ScalarField2 k4 = rhs(a4);

    ScalarField2 out = A;
    for (std::size_t i = 0; i < out.size(); ++i)
        out.v[i] += dt / 6.0 * (k1.v[i] + 2.0 * k2.v[i] + 2.0 * k3.v[i] + k4.v[i]);

    if (nu > 0.0) {
        SpectralCoeffs2 oc = spectral_transform(out);
        visit_modes<2>(out.grid, [&](std::size_t i, const std::array<int, 2>&, const std::array<int, 2>& dk) {
            const double k2v = TWO_PI * TWO_PI * (sq(dk[0]) + sq(dk[1]));
            oc.c[i] *= std::exp(-nu * k2v * dt);
        });
        out = inverse_transform(oc);
    }
    out.require_finite("potential_advect_step");
    return out;
}

Trajectory run_mhd(const MreParams& p) {
    p.validate();
    Trajectory traj;
    traj.params = p;

    auto [A0, B0] = build_initial(p);
    MhdState s;
    s.time = 0.0;
    s.B = leray_project(B0);
    s.v = p.epsilon > 0.0 ? VecField2(s.B.grid) : quasi_static_velocity(s.B, p.mu);
    if (p.form == "potential") s.A = A0;

    const int nsteps = static_cast<int>(std::llround(p.t_final / p.dt));
    if (nsteps < 1 || std::abs(nsteps * p.dt - p.t_final) > 1e-9 * p.t_final)
        throw ConfigError("t_final must be an integer multiple of dt");

    auto instantaneous_row = [&](const MhdState& st, double lb) {
        LedgerRow r;
        r.time = st.time;
        r.B2 = l2_norm_sq(st.B);
        r.epsv2 = p.epsilon * l2_norm_sq(st.v);
        r.v2 = l2_norm_sq(st.v);
        r.mu_gradv2 = p.mu * grad_norm_sq(st.v);
        r.nu_gradB2 = p.nu * grad_norm_sq(st.B);
        r.LB = lb;
        return r;
    };

    double lb = euler_residual(s.B);
    traj.ledger.rows.push_back(instantaneous_row(s, lb));
    traj.snapshots.push_back({s.time, s.B, s.v, s.A});

    try {
        for (int step = 1; step <= nsteps; ++step) {
            if (p.form == "potential") {
                const VecField2 v = quasi_static_velocity(s.B, p.mu);
                ScalarField2 Anext = potential_advect_step(*s.A, v, p.nu, p.dt);
                MhdState next;
                next.time = step * p.dt;
                next.A = std::move(Anext);
                next.B = grad_perp(*next.A);
                next.v = quasi_static_velocity(next.B, p.mu);
                // trapezoid bookkeeping between consecutive instantaneous rows
                if (step % p.lb_every == 0 || step == nsteps) lb = euler_residual(next.B);
                LedgerRow row = instantaneous_row(next, lb);
                const LedgerRow& prev = traj.ledger.rows.back();
                const double tr_prev = transfer_integral(s.B, s.v);
                const double tr_next = transfer_integral(next.B, next.v);
                const double tr = 0.5 * (tr_prev + tr_next);
                const double d_v = 0.5 * (row.v2 + prev.v2);
                const double d_mu = 0.5 * (row.mu_gradv2 + prev.mu_gradv2);
                const double d_nu = 0.5 * (row.nu_gradB2 + prev.nu_gradB2);
                row.res_mom = 0.5 * p.epsilon * (row.v2 - prev.v2) + p.dt * (d_v + d_mu) + p.dt * tr;
                row.res_ind = 0.5 * (row.B2 - prev.B2) + p.dt * d_nu - p.dt * tr;
                row.res_total = row.res_mom + row.res_ind;
                traj.ledger.rows.push_back(row);
                s = std::move(next);
            } else {
                StepStats st;
                MhdState next = step_impl(s, p, &st);
                if (step % p.lb_every == 0 || step == nsteps) lb = euler_residual(next.B);
                LedgerRow row;
                row.time = next.time;
                row.B2 = l2_norm_sq(next.B);
                row.epsv2 = p.epsilon * l2_norm_sq(next.v);
                row.v2 = st.v2;
                row.mu_gradv2 = st.mu_gradv2;
                row.nu_gradB2 = st.nu_gradB2;
                row.LB = lb;
                row.res_total = st.res_total;
                row.res_mom = st.res_mom;
                row.res_ind = st.res_ind;
                traj.ledger.rows.push_back(row);
                s = std::move(next);
            }
            if (step % p.snap_every == 0 || step == nsteps)
                traj.snapshots.push_back({s.time, s.B, s.v, s.A});
        }
    } catch (const NumericFailure& e) {
        traj.failed = true;
        traj.error = e.what();
    }
    return traj;
}

EnergyBalance energy_balance_residual(const Trajectory& traj) {
    const auto& rows = traj.ledger.rows;
    if (rows.size() < 2) throw IncompleteTrajectory("ledger has fewer than two rows");
    EnergyBalance out;
    for (std::size_t m = 1; m < rows.size(); ++m) {
        const double dt = rows[m].time - rows[m - 1].time;
        if (!(dt > 0.0)) throw IncompleteTrajectory("ledger times not strictly increasing");
        const double dE = 0.5 * (rows[m].B2 + rows[m].epsv2 - rows[m - 1].B2 - rows[m - 1].epsv2);
        const double diss = rows[m].v2 + rows[m].mu_gradv2 + rows[m].nu_gradB2;
        out.res_total.push_back(dE + dt * diss);
        out.res_mom.push_back(rows[m].res_mom);
        out.res_ind.push_back(rows[m].res_ind);
    }
    return out;
}

// ---- ledger / trajectory persistence ----

void Ledger::write_csv(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw NumericFailure("cannot open ledger file " + path);
    out << "time,B2,epsv2,v2,mu_gradv2,nu_gradB2,LB,res_total,res_mom,res_ind\n";
    char buf[512];
    for (const auto& r : rows) {
        std::snprintf(buf, sizeof(buf),
                      "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", r.time,
                      r.B2, r.epsv2, r.v2, r.mu_gradv2, r.nu_gradB2, r.LB, r.res_total, r.res_mom,
                      r.res_ind);
        out << buf;
    }
}

Ledger Ledger::read_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IncompleteTrajectory("missing ledger file " + path);
    std::string line;
    if (!std::getline(in, line) ||
        line != "time,B2,epsv2,v2,mu_gradv2,nu_gradB2,LB,res_total,res_mom,res_ind")
        throw IncompleteTrajectory("unexpected ledger header in " + path);
    Ledger led;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        LedgerRow r;
        std::istringstream ss(line);
        char comma;
        ss >> r.time >> comma >> r.B2 >> comma >> r.epsv2 >> comma >> r.v2 >> comma >>
            r.mu_gradv2 >> comma >> r.nu_gradB2 >> comma >> r.LB >> comma >> r.res_total >>
            comma >> r.res_mom >> comma >> r.res_ind;
        if (ss.fail()) throw IncompleteTrajectory("malformed ledger row in " + path);
        if (!std::isfinite(r.B2) || !std::isfinite(r.v2))
            throw IncompleteTrajectory("non-finite ledger row in " + path);
        led.rows.push_back(r);
    }
    return led;
}

void Trajectory::save(const std::string& dir) const {
    namespace fs = std::filesystem;
    fs::create_directories(dir);
    ledger.write_csv((fs::path(dir) / "ledger.csv").string());

    nlohmann::json meta;
    meta["schema"] = "relaxlab-traj-v1";
    meta["params"] = {{"epsilon", params.epsilon}, {"mu", params.mu},   {"nu", params.nu},
                      {"dt", params.dt},           {"t_final", params.t_final},
                      {"n", params.n},             {"seed", params.seed},
                      {"initial", params.initial}, {"amplitude", params.amplitude},
                      {"form", params.form},       {"snap_every", params.snap_every},
                      {"lb_every", params.lb_every}};
    meta["failed"] = failed;
    meta["error"] = error;
    std::vector<double> times;
    for (const auto& sn : snapshots) times.push_back(sn.time);
    meta["snapshot_times"] = times;

    char name[64];
    for (std::size_t i = 0; i < snapshots.size(); ++i) {
        std::snprintf(name, sizeof(name), "snap_%06zu_B", i);
        write_snapshot(dir, to_snapshot(snapshots[i].B, name, snapshots[i].time));
        std::snprintf(name, sizeof(name), "snap_%06zu_v", i);
        write_snapshot(dir, to_snapshot(snapshots[i].v, name, snapshots[i].time));
        if (snapshots[i].A) {
            std::snprintf(name, sizeof(name), "snap_%06zu_A", i);
            write_snapshot(dir, to_snapshot(*snapshots[i].A, name, snapshots[i].time));
        }
    }
    std::ofstream ms((fs::path(dir) / "trajectory.json").string());
    ms << meta.dump(2) << "\n";
}

Trajectory Trajectory::load(const std::string& dir) {
    namespace fs = std::filesystem;
    std::ifstream ms((fs::path(dir) / "trajectory.json").string());
    if (!ms) throw IncompleteTrajectory("missing trajectory.json in " + dir);
    nlohmann::json meta;
    ms >> meta;
    if (meta.value("schema", "") != std::string("relaxlab-traj-v1"))
        throw IncompleteTrajectory("unexpected trajectory schema in " + dir);

    Trajectory traj;
    const auto& pj = meta.at("params");
    traj.params.epsilon = pj.at("epsilon").get<double>();
    traj.params.mu = pj.at("mu").get<double>();
    traj.params.nu = pj.at("nu").get<double>();
    traj.params.dt = pj.at("dt").get<double>();
    traj.params.t_final = pj.at("t_final").get<double>();
    traj.params.n = pj.at("n").get<int>();
    traj.params.seed = pj.at("seed").get<std::uint64_t>();
    traj.params.initial = pj.at("initial").get<std::string>();
    traj.params.amplitude = pj.at("amplitude").get<double>();
    traj.params.form = pj.at("form").get<std::string>();
    traj.params.snap_every = pj.at("snap_every").get<int>();
    traj.params.lb_every = pj.at("lb_every").get<int>();
    traj.failed = meta.value("failed", false);
    traj.error = meta.value("error", "");

    traj.ledger = Ledger::read_csv((fs::path(dir) / "ledger.csv").string());

    const auto times = meta.at("snapshot_times").get<std::vector<double>>();
    char name[64];
    for (std::size_t i = 0; i < times.size(); ++i) {
        TrajectorySnapshot sn;
        sn.time = times[i];
        std::snprintf(name, sizeof(name), "snap_%06zu_B", i);
        sn.B = vec2_from_snapshot(read_snapshot((fs::path(dir) / name).string()));
        std::snprintf(name, sizeof(name), "snap_%06zu_v", i);
        sn.v = vec2_from_snapshot(read_snapshot((fs::path(dir) / name).string()));
        std::snprintf(name, sizeof(name), "snap_%06zu_A.json", i);
        if (fs::exists(fs::path(dir) / name)) {
            std::snprintf(name, sizeof(name), "snap_%06zu_A", i);
            sn.A = scalar2_from_snapshot(read_snapshot((fs::path(dir) / name).string()));
        }
        traj.snapshots.push_back(std::move(sn));
    }
    return traj;
}

std::vector<double> potential_histogram(const ScalarField2& A, int bins, double lo, double hi) {
    if (bins < 1 || !(hi > lo)) throw ConfigError("potential_histogram: bad bin spec");
    std::vector<double> h(bins, 0.0);
    const double scale = bins / (hi - lo);
    for (double a : A.v) {
        int b = static_cast<int>((a - lo) * scale);
        b = std::clamp(b, 0, bins - 1);
        h[b] += 1.0;
    }
    for (double& x : h) x /= static_cast<double>(A.size());
    return h;
}

double total_variation(const std::vector<double>& p, const std::vector<double>& q) {
    if (p.size() != q.size()) throw ConfigError("total_variation: size mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) s += std::abs(p[i] - q[i]);
    return 0.5 * s;
}

} // namespace relax
