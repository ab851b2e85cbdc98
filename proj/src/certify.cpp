#include "relaxlab/certify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace relax {

namespace {

constexpr double TWO_PI = 6.283185307179586476925286766559;

// int_0^len (f0 + slope*tau) exp(-r tau) dtau, stable for small r*len.
double segment_integral(double f0, double slope, double r, double len) {
    if (len <= 0.0) return 0.0;
    const double x = r * len;
    if (x < 1e-12) {
        // series; covers r == 0 exactly
        return f0 * len * (1.0 - 0.5 * x) + slope * len * len * (0.5 - x / 3.0);
    }
    const double em = -std::expm1(-x);  // 1 - exp(-x)
    return f0 * em / r + slope * (em / (r * r) - len * std::exp(-x) / r);
}

std::size_t ledger_index_at(const Ledger& led, double t) {
    for (std::size_t i = 0; i < led.rows.size(); ++i)
        if (std::abs(led.rows[i].time - t) <= 1e-9 * std::max(1.0, std::abs(t))) return i;
    throw IncompleteTrajectory("no ledger row at requested checkpoint time");
}

} // namespace

RSchedule RSchedule::constant(double r) {
    RSchedule s;
    s.breakpoints = {0.0};
    s.values = {r};
    s.validate();
    return s;
}

void RSchedule::validate() const {
    if (breakpoints.empty() || breakpoints.size() != values.size())
        throw ConfigError("RSchedule: breakpoints/values size mismatch");
    if (breakpoints.front() != 0.0) throw ConfigError("RSchedule: first breakpoint must be 0");
    for (std::size_t i = 1; i < breakpoints.size(); ++i)
        if (!(breakpoints[i] > breakpoints[i - 1]))
            throw ConfigError("RSchedule: breakpoints must increase");
    for (double v : values)
        if (!(v >= 0.0) || !std::isfinite(v)) throw ConfigError("RSchedule: r must be >= 0");
}

double RSchedule::r_at(double t) const {
    std::size_t i = breakpoints.size() - 1;
    while (i > 0 && t < breakpoints[i]) --i;
    return values[i];
}

double RSchedule::R(double t) const {
    double acc = 0.0;
    for (std::size_t i = 0; i < breakpoints.size(); ++i) {
        const double lo = breakpoints[i];
        if (t <= lo) break;
        const double hi = i + 1 < breakpoints.size() ? std::min(breakpoints[i + 1], t) : t;
        acc += values[i] * (hi - lo);
    }
    return acc;
}

std::vector<double> exp_weighted_cumint(const std::vector<double>& t,
                                        const std::vector<double>& f, const RSchedule& sched) {
    if (t.size() != f.size() || t.empty())
        throw ConfigError("exp_weighted_cumint: size mismatch");
    sched.validate();
    std::vector<double> out(t.size(), 0.0);
    double acc = 0.0;  // I(t_m) carried forward
    for (std::size_t m = 1; m < t.size(); ++m) {
        double lo = t[m - 1];
        const double hi = t[m];
        if (!(hi > lo)) throw ConfigError("exp_weighted_cumint: times must increase");
        const double slope_all = (f[m] - f[m - 1]) / (hi - lo);
        // split at schedule breakpoints inside (lo, hi)
        while (lo < hi) {
            double seg_hi = hi;
            for (double bp : sched.breakpoints)
                if (bp > lo + 1e-15 && bp < seg_hi) seg_hi = bp;
            const double r = sched.r_at(lo);
            const double len = seg_hi - lo;
            const double f_lo = f[m - 1] + slope_all * (lo - t[m - 1]);
            // I(seg_hi) = e^{r len} [ I(lo) + int_0^len f(lo+tau) e^{-r tau} dtau ]
            acc = std::exp(r * len) * (acc + segment_integral(f_lo, slope_all, r, len));
            lo = seg_hi;
        }
        out[m] = acc;
    }
    return out;
}

std::string Certificate::to_json() const {
    std::ostringstream os;
    char buf[256];
    os << "{\n  \"schedule\": {\"breakpoints\": [";
    for (std::size_t i = 0; i < schedule.breakpoints.size(); ++i) {
        std::snprintf(buf, sizeof(buf), "%s%.17g", i ? ", " : "", schedule.breakpoints[i]);
        os << buf;
    }
    os << "], \"values\": [";
    for (std::size_t i = 0; i < schedule.values.size(); ++i) {
        std::snprintf(buf, sizeof(buf), "%s%.17g", i ? ", " : "", schedule.values[i]);
        os << buf;
    }
    std::snprintf(buf, sizeof(buf), "]},\n  \"tolerance\": %.17g,\n  \"worst_residual\": %.17g,\n",
                  tolerance, worst_residual);
    os << buf;
    os << "  \"verdict\": \"" << (pass ? "pass" : "fail") << "\",\n  \"per_time\": [";
    for (std::size_t i = 0; i < per_time.size(); ++i) {
        std::snprintf(buf, sizeof(buf),
                      "%s\n    {\"t\": %.17g, \"lhs\": %.17g, \"rhs\": %.17g, \"residual\": %.17g}",
                      i ? "," : "", per_time[i].t, per_time[i].lhs, per_time[i].rhs,
                      per_time[i].residual);
        os << buf;
    }
    os << "\n  ]\n}";
    return os.str();
}

std::vector<DualWitness> zero_witnesses(const Trajectory& traj, const RSchedule& sched) {
    std::vector<DualWitness> out;
    out.reserve(traj.snapshots.size());
    for (const auto& sn : traj.snapshots)
        out.push_back(make_witness(sched.r_at(sn.time), VecField2(sn.B.grid)));
    return out;
}

std::vector<DualWitness> ascent_witnesses(const Trajectory& traj, const RSchedule& sched,
                                          int budget) {
    std::vector<DualWitness> out;
    out.reserve(traj.snapshots.size());
    for (const auto& sn : traj.snapshots)
        out.push_back(kr_maximize(sn.B, sched.r_at(sn.time), budget).witness);
    return out;
}

Certificate entropy_residual(const Trajectory& traj, const RSchedule& sched,
                             const std::vector<DualWitness>& witnesses, double tolerance) {
    sched.validate();
    if (traj.ledger.rows.size() < 2) throw IncompleteTrajectory("entropy_residual: empty ledger");
    if (traj.snapshots.empty()) throw IncompleteTrajectory("entropy_residual: no snapshots");
    if (witnesses.size() != traj.snapshots.size())
        throw IncompleteTrajectory("entropy_residual: one witness per snapshot required");

    // ||v||^2 integral on the fine ledger grid: the v2 column is the per-step
    // midpoint value, integrated as a piecewise-constant density.
    const auto& rows = traj.ledger.rows;
    std::vector<double> vt(rows.size()), vsq(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        vt[i] = rows[i].time;
        vsq[i] = rows[i].v2;
    }
    // piecewise-constant via midstep nodes: reuse the linear machinery with
    // equal endpoint values per step
    std::vector<double> v_int(rows.size(), 0.0);
    {
        double acc = 0.0;
        for (std::size_t m = 1; m < rows.size(); ++m) {
            double lo = vt[m - 1];
            const double hi = vt[m];
            while (lo < hi) {
                double seg_hi = hi;
                for (double bp : sched.breakpoints)
                    if (bp > lo + 1e-15 && bp < seg_hi) seg_hi = bp;
                const double r = sched.r_at(lo);
                const double len = seg_hi - lo;
                acc = std::exp(r * len) * (acc + segment_integral(vsq[m], 0.0, r, len));
                lo = seg_hi;
            }
            v_int[m] = acc;
        }
    }

    // K_r lower bounds at snapshot times, integrated piecewise-linearly.
    std::vector<double> st(traj.snapshots.size()), kvals(traj.snapshots.size());
    for (std::size_t i = 0; i < traj.snapshots.size(); ++i) {
        const auto& sn = traj.snapshots[i];
        const double want_r = sched.r_at(sn.time);
        if (std::abs(witnesses[i].r - want_r) > 1e-12 * std::max(1.0, want_r))
            throw InfeasibleWitness("entropy_residual: witness r does not match schedule");
        if (!witnesses[i].feasible())
            throw InfeasibleWitness("entropy_residual: infeasible witness supplied");
        st[i] = sn.time;
        kvals[i] = kr_value_for_witness(sn.B, witnesses[i]);
    }
    const std::vector<double> k_int = exp_weighted_cumint(st, kvals, sched);

    const double B0sq = rows.front().B2;
    Certificate cert;
    cert.schedule = sched;
    cert.tolerance = tolerance;
    cert.worst_residual = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < traj.snapshots.size(); ++i) {
        const double t = st[i];
        const std::size_t li = ledger_index_at(traj.ledger, t);
        const double lhs = rows[li].B2 + v_int[li] + k_int[i];
        const double rhs = B0sq * std::exp(sched.R(t));
        CertificatePoint pt{t, lhs, rhs, rhs - lhs};
        cert.worst_residual = std::min(cert.worst_residual, pt.residual);
        cert.per_time.push_back(pt);
    }
    cert.pass = cert.worst_residual >= -tolerance;
    return cert;
}

std::vector<SpaceTimeTestField> default_test_fields(const Grid2& g, double t_final) {
    struct Spec {
        const char* name;
        std::function<double(const std::array<double, 2>&)> psi;
        std::function<double(double)> gm;
        std::function<double(double)> gd;
    };
    const double T = t_final;
    const double pi_over_T = 3.14159265358979323846 / T;
    std::vector<Spec> specs = {
        {"s1", [](const std::array<double, 2>& x) { return std::sin(TWO_PI * x[0]); },
         [](double) { return 1.0; }, [](double) { return 0.0; }},
        {"s2", [](const std::array<double, 2>& x) { return std::cos(TWO_PI * x[1]); },
         [](double) { return 1.0; }, [](double) { return 0.0; }},
        {"s3", [](const std::array<double, 2>& x) { return std::sin(TWO_PI * (x[0] + x[1])); },
         [pi_over_T](double t) { return std::cos(pi_over_T * t); },
         [pi_over_T](double t) { return -pi_over_T * std::sin(pi_over_T * t); }},
        {"s4", [](const std::array<double, 2>& x) { return std::cos(TWO_PI * (x[0] - x[1])); },
         [pi_over_T](double t) { return std::sin(pi_over_T * t); },
         [pi_over_T](double t) { return pi_over_T * std::cos(pi_over_T * t); }},
        {"s5",
         [](const std::array<double, 2>& x) {
             return std::sin(TWO_PI * x[0]) * std::cos(TWO_PI * x[1]);
         },
         [](double t) { return std::exp(-t); }, [](double t) { return -std::exp(-t); }},
        {"s6", [](const std::array<double, 2>& x) { return std::cos(2.0 * TWO_PI * x[1]); },
         [](double) { return 1.0; }, [](double) { return 0.0; }},
        {"s7", [](const std::array<double, 2>& x) { return std::sin(2.0 * TWO_PI * x[0]); },
         [pi_over_T](double t) { return std::cos(pi_over_T * t); },
         [pi_over_T](double t) { return -pi_over_T * std::sin(pi_over_T * t); }},
        {"s8",
         [](const std::array<double, 2>& x) {
             return std::cos(TWO_PI * x[0]) * std::sin(2.0 * TWO_PI * x[1]);
         },
         [](double t) { return 1.0 + 0.5 * std::exp(-2.0 * t); },
         [](double t) { return -std::exp(-2.0 * t); }},
    };
    std::vector<SpaceTimeTestField> out;
    for (auto& sp : specs) {
        SpaceTimeTestField f;
        f.name = sp.name;
        ScalarField2 psi = sample_scalar<2>(g, sp.psi);
        f.Phi = grad_perp(psi);
        const VecCoeffs2 pc = to_coeffs<2>(f.Phi);
        f.curlPhi = inverse_transform(curl2d_coeffs(pc));
        f.g = sp.gm;
        f.gdot = sp.gd;
        out.push_back(std::move(f));
    }
    return out;
}

std::vector<double> transport_residuals(const Trajectory& traj,
                                        const std::vector<SpaceTimeTestField>& fields) {
    if (traj.snapshots.size() < 3)
        throw IncompleteTrajectory("transport_residuals: need at least three snapshots");
    std::vector<double> out;
    for (const auto& f : fields) {
        const std::size_t M = traj.snapshots.size();
        std::vector<double> bphi(M), mcurl(M), tt(M);
        for (std::size_t i = 0; i < M; ++i) {
            const auto& sn = traj.snapshots[i];
            tt[i] = sn.time;
            bphi[i] = l2_inner(sn.B, f.Phi);
            ScalarField2 m12(sn.B.grid);
            for (std::size_t j = 0; j < m12.size(); ++j)
                m12.v[j] = sn.B[0][j] * sn.v[1][j] - sn.v[0][j] * sn.B[1][j];
            // (B(x)v - v(x)B) : grad phi = -m12 * curl Phi (times g)
            mcurl[i] = -l2_inner(m12, f.curlPhi);
        }
        double integral_part = 0.0;
        for (std::size_t i = 1; i < M; ++i) {
            const double dt = tt[i] - tt[i - 1];
            auto integrand = [&](std::size_t j) {
                return f.gdot(tt[j]) * bphi[j] + f.g(tt[j]) * mcurl[j];
            };
            integral_part += 0.5 * dt * (integrand(i - 1) + integrand(i));
        }
        const double boundary =
            f.g(tt.back()) * bphi.back() - f.g(tt.front()) * bphi.front();
        out.push_back(std::abs(boundary - integral_part));
    }
    return out;
}

double transport_residual(const Trajectory& traj,
                          const std::vector<SpaceTimeTestField>& fields) {
    double m = 0.0;
    for (double r : transport_residuals(traj, fields)) m = std::max(m, r);
    return m;
}

void SmoothPair::require_derivatives() const {
    if (!beta || !omega || !dbeta_dt || !omega_grad_beta || !beta_grad_omega || !beta_grad_beta)
        throw MissingDerivatives("SmoothPair: missing analytic derivative closures");
}

SmoothPair make_smooth_pair(const Grid2& grid, std::function<VecField2(double)> beta,
                            std::function<VecField2(double)> omega,
                            std::function<VecField2(double)> dbeta_dt,
                            const std::vector<double>& times) {
    if (!beta || !omega || !dbeta_dt)
        throw MissingDerivatives("make_smooth_pair: beta, omega, dbeta_dt required");

    auto advect = [](const VecField2& a, const VecField2& b) {
        // (a . grad) b, spectrally exact for band-limited fields
        const VecCoeffs2 bc = to_coeffs<2>(b);
        VecField2 out(a.grid);
        for (int comp = 0; comp < 2; ++comp) {
            const VecCoeffs2 gb = grad_coeffs<2>(bc[comp]);
            const ScalarField2 g1 = inverse_transform(gb[0]);
            const ScalarField2 g2 = inverse_transform(gb[1]);
            for (std::size_t i = 0; i < out[0].size(); ++i)
                out[comp][i] = a[0][i] * g1.v[i] + a[1][i] * g2.v[i];
        }
        return out;
    };

    auto max_grad_norm = [](const VecField2& u) {
        const VecCoeffs2 uc = to_coeffs<2>(u);
        double m = 0.0;
        for (int comp = 0; comp < 2; ++comp) {
            const VecCoeffs2 gu = grad_coeffs<2>(uc[comp]);
            const ScalarField2 g1 = inverse_transform(gu[0]);
            const ScalarField2 g2 = inverse_transform(gu[1]);
            for (std::size_t i = 0; i < g1.size(); ++i) {
                const double norm = std::sqrt(g1.v[i] * g1.v[i] + g2.v[i] * g2.v[i]);
                m = std::max(m, norm);
            }
        }
        return m;
    };

    SmoothPair pair;
    pair.beta = beta;
    pair.omega = omega;
    pair.dbeta_dt = dbeta_dt;
    pair.omega_grad_beta = [=](double t) { return advect(omega(t), beta(t)); };
    pair.beta_grad_omega = [=](double t) { return advect(beta(t), omega(t)); };
    pair.beta_grad_beta = [=](double t) { return advect(beta(t), beta(t)); };

    double lb = 0.0, lo = 0.0;
    for (double t : times) {
        lb = std::max(lb, max_grad_norm(beta(t)));
        lo = std::max(lo, max_grad_norm(omega(t)));
    }
    (void)grid;
    pair.lip_beta = lb;
    pair.lip_omega = lo;
    return pair;
}

WeakStrongGap weak_strong_gap(const Trajectory& traj, const SmoothPair& pair) {
    pair.require_derivatives();
    if (traj.snapshots.size() < 2)
        throw IncompleteTrajectory("weak_strong_gap: need at least two snapshots");

    // Gronwall rate surrogate from the pair's spatial Lipschitz constants.
    const double C = 2.0 * pair.lip_omega + 2.0 * pair.lip_beta + 1.0;
    const RSchedule rate = RSchedule::constant(C);

    const std::size_t M = traj.snapshots.size();
    std::vector<double> tt(M), diffB(M), half_vdiff(M), jl(M);
    const double t0 = traj.snapshots.front().time;
    for (std::size_t i = 0; i < M; ++i) {
        const auto& sn = traj.snapshots[i];
        // time-translation invariance: measure times relative to the start
        tt[i] = sn.time - t0;
        const double t_abs = sn.time;
        VecField2 bdiff = sn.B;
        bdiff -= pair.beta(t_abs);
        diffB[i] = l2_norm_sq(bdiff);
        VecField2 vdiff = sn.v;
        const VecField2 om = pair.omega(t_abs);
        vdiff -= om;
        half_vdiff[i] = 0.5 * l2_norm_sq(vdiff);

        VecField2 lin1 = pair.dbeta_dt(t_abs);
        lin1 += pair.omega_grad_beta(t_abs);
        lin1 -= pair.beta_grad_omega(t_abs);
        VecField2 lin2 = pair.beta_grad_beta(t_abs);
        lin2 -= om;
        jl[i] = -2.0 * l2_inner(bdiff, lin1) + 2.0 * l2_inner(vdiff, lin2);
    }

    const std::vector<double> v_int = exp_weighted_cumint(tt, half_vdiff, rate);
    const std::vector<double> jl_int = exp_weighted_cumint(tt, jl, rate);

    WeakStrongGap out;
    out.C = C;
    for (std::size_t i = 0; i < M; ++i) {
        const double lhs = diffB[i] + v_int[i];
        const double rhs = diffB[0] * std::exp(C * tt[i]) + jl_int[i];
        out.t.push_back(tt[i]);
        out.gap.push_back(rhs - lhs);
    }
    return out;
}

double gronwall_envelope(double e0, double C, double t) {
    if (e0 < 0.0 || C < 0.0 || t < 0.0)
        throw ConfigError("gronwall_envelope: arguments must be nonnegative");
    return e0 * std::exp(C * t);
}

} // namespace relax
