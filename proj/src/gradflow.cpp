#include "relaxlab/gradflow.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace relax {

namespace {

constexpr double NEG_INF = -std::numeric_limits<double>::infinity();

struct GridScanResult {
    Vec3 argmax{};
    double value = NEG_INF;
    bool on_boundary = false;
};

GridScanResult scan_box(const LagrangianSpec& spec, const Vec3& D, const Vec3& B,
                        const Vec3& center, double half_width, int points) {
    GridScanResult res;
    const int dim = spec.dim;
    const double step = 2.0 * half_width / (points - 1);
    std::array<int, 3> idx{0, 0, 0};
    std::array<int, 3> extent{1, 1, 1};
    for (int a = 0; a < dim; ++a) extent[a] = points;
    Vec3 E{0.0, 0.0, 0.0};
    while (true) {
        for (int a = 0; a < dim; ++a) E[a] = center[a] - half_width + step * idx[a];
        const double l = spec.L(E, B);
        if (std::isfinite(l)) {
            const double val = dot3(E, D) - l;
            if (val > res.value) {
                res.value = val;
                res.argmax = E;
                res.on_boundary = false;
                for (int a = 0; a < dim; ++a)
                    if (idx[a] == 0 || idx[a] == points - 1) res.on_boundary = true;
            }
        }
        int a = dim - 1;
        while (a >= 0) {
            if (++idx[a] < extent[a]) break;
            idx[a] = 0;
            --a;
        }
        if (a < 0) break;
    }
    return res;
}

std::size_t wrap(int i, int n) { return static_cast<std::size_t>((i % n + n) % n); }

// 4th-order time-derivative weights on a uniform grid (one-sided near the
// ends); returns d/dt of the series.
std::vector<double> ddt_series(const std::vector<double>& t, const std::vector<double>& f) {
    const std::size_t M = f.size();
    if (M < 2) throw IncompleteTrajectory("time series too short for a derivative");
    const double h = t[1] - t[0];
    for (std::size_t i = 1; i < M; ++i)
        if (std::abs((t[i] - t[i - 1]) - h) > 1e-9 * std::max(1.0, h))
            throw IncompleteTrajectory("time series must be uniformly spaced");
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

double legendre_transform(const LagrangianSpec& spec, const Vec3& D, const Vec3& B,
                          const LegendreOptions& opt) {
    if (!spec.L) throw ConfigError("legendre_transform: missing Lagrangian evaluator");
    if (spec.dim < 1 || spec.dim > 3) throw ConfigError("legendre_transform: dim must be 1..3");

    double radius = opt.radius;
    GridScanResult res;
    bool ok = false;
    for (int pass = 0; pass <= opt.max_expansions; ++pass) {
        res = scan_box(spec, D, B, Vec3{0.0, 0.0, 0.0}, radius, opt.points_per_axis);
        if (std::isfinite(res.value) && !res.on_boundary) {
            ok = true;
            break;
        }
        if (pass < opt.max_expansions) radius *= 2.0;
    }
    if (!ok)
        throw UnboundedTransform(
            "legendre_transform: supremum still boundary-active after expansions");

    // one 10x local refinement around the coarse argmax
    const double h = 2.0 * radius / (opt.points_per_axis - 1);
    const GridScanResult fine = scan_box(spec, D, B, res.argmax, h, 21);
    return std::max(res.value, fine.value);
}

double defect(const LagrangianSpec& specL,
              const std::function<double(const Vec3&, const Vec3&)>& H, const Vec3& B,
              const Vec3& E, const Vec3& D) {
    const double l = specL.L(E, B);
    const double h = H(D, B);
    if (!std::isfinite(l) || !std::isfinite(h))
        throw DomainViolation("defect: (E,D) outside the Lagrangian/Hamiltonian domain");
    return l + h - dot3(E, D);
}

EntropySpec boltzmann_entropy() {
    EntropySpec s;
    s.theta = [](double rho) { return rho * std::log(rho); };
    s.theta_prime = [](double rho) { return std::log(rho) + 1.0; };
    s.theta_second = [](double rho) { return 1.0 / rho; };
    return s;
}

MobilityCost quadratic_cost() {
    MobilityCost c;
    c.c = [](const std::array<double, 2>& w) { return 0.5 * (w[0] * w[0] + w[1] * w[1]); };
    c.cstar = [](const std::array<double, 2>& v) { return 0.5 * (v[0] * v[0] + v[1] * v[1]); };
    c.grad_cstar = [](const std::array<double, 2>& v) { return v; };
    c.speed_limit = std::numeric_limits<double>::infinity();
    return c;
}

MobilityCost relativistic_cost() {
    MobilityCost c;
    c.c = [](const std::array<double, 2>& w) {
        const double w2 = w[0] * w[0] + w[1] * w[1];
        if (w2 > 1.0) return std::numeric_limits<double>::infinity();
        return -std::sqrt(1.0 - w2);
    };
    c.cstar = [](const std::array<double, 2>& v) {
        return std::sqrt(1.0 + v[0] * v[0] + v[1] * v[1]);
    };
    c.grad_cstar = [](const std::array<double, 2>& v) {
        const double s = std::sqrt(1.0 + v[0] * v[0] + v[1] * v[1]);
        return std::array<double, 2>{v[0] / s, v[1] / s};
    };
    c.speed_limit = 1.0;
    return c;
}

ScalarDiffusionProblem ScalarDiffusionProblem::heat(const Grid2& g, ScalarField2 rho0) {
    return {g, boltzmann_entropy(), quadratic_cost(), std::move(rho0)};
}

ScalarDiffusionProblem ScalarDiffusionProblem::relativistic(const Grid2& g, ScalarField2 rho0) {
    return {g, boltzmann_entropy(), relativistic_cost(), std::move(rho0)};
}

VecField2 face_to_cell(const FaceFlux& flux) {
    const Grid2& g = flux.qx.grid;
    VecField2 q(g);
    const int n1 = g.n[0], n2 = g.n[1];
    for (int i = 0; i < n1; ++i)
        for (int j = 0; j < n2; ++j) {
            const std::size_t c = wrap(i, n1) * n2 + wrap(j, n2);
            const std::size_t ce = wrap(i + 1, n1) * n2 + wrap(j, n2);
            const std::size_t cn = wrap(i, n1) * n2 + wrap(j + 1, n2);
            q[0].v[c] = 0.5 * (flux.qx.v[c] + flux.qx.v[ce]);
            q[1].v[c] = 0.5 * (flux.qy.v[c] + flux.qy.v[cn]);
        }
    return q;
}

namespace {

constexpr double RHO_MIN = 1e-12;

struct FluxEval {
    FaceFlux flux;
    double max_speed = 0.0;
};

FluxEval compute_fluxes(const ScalarDiffusionProblem& prob, const ScalarField2& rho) {
    const Grid2& g = prob.grid;
    const int n1 = g.n[0], n2 = g.n[1];
    const double h1 = g.h(0), h2 = g.h(1);
    ScalarField2 w(g);
    for (std::size_t i = 0; i < rho.size(); ++i) w.v[i] = prob.entropy.theta_prime(rho.v[i]);

    FluxEval out{{ScalarField2(g), ScalarField2(g)}, 0.0};
    const bool limited = std::isfinite(prob.cost.speed_limit);
    auto at = [&](int i, int j) { return wrap(i, n1) * n2 + wrap(j, n2); };

    for (int i = 0; i < n1; ++i)
        for (int j = 0; j < n2; ++j) {
            // west face of cell (i,j): between L=(i-1,j) and R=(i,j)
            {
                const std::size_t L = at(i - 1, j), R = at(i, j);
                const double gn = (w.v[R] - w.v[L]) / h1;
                const double gtL = (w.v[at(i - 1, j + 1)] - w.v[at(i - 1, j - 1)]) / (2.0 * h2);
                const double gtR = (w.v[at(i, j + 1)] - w.v[at(i, j - 1)]) / (2.0 * h2);
                const auto V = prob.cost.grad_cstar({gn, 0.5 * (gtL + gtR)});
                const double speed = std::hypot(V[0], V[1]);
                out.max_speed = std::max(out.max_speed, speed);
                double rho_face = 0.5 * (rho.v[L] + rho.v[R]);
                if (limited && speed > 0.9 * prob.cost.speed_limit)
                    rho_face = V[0] < 0.0 ? rho.v[L] : rho.v[R];  // donor cell
                out.flux.qx.v[at(i, j)] = -rho_face * V[0];
            }
            // south face of cell (i,j): between S=(i,j-1) and N=(i,j)
            {
                const std::size_t S = at(i, j - 1), N = at(i, j);
                const double gn = (w.v[N] - w.v[S]) / h2;
                const double gtS = (w.v[at(i + 1, j - 1)] - w.v[at(i - 1, j - 1)]) / (2.0 * h1);
                const double gtN = (w.v[at(i + 1, j)] - w.v[at(i - 1, j)]) / (2.0 * h1);
                const auto V = prob.cost.grad_cstar({0.5 * (gtS + gtN), gn});
                const double speed = std::hypot(V[0], V[1]);
                out.max_speed = std::max(out.max_speed, speed);
                double rho_face = 0.5 * (rho.v[S] + rho.v[N]);
                if (limited && speed > 0.9 * prob.cost.speed_limit)
                    rho_face = V[1] < 0.0 ? rho.v[S] : rho.v[N];
                out.flux.qy.v[at(i, j)] = -rho_face * V[1];
            }
        }
    return out;
}

} // namespace

DiffusionStepResult scalar_diffusion_step(const ScalarDiffusionProblem& prob, double dt) {
    prob.rho.require_finite("scalar_diffusion_step");
    for (double r : prob.rho.v)
        if (r <= RHO_MIN) throw PositivityLoss("scalar_diffusion_step: initial density at floor");
    if (!(dt > 0.0)) throw ConfigError("scalar_diffusion_step: dt must be positive");

    const Grid2& g = prob.grid;
    const double hmin = std::min(g.h(0), g.h(1));
    double diff_est = 0.0;
    for (double r : prob.rho.v) diff_est = std::max(diff_est, r * prob.entropy.theta_second(r));
    if (diff_est > 0.0 && dt > 0.5 * hmin * hmin / diff_est) {
        char buf[128];
        std::snprintf(buf, sizeof(buf),
                      "scalar_diffusion_step: dt=%.3e exceeds diffusion CFL bound %.3e", dt,
                      0.5 * hmin * hmin / diff_est);
        throw CflViolation(buf);
    }

    const int n1 = g.n[0], n2 = g.n[1];
    const double h1 = g.h(0), h2 = g.h(1);
    auto at = [&](int i, int j) { return wrap(i, n1) * n2 + wrap(j, n2); };

    int rejections = 0;
    int nsub = 1;
    while (true) {
        const double dts = dt / nsub;
        ScalarField2 rho = prob.rho;
        DiffusionStepResult res{prob.rho, {ScalarField2(g), ScalarField2(g)}, 0.0, rejections};
        bool ok = true;
        for (int s = 0; s < nsub && ok; ++s) {
            ScalarDiffusionProblem cur{prob.grid, prob.entropy, prob.cost, rho};
            FluxEval f = compute_fluxes(cur, rho);
            res.max_speed = std::max(res.max_speed, f.max_speed);
            ScalarField2 next(g);
            for (int i = 0; i < n1 && ok; ++i)
                for (int j = 0; j < n2; ++j) {
                    const std::size_t c = at(i, j);
                    const double divq = (f.flux.qx.v[at(i + 1, j)] - f.flux.qx.v[c]) / h1 +
                                        (f.flux.qy.v[at(i, j + 1)] - f.flux.qy.v[c]) / h2;
                    next.v[c] = rho.v[c] - dts * divq;
                    if (next.v[c] <= RHO_MIN || !std::isfinite(next.v[c])) {
                        ok = false;
                        break;
                    }
                }
            if (!ok) break;
            const double wgt = dts / dt;
            for (std::size_t c2 = 0; c2 < res.flux.qx.size(); ++c2) {
                res.flux.qx.v[c2] += wgt * f.flux.qx.v[c2];
                res.flux.qy.v[c2] += wgt * f.flux.qy.v[c2];
            }
            rho = std::move(next);
        }
        if (ok) {
            res.rho = std::move(rho);
            res.rejections = rejections;
            return res;
        }
        if (++rejections > 20)
            throw PositivityLoss("scalar_diffusion_step: positivity lost after 20 rejections");
        nsub *= 2;
    }
}

double continuity_residual(const ScalarTrajectory& traj) {
    if (traj.size() < 2) throw IncompleteTrajectory("continuity_residual: too few checkpoints");
    const Grid2& g = traj.front().rho.grid;
    const int n1 = g.n[0], n2 = g.n[1];
    const double h1 = g.h(0), h2 = g.h(1);
    auto at = [&](int i, int j) { return wrap(i, n1) * n2 + wrap(j, n2); };

    double worst = 0.0;
    bool have_face = true;
    for (std::size_t m = 1; m < traj.size(); ++m) have_face = have_face && traj[m].q_face.has_value();

    if (have_face) {
        for (std::size_t m = 1; m < traj.size(); ++m) {
            const double dt = traj[m].time - traj[m - 1].time;
            const FaceFlux& f = *traj[m].q_face;
            for (int i = 0; i < n1; ++i)
                for (int j = 0; j < n2; ++j) {
                    const std::size_t c = at(i, j);
                    const double divq = (f.qx.v[at(i + 1, j)] - f.qx.v[c]) / h1 +
                                        (f.qy.v[at(i, j + 1)] - f.qy.v[c]) / h2;
                    worst = std::max(worst,
                                     std::abs((traj[m].rho.v[c] - traj[m - 1].rho.v[c]) / dt + divq));
                }
        }
        return worst;
    }

    // generic route: 4th-order time differencing + spectral divergence
    std::vector<double> times;
    for (const auto& p : traj) times.push_back(p.time);
    std::vector<ScalarField2> divq;
    divq.reserve(traj.size());
    for (const auto& p : traj) divq.push_back(div(p.q_cell));
    const std::size_t nodes = g.size();
    std::vector<double> series(traj.size());
    for (std::size_t c = 0; c < nodes; ++c) {
        for (std::size_t m = 0; m < traj.size(); ++m) series[m] = traj[m].rho.v[c];
        const std::vector<double> dser = ddt_series(times, series);
        for (std::size_t m = 0; m < traj.size(); ++m)
            worst = std::max(worst, std::abs(dser[m] + divq[m].v[c]));
    }
    return worst;
}

namespace {

std::vector<double> dissipation_core(const ScalarTrajectory& traj, const EntropySpec& entropy,
                                     const MobilityCost& cost, const HvOptions& opt,
                                     bool hv_normalization) {
    if (traj.size() < 2) throw IncompleteTrajectory("dissipation residual: too few checkpoints");
    if (opt.enforce_admissibility) {
        const double cres = continuity_residual(traj);
        if (cres > opt.admissibility_tol) {
            char buf[128];
            std::snprintf(buf, sizeof(buf),
                          "pair not admissible: continuity residual %.3e > %.3e", cres,
                          opt.admissibility_tol);
            throw NotAdmissible(buf);
        }
    }
    std::vector<double> times, theta_int;
    for (const auto& p : traj) {
        times.push_back(p.time);
        theta_int.push_back(p.rho.grid.cell_volume() *
                            pairwise_sum(p.rho.size(), [&](std::size_t i) {
                                return entropy.theta(p.rho.v[i]);
                            }));
    }
    const std::vector<double> dtheta = ddt_series(times, theta_int);

    std::vector<double> out(traj.size(), 0.0);
    for (std::size_t m = 0; m < traj.size(); ++m) {
        const auto& p = traj[m];
        ScalarField2 w(p.rho.grid);
        for (std::size_t i = 0; i < w.size(); ++i) w.v[i] = entropy.theta_prime(p.rho.v[i]);
        const VecField2 Dfield = grad(w);
        const double vol = p.rho.grid.cell_volume();
        if (hv_normalization) {
            // 2 d/dt int(rho log rho) + int |q|^2/rho + int |grad rho|^2/rho
            const VecField2 grho = grad(p.rho);
            const double qterm = vol * pairwise_sum(p.rho.size(), [&](std::size_t i) {
                const double q2 =
                    p.q_cell[0][i] * p.q_cell[0][i] + p.q_cell[1][i] * p.q_cell[1][i];
                return q2 / p.rho.v[i];
            });
            const double gterm = vol * pairwise_sum(p.rho.size(), [&](std::size_t i) {
                const double g2 = grho[0][i] * grho[0][i] + grho[1][i] * grho[1][i];
                return g2 / p.rho.v[i];
            });
            out[m] = 2.0 * dtheta[m] + qterm + gterm;
        } else {
            // d/dt int theta + int (rho c(q/rho) + rho c*(D))
            const double lterm = vol * pairwise_sum(p.rho.size(), [&](std::size_t i) {
                const std::array<double, 2> wvec{p.q_cell[0][i] / p.rho.v[i],
                                                 p.q_cell[1][i] / p.rho.v[i]};
                return p.rho.v[i] * cost.c(wvec);
            });
            const double hterm = vol * pairwise_sum(p.rho.size(), [&](std::size_t i) {
                return p.rho.v[i] * cost.cstar({Dfield[0][i], Dfield[1][i]});
            });
            out[m] = dtheta[m] + lterm + hterm;
        }
    }
    return out;
}

} // namespace

std::vector<double> hv_residual(const ScalarTrajectory& traj, const HvOptions& opt) {
    return dissipation_core(traj, boltzmann_entropy(), quadratic_cost(), opt, true);
}

std::vector<double> general_dissipation_residual(int k, int d, const ScalarTrajectory& traj,
                                                 const EntropySpec& entropy,
                                                 const MobilityCost& cost, const HvOptions& opt) {
    if (k == 2 && d == 3)
        throw UnsupportedDegree(
            "general_dissipation_residual: the k=2,d=3 case is the Born-Infeld module");
    if (k != d)
        throw UnsupportedDegree("general_dissipation_residual: only k=d and k=2,d=3 supported");
    return dissipation_core(traj, entropy, cost, opt, false);
}

} // namespace relax
