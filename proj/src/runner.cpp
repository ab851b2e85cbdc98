#include "relaxlab/runner.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <future>

#include <json.hpp>

namespace relax {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

constexpr double TWO_PI = 6.283185307179586476925286766559;

struct ManifestWriter {
    std::string dir;
    json body;
    std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();

    explicit ManifestWriter(const std::string& out_dir, const RunConfig& cfg) : dir(out_dir) {
        body["schema"] = "relaxlab-manifest-v1";
        body["version"] = relaxlab_version();
        body["config"] = json::parse(cfg.echo);
        body["verdicts"] = json::object();
        body["exit_code"] = 0;
    }

    void finish(int exit_code, const std::string& error = "") {
        const auto dt = std::chrono::steady_clock::now() - t0;
        body["wall_time_s"] = std::chrono::duration<double>(dt).count();
        body["exit_code"] = exit_code;
        if (!error.empty()) body["error"] = error;
        fs::create_directories(dir);
        std::ofstream out(fs::path(dir) / "manifest.json");
        out << body.dump(2) << "\n";
    }
};

void emit_plotscript(const std::string& dir, const std::vector<std::string>& csvs) {
    std::ofstream out(fs::path(dir) / "plot.gp");
    out << "# gnuplot script; run from this directory\n"
        << "set datafile separator ','\n"
        << "set key autotitle columnhead\n"
        << "set terminal pngcairo size 1000,600\n";
    int idx = 0;
    for (const auto& c : csvs) {
        out << "set output 'plot_" << idx << ".png'\n"
            << "plot '" << c << "' using 1:2 with lines\n";
        ++idx;
    }
}

int run_mre(const RunConfig& cfg, ManifestWriter& man, const std::string& out) {
    MreParams p = cfg.mre;
    p.seed = cfg.seed;
    const Trajectory traj = run_mhd(p);
    traj.save((fs::path(out) / "traj").string());
    man.body["verdicts"]["run_completed"] = !traj.failed;
    if (cfg.emit_plotscript) emit_plotscript(out, {"traj/ledger.csv"});
    if (traj.failed) {
        man.finish(2, traj.error);
        return 2;
    }
    const auto& rows = traj.ledger.rows;
    man.body["verdicts"]["final_B2"] = rows.back().B2;
    man.body["verdicts"]["final_LB"] = rows.back().LB;
    man.finish(0);
    return 0;
}

int run_sweep(const RunConfig& cfg, ManifestWriter& man, const std::string& out) {
    std::vector<MreParams> params;
    for (int j = 0; j < cfg.sweep.levels; ++j) {
        MreParams p = cfg.sweep.base;
        const double f = std::pow(cfg.sweep.factor, j);
        p.epsilon = cfg.sweep.eps0 * f;
        p.mu = cfg.sweep.mu0 * f;
        p.nu = cfg.sweep.nu0 * f;
        p.seed = cfg.seed;
        params.push_back(p);
    }
    std::vector<Trajectory> runs(params.size());
    if (cfg.threads > 1) {
        std::vector<std::future<Trajectory>> futs;
        for (const auto& p : params)
            futs.push_back(std::async(std::launch::async, [p] { return run_mhd(p); }));
        for (std::size_t i = 0; i < futs.size(); ++i) runs[i] = futs[i].get();
    } else {
        for (std::size_t i = 0; i < params.size(); ++i) runs[i] = run_mhd(params[i]);
    }
    std::vector<std::string> csvs;
    for (std::size_t i = 0; i < runs.size(); ++i) {
        char name[32];
        std::snprintf(name, sizeof(name), "run_%zu", i);
        runs[i].save((fs::path(out) / name).string());
        csvs.push_back(std::string(name) + "/ledger.csv");
        if (runs[i].failed) {
            man.finish(2, runs[i].error);
            return 2;
        }
    }
    const auto dict = weak_metric_dictionary(make_grid2(cfg.sweep.base.n));
    json dists = json::array();
    bool cauchy = true;
    double prev = 0.0;
    for (std::size_t i = 0; i + 1 < runs.size(); ++i) {
        const double d = weak_distance(runs[i], runs[i + 1], dict);
        if (i > 0 && d >= prev) cauchy = false;
        prev = d;
        dists.push_back(d);
    }
    man.body["verdicts"]["pairwise_weak_distances"] = dists;
    man.body["verdicts"]["cauchy_decreasing"] = cauchy;
    {
        std::ofstream sj(fs::path(out) / "sweep.json");
        json s;
        s["pairwise_weak_distances"] = dists;
        s["cauchy_decreasing"] = cauchy;
        sj << s.dump(2) << "\n";
    }
    if (cfg.emit_plotscript) emit_plotscript(out, csvs);
    man.finish(0);
    return 0;
}

int run_certify(const RunConfig& cfg, ManifestWriter& man, const std::string& out) {
    const Trajectory traj = Trajectory::load(resolve_out_dir(cfg.certify.traj));
    bool all_pass = true;
    for (double r : cfg.certify.r) {
        const RSchedule sched = RSchedule::constant(r);
        std::vector<DualWitness> wit = cfg.certify.witness == "ascent"
                                           ? ascent_witnesses(traj, sched, cfg.certify.budget)
                                           : zero_witnesses(traj, sched);
        const Certificate cert = entropy_residual(traj, sched, wit, cfg.certify.tolerance);
        char name[64];
        std::snprintf(name, sizeof(name), "certificate_r%g.json", r);
        fs::create_directories(out);
        std::ofstream cj(fs::path(out) / name);
        cj << cert.to_json() << "\n";
        // witness snapshots alongside the certificate
        for (std::size_t i = 0; i < wit.size(); ++i) {
            std::snprintf(name, sizeof(name), "witness_r%g_%04zu", r, i);
            write_snapshot(out, to_snapshot(wit[i].z, name, traj.snapshots[i].time));
        }
        std::snprintf(name, sizeof(name), "r=%g", r);
        man.body["verdicts"][name] = cert.pass ? "pass" : "fail";
        all_pass = all_pass && cert.pass;
    }
    man.finish(all_pass ? 0 : 3, all_pass ? "" : "certification failed");
    return all_pass ? 0 : 3;
}

int run_heat(const RunConfig& cfg, ManifestWriter& man, const std::string& out) {
    const bool relativistic = cfg.experiment == "relativistic";
    const Grid2 g = make_grid2(cfg.heat.n);
    ScalarField2 rho0 = sample_scalar<2>(g, [&](const std::array<double, 2>& x) {
        return 1.0 + cfg.heat.amplitude * std::cos(TWO_PI * x[0]);
    });
    ScalarDiffusionProblem prob = relativistic ? ScalarDiffusionProblem::relativistic(g, rho0)
                                               : ScalarDiffusionProblem::heat(g, rho0);

    const int nsteps = static_cast<int>(std::llround(cfg.heat.t_final / cfg.heat.dt));
    ScalarTrajectory traj;
    std::vector<double> max_speed_at;
    FaceFlux window{ScalarField2(g), ScalarField2(g)};
    double window_speed = 0.0;
    int in_window = 0;

    auto push_point = [&](double time, bool with_flux) {
        ScalarTrajPoint pt;
        pt.time = time;
        pt.rho = prob.rho;
        if (with_flux && in_window > 0) {
            FaceFlux avg{window.qx, window.qy};
            for (auto& x : avg.qx.v) x /= in_window;
            for (auto& x : avg.qy.v) x /= in_window;
            pt.q_face = avg;
            pt.q_cell = face_to_cell(avg);
        } else {
            pt.q_cell = VecField2(g);
        }
        traj.push_back(std::move(pt));
        max_speed_at.push_back(window_speed);
        window = FaceFlux{ScalarField2(g), ScalarField2(g)};
        window_speed = 0.0;
        in_window = 0;
    };

    push_point(0.0, false);
    for (int step = 1; step <= nsteps; ++step) {
        DiffusionStepResult res = scalar_diffusion_step(prob, cfg.heat.dt);
        if (relativistic) {
            // face-flux speed bound |q| <= rho, asserted every step
            if (res.max_speed >= 1.0)
                throw NumericFailure("relativistic flux speed bound violated");
        }
        prob.rho = res.rho;
        for (std::size_t i = 0; i < window.qx.size(); ++i) {
            window.qx.v[i] += res.flux.qx.v[i];
            window.qy.v[i] += res.flux.qy.v[i];
        }
        window_speed = std::max(window_speed, res.max_speed);
        ++in_window;
        if (step % cfg.heat.snap_every == 0 || step == nsteps)
            push_point(step * cfg.heat.dt, true);
    }

    std::vector<double> hv;
    try {
        hv = hv_residual(traj);
    } catch (const NotAdmissible&) {
        hv.assign(traj.size(), std::numeric_limits<double>::quiet_NaN());
    }

    fs::create_directories(out);
    std::ofstream csv(fs::path(out) / "ledger.csv");
    csv << "time,mass,entropy,hv_lhs,max_speed\n";
    char buf[256];
    const EntropySpec ent = boltzmann_entropy();
    for (std::size_t i = 0; i < traj.size(); ++i) {
        const double mass = integral(traj[i].rho);
        const double entropy = traj[i].rho.grid.cell_volume() *
                               pairwise_sum(traj[i].rho.size(), [&](std::size_t k) {
                                   return ent.theta(traj[i].rho.v[k]);
                               });
        std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g,%.17g,%.17g\n", traj[i].time, mass,
                      entropy, hv[i], max_speed_at[i]);
        csv << buf;
    }
    write_snapshot(out, to_snapshot(traj.back().rho, "rho_final", traj.back().time));
    if (cfg.emit_plotscript) emit_plotscript(out, {"ledger.csv"});
    man.body["verdicts"]["final_mass"] = integral(traj.back().rho);
    man.finish(0);
    return 0;
}

int run_bi(const RunConfig& cfg, ManifestWriter& man, const std::string& out) {
    fs::create_directories(out);
    if (cfg.bi_demo == "maxwell-limit") {
        const Vec3 E{0.0, 0.0, 0.0};
        const Vec3 B{1.0, 0.0, 0.0};
        const std::vector<double> lambdas{10.0, 100.0, 1000.0};
        const std::vector<double> g = maxwell_limit_check(E, B, lambdas);
        const double limit = 0.5 * (norm_sq3(E) - norm_sq3(B));
        std::ofstream csv(fs::path(out) / "maxwell.csv");
        csv << "lambda,g,abs_gap\n";
        char buf[160];
        std::vector<double> lx, ly;
        for (std::size_t i = 0; i < lambdas.size(); ++i) {
            const double gap = std::abs(g[i] - limit);
            std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g\n", lambdas[i], g[i], gap);
            csv << buf;
            lx.push_back(std::log10(lambdas[i]));
            ly.push_back(std::log10(gap));
        }
        // least-squares slope in log-log
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        for (std::size_t i = 0; i < lx.size(); ++i) {
            sx += lx[i];
            sy += ly[i];
            sxx += lx[i] * lx[i];
            sxy += lx[i] * ly[i];
        }
        const double nn = static_cast<double>(lx.size());
        const double slope = (nn * sxy - sx * sy) / (nn * sxx - sx * sx);
        man.body["verdicts"]["maxwell_slope"] = slope;
        if (cfg.emit_plotscript) emit_plotscript(out, {"maxwell.csv"});
        man.finish(0);
        return 0;
    }

    BiParams p = cfg.bi;
    const Grid3 g3 = make_grid3(p.n);
    VecField3 B0 = sample_vector<3>(g3, [&](const std::array<double, 3>& x) {
        return Vec3{std::sin(TWO_PI * x[2]), 0.0, 0.0};
    });
    if (p.theta == "abs") {
        // keep |B| away from zero for the nonsmooth entropy
        for (std::size_t i = 0; i < B0[0].size(); ++i) B0[0][i] += 2.0;
    }
    BiState s = make_bi_state(std::move(B0), p);

    const double dt = p.dt > 0.0 ? p.dt : 0.25 / p.n;
    const int nsteps = std::max(1, static_cast<int>(std::llround(p.t_final / dt)));
    BiParams pstep = p;
    pstep.dt = dt;

    std::ofstream csv(fs::path(out) / "ledger.csv");
    csv << "time,thetaB,maxv,divB_max,EdotB_max\n";
    char buf[256];
    auto write_row = [&](const BiState& st) {
        double edotb = 0.0;
        for (std::size_t i = 0; i < st.B[0].size(); ++i)
            edotb = std::max(edotb, std::abs(st.E[0][i] * st.B[0][i] + st.E[1][i] * st.B[1][i] +
                                             st.E[2][i] * st.B[2][i]));
        std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g,%.17g,%.17g\n", st.time,
                      bi_theta_integral(st.B, p), max_magnitude(st.v),
                      max_spectral_divergence(st.B), edotb);
        csv << buf;
    };
    write_row(s);
    for (int step = 1; step <= nsteps; ++step) {
        s = bi_step(s, pstep);
        write_row(s);
        if (step % p.snap_every == 0 || step == nsteps) {
            std::snprintf(buf, sizeof(buf), "B_%06d", step);
            write_snapshot(out, to_snapshot(s.B, buf, s.time));
        }
    }
    if (cfg.emit_plotscript) emit_plotscript(out, {"ledger.csv"});
    man.body["verdicts"]["final_theta"] = bi_theta_integral(s.B, p);
    man.finish(0);
    return 0;
}

int run_krtest(const RunConfig& cfg, ManifestWriter& man, const std::string& out) {
    fs::create_directories(out);
    std::vector<VecField2> fields;
    MreParams fp;
    fp.n = cfg.krtest.n;
    fp.initial = cfg.krtest.field;
    if (cfg.krtest.field == "random") {
        for (int i = 0; i < cfg.krtest.count; ++i) {
            fp.seed = cfg.seed + static_cast<std::uint64_t>(i);
            fields.push_back(initial_field(fp));
        }
    } else {
        fp.seed = cfg.seed;
        fields.push_back(initial_field(fp));
    }

    json results = json::array();
    bool all_bounded = true;
    for (std::size_t fi = 0; fi < fields.size(); ++fi) {
        const VecField2& B = fields[fi];
        const double energy = magnetic_energy(B);
        const double L = euler_residual(B);
        json entry;
        entry["field_index"] = fi;
        entry["energy"] = energy;
        entry["euler_residual"] = L;
        json krs = json::array();
        for (double r : cfg.krtest.r) {
            const KrEstimate est = kr_maximize(B, r, cfg.krtest.budget);
            krs.push_back(json::parse(est.to_json()));
            all_bounded = all_bounded && est.value >= r * energy - 1e-10;
            char name[64];
            std::snprintf(name, sizeof(name), "witness_f%zu_r%g", fi, r);
            write_snapshot(out, to_snapshot(est.witness.z, name, 0.0));
        }
        entry["kr"] = krs;
        entry["recover_L"] = recover_L(B, cfg.krtest.r, cfg.krtest.budget);
        results.push_back(entry);
    }
    {
        std::ofstream rj(fs::path(out) / "krtest.json");
        rj << results.dump(2) << "\n";
    }
    man.body["verdicts"]["lower_bound_holds"] = all_bounded;
    man.finish(0);
    return 0;
}

} // namespace

const char* relaxlab_version() { return "0.1.0"; }

std::string resolve_out_dir(const std::string& out_dir) {
    fs::path p(out_dir);
    if (p.is_absolute()) return p.string();
    const char* root = std::getenv("RELAXLAB_OUT");
    if (root && *root) return (fs::path(root) / p).string();
    return p.string();
}

std::vector<VecField2> weak_metric_dictionary(const Grid2& g, int count) {
    std::vector<VecField2> dict;
    const int wavevecs[16][2] = {{1, 0},  {0, 1},  {1, 1},  {1, -1}, {2, 0},  {0, 2},
                                 {2, 1},  {1, 2},  {2, -1}, {-1, 2}, {2, 2},  {3, 0},
                                 {0, 3},  {3, 1},  {1, 3},  {2, -2}};
    for (int i = 0; i < count && i < 16; ++i) {
        const int k1 = wavevecs[i][0], k2 = wavevecs[i][1];
        const bool use_sin = i % 2 == 0;
        ScalarField2 psi = sample_scalar<2>(g, [&](const std::array<double, 2>& x) {
            const double phase = TWO_PI * (k1 * x[0] + k2 * x[1]);
            return (use_sin ? std::sin(phase) : std::cos(phase)) / TWO_PI;
        });
        dict.push_back(grad_perp(psi));
    }
    return dict;
}

double weak_distance(const Trajectory& a, const Trajectory& b,
                     const std::vector<VecField2>& dict, int samples) {
    const std::size_t M = std::min(a.snapshots.size(), b.snapshots.size());
    if (M < 2) throw IncompleteTrajectory("weak_distance: too few snapshots");
    double acc = 0.0;
    int terms = 0;
    const int step = std::max<std::size_t>(1, M / samples);
    for (std::size_t i = 0; i < M; i += step) {
        if (std::abs(a.snapshots[i].time - b.snapshots[i].time) > 1e-9)
            throw IncompleteTrajectory("weak_distance: snapshot times differ");
        VecField2 diff = a.snapshots[i].B;
        diff -= b.snapshots[i].B;
        for (const auto& phi : dict) {
            const double ip = l2_inner(diff, phi);
            acc += ip * ip;
            ++terms;
        }
    }
    return std::sqrt(acc / terms);
}

int execute(const RunConfig& cfg) {
    const std::string out = resolve_out_dir(cfg.out_dir);
    ManifestWriter man(out, cfg);
    try {
        if (cfg.experiment == "mre") return run_mre(cfg, man, out);
        if (cfg.experiment == "sweep") return run_sweep(cfg, man, out);
        if (cfg.experiment == "certify") return run_certify(cfg, man, out);
        if (cfg.experiment == "heat" || cfg.experiment == "relativistic")
            return run_heat(cfg, man, out);
        if (cfg.experiment == "bi") return run_bi(cfg, man, out);
        if (cfg.experiment == "krtest") return run_krtest(cfg, man, out);
        man.finish(1, "unknown experiment " + cfg.experiment);
        return 1;
    } catch (const ConfigError& e) {
        man.finish(1, e.what());
        return 1;
    } catch (const CertificateFailure& e) {
        man.finish(3, e.what());
        return 3;
    } catch (const std::exception& e) {
        man.finish(2, e.what());
        return 2;
    }
}

} // namespace relax
