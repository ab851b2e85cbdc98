// relaxlab command-line driver. Talks to the core exclusively through the
// C API in relaxlab/relaxlab.h.

#include <cstdio>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "relaxlab/relaxlab.h"

namespace {

struct CommonOpts {
    std::string config;
    std::string out;
    std::string seed;
    int threads = 0;
    bool plotscript = false;
};

void add_common(CLI::App* cmd, CommonOpts& o) {
    cmd->add_option("--config", o.config, "JSON config file");
    cmd->add_option("--out", o.out, "output directory (overrides config)");
    cmd->add_option("--seed", o.seed, "RNG seed (overrides config)");
    cmd->add_option("--threads", o.threads, "worker threads for sweeps");
    cmd->add_flag("--emit-plotscript", o.plotscript, "write a gnuplot script next to the CSVs");
}

int fail_with(rlx_status st) {
    std::fprintf(stderr, "relaxlab: %s\n", rlx_last_error());
    switch (st) {
        case RLX_ERR_CONFIG:
        case RLX_ERR_INVALID_ARGUMENT:
            return 1;
        case RLX_ERR_CERTIFICATE:
            return 3;
        default:
            return 2;
    }
}

bool experiment_allowed(const std::string& sub, const std::string& tag) {
    if (sub == "run") return tag == "mre";
    if (sub == "heat") return tag == "heat" || tag == "relativistic";
    return tag == sub;
}

int run_subcommand(const std::string& sub, const CommonOpts& o,
                   const std::vector<std::pair<std::string, std::string>>& extra) {
    rlx_config* cfg = nullptr;
    rlx_status st;
    if (!o.config.empty()) {
        st = rlx_config_load(o.config.c_str(), &cfg);
    } else {
        const std::string tag = sub == "run" ? "mre" : sub;
        st = rlx_config_default(tag.c_str(), &cfg);
    }
    if (st != RLX_OK) return fail_with(st);

    const std::string tag = rlx_config_experiment(cfg);
    if (!experiment_allowed(sub, tag)) {
        std::fprintf(stderr, "relaxlab: config experiment \"%s\" does not match subcommand \"%s\"\n",
                     tag.c_str(), sub.c_str());
        rlx_config_free(cfg);
        return 1;
    }

    auto set = [&](const char* key, const std::string& value) {
        if (st == RLX_OK) st = rlx_config_set(cfg, key, value.c_str());
    };
    if (!o.out.empty()) set("out_dir", o.out);
    if (!o.seed.empty()) set("seed", o.seed);
    if (o.threads > 0) set("threads", std::to_string(o.threads));
    if (o.plotscript) set("emit_plotscript", "true");
    for (const auto& [k, v] : extra) set(k.c_str(), v);
    if (st != RLX_OK) {
        const int code = fail_with(st);
        rlx_config_free(cfg);
        return code;
    }

    st = rlx_execute(cfg);
    rlx_config_free(cfg);
    if (st != RLX_OK) return fail_with(st);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{std::string("relaxlab ") + rlx_version() +
                 " - periodic-domain magnetic relaxation toolkit"};
    app.require_subcommand(1);

    CommonOpts run_o, sweep_o, certify_o, heat_o, bi_o, kr_o;
    std::string certify_traj, certify_r, certify_witness, bi_demo, kr_field;
    int certify_budget = 0, kr_budget = 0;
    double certify_tol = 0.0;

    CLI::App* run = app.add_subcommand("run", "integrate the regularized MHD system");
    add_common(run, run_o);

    CLI::App* sweep = app.add_subcommand("sweep", "run the vanishing-parameter sweep");
    add_common(sweep, sweep_o);

    CLI::App* certify = app.add_subcommand("certify", "check dissipation certificates");
    add_common(certify, certify_o);
    certify->add_option("--traj", certify_traj, "trajectory directory to certify");
    certify->add_option("--r", certify_r, "comma-separated r values (e.g. 0,1,5)");
    certify->add_option("--budget", certify_budget, "ascent budget per witness");
    certify->add_option("--tolerance", certify_tol, "pass tolerance");
    certify->add_option("--witness", certify_witness, "witness family: zero|ascent");

    CLI::App* heat = app.add_subcommand("heat", "scalar diffusion demos (heat/relativistic)");
    add_common(heat, heat_o);

    CLI::App* bi = app.add_subcommand("bi", "Born-Infeld diffusion demos");
    add_common(bi, bi_o);
    bi->add_option("--demo", bi_demo, "demo: run|maxwell-limit");

    CLI::App* kr = app.add_subcommand("krtest", "dual lower-bound estimates for K_r");
    add_common(kr, kr_o);
    kr->add_option("--budget", kr_budget, "ascent budget");
    kr->add_option("--field", kr_field, "test field: shear|eigen|ot|random");

    CLI11_PARSE(app, argc, argv);

    std::vector<std::pair<std::string, std::string>> extra;
    if (run->parsed()) return run_subcommand("run", run_o, extra);
    if (sweep->parsed()) return run_subcommand("sweep", sweep_o, extra);
    if (certify->parsed()) {
        if (!certify_traj.empty()) extra.emplace_back("certify.traj", certify_traj);
        if (!certify_r.empty()) {
            std::string arr = "[";
            for (char c : certify_r) arr += c == ' ' ? ',' : c;
            arr += "]";
            extra.emplace_back("certify.r", arr);
        }
        if (certify_budget > 0) extra.emplace_back("certify.budget", std::to_string(certify_budget));
        if (certify_tol > 0.0) extra.emplace_back("certify.tolerance", std::to_string(certify_tol));
        if (!certify_witness.empty()) extra.emplace_back("certify.witness", certify_witness);
        return run_subcommand("certify", certify_o, extra);
    }
    if (heat->parsed()) return run_subcommand("heat", heat_o, extra);
    if (bi->parsed()) {
        if (!bi_demo.empty()) extra.emplace_back("bi.demo", bi_demo);
        return run_subcommand("bi", bi_o, extra);
    }
    if (kr->parsed()) {
        if (kr_budget > 0) extra.emplace_back("krtest.budget", std::to_string(kr_budget));
        if (!kr_field.empty()) extra.emplace_back("krtest.field", kr_field);
        return run_subcommand("krtest", kr_o, extra);
    }
    return 1;
}
