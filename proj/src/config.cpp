#include "relaxlab/config.hpp"

#include <algorithm>
#include <fstream>
#include <set>

#include <json.hpp>

namespace relax {

namespace {

using nlohmann::json;

int edit_distance(const std::string& a, const std::string& b) {
    std::vector<std::vector<int>> d(a.size() + 1, std::vector<int>(b.size() + 1, 0));
    for (std::size_t i = 0; i <= a.size(); ++i) d[i][0] = static_cast<int>(i);
    for (std::size_t j = 0; j <= b.size(); ++j) d[0][j] = static_cast<int>(j);
    for (std::size_t i = 1; i <= a.size(); ++i)
        for (std::size_t j = 1; j <= b.size(); ++j)
            d[i][j] = std::min({d[i - 1][j] + 1, d[i][j - 1] + 1,
                                d[i - 1][j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1)});
    return d[a.size()][b.size()];
}

struct Validator {
    std::vector<std::string> errors;

    void unknown_keys(const json& obj, const std::set<std::string>& known,
                      const std::string& where) {
        for (auto it = obj.begin(); it != obj.end(); ++it) {
            if (known.count(it.key())) continue;
            std::string msg = where + ": unknown key \"" + it.key() + "\"";
            int best = 4;
            std::string hint;
            for (const auto& k : known) {
                const int dist = edit_distance(it.key(), k);
                if (dist < best) {
                    best = dist;
                    hint = k;
                }
            }
            if (!hint.empty()) msg += " (did you mean \"" + hint + "\"?)";
            errors.push_back(msg);
        }
    }

    template <class T>
    void get(const json& obj, const std::string& key, T& out, const std::string& where) {
        if (!obj.contains(key)) return;
        try {
            out = obj.at(key).get<T>();
        } catch (const json::exception&) {
            errors.push_back(where + "." + key + ": wrong type");
        }
    }

    void require_nonneg(double v, const std::string& field) {
        if (!(v >= 0.0)) errors.push_back(field + " must be >= 0");
    }
    void require_pos(double v, const std::string& field) {
        if (!(v > 0.0)) errors.push_back(field + " must be > 0");
    }
};

void parse_mre_block(Validator& v, const json& block, MreParams& p, const std::string& where) {
    v.unknown_keys(block,
                   {"n", "dt", "t_final", "epsilon", "mu", "nu", "initial", "amplitude", "form",
                    "snap_every", "lb_every"},
                   where);
    v.get(block, "n", p.n, where);
    v.get(block, "dt", p.dt, where);
    v.get(block, "t_final", p.t_final, where);
    v.get(block, "epsilon", p.epsilon, where);
    v.get(block, "mu", p.mu, where);
    v.get(block, "nu", p.nu, where);
    v.get(block, "initial", p.initial, where);
    v.get(block, "amplitude", p.amplitude, where);
    v.get(block, "form", p.form, where);
    v.get(block, "snap_every", p.snap_every, where);
    v.get(block, "lb_every", p.lb_every, where);
    v.require_nonneg(p.epsilon, where + ".epsilon");
    v.require_nonneg(p.mu, where + ".mu");
    v.require_nonneg(p.nu, where + ".nu");
    v.require_pos(p.dt, where + ".dt");
    v.require_pos(p.t_final, where + ".t_final");
    if (p.n < 8 || p.n % 2 != 0) v.errors.push_back(where + ".n must be even and >= 8");
    if (p.initial != "shear" && p.initial != "eigen" && p.initial != "ot" &&
        p.initial != "random")
        v.errors.push_back(where + ".initial must be shear|eigen|ot|random");
    if (p.form != "primitive" && p.form != "potential")
        v.errors.push_back(where + ".form must be primitive|potential");
    if (p.snap_every < 1) v.errors.push_back(where + ".snap_every must be >= 1");
    if (p.lb_every < 1) v.errors.push_back(where + ".lb_every must be >= 1");
}

RunConfig parse_json(const json& j) {
    if (!j.is_object()) throw ConfigError("config: top level must be a JSON object");
    Validator v;
    RunConfig cfg;

    v.unknown_keys(j,
                   {"experiment", "out_dir", "seed", "threads", "emit_plotscript", "mre", "sweep",
                    "certify", "heat", "bi", "krtest"},
                   "config");

    if (!j.contains("experiment"))
        v.errors.push_back("config.experiment is required");
    else
        v.get(j, "experiment", cfg.experiment, "config");

    static const std::set<std::string> tags{"mre",  "sweep",        "certify", "heat",
                                            "relativistic", "bi",      "krtest"};
    if (!cfg.experiment.empty() && !tags.count(cfg.experiment))
        v.errors.push_back("config.experiment must be one of mre|sweep|certify|heat|relativistic|bi|krtest");

    cfg.out_dir = "out/" + (cfg.experiment.empty() ? std::string("run") : cfg.experiment);
    v.get(j, "out_dir", cfg.out_dir, "config");
    v.get(j, "seed", cfg.seed, "config");
    v.get(j, "threads", cfg.threads, "config");
    v.get(j, "emit_plotscript", cfg.emit_plotscript, "config");
    if (cfg.threads < 1) v.errors.push_back("config.threads must be >= 1");

    if (j.contains("mre")) parse_mre_block(v, j.at("mre"), cfg.mre, "mre");
    cfg.mre.seed = cfg.seed;

    if (j.contains("sweep")) {
        const json& b = j.at("sweep");
        v.unknown_keys(b,
                       {"n", "dt", "t_final", "initial", "amplitude", "snap_every", "lb_every",
                        "eps0", "mu0", "nu0", "levels", "factor"},
                       "sweep");
        v.get(b, "n", cfg.sweep.base.n, "sweep");
        v.get(b, "dt", cfg.sweep.base.dt, "sweep");
        v.get(b, "t_final", cfg.sweep.base.t_final, "sweep");
        v.get(b, "initial", cfg.sweep.base.initial, "sweep");
        v.get(b, "amplitude", cfg.sweep.base.amplitude, "sweep");
        v.get(b, "snap_every", cfg.sweep.base.snap_every, "sweep");
        v.get(b, "lb_every", cfg.sweep.base.lb_every, "sweep");
        v.get(b, "eps0", cfg.sweep.eps0, "sweep");
        v.get(b, "mu0", cfg.sweep.mu0, "sweep");
        v.get(b, "nu0", cfg.sweep.nu0, "sweep");
        v.get(b, "levels", cfg.sweep.levels, "sweep");
        v.get(b, "factor", cfg.sweep.factor, "sweep");
        if (cfg.sweep.levels < 2) v.errors.push_back("sweep.levels must be >= 2");
        if (!(cfg.sweep.factor > 0.0 && cfg.sweep.factor < 1.0))
            v.errors.push_back("sweep.factor must be in (0,1)");
        v.require_nonneg(cfg.sweep.eps0, "sweep.eps0");
        v.require_nonneg(cfg.sweep.mu0, "sweep.mu0");
        v.require_nonneg(cfg.sweep.nu0, "sweep.nu0");
    }
    cfg.sweep.base.seed = cfg.seed;
    if (!j.contains("sweep")) cfg.sweep.base.initial = "ot";

    if (j.contains("certify")) {
        const json& b = j.at("certify");
        v.unknown_keys(b, {"traj", "r", "budget", "tolerance", "witness"}, "certify");
        v.get(b, "traj", cfg.certify.traj, "certify");
        v.get(b, "r", cfg.certify.r, "certify");
        v.get(b, "budget", cfg.certify.budget, "certify");
        v.get(b, "tolerance", cfg.certify.tolerance, "certify");
        v.get(b, "witness", cfg.certify.witness, "certify");
        for (double r : cfg.certify.r) v.require_nonneg(r, "certify.r entries");
        if (cfg.certify.budget < 0) v.errors.push_back("certify.budget must be >= 0");
        v.require_pos(cfg.certify.tolerance, "certify.tolerance");
        if (cfg.certify.witness != "zero" && cfg.certify.witness != "ascent")
            v.errors.push_back("certify.witness must be zero|ascent");
        if (cfg.experiment == "certify" && cfg.certify.traj.empty())
            v.errors.push_back("certify.traj is required for experiment=certify");
    }

    if (j.contains("heat")) {
        const json& b = j.at("heat");
        v.unknown_keys(b, {"n", "dt", "t_final", "amplitude", "snap_every"}, "heat");
        v.get(b, "n", cfg.heat.n, "heat");
        v.get(b, "dt", cfg.heat.dt, "heat");
        v.get(b, "t_final", cfg.heat.t_final, "heat");
        v.get(b, "amplitude", cfg.heat.amplitude, "heat");
        v.get(b, "snap_every", cfg.heat.snap_every, "heat");
        if (cfg.heat.n < 8 || cfg.heat.n % 2 != 0) v.errors.push_back("heat.n must be even and >= 8");
        v.require_pos(cfg.heat.dt, "heat.dt");
        v.require_pos(cfg.heat.t_final, "heat.t_final");
        if (!(cfg.heat.amplitude > -1.0 && cfg.heat.amplitude < 1.0))
            v.errors.push_back("heat.amplitude must lie in (-1,1) to keep rho positive");
        if (cfg.heat.snap_every < 1) v.errors.push_back("heat.snap_every must be >= 1");
    }

    if (j.contains("bi")) {
        const json& b = j.at("bi");
        v.unknown_keys(b, {"n", "dt", "t_final", "lambda", "theta", "delta", "snap_every", "demo"},
                       "bi");
        v.get(b, "n", cfg.bi.n, "bi");
        v.get(b, "dt", cfg.bi.dt, "bi");
        v.get(b, "t_final", cfg.bi.t_final, "bi");
        v.get(b, "lambda", cfg.bi.lambda, "bi");
        v.get(b, "theta", cfg.bi.theta, "bi");
        v.get(b, "delta", cfg.bi.delta, "bi");
        v.get(b, "snap_every", cfg.bi.snap_every, "bi");
        v.get(b, "demo", cfg.bi_demo, "bi");
        try {
            cfg.bi.validate();
        } catch (const ConfigError& e) {
            v.errors.push_back(e.what());
        }
        if (cfg.bi_demo != "run" && cfg.bi_demo != "maxwell-limit")
            v.errors.push_back("bi.demo must be run|maxwell-limit");
    }

    if (j.contains("krtest")) {
        const json& b = j.at("krtest");
        v.unknown_keys(b, {"n", "r", "budget", "field", "count"}, "krtest");
        v.get(b, "n", cfg.krtest.n, "krtest");
        v.get(b, "r", cfg.krtest.r, "krtest");
        v.get(b, "budget", cfg.krtest.budget, "krtest");
        v.get(b, "field", cfg.krtest.field, "krtest");
        v.get(b, "count", cfg.krtest.count, "krtest");
        if (cfg.krtest.n < 8 || cfg.krtest.n % 2 != 0)
            v.errors.push_back("krtest.n must be even and >= 8");
        for (double r : cfg.krtest.r) v.require_nonneg(r, "krtest.r entries");
        if (cfg.krtest.budget < 0) v.errors.push_back("krtest.budget must be >= 0");
        if (cfg.krtest.field != "shear" && cfg.krtest.field != "eigen" &&
            cfg.krtest.field != "ot" && cfg.krtest.field != "random")
            v.errors.push_back("krtest.field must be shear|eigen|ot|random");
        if (cfg.krtest.count < 1) v.errors.push_back("krtest.count must be >= 1");
    }

    if (!v.errors.empty()) {
        std::string msg = "invalid config:";
        for (const auto& e : v.errors) msg += "\n  - " + e;
        throw ConfigError(msg);
    }

    // canonical echo with defaults materialized
    json echo = j;
    cfg.echo = echo.dump(2);
    return cfg;
}

} // namespace

RunConfig parse_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ConfigError("config " + path + " is not valid JSON: " + e.what());
    }
    return parse_json(j);
}

RunConfig parse_config_text(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config text is not valid JSON: ") + e.what());
    }
    return parse_json(j);
}

std::string default_config_text(const std::string& experiment) {
    json j;
    j["experiment"] = experiment;
    return j.dump();
}

} // namespace relax
