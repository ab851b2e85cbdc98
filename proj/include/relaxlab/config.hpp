#ifndef RELAXLAB_CONFIG_HPP
#define RELAXLAB_CONFIG_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "relaxlab/born_infeld.hpp"
#include "relaxlab/mhd.hpp"

namespace relax {

struct SweepParams {
    MreParams base;
    double eps0 = 0.1, mu0 = 0.1, nu0 = 0.1;
    int levels = 4;
    double factor = 0.25;
};

struct CertifyParams {
    std::string traj;
    std::vector<double> r{0.0, 1.0, 5.0};
    int budget = 500;
    double tolerance = 1e-6;
    std::string witness = "zero";  // zero | ascent
};

struct HeatParams {
    int n = 128;
    double dt = 1e-5;
    double t_final = 0.01;
    double amplitude = 0.5;
    int snap_every = 100;
};

struct KrTestParams {
    int n = 64;
    std::vector<double> r{0.0, 1.0, 5.0};
    int budget = 500;
    std::string field = "ot";  // shear | eigen | ot | random
    int count = 20;
};

// Schema-validated run configuration; unknown keys are rejected with a
// suggestion, and all violations are reported together.
struct RunConfig {
    std::string experiment;  // mre|sweep|certify|heat|relativistic|bi|krtest
    std::string out_dir;
    std::uint64_t seed = 0;
    int threads = 1;
    bool emit_plotscript = false;

    MreParams mre;
    SweepParams sweep;
    CertifyParams certify;
    HeatParams heat;
    BiParams bi;
    std::string bi_demo = "run";  // run | maxwell-limit
    KrTestParams krtest;

    std::string echo;  // canonical JSON echo for the manifest
};

RunConfig parse_config(const std::string& path);
RunConfig parse_config_text(const std::string& json_text);

// Minimal valid config text for an experiment tag (defaults filled on parse).
std::string default_config_text(const std::string& experiment);

} // namespace relax

#endif
