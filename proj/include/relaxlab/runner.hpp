#ifndef RELAXLAB_RUNNER_HPP
#define RELAXLAB_RUNNER_HPP

#include <string>
#include <vector>

#include "relaxlab/certify.hpp"
#include "relaxlab/config.hpp"

namespace relax {

const char* relaxlab_version();

// Output root: $RELAXLAB_OUT when set, else the working directory; relative
// out_dir values are joined onto it.
std::string resolve_out_dir(const std::string& out_dir);

// Runs the configured experiment, writes ledgers/snapshots/certificates and
// a manifest (the manifest is written on failure paths too). Returns the
// process exit code: 0 ok, 1 config, 2 numeric failure, 3 failed certificate.
int execute(const RunConfig& cfg);

// Divergence-free trigonometric dictionary for the weak sweep metric.
std::vector<VecField2> weak_metric_dictionary(const Grid2& g, int count = 16);

// RMS of inner products of (B_a - B_b) against the dictionary over the
// common snapshot times (up to `samples` evenly spaced).
double weak_distance(const Trajectory& a, const Trajectory& b,
                     const std::vector<VecField2>& dict, int samples = 32);

} // namespace relax

#endif
