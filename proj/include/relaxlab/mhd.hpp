#ifndef RELAXLAB_MHD_HPP
#define RELAXLAB_MHD_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "relaxlab/field_io.hpp"
#include "relaxlab/functionals.hpp"

namespace relax {

struct MreParams {
    double epsilon = 0.0;   // inertia
    double mu = 1e-2;       // viscosity
    double nu = 0.0;        // magnetic diffusivity
    double dt = 1e-3;
    double t_final = 1.0;
    int n = 64;
    std::uint64_t seed = 0;
    std::string initial = "shear";   // shear | eigen | ot | random
    double amplitude = 1.0;
    std::string form = "primitive";  // primitive | potential
    int snap_every = 50;             // steps between snapshots
    int lb_every = 1;                // steps between L(B) evaluations

    void validate() const;
};

struct MhdState {
    double time = 0.0;
    VecField2 B;
    VecField2 v;
    std::optional<ScalarField2> A;  // present in potential-form runs
};

struct LedgerRow {
    double time = 0.0;
    double B2 = 0.0;          // ||B||^2 at `time`
    double epsv2 = 0.0;       // eps ||v||^2 at `time`
    double v2 = 0.0;          // step-midpoint ||v||^2 (row 0: instantaneous)
    double mu_gradv2 = 0.0;   // step-midpoint mu ||grad v||^2
    double nu_gradB2 = 0.0;   // step-midpoint nu ||grad B||^2
    double LB = 0.0;          // L(B) at `time` (sample-and-hold between evaluations)
    double res_total = 0.0;   // discrete energy-balance residual of the step
    double res_mom = 0.0;     // momentum-estimate residual
    double res_ind = 0.0;     // induction-estimate residual
};

struct Ledger {
    std::vector<LedgerRow> rows;

    void write_csv(const std::string& path) const;
    static Ledger read_csv(const std::string& path);
};

struct TrajectorySnapshot {
    double time = 0.0;
    VecField2 B;
    VecField2 v;
    std::optional<ScalarField2> A;
};

struct Trajectory {
    MreParams params;
    Ledger ledger;
    std::vector<TrajectorySnapshot> snapshots;
    bool failed = false;     // a numeric failure aborted the run
    std::string error;       // failure message; ledger holds the partial run

    void save(const std::string& dir) const;
    static Trajectory load(const std::string& dir);
};

// Build the initial magnetic field from the initial-condition library.
VecField2 initial_field(const MreParams& p);
// Vector potential of the initial field where one is defined analytically
// (shear, eigen, ot) or via the stream function (random).
ScalarField2 initial_potential(const MreParams& p);

// v - mu lap v + grad p = div(B (x) B), div v = 0; mode-wise solve.
// At mu = 0 this is exactly the projected Lorentz force.
VecField2 quasi_static_velocity(const VecField2& B, double mu);

// One step of the regularized MHD system. Linear terms are trapezoidal and
// diagonal in spectral space; the quadratic terms are evaluated at the step
// midpoint through a (linearly convergent) fixed point, which makes the
// discrete energy balance exact to rounding and the total energy strictly
// nonincreasing.
MhdState mhd_step(const MhdState& s, const MreParams& p);

Trajectory run_mhd(const MreParams& p);

// Scalar transport of the 2D vector potential: dA/dt + div(A v) = nu lap A.
// Spectral advection (RK4) composed with the exact diffusion factor.
ScalarField2 potential_advect_step(const ScalarField2& A, const VecField2& v, double nu,
                                   double dt);

struct EnergyBalance {
    std::vector<double> res_total;  // recomputed from the ledger columns
    std::vector<double> res_mom;    // stored split residuals
    std::vector<double> res_ind;
};

// Residual of d/dt int((|B|^2+eps|v|^2)/2) + int|v|^2 + mu int|grad v|^2
// + nu int|grad B|^2 per step, using the midpoint dissipation columns.
EnergyBalance energy_balance_residual(const Trajectory& traj);

// Histogram of A over fixed bins, normalized to total mass one.
std::vector<double> potential_histogram(const ScalarField2& A, int bins, double lo, double hi);
double total_variation(const std::vector<double>& p, const std::vector<double>& q);

} // namespace relax

#endif
