#ifndef RELAXLAB_GRADFLOW_HPP
#define RELAXLAB_GRADFLOW_HPP

#include <array>
#include <functional>
#include <optional>
#include <vector>

#include "relaxlab/ops.hpp"

namespace relax {

using Vec3 = std::array<double, 3>;

inline double dot3(const Vec3& a, const Vec3& b) {
    return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}
inline double norm_sq3(const Vec3& a) { return dot3(a, a); }

// Extended-real Lagrangian (E,B) -> L, convex in E, +inf outside its domain.
struct LagrangianSpec {
    int dim = 3;  // active components of E
    std::function<double(const Vec3& E, const Vec3& B)> L;
    std::function<double(const Vec3& D, const Vec3& B)> conjugate;  // optional closed form
};

struct LegendreOptions {
    double radius = 3.0;       // initial half-width of the search box
    int points_per_axis = 101;
    int max_expansions = 3;
};

// Brute-force sup_E E.D - L(E,B) over an expanding grid with one 10x local
// refinement. This is the independent oracle the closed forms are checked
// against elsewhere.
double legendre_transform(const LagrangianSpec& spec, const Vec3& D, const Vec3& B,
                          const LegendreOptions& opt = {});

// Fenchel-Young defect L(E,B) + H(D,B) - E.D >= 0, zero exactly at the dual
// pairing E = dH/dD.
double defect(const LagrangianSpec& specL,
              const std::function<double(const Vec3&, const Vec3&)>& H, const Vec3& B,
              const Vec3& E, const Vec3& D);

// ---- scalar diffusion family: d rho/dt = div(rho grad c*(grad theta'(rho))) ----

struct EntropySpec {
    std::function<double(double)> theta;
    std::function<double(double)> theta_prime;
    std::function<double(double)> theta_second;
};

struct MobilityCost {
    std::function<double(const std::array<double, 2>&)> c;      // +inf outside domain
    std::function<double(const std::array<double, 2>&)> cstar;  // closed-form conjugate
    std::function<std::array<double, 2>(const std::array<double, 2>&)> grad_cstar;
    double speed_limit = std::numeric_limits<double>::infinity();  // bound on |grad c*|
};

EntropySpec boltzmann_entropy();
MobilityCost quadratic_cost();
MobilityCost relativistic_cost();

struct ScalarDiffusionProblem {
    Grid2 grid;
    EntropySpec entropy;
    MobilityCost cost;
    ScalarField2 rho;

    static ScalarDiffusionProblem heat(const Grid2& g, ScalarField2 rho0);
    static ScalarDiffusionProblem relativistic(const Grid2& g, ScalarField2 rho0);
};

// Fluxes on the west (qx) and south (qy) face of each cell.
struct FaceFlux {
    ScalarField2 qx, qy;
};

struct DiffusionStepResult {
    ScalarField2 rho;
    FaceFlux flux;        // time-averaged over internal substeps
    double max_speed = 0.0;  // max |grad c*| seen at faces
    int rejections = 0;
};

// Conservative finite-volume step with centered face mobility (donor-cell
// upwinding near the speed limit). Mass is conserved by construction;
// positivity loss rejects the step and halves the internal substep, up to
// 20 rejections.
DiffusionStepResult scalar_diffusion_step(const ScalarDiffusionProblem& prob, double dt);

VecField2 face_to_cell(const FaceFlux& flux);

struct ScalarTrajPoint {
    double time = 0.0;
    ScalarField2 rho;
    VecField2 q_cell;
    std::optional<FaceFlux> q_face;  // present for solver-produced trajectories
};
using ScalarTrajectory = std::vector<ScalarTrajPoint>;

struct HvOptions {
    double admissibility_tol = 1e-8;
    bool enforce_admissibility = true;
};

// Largest discrete continuity residual |d rho/dt + div q| over the
// trajectory; face fluxes use the scheme divergence, cell data a spectral
// divergence with 4th-order time differencing.
double continuity_residual(const ScalarTrajectory& traj);

// Per-checkpoint value of 2 d/dt int(rho log rho) + int |q|^2/rho
// + int |grad rho|^2/rho; nonpositive exactly on heat trajectories.
std::vector<double> hv_residual(const ScalarTrajectory& traj, const HvOptions& opt = {});

// d/dt int theta(rho) + int (L(q,rho) + H(grad theta'(rho), rho)) for the
// k = d reduction of the differential-form framework. Other degrees are
// handled by the Born-Infeld module (k=2, d=3) or rejected.
std::vector<double> general_dissipation_residual(int k, int d, const ScalarTrajectory& traj,
                                                 const EntropySpec& entropy,
                                                 const MobilityCost& cost,
                                                 const HvOptions& opt = {});

} // namespace relax

#endif
