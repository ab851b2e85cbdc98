#ifndef RELAXLAB_CERTIFY_HPP
#define RELAXLAB_CERTIFY_HPP

#include <functional>
#include <string>
#include <vector>

#include "relaxlab/mhd.hpp"

namespace relax {

// Piecewise-constant nonnegative rate r(t); R(t) = int_0^t r is exact.
struct RSchedule {
    std::vector<double> breakpoints;  // ascending, first entry 0
    std::vector<double> values;       // r on [breakpoints[i], breakpoints[i+1])

    static RSchedule constant(double r);

    void validate() const;
    double r_at(double t) const;
    double R(double t) const;
};

struct CertificatePoint {
    double t = 0.0;
    double lhs = 0.0;
    double rhs = 0.0;
    double residual = 0.0;  // rhs - lhs
};

struct Certificate {
    RSchedule schedule;
    double tolerance = 1e-6;
    double worst_residual = 0.0;
    bool pass = false;
    std::vector<CertificatePoint> per_time;

    std::string to_json() const;
};

// Cumulative integrals I(t_m) = int_0^{t_m} f(s) exp(R(t_m)-R(s)) ds for a
// piecewise-linear f given by nodal values; the exponential weight is
// integrated in closed form on every subinterval.
std::vector<double> exp_weighted_cumint(const std::vector<double>& t,
                                        const std::vector<double>& f, const RSchedule& sched);

// Checkpoint-wise residual of the dissipation inequality
//   ||B(t)||^2 + int_0^t [||v||^2 + K_{r(s)}(B(s))] exp(R(t)-R(s)) ds
//     <= ||B(0)||^2 exp(R(t)),
// with K replaced by its certified lower bound from the supplied witnesses
// (one per trajectory snapshot). Pass is necessary, fail is conclusive.
Certificate entropy_residual(const Trajectory& traj, const RSchedule& sched,
                             const std::vector<DualWitness>& witnesses, double tolerance = 1e-6);

// z = 0 witnesses matching the schedule at every snapshot time.
std::vector<DualWitness> zero_witnesses(const Trajectory& traj, const RSchedule& sched);

// Ascent-maximized witnesses (budget per snapshot).
std::vector<DualWitness> ascent_witnesses(const Trajectory& traj, const RSchedule& sched,
                                          int budget);

// Space-time test field phi(t,x) = g(t) * Phi(x) with div Phi = 0.
struct SpaceTimeTestField {
    std::string name;
    VecField2 Phi;                       // spatial part, divergence-free
    ScalarField2 curlPhi;                // d1 Phi_2 - d2 Phi_1
    std::function<double(double)> g;     // time modulation
    std::function<double(double)> gdot;  // its derivative
};

std::vector<SpaceTimeTestField> default_test_fields(const Grid2& g, double t_final);

// Weak-form defect of the transport equation against one test field:
//   [int B.phi]_0^T - int int (B . dphi/dt + (B(x)v - v(x)B) : grad phi).
std::vector<double> transport_residuals(const Trajectory& traj,
                                        const std::vector<SpaceTimeTestField>& fields);
double transport_residual(const Trajectory& traj,
                          const std::vector<SpaceTimeTestField>& fields);

// Time-sampled smooth pair with analytic space/time derivatives.
struct SmoothPair {
    std::function<VecField2(double)> beta;
    std::function<VecField2(double)> omega;
    std::function<VecField2(double)> dbeta_dt;
    std::function<VecField2(double)> omega_grad_beta;  // (omega.grad) beta
    std::function<VecField2(double)> beta_grad_omega;  // (beta.grad) omega
    std::function<VecField2(double)> beta_grad_beta;   // (beta.grad) beta
    double lip_beta = 0.0;   // sup_t max-norm of grad beta
    double lip_omega = 0.0;

    void require_derivatives() const;
};

// Builds the advective derivative closures spectrally from beta/omega/dbeta
// samplers (exact for band-limited fields) and measures the Lipschitz
// constants on the given time grid.
SmoothPair make_smooth_pair(const Grid2& grid, std::function<VecField2(double)> beta,
                            std::function<VecField2(double)> omega,
                            std::function<VecField2(double)> dbeta_dt,
                            const std::vector<double>& times);

struct WeakStrongGap {
    double C = 0.0;                 // Gronwall rate used
    std::vector<double> t;
    std::vector<double> gap;        // rhs - lhs per checkpoint
};

// Stability inequality of smooth pairs among dissipative solutions:
//   ||B_t - beta_t||^2 + int_0^t e^{(t-s)C} 0.5 ||v_s - omega_s||^2 ds
//     <= ||B_0 - beta_0||^2 e^{tC} + int_0^t e^{(t-s)C} J^L_s ds,
// with J^L retained in full. Returns rhs - lhs per snapshot time.
WeakStrongGap weak_strong_gap(const Trajectory& traj, const SmoothPair& pair);

// Admissible envelope e0 * exp(C t) for ||B - beta||^2(t).
double gronwall_envelope(double e0, double C, double t);

} // namespace relax

#endif
