#ifndef RELAXLAB_BORN_INFELD_HPP
#define RELAXLAB_BORN_INFELD_HPP

#include <string>
#include <vector>

#include "relaxlab/gradflow.hpp"

namespace relax {

struct BiParams {
    double lambda = 0.0;
    std::string theta = "quadratic";  // quadratic | abs
    double delta = 1e-3;              // smoothing for theta = abs
    int n = 32;
    double dt = 0.0;                  // 0: use 0.25 * h
    double t_final = 0.2;
    int snap_every = 8;

    void validate() const;
};

struct BiState {
    double time = 0.0;
    VecField3 B;
    // derived fields cached at this state's B
    VecField3 D;  // curl(theta'(B))
    VecField3 E;  // B x v
    VecField3 v;
};

// Pointwise theta'(B); theta = abs runs with delta smoothing.
VecField3 bi_theta_prime(const VecField3& B, const BiParams& p);
double bi_theta_integral(const VecField3& B, const BiParams& p);

// Born-Infeld Lagrangian; +inf (extended value) outside the domain.
// lambda = 0 uses the degenerate branch with constraints E.B = 0, |E| <= |B|.
double bi_lagrangian(const Vec3& E, const Vec3& B, double lambda);

// Hamiltonian, evaluated through both displayed forms; they agree to 1e-12
// by the identity |DxB|^2 = |D|^2|B|^2 - (D.B)^2.
double bi_hamiltonian(const Vec3& D, const Vec3& B, double lambda);
double bi_hamiltonian_form2(const Vec3& D, const Vec3& B, double lambda);

// dH/dD = (lambda^2 D + D|B|^2 - (D.B) B) / H.
Vec3 bi_hamiltonian_grad(const Vec3& D, const Vec3& B, double lambda);

// v = (D x B) / sqrt(|B|^2 + |D x B|^2); v = 0 where B = 0. |v| < 1.
Vec3 bi_velocity_zero_lambda(const Vec3& D, const Vec3& B);
VecField3 bi_velocity_zero_lambda(const VecField3& D, const VecField3& B);

// LagrangianSpec wrapper for the Legendre oracle.
LagrangianSpec bi_lagrangian_spec(double lambda);

// One explicit RK2 step of dB/dt + curl(B x v) = 0 with v from
// D = curl(theta'(B)). The curl form preserves div B.
BiState bi_step(const BiState& s, const BiParams& p);

BiState make_bi_state(VecField3 B, const BiParams& p, double time = 0.0);

// g(lambda) = lambda (lambda + L_lambda(E,B)); tends to (|E|^2-|B|^2)/2
// at rate O(lambda^-2). Evaluated in the cancellation-free form.
std::vector<double> maxwell_limit_check(const Vec3& E, const Vec3& B,
                                        const std::vector<double>& lambdas);

// Alternative velocity for theta(B) = |B|: v = div(B (x) B / H0) with
// H0 = sqrt(|B|^2 + |DxB|^2), D = curl(theta_delta'(B)).
VecField3 theta_abs_velocity(const VecField3& B, double delta);

struct BiSample {
    double time = 0.0;
    VecField3 B;
};

// d/dt int theta(B) + int (L_lambda(E,B) + H_lambda(D,B)) per checkpoint for
// the k=2, d=3 instance; throws UnsupportedDegree for any other (k,d).
std::vector<double> bi_dissipation_residual(int k, int d, const std::vector<BiSample>& traj,
                                            const BiParams& p);

} // namespace relax

#endif
