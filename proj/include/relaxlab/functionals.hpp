#ifndef RELAXLAB_FUNCTIONALS_HPP
#define RELAXLAB_FUNCTIONALS_HPP

#include <string>
#include <vector>

#include "relaxlab/ops.hpp"

namespace relax {

// Integral of |B|^2 (no 1/2 factor; matches the dissipation-inequality usage).
double magnetic_energy(const VecField2& B);

// P div(B (x) B), dealiased product, divergence-free output.
VecField2 lorentz_force(const VecField2& B);

// L(B) = || P div(B (x) B) ||^2; zero exactly at discrete stationary Euler states.
double euler_residual(const VecField2& B);

// Dual test field z (divergence-free) with the pointwise constraint
// grad z + grad z^T + r I >= 0. The margin is the grid minimum of the
// smallest eigenvalue of that matrix.
struct DualWitness {
    double r = 0.0;
    VecField2 z;
    double feasibility_margin = 0.0;

    bool feasible(double tol = 1e-10) const { return feasibility_margin >= -tol; }
};

// Pointwise symmetric gradient S = grad z + grad z^T as three scalar fields.
struct SymGrad2 {
    ScalarField2 s11, s12, s22;
};
SymGrad2 sym_grad(const VecField2& z);

// Grid minimum of the smallest eigenvalue of S(z); closed form per node.
double min_sym_grad_eigenvalue(const VecField2& z);

DualWitness make_witness(double r, VecField2 z);

// Certified lower bound of K_r(B) for a feasible witness:
//   integral of (B (x) B):(grad z + grad z^T + rI) minus ||z||^2.
double kr_value_for_witness(const VecField2& B, const DualWitness& w);

struct KrEstimate {
    double r = 0.0;
    double value = 0.0;
    DualWitness witness;
    int iterations = 0;

    std::string to_json() const;
};

struct KrOptions {
    double improve_tol = 1e-9;   // relative-improvement stop
    int max_backtracks = 40;
};

// Projected ascent over divergence-free band-limited z (stream-function
// parametrized); feasibility restored by exact global scaling, so every
// reported value is a certified lower bound. Nondecreasing in budget.
KrEstimate kr_maximize(const VecField2& B, double r, int budget, const KrOptions& opt = {});

// sup over the r grid of K_r(B) - r ||B||^2; a lower bound of L(B).
double recover_L(const VecField2& B, const std::vector<double>& r_grid, int budget,
                 const KrOptions& opt = {});

} // namespace relax

#endif
